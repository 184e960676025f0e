import json

import numpy as np
import pytest

from bornrigidity import report
from bornrigidity.admissibility import Witness, check_H1, check_H2, check_H3, default_suite
from bornrigidity.escort import cauchy_scan, markov_scan, normalization_scan
from bornrigidity.projective import amps_to_json
from bornrigidity.readouts import EscortReadout, PowerGenerator, StepReadout, UniformReadout, escort_self_map
from bornrigidity.replay import replay_witness
from bornrigidity.rigidity import dominance_witness, lipschitz_witness_search, simplex_rigidity_check
from bornrigidity.simplex import barycenter_map, conjugate

SQUARE = PowerGenerator(2.0)


def _suite():
    return default_suite(2, 7, n_pairs=5, n_circles=2)


WITNESSES = {
    "H3-readout": lambda: check_H3(UniformReadout(), 3).witness,
    "H3-map": lambda: simplex_rigidity_check(barycenter_map(), 3, 0).witness,
    "H2": lambda: check_H2(EscortReadout(SQUARE), _suite()).witness,
    "H1": lambda: check_H1(StepReadout(), _suite()).witness,
    "Lipschitz-round": lambda: lipschitz_witness_search(conjugate(escort_self_map(SQUARE)), 3, 0, 50),
    "Lipschitz-fisher": lambda: simplex_rigidity_check(escort_self_map(SQUARE), 3, 2).witness,
    "Lipschitz-fs": lambda: Witness(
        "Lipschitz",
        {"readout": "permuted:2,1", "metric": "fs-to-round", "psi": amps_to_json([1, 0]), "vertex": 1},
        {"lhs": np.pi / 2, "rhs": 0.0},
    ),
    "VertexDominance": lambda: dominance_witness(conjugate(escort_self_map(SQUARE)), np.sqrt([0.6, 0.4])),
    "Normalization": lambda: normalization_scan(SQUARE, dims=(3,)).witness,
    "Cauchy": lambda: cauchy_scan(SQUARE).witness,
    "Markov": lambda: markov_scan(SQUARE).witness,
}


@pytest.mark.parametrize("name", sorted(WITNESSES))
def test_witness_replays_from_json(name):
    w = WITNESSES[name]()
    assert w is not None
    parsed = json.loads(report.dumps(w.to_dict()))
    out = replay_witness(parsed)
    assert out["reproduced"], out
    assert out["lhs"] == pytest.approx(w.quantities["lhs"], rel=1e-12, abs=1e-15)


def test_tampered_witness_not_reproduced():
    w = check_H2(EscortReadout(SQUARE), _suite()).witness.to_dict()
    w["location"]["readout"] = "born"
    assert not replay_witness(w)["reproduced"]


def test_unknown_kind():
    with pytest.raises(ValueError):
        replay_witness({"kind": "Lipschitz", "location": {"metric": "taxicab"}, "quantities": {"lhs": 1, "rhs": 0}})
