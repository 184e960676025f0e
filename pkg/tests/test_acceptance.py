"""Acceptance criteria 1-11, one PASS/FAIL line each.

Lines are printed as the tests run and repeated in the terminal summary.
"""

import json
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES

from bornrigidity import cli, report
from bornrigidity.admissibility import (
    FQ_FLOOR,
    check_H2,
    check_H3,
    classical_fisher_along,
    default_suite,
    fisher_profile,
    pair_geodesic_suite,
    sample_states,
    vertex_geodesic_suite,
)
from bornrigidity.escort import markov_invariance_residual, markov_scan, normalization_scan
from bornrigidity.projective import coordinate_circle, rng_for
from bornrigidity.readouts import (
    BornReadout,
    EscortReadout,
    LinearGenerator,
    PermutedBornReadout,
    PowerGenerator,
    UniformReadout,
    escort_self_map,
)
from bornrigidity.rigidity import (
    BORN_CONFIRMED,
    IDENTITY_CONFIRMED,
    PREMISE_VIOLATED,
    chain_residuals,
    lipschitz_witness_search,
    readout_rigidity_check,
    sample_orthant,
    simplex_rigidity_check,
    vertex_dominance_residuals,
)
from bornrigidity.simplex import SqrtChart, conjugate, fisher_norm_sq, identity_map

SEED = 2024
DIMS = (2, 3, 4, 5)


def record(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def max_saturation_gap(suite):
    worst = 0.0
    for curve in suite.curves:
        _, fcl, fq = fisher_profile(BornReadout(), curve, suite.nodes)
        live = fq >= FQ_FLOOR
        worst = max(worst, float(np.max(np.abs(fcl[live] / fq[live] - 1.0))))
    return worst


def test_criterion_01_born_saturation():
    t0 = time.perf_counter()
    gaps = {d: max_saturation_gap(pair_geodesic_suite(d, SEED, 100)) for d in DIMS}
    elapsed = time.perf_counter() - t0
    worst = max(gaps.values())
    ok = worst < 1e-4 and elapsed < 30.0
    per_d = ", ".join(f"d={d}: {g:.3g}" for d, g in gaps.items())
    record(1, ok, f"Haar pair geodesics max|F_cl/F_Q - 1| = {worst:.3g} [{per_d}] (< 1e-4), {elapsed:.1f}s (< 30s)")


def test_born_saturation_on_geodesics_to_basis_rays():
    # companion to criterion 1: curves with no relative-phase motion saturate
    gaps = [max_saturation_gap(vertex_geodesic_suite(d, SEED, 100)) for d in DIMS]
    assert max(gaps) < 1e-4


def test_criterion_02_uniform():
    P = UniformReadout()
    h2_max, ok = 0.0, True
    for d in DIMS:
        h2 = check_H2(P, default_suite(d, SEED, n_pairs=20, n_circles=5))
        h3 = check_H3(P, d)
        per_vertex = np.array(h3.details["per_vertex_residual"])
        h2_max = max(h2_max, h2.value)
        ok &= h2.passed and h2.value < 1e-10
        ok &= (not h3.passed) and bool(np.all(per_vertex >= 1 - 1 / d))
        if d == 2:
            ok &= bool(np.all(per_vertex == 0.5))
    record(2, ok, f"H2 max ratio {h2_max:.3g} (< 1e-10); H3 FAIL with residual >= 1 - 1/d at every vertex; d=2 residual 0.5")


def test_criterion_03_permuted_born():
    P = PermutedBornReadout((2, 1, 3))
    h2 = check_H2(P, default_suite(3, SEED))
    h3 = check_H3(P, 3)
    w = h3.witness
    ok = abs(h2.value - 1.0) <= 1e-4 and not h3.passed and w.location["vertex"] == 1 and w.quantities["lhs"] == 1.0
    record(3, ok, f"H2 max ratio {h2.value:.10f} (|.-1| <= 1e-4); H3 FAIL at vertex {w.location['vertex']} residual {w.quantities['lhs']}")


def test_criterion_04_escort_equator():
    P = EscortReadout(PowerGenerator(2.0))
    fcl = float(classical_fisher_along(P, coordinate_circle(2, 0, 1), np.pi / 4))
    h2 = check_H2(P, default_suite(2, SEED))
    s_star = h2.witness.location["s"]
    ok = abs(fcl - 16) <= 1e-3 and abs(h2.value - 4) <= 1e-3 and abs(s_star - np.pi / 4) < 0.05
    record(4, ok, f"F_cl(pi/4) = {fcl:.9f} (16 +/- 1e-3); max ratio {h2.value:.9f} (4 +/- 1e-3); s* = {s_star:.6f}")


def test_criterion_05_born_chain():
    t0 = time.perf_counter()
    samples = sample_states(4, SEED, 10_000)
    res = chain_residuals(BornReadout(), samples)
    verdict = readout_rigidity_check(BornReadout(), default_suite(4, SEED), samples)
    elapsed = time.perf_counter() - t0
    chain_max = max(float(res["contraction"].max()), float(np.abs(res["dominance"]).max()))
    ok = chain_max <= 1e-9 and verdict.max_identity_gap <= 1e-9 and verdict.conclusion == BORN_CONFIRMED and elapsed < 10
    record(
        5,
        ok,
        f"chain residual {chain_max:.3g}, born_deviation {verdict.max_identity_gap:.3g} (<= 1e-9), "
        f"{verdict.conclusion}, {elapsed:.1f}s (< 10s)",
    )


def test_criterion_06_vertex_forcing():
    Psi = conjugate(escort_self_map(PowerGenerator(2.0)))
    parts, ok = [], True
    for d in (2, 3):
        X = sample_orthant(SEED, 200, d)
        most_negative = min(float(vertex_dominance_residuals(Psi, x).min()) for x in X)
        w = lipschitz_witness_search(Psi, d, SEED, 200)
        gap = w.quantities["gap"] if w else 0.0
        ok &= most_negative < 0 and gap > 1e-3
        parts.append(f"d={d}: min dominance {most_negative:.3g}, expansion gap {gap:.3g}")
    record(6, ok, "; ".join(parts) + " (negative entry, gap > 1e-3)")


def test_criterion_07_simplex_rigidity():
    escort = simplex_rigidity_check(escort_self_map(PowerGenerator(2.0)), 3, SEED)
    ident = simplex_rigidity_check(identity_map(), 3, SEED)
    w = escort.witness
    ok = (
        escort.conclusion == PREMISE_VIOLATED
        and w.kind == "Lipschitz"
        and w.location["metric"] == "fisher"
        and ident.conclusion == IDENTITY_CONFIRMED
        and ident.max_identity_gap < 1e-12
    )
    record(
        7,
        ok,
        f"escort t^2: {escort.conclusion} ({w.kind}/{w.location['metric']}, ratio {w.quantities['ratio']:.4g}); "
        f"identity: {ident.conclusion}, gap {ident.max_identity_gap:.3g}",
    )


def test_criterion_08_normalization():
    lin = normalization_scan(LinearGenerator(1.0), dims=(3, 4, 5))
    sq = normalization_scan(PowerGenerator(2.0), dims=(3, 4, 5))
    d3 = sq.extras["per_dim"][0]
    at_bary = d3["argmax"] == pytest.approx([1 / 3] * 3, abs=1e-15)
    f0 = max(abs(lin.extras["f0_derived"]), abs(sq.extras["f0_derived"]))
    ok = lin.passed and lin.max_abs_residual < 1e-12 and abs(d3["residual"] + 2 / 3) <= 1e-12 and at_bary and f0 <= 1e-12
    record(
        8,
        ok,
        f"f=t residual {lin.max_abs_residual:.3g} (< 1e-12); f=t^2 d=3 residual {d3['residual']!r} at "
        f"{'barycenter' if at_bary else d3['argmax']}; derived f(0) {f0:.3g}",
    )


def test_criterion_09_markov():
    lin = max(markov_scan(LinearGenerator(c)).max_abs_residual for c in (0.5, 1.0, 2.0, 3.0, np.pi))
    sq = float(markov_invariance_residual(PowerGenerator(2.0), 0.5, 1.0))
    rt = float(markov_invariance_residual(PowerGenerator(0.5), 0.5, 1.0))
    ok = lin < 1e-15 and abs(sq + 0.5) <= 1e-12 and abs(rt - 0.4142136) <= 1e-6
    record(9, ok, f"f=ct max residual {lin:.3g} (< 1e-15); t^2 at (1/2,1) {sq!r}; sqrt(t) at (1/2,1) {rt:.9f}")


def test_criterion_10_conformal_chart():
    chart, h = SqrtChart(), 1e-5
    lo, hi = np.inf, -np.inf
    for d in DIMS:
        rng = rng_for(SEED, 100 + d)
        U = 0.99 * rng.dirichlet(np.ones(d), 1000) + 0.01 / d
        V = rng.standard_normal((1000, d))
        V -= V.mean(axis=1, keepdims=True)
        dphi = (chart.transform(U + h * V) - chart.transform(U - h * V)) / (2 * h)
        r = 4 * np.sum(dphi**2, axis=1) / fisher_norm_sq(U, V)
        lo, hi = min(lo, r.min()), max(hi, r.max())
    ok = lo >= 1 - 1e-4 and hi <= 1 + 1e-4
    record(10, ok, f"4|dPhi v|^2 / g_F(v,v) in [{lo:.10f}, {hi:.10f}] (within 1e-4 of 1)")


ACCEPTANCE_COMMANDS = [
    "check --readout born --d 3 --curves 100 --samples 1000 --seed 42",
    "check --readout uniform --d 2 --seed 1",
    "check --readout escort:power:2.0 --d 2 --seed 7",
    "rigidity --readout born --d 4 --seed 9",
    "rigidity --readout perturbed:0.1 --d 3 --seed 5",
    "simplex-rigidity --map escort:power:2.0 --d 3 --seed 2",
    "scan-f --f power:1.0 --mode markov",
    "scan-f --f power:2.0 --mode normalization --dims 3,4",
]


def test_criterion_11_determinism(tmp_path):
    out = tmp_path / "report.json"
    mismatched = []
    for cmd in ACCEPTANCE_COMMANDS:
        runs = []
        for _ in range(2):
            cli.main(cmd.split() + ["--out", str(out)])
            runs.append(report.dumps(report.strip_metadata(json.loads(out.read_text()))))
        if runs[0] != runs[1]:
            mismatched.append(cmd)
    ok = not mismatched
    record(11, ok, f"{len(ACCEPTANCE_COMMANDS) - len(mismatched)}/{len(ACCEPTANCE_COMMANDS)} commands byte-identical (metadata excluded)")
