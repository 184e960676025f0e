import numpy as np
import pytest

from bornrigidity.admissibility import (
    CurveSuite,
    Witness,
    born_deviation,
    check_admissibility,
    check_H1,
    check_H2,
    check_H3,
    chord_profile,
    default_suite,
    pair_geodesic_suite,
    sample_states,
    vertex_geodesic_suite,
)
from bornrigidity.projective import coordinate_circle
from bornrigidity.readouts import (
    BornReadout,
    EscortReadout,
    PermutedBornReadout,
    PerturbedBornReadout,
    PowerGenerator,
    StepReadout,
    UniformReadout,
)


@pytest.fixture(scope="module")
def suite3():
    return default_suite(3, 0, n_pairs=20, n_circles=5)


class TestSuites:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_composition(self, d):
        s = default_suite(d, 1, n_pairs=7, n_circles=3)
        assert len(s) == d * (d - 1) // 2 + 7 + d + 3
        assert s.provenance.count("geodesic-to-vertex") == d
        assert s.dim == d

    def test_same_seed_same_suite(self):
        a, b = pair_geodesic_suite(3, 4, 5), pair_geodesic_suite(3, 4, 5)
        assert [c.spec for c in a.curves] == [c.spec for c in b.curves]

    def test_vertex_suite_starts_at_basis(self):
        s = vertex_geodesic_suite(3, 0, 4)
        np.testing.assert_allclose(np.abs(s.curves[3](0.0)), [1, 0, 0], atol=1e-15)

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(ValueError):
            CurveSuite([coordinate_circle(2, 0, 1), coordinate_circle(3, 0, 1)])

    def test_samples_use_separate_streams(self):
        s = sample_states(3, 0, 2)
        first_curve = pair_geodesic_suite(3, 0, 1).curves[0]
        assert not np.allclose(s[0], first_curve(0.0))


class TestH3:
    def test_born_passes(self):
        r = check_H3(BornReadout(), 4)
        assert r.passed and r.value == 0.0 and r.witness is None

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_uniform_residual_every_vertex(self, d):
        r = check_H3(UniformReadout(), d)
        assert not r.passed
        np.testing.assert_allclose(r.details["per_vertex_residual"], 1 - 1 / d, rtol=1e-15)
        assert r.witness.kind == "H3" and r.witness.location["vertex"] == 1

    def test_permuted(self):
        r = check_H3(PermutedBornReadout((2, 1, 3)), 3)
        assert r.value == 1.0 and r.witness.location["vertex"] == 1
        assert r.details["per_vertex_residual"] == [1.0, 1.0, 0.0]


class TestH2:
    def test_born_saturates_on_default_suite(self, suite3):
        r = check_H2(BornReadout(), suite3)
        assert r.passed
        assert r.value == pytest.approx(1.0, abs=1e-4)

    def test_uniform_is_zero(self, suite3):
        r = check_H2(UniformReadout(), suite3)
        assert r.passed and r.value < 1e-10

    def test_escort_qubit_witness(self):
        r = check_H2(EscortReadout(PowerGenerator(2.0)), default_suite(2, 7, n_pairs=10, n_circles=2))
        assert not r.passed
        assert r.value == pytest.approx(4.0, abs=1e-3)
        assert r.witness.location["s"] == pytest.approx(np.pi / 4, abs=0.05)
        assert r.witness.quantities["lhs"] == pytest.approx(16.0, abs=1e-3)

    def test_perturbed_fails(self, suite3):
        r = check_H2(PerturbedBornReadout(0.1), suite3)
        assert not r.passed and r.value > 1.05


class TestH1:
    def test_born_passes(self, suite3):
        r = check_H1(BornReadout(), suite3)
        assert r.passed and r.details["sampled_surrogate"]

    def test_step_fails(self, suite3):
        r = check_H1(StepReadout(), suite3)
        assert not r.passed
        assert r.witness.kind == "H1"
        assert r.witness.quantities["criterion"] == "chord-shrink"

    def test_chord_total_approximates_length(self):
        # Born along a coordinate circle: round length of sqrt readout is pi/2
        _, ch = chord_profile(BornReadout(), coordinate_circle(2, 0, 1), 64)
        assert ch.sum() == pytest.approx(np.pi / 2, rel=1e-12)


class TestBornDeviation:
    def test_zero_for_born(self):
        dev, _, _ = born_deviation(BornReadout(), sample_states(4, 0, 500))
        assert dev < 1e-15

    def test_uniform_deviation_at_worst_ray(self):
        A = np.eye(2, dtype=complex)
        dev, at, i = born_deviation(UniformReadout(), A)
        # |sqrt(1/2) - 0| beats |sqrt(1/2) - 1|
        assert dev == pytest.approx(np.sqrt(0.5), rel=1e-15)
        np.testing.assert_array_equal(at, [1, 0])
        assert i == 1


class TestReport:
    def test_admissibility_report(self, suite3):
        rep = check_admissibility(UniformReadout(), suite3, sample_states(3, 0, 10))
        d = rep.to_dict()
        assert not rep.passed
        assert [v["hypothesis"] for v in d["verdicts"]] == ["H1", "H2", "H3", "born_deviation"]
        assert [w.kind for w in rep.witnesses] == ["H3"]
        assert d["params"]["samples"] == 10

    def test_witness_kind_enum(self):
        with pytest.raises(ValueError):
            Witness("Bogus", {}, {})
