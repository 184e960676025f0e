import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid
from scipy.stats import unitary_group

from bornrigidity import DomainError
from bornrigidity._validation import gauge_fix, make_rays
from bornrigidity.projective import (
    RNG_ALGORITHM,
    amps_from_json,
    amps_to_json,
    basis_ray,
    coordinate_circle,
    curve_from_spec,
    fs_distance,
    fs_geodesic,
    fs_speed,
    geodesic_curve,
    great_circle_curve,
    haar_random_ray,
    haar_random_rays,
    quantum_fisher,
)

seeds = st.integers(0, 2**32)


class TestHaar:
    def test_deterministic_in_seed_and_index(self):
        a = haar_random_ray(42, 7, 4)
        np.testing.assert_array_equal(a, haar_random_ray(42, 7, 4))
        assert not np.allclose(a, haar_random_ray(42, 8, 4))
        assert not np.allclose(a, haar_random_ray(43, 7, 4))

    def test_batch_matches_single_draws(self):
        batch = haar_random_rays(5, 3, 3, start=10)
        for k in range(3):
            np.testing.assert_array_equal(batch[k], haar_random_ray(5, 10 + k, 3))

    def test_rays_are_unit_and_gauge_fixed(self):
        A = haar_random_rays(0, 200, 5)
        np.testing.assert_allclose(np.linalg.norm(A, axis=1), 1.0, atol=1e-15)
        top = A[np.arange(200), np.argmax(np.abs(A), axis=1)]
        assert np.all(top.imag == 0) and np.all(top.real > 0)

    def test_moments_match_haar(self):
        # E|psi_1|^2 = 1/d and E|psi_1|^4 = 2/(d(d+1)) for Haar rays in d = 4
        p = np.abs(haar_random_rays(2024, 100_000, 4)[:, 0]) ** 2
        assert p.mean() == pytest.approx(0.25, abs=0.01)
        assert (p**2).mean() == pytest.approx(0.1, abs=0.005)

    def test_algorithm_recorded(self):
        assert "Philox" in RNG_ALGORITHM

    def test_rejects_small_dimension(self):
        with pytest.raises(DomainError):
            haar_random_ray(0, 0, 1)


class TestGauge:
    @given(seeds, st.floats(0, 2 * np.pi))
    def test_global_phase_is_invisible(self, seed, theta):
        psi = haar_random_ray(seed, 0, 3)
        np.testing.assert_allclose(make_rays(np.exp(1j * theta) * psi), psi, atol=1e-14)

    def test_ties_pick_lowest_index(self):
        out = gauge_fix(np.array([[1j, 1.0]]) / np.sqrt(2))
        assert out[0, 0] == pytest.approx(1 / np.sqrt(2))
        assert out[0, 1] == pytest.approx(-1j / np.sqrt(2))


class TestFSDistance:
    def test_orthogonal(self):
        assert fs_distance(basis_ray(3, 0), basis_ray(3, 2)) == pytest.approx(np.pi / 2)

    @pytest.mark.parametrize("a", [1e-10, 1e-6, 0.1, 1.2])
    def test_angle_oracle_with_phase(self, a):
        psi = np.array([np.cos(a), np.exp(0.7j) * np.sin(a)])
        phi = np.exp(2.1j) * np.array([1.0, 0.0])
        assert fs_distance(psi, phi) == pytest.approx(a, rel=1e-10)

    @settings(max_examples=30)
    @given(seeds)
    def test_unitary_invariance_and_symmetry(self, seed):
        psi, phi = haar_random_ray(seed, 0, 4), haar_random_ray(seed, 1, 4)
        U = unitary_group.rvs(4, random_state=seed % 2**32)
        d0 = fs_distance(psi, phi)
        assert fs_distance(phi, psi) == pytest.approx(d0, abs=1e-14)
        assert fs_distance(U @ psi, U @ phi) == pytest.approx(d0, abs=1e-12)
        assert 0.0 <= d0 <= np.pi / 2

    @settings(max_examples=30)
    @given(seeds)
    def test_triangle_inequality(self, seed):
        a, b, c = (haar_random_ray(seed, k, 3) for k in range(3))
        assert fs_distance(a, c) <= fs_distance(a, b) + fs_distance(b, c) + 1e-12


class TestGeodesics:
    def test_endpoints_and_constant_speed(self):
        psi, phi = haar_random_ray(3, 0, 3), haar_random_ray(3, 1, 3)
        theta = fs_distance(psi, phi)
        t = np.linspace(0, 1, 9)
        pts = fs_geodesic(psi, phi, t)
        np.testing.assert_allclose(fs_distance(psi, pts), t * theta, atol=1e-12)
        assert fs_distance(pts[-1], phi) < 1e-12

    def test_arc_length_by_trapezoid(self):
        psi, phi = haar_random_ray(9, 0, 5), haar_random_ray(9, 1, 5)
        c = geodesic_curve(psi, phi)
        s = np.linspace(1e-5, 1 - 1e-5, 401)
        length = trapezoid(fs_speed(c, s), s) + 2e-5 * fs_distance(psi, phi)
        assert length == pytest.approx(fs_distance(psi, phi), rel=1e-8)

    def test_great_circle_unit_speed(self):
        c = great_circle_curve(haar_random_ray(1, 0, 3), haar_random_ray(1, 1, 3))
        s = c.nodes(32)[1:-1]
        np.testing.assert_allclose(quantum_fisher(c, s), 4.0, rtol=1e-8)

    def test_coordinate_circle_nodes(self):
        c = coordinate_circle(2, 0, 1)
        s = c.nodes(64)
        assert s.size == 65 and s[32] == pytest.approx(np.pi / 4, abs=1e-16)
        np.testing.assert_allclose(c(np.pi / 4), [np.sqrt(0.5), np.sqrt(0.5)])

    def test_domain_is_enforced(self):
        c = coordinate_circle(3, 0, 2)
        with pytest.raises(DomainError):
            c(2.0)
        with pytest.raises(DomainError):
            quantum_fisher(c, 0.0)

    @pytest.mark.parametrize(
        "curve",
        [
            geodesic_curve(haar_random_ray(0, 0, 3), haar_random_ray(0, 1, 3)),
            great_circle_curve(haar_random_ray(0, 2, 3), haar_random_ray(0, 3, 3)),
            coordinate_circle(3, 1, 2),
        ],
        ids=["geodesic", "great_circle", "coordinate_circle"],
    )
    def test_spec_round_trip(self, curve):
        spec = json.loads(json.dumps(curve.spec))
        again = curve_from_spec(spec)
        s = np.linspace(*curve.domain, 7)
        np.testing.assert_allclose(again(s), curve(s), atol=1e-15)

    def test_amplitude_json(self):
        v = np.array([0.6, 0.8j])
        np.testing.assert_array_equal(amps_from_json(amps_to_json(v)), v)
