"""Sampled checks of the three readout admissibility hypotheses.

* H1 -- the square-root readout is continuous along curves (sampled
  surrogate: chord lengths shrink under refinement, total length settles).
* H2 -- classical Fisher information never exceeds quantum Fisher
  information along a curve.
* H3 -- basis preparations are read out as the matching simplex vertex.

Universal statements ("every smooth curve") are replaced by a
:class:`CurveSuite`; a PASS is evidence on that suite, never a proof.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from ._validation import TOL_EQ, TOL_INEQ, DomainError
from .projective import (
    RNG_ALGORITHM,
    amps_to_json,
    basis_ray,
    coordinate_circle,
    geodesic_curve,
    great_circle_curve,
    haar_random_ray,
    haar_random_rays,
    quantum_fisher,
)
from .simplex import round_distance

#: parameters of the continuity surrogate
H1_LEVELS = (64, 128, 256)
H1_SHRINK = 1.5
H1_LENGTH_TOL = 1e-3
H1_CHORD_FLOOR = 1e-9
#: nodes with F_Q below this are stationary and skipped by the H2 check
FQ_FLOOR = 1e-10
#: Haar stream offset for state samples, keeps them disjoint from suite states
SAMPLE_STREAM = 1 << 40

WITNESS_KINDS = ("H1", "H2", "H3", "Lipschitz", "VertexDominance", "Normalization", "Markov", "Cauchy")


@dataclass
class Witness:
    """A concrete input at which an inequality is numerically violated.

    ``quantities`` holds at least ``lhs`` and ``rhs`` of the violated
    relation; ``location`` holds everything needed to recompute them.
    """

    kind: str
    location: dict
    quantities: dict

    def __post_init__(self):
        if self.kind not in WITNESS_KINDS:
            raise ValueError(f"unknown witness kind {self.kind!r}")

    def to_dict(self):
        return asdict(self)


@dataclass
class CheckResult:
    hypothesis: str
    passed: bool
    statistic: str
    value: float
    details: dict = field(default_factory=dict)
    witness: Witness | None = None

    @property
    def verdict(self):
        return "PASS" if self.passed else "FAIL"

    def to_dict(self):
        out = {
            "hypothesis": self.hypothesis,
            "verdict": self.verdict,
            "statistic": self.statistic,
            "value": self.value,
            "details": self.details,
        }
        out["witness"] = self.witness.to_dict() if self.witness else None
        return out


@dataclass
class CurveSuite:
    curves: list
    nodes: int = 64
    provenance: list = field(default_factory=list)
    seed: int | None = None

    def __post_init__(self):
        if not self.curves:
            raise ValueError("curve suite is empty")
        if len({c.dim for c in self.curves}) != 1:
            raise ValueError("all curves in a suite must share one dimension")

    @property
    def dim(self):
        return self.curves[0].dim

    def __len__(self):
        return len(self.curves)


def default_suite(d, seed, n_pairs=100, n_circles=20, nodes=64, coordinate_circles=True):
    """Standard sampled stand-in for "every smooth curve".

    Contains the real coordinate quarter-circles ``cos(s) e_i + sin(s) e_j``,
    ``n_pairs`` geodesics between Haar pairs, one geodesic from a Haar state
    to each basis ray, and ``n_circles`` full great circles through Haar
    states. Haar states come from streams ``0, 1, 2, ...`` of ``seed``.
    """
    curves, prov = [], []
    if coordinate_circles:
        for i in range(d):
            for j in range(i + 1, d):
                curves.append(coordinate_circle(d, i, j))
                prov.append("coordinate-circle")
    stream = 0
    for k in range(n_pairs):
        psi = haar_random_ray(seed, stream, d)
        phi = haar_random_ray(seed, stream + 1, d)
        stream += 2
        curves.append(geodesic_curve(psi, phi, f"pair-{k}"))
        prov.append("geodesic-pair")
    for i in range(d):
        psi = haar_random_ray(seed, stream, d)
        stream += 1
        curves.append(geodesic_curve(basis_ray(d, i), psi, f"vertex-{i + 1}"))
        prov.append("geodesic-to-vertex")
    for k in range(n_circles):
        psi = haar_random_ray(seed, stream, d)
        chi = haar_random_ray(seed, stream + 1, d)
        stream += 2
        curves.append(great_circle_curve(psi, chi, f"circle-{k}"))
        prov.append("great-circle")
    return CurveSuite(curves, nodes, prov, seed)


def pair_geodesic_suite(d, seed, n, nodes=64):
    """``n`` geodesics between independent Haar pairs, nothing else."""
    curves = [
        geodesic_curve(haar_random_ray(seed, 2 * k, d), haar_random_ray(seed, 2 * k + 1, d), f"pair-{k}")
        for k in range(n)
    ]
    return CurveSuite(curves, nodes, ["geodesic-pair"] * n, seed)


def vertex_geodesic_suite(d, seed, n, nodes=64):
    """``n`` geodesics from Haar states to basis rays (cycling through the basis)."""
    curves = [
        geodesic_curve(basis_ray(d, k % d), haar_random_ray(seed, k, d), f"vertex-{k % d + 1}-{k}")
        for k in range(n)
    ]
    return CurveSuite(curves, nodes, ["geodesic-to-vertex"] * n, seed)


def sample_states(d, seed, n):
    return haar_random_rays(seed, n, d, start=SAMPLE_STREAM)


def classical_fisher_along(P, curve, s, h=1e-5):
    """Classical Fisher information of readout ``P`` along ``curve`` at ``s``.

    Computed in the square-root form ``4 |dR/ds|**2`` with a central
    difference, so it stays finite where some outcome probability is zero.
    """
    s = np.asarray(s, dtype=float)
    a, b = curve.domain
    if np.any(s - h < a - 1e-12) or np.any(s + h > b + 1e-12):
        raise DomainError("s +/- h falls outside the curve domain")
    dR = (P.sqrt_transform(curve(s + h)) - P.sqrt_transform(curve(s - h))) / (2.0 * h)
    return 4.0 * np.sum(dR * dR, axis=-1)


def _curve_location(P, curve, **extra):
    return {"readout": P.spec, "curve": curve.spec, "curve_label": curve.label, **extra}


def check_H3(P, d, tol=TOL_EQ):
    """Calibration: ``P(e_i)`` must equal the vertex ``delta_i`` for every ``i``."""
    E = np.eye(d, dtype=complex)
    resid = np.max(np.abs(P.transform(E) - np.eye(d)), axis=1)
    worst = int(np.argmax(resid))
    passed = bool(resid[worst] <= tol)
    witness = None
    if not passed:
        witness = Witness(
            "H3",
            {"readout": P.spec, "vertex": worst + 1, "d": d},
            {"lhs": float(resid[worst]), "rhs": 0.0, "tol": tol},
        )
    return CheckResult(
        "H3",
        passed,
        "max_vertex_residual",
        float(resid[worst]),
        {"per_vertex_residual": [float(r) for r in resid], "worst_vertex": worst + 1, "tol": tol},
        witness,
    )


def fisher_profile(P, curve, nodes=64, h=1e-5):
    """Interior nodes of ``curve`` with F_cl and F_Q at each."""
    s = curve.nodes(nodes)[1:-1]
    return s, classical_fisher_along(P, curve, s, h), quantum_fisher(curve, s, h)


def check_H2(P, suite, tol=TOL_INEQ, h=1e-5):
    """Readout Cramer-Rao bound ``F_cl <= F_Q`` over every interior suite node.

    A node passes if ``F_cl <= F_Q (1 + tol) + tol``. Reports the largest
    ratio ``F_cl / F_Q`` and where it occurs.
    """
    best = (-np.inf, None, None, None, None)
    worst_excess = (-np.inf, None)
    skipped = boundary = 0
    for idx, curve in enumerate(suite.curves):
        s, fcl, fq = fisher_profile(P, curve, suite.nodes, h)
        live = fq >= FQ_FLOOR
        skipped += int(np.count_nonzero(~live))
        boundary += int(np.count_nonzero(np.min(P.transform(curve(s)), axis=1) < 1e-12))
        if not np.any(live):
            continue
        ratio = np.where(live, fcl / (fq + 1e-300), -np.inf)
        k = int(np.argmax(ratio))
        if ratio[k] > best[0]:
            best = (float(ratio[k]), idx, float(s[k]), float(fcl[k]), float(fq[k]))
        excess = np.where(live, fcl - (fq * (1.0 + tol) + tol), -np.inf)
        j = int(np.argmax(excess))
        if excess[j] > worst_excess[0]:
            worst_excess = (float(excess[j]), (idx, float(s[j]), float(fcl[j]), float(fq[j])))
    passed = worst_excess[0] <= 0.0
    max_ratio, idx, s_star, fcl_star, fq_star = best
    if idx is None:
        max_ratio = 0.0
    details = {
        "tol": tol,
        "h": h,
        "nodes": suite.nodes,
        "curves": len(suite),
        "skipped_stationary_nodes": skipped,
        "boundary_nodes": boundary,
        "argmax": None
        if idx is None
        else {"curve_index": idx, "curve_label": suite.curves[idx].label, "s": s_star, "F_cl": fcl_star, "F_Q": fq_star},
    }
    witness = None
    if not passed:
        # report the node of largest ratio when it is itself a violation
        if fcl_star is not None and fcl_star > fq_star * (1.0 + tol) + tol:
            widx, ws, wcl, wq = idx, s_star, fcl_star, fq_star
        else:
            widx, ws, wcl, wq = worst_excess[1]
        witness = Witness(
            "H2",
            _curve_location(P, suite.curves[widx], s=ws, h=h),
            {"lhs": wcl, "rhs": wq, "ratio": wcl / wq, "tol": tol},
        )
    return CheckResult("H2", passed, "max_ratio", max_ratio, details, witness)


def chord_profile(P, curve, n):
    """Round-metric chords of the square-root readout between ``n + 1`` nodes."""
    s = curve.nodes(n)
    R = P.sqrt_transform(curve(s))
    return s, round_distance(R[:-1], R[1:])


def check_H1(P, suite, tol=H1_LENGTH_TOL, levels=H1_LEVELS, shrink=H1_SHRINK, floor=H1_CHORD_FLOOR):
    """Sampled continuity of the square-root readout along each suite curve.

    For dyadic refinements the largest single chord must shrink by at least
    ``shrink`` per level (or already be below ``floor``), and each refinement
    may add at most ``tol`` plus one coarse chord to the total chord length.
    The extra chord allowance covers sharp but Lipschitz corners, which the
    polygon only resolves gradually.
    """
    worst_gap = 0.0
    worst_chord = 0.0
    witness = None
    for idx, curve in enumerate(suite.curves):
        lengths, maxima, argmax = [], [], []
        for n in levels:
            s, ch = chord_profile(P, curve, n)
            lengths.append(float(ch.sum()))
            k = int(np.argmax(ch))
            maxima.append(float(ch[k]))
            argmax.append((float(s[k]), float(s[k + 1])))
        worst_chord = max(worst_chord, maxima[-1])
        for lvl in range(1, len(levels)):
            gap = abs(lengths[lvl] - lengths[lvl - 1])
            worst_gap = max(worst_gap, gap)
            coarse, fine = maxima[lvl - 1], maxima[lvl]
            stuck = coarse > floor and fine * shrink > coarse
            if witness is None and (stuck or gap > tol + coarse):
                a, b = argmax[lvl]
                witness = Witness(
                    "H1",
                    _curve_location(P, curve, n_coarse=levels[lvl - 1], n_fine=levels[lvl], segment=[a, b]),
                    {
                        "lhs": fine if stuck else gap,
                        "rhs": coarse / shrink if stuck else tol + coarse,
                        "criterion": "chord-shrink" if stuck else "length-cauchy",
                        "max_chord_coarse": coarse,
                        "max_chord_fine": fine,
                        "shrink": shrink,
                        "tol": tol,
                    },
                )
    details = {
        "levels": list(levels),
        "shrink_factor": shrink,
        "length_tol": tol,
        "length_rule": "gap <= length_tol + coarse max chord",
        "chord_floor": floor,
        "worst_length_gap": worst_gap,
        "worst_finest_chord": worst_chord,
        "sampled_surrogate": True,
    }
    return CheckResult("H1", witness is None, "worst_length_gap", worst_gap, details, witness)


def born_deviation(P, samples):
    """Largest ``|R(psi)_i - |<e_i|psi>||`` over the sample rays.

    Returns ``(deviation, argmax_ray, coordinate)``.
    """
    A = np.asarray(samples, dtype=complex)
    if A.ndim == 1:
        A = A[np.newaxis, :]
    if A.shape[0] == 0:
        raise ValueError("born_deviation needs at least one sample")
    dev = np.abs(P.sqrt_transform(A) - np.abs(A))
    n, i = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return float(dev[n, i]), A[n], int(i)


@dataclass
class AdmissibilityReport:
    readout: dict
    h1: CheckResult
    h2: CheckResult
    h3: CheckResult
    born_dev: float
    born_dev_at: list
    params: dict

    @property
    def passed(self):
        return self.h1.passed and self.h2.passed and self.h3.passed

    @property
    def checks(self):
        return [self.h1, self.h2, self.h3]

    @property
    def witnesses(self):
        return [c.witness for c in self.checks if c.witness is not None]

    def to_dict(self):
        return {
            "readout": self.readout,
            "verdicts": [c.to_dict() for c in self.checks]
            + [{"hypothesis": "born_deviation", "verdict": "INFO", "statistic": "max_deviation", "value": self.born_dev, "details": {"argmax_ray": self.born_dev_at}}],
            "params": self.params,
        }


def check_admissibility(P, suite, samples, tol_eq=TOL_EQ, tol_ineq=TOL_INEQ, h1_tol=H1_LENGTH_TOL):
    """Run H1, H2, H3 and the Born deviation on one readout."""
    h1 = check_H1(P, suite, h1_tol)
    h2 = check_H2(P, suite, tol_ineq)
    h3 = check_H3(P, suite.dim, tol_eq)
    dev, at, _ = born_deviation(P, samples)
    params = {
        "d": suite.dim,
        "seed": suite.seed,
        "rng": RNG_ALGORITHM,
        "curves": len(suite),
        "nodes": suite.nodes,
        "samples": int(np.shape(samples)[0]),
        "sample_stream_offset": SAMPLE_STREAM,
        "tol_eq": tol_eq,
        "tol_ineq": tol_ineq,
    }
    return AdmissibilityReport(P.record(), h1, h2, h3, dev, amps_to_json(at), params)


__all__ = [
    "AdmissibilityReport",
    "CheckResult",
    "CurveSuite",
    "Witness",
    "born_deviation",
    "check_H1",
    "check_H2",
    "check_H3",
    "check_admissibility",
    "chord_profile",
    "classical_fisher_along",
    "default_suite",
    "fisher_profile",
    "pair_geodesic_suite",
    "sample_states",
    "vertex_geodesic_suite",
]
