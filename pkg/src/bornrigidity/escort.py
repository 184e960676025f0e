"""Functional-equation scans for coordinate-wise escort generators.

Three independent routes to ``f(t) = c t``:

* normalization -- ``sum_i f(u_i) = 1`` on every simplex with ``d >= 3``
  (then in fact ``c = 1``);
* additivity -- ``f(u + v) = f(u) + f(v)`` on the unit triangle;
* split-merge invariance -- ``f(k s) + f((1 - k) s) = f(s)``.

Each scan evaluates its residual on a grid and reports the worst point.
Linearity itself is checked by a least-squares fit through the origin; it
stands in for the continuity argument, which has no finite analogue.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ._validation import TOL_EQ, DomainError
from .admissibility import Witness
from .readouts import BornReadout, EscortReadout
from .rigidity import BORN_CONFIRMED, INCONCLUSIVE, PREMISE_VIOLATED, RigidityVerdict, readout_rigidity_check

GRID = 64
FIT_TOL = 1e-6
CERTIFY_GRID = 256


@dataclass
class GeneratorScanReport:
    generator: str
    mode: str
    max_abs_residual: float
    residual: float
    argmax: dict
    grid: dict
    passed: bool
    fitted_c: float | None = None
    extras: dict = field(default_factory=dict)
    witness: Witness | None = None

    def to_dict(self):
        return {
            "generator": self.generator,
            "mode": self.mode,
            "verdict": "PASS" if self.passed else "FAIL",
            "max_abs_residual": self.max_abs_residual,
            "residual": self.residual,
            "argmax": self.argmax,
            "fitted_c": self.fitted_c,
            "grid": self.grid,
            "extras": self.extras,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@lru_cache(maxsize=None)
def _compositions(m, d):
    if d == 1:
        return np.array([[m]], dtype=np.int64)
    blocks = []
    for k in range(m + 1):
        rest = _compositions(m - k, d - 1)
        blocks.append(np.hstack([np.full((rest.shape[0], 1), k, dtype=np.int64), rest]))
    return np.vstack(blocks)


def simplex_grid(d, m=GRID):
    """All simplex points with coordinates in ``{0, 1/m, ..., 1}``, plus the barycenter."""
    pts = _compositions(m, d) / m
    return np.vstack([pts, np.full((1, d), 1.0 / d)])


def normalization_scan(f, dims=(3, 4, 5), grid=GRID, tol=TOL_EQ):
    """Residual ``sum_i f(u_i) - 1`` over a grid on each listed simplex.

    Also derives ``f(0)`` from the vertex identities in three and four
    outcomes (their difference is exactly ``f(0)``) and the implied
    ``f(1) = 1 - 2 f(0)``.
    """
    dims = tuple(int(d) for d in dims)
    if not dims or min(dims) < 3:
        raise DomainError("normalization scan needs dimensions d >= 3")
    per_dim = []
    worst = None
    for d in dims:
        U = simplex_grid(d, grid)
        r = np.sum(f(U), axis=1) - 1.0
        k = int(np.argmax(np.abs(r)))
        entry = {
            "d": d,
            "points": int(U.shape[0]),
            "max_abs_residual": float(abs(r[k])),
            "residual": float(r[k]),
            "argmax": [float(x) for x in U[k]],
            "at_barycenter": float(r[-1]),
        }
        per_dim.append(entry)
        if worst is None or entry["max_abs_residual"] > worst["max_abs_residual"]:
            worst = entry
    f0, f1 = float(f(0.0)), float(f(1.0))
    s3 = f1 + 2.0 * f0
    s4 = f1 + 3.0 * f0
    f0_derived = s4 - s3
    passed = worst["max_abs_residual"] <= tol
    witness = None
    if not passed:
        witness = Witness(
            "Normalization",
            {"generator": f.name, "u": worst["argmax"]},
            {"lhs": worst["residual"] + 1.0, "rhs": 1.0},
        )
    return GeneratorScanReport(
        f.name,
        "NORMALIZATION",
        worst["max_abs_residual"],
        worst["residual"],
        {"d": worst["d"], "u": worst["argmax"]},
        {"dims": list(dims), "per_axis": grid},
        passed,
        extras={
            "per_dim": per_dim,
            "vertex_sum_d3": s3,
            "vertex_sum_d4": s4,
            "f0_derived": f0_derived,
            "f1_derived": 1.0 - 2.0 * f0_derived,
        },
        witness=witness,
    )


def cauchy_additivity_residual(f, u, v):
    """``f(u + v) - f(u) - f(v)`` for ``u, v >= 0`` with ``u + v <= 1``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(u < 0) or np.any(v < 0) or np.any(u + v > 1.0 + 1e-15):
        raise DomainError("additivity residual is defined on the unit triangle only")
    return f(u + v) - f(u) - f(v)


def cauchy_scan(f, grid=GRID, tol=TOL_EQ):
    """Additivity residual at every ``(i/grid, j/grid)`` with ``i + j <= grid``."""
    i, j = np.meshgrid(np.arange(grid + 1), np.arange(grid + 1), indexing="ij")
    mask = i + j <= grid
    u, v = i[mask] / grid, j[mask] / grid
    r = cauchy_additivity_residual(f, u, v)
    k = int(np.argmax(np.abs(r)))
    passed = bool(abs(r[k]) <= tol)
    witness = None
    if not passed:
        witness = Witness(
            "Cauchy",
            {"generator": f.name, "u": float(u[k]), "v": float(v[k])},
            {"lhs": float(f(u[k] + v[k])), "rhs": float(f(u[k]) + f(v[k]))},
        )
    return GeneratorScanReport(
        f.name, "CAUCHY", float(abs(r[k])), float(r[k]), {"u": float(u[k]), "v": float(v[k])},
        {"per_axis": grid, "pairs": int(u.size)}, passed, witness=witness,
    )


def markov_invariance_residual(f, k, s):
    """Split-merge residual ``f(k s) + f((1 - k) s) - f(s)``."""
    k = np.asarray(k, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(k < 0) or np.any(k > 1) or np.any(s <= 0) or np.any(s > 1):
        raise DomainError("need k in [0, 1] and s in (0, 1]")
    return f(k * s) + f((1.0 - k) * s) - f(s)


def markov_grid(grid=GRID):
    """``k = i/grid`` for ``i < grid`` and ``s = j/grid`` for ``1 <= j <= grid``.

    ``k = 1`` is left out because the residual is symmetric under
    ``k -> 1 - k``. With ``grid`` a power of two every product ``k s`` is exact.
    """
    k = np.arange(grid) / grid
    s = np.arange(1, grid + 1) / grid
    return k, s


def markov_scan(f, grid=GRID, tol=TOL_EQ):
    k, s = markov_grid(grid)
    K, S = np.meshgrid(k, s, indexing="ij")
    r = markov_invariance_residual(f, K, S)
    a, b = np.unravel_index(int(np.argmax(np.abs(r))), r.shape)
    passed = bool(abs(r[a, b]) <= tol)
    ka, sb = float(K[a, b]), float(S[a, b])
    witness = None
    if not passed:
        witness = Witness(
            "Markov",
            {"generator": f.name, "k": ka, "s": sb},
            {"lhs": float(f(ka * sb) + f((1.0 - ka) * sb)), "rhs": float(f(sb))},
        )
    return GeneratorScanReport(
        f.name, "MARKOV", float(abs(r[a, b])), float(r[a, b]), {"k": ka, "s": sb},
        {"k_nodes": grid, "s_nodes": grid}, passed, witness=witness,
    )


class LinearFit(NamedTuple):
    c: float
    max_dev: float
    passed: bool
    argmax_t: float


def linear_fit_conclusion(f, grid=GRID, tol=FIT_TOL):
    """Least-squares slope through the origin and the worst deviation from it."""
    if grid < 8:
        raise DomainError("linear fit needs at least 8 nodes")
    t = np.linspace(0.0, 1.0, grid)
    y = f(t)
    c = float(np.dot(t, y) / np.dot(t, t))
    dev = np.abs(y - c * t)
    k = int(np.argmax(dev))
    return LinearFit(c, float(dev[k]), bool(dev[k] <= tol), float(t[k]))


def linear_fit_scan(f, grid=GRID, tol=FIT_TOL):
    fit = linear_fit_conclusion(f, grid, tol)
    return GeneratorScanReport(
        f.name, "LINEAR_FIT", fit.max_dev, fit.max_dev, {"t": fit.argmax_t},
        {"nodes": grid}, fit.passed, fitted_c=fit.c,
    )


def escort_rigidity_test(f, suite, samples, tol=TOL_EQ, fit_tol=FIT_TOL):
    """Escort-class collapse: admissible escort readouts are the Born readout.

    Runs the readout rigidity check on the escort readout. When the premises
    hold it additionally requires that the generator is linear (on the
    default grid, then re-checked on a finer one) and that the escort
    readout agrees with Born on the samples. The slope ``c`` is reported but
    not certified: every ``c > 0`` gives the same readout.
    """
    P = EscortReadout(f)
    verdict = readout_rigidity_check(P, suite, samples, tol)
    fit = linear_fit_conclusion(f, GRID, fit_tol)
    details = dict(verdict.details)
    details["linear_fit"] = fit._asdict()
    if verdict.conclusion == PREMISE_VIOLATED:
        return RigidityVerdict(PREMISE_VIOLATED, verdict.max_identity_gap, verdict.witness, verdict.samples_used, details)
    if fit.passed:
        fine = linear_fit_conclusion(f, CERTIFY_GRID, fit_tol)
        details["linear_fit_certify"] = fine._asdict()
        fit = fine
    diff = float(np.max(np.abs(P.transform(samples) - BornReadout().transform(samples))))
    details["max_readout_vs_born"] = diff
    if verdict.conclusion == BORN_CONFIRMED and fit.passed and diff <= tol:
        return RigidityVerdict(BORN_CONFIRMED, verdict.max_identity_gap, None, verdict.samples_used, details)
    details["note"] = "premises held but the generator or readout failed the linear collapse"
    return RigidityVerdict(INCONCLUSIVE, verdict.max_identity_gap, None, verdict.samples_used, details)


SCANS = {
    "normalization": normalization_scan,
    "cauchy": cauchy_scan,
    "markov": markov_scan,
    "linear": linear_fit_scan,
}
