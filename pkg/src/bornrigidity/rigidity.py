"""Sampled rigidity certificates.

Three engines, from the inside out:

* orthant maps -- a round-metric 1-Lipschitz self-map of the positive
  orthant that fixes the coordinate vertices is the identity. Numerically we
  look for the two ways this can be escaped: a coordinate that drops below
  its input (:func:`vertex_dominance_residuals`) or a pair of points pushed
  apart (:func:`lipschitz_witness_search`).
* simplex maps -- vertex fixing plus Fisher non-expansion forces the
  identity (:func:`simplex_rigidity_check`).
* readouts -- the three admissibility hypotheses force the Born readout
  (:func:`readout_rigidity_check`).

Each engine either confirms the conclusion on its samples, returns the
violated premise with a replayable :class:`~bornrigidity.admissibility.Witness`,
or says INCONCLUSIVE.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import TOL_EQ, TOL_INEQ, DomainError
from .admissibility import (
    CurveSuite,
    Witness,
    born_deviation,
    check_H1,
    check_H2,
    check_H3,
)
from .projective import (
    RNG_ALGORITHM,
    amps_to_json,
    basis_ray,
    fs_distance,
    geodesic_curve,
    rng_for,
)
from .readouts import (
    check_permutation,
    escort_self_map,
    parse_generator,
    perturbed_self_map,
)
from .simplex import (
    FD_STEP,
    SimplexSelfMap,
    barycenter_map,
    conjugate,
    fisher_pushforward,
    identity_map,
    round_distance,
)

IDENTITY_CONFIRMED = "IDENTITY_CONFIRMED"
BORN_CONFIRMED = "BORN_CONFIRMED"
PREMISE_VIOLATED = "PREMISE_VIOLATED"
INCONCLUSIVE = "INCONCLUSIVE"

#: golden-section iterations per coordinate line search
GOLDEN_ITERS = 40
#: extra sampling rounds before a simplex check gives up
SEARCH_ROUNDS = 10
#: pull toward the barycenter for sampled interior simplex points
INTERIOR_MIX = 1e-3


class VertexFixingError(DomainError):
    def __init__(self, vertex, residual):
        super().__init__(f"map does not fix vertex {vertex} (residual {residual:.3e})")
        self.vertex = vertex
        self.residual = residual


@dataclass
class RigidityVerdict:
    conclusion: str
    max_identity_gap: float
    witness: Witness | None = None
    samples_used: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.conclusion == PREMISE_VIOLATED and self.witness is None:
            raise ValueError("a PREMISE_VIOLATED verdict needs a witness")

    @property
    def confirmed(self):
        return self.conclusion in (IDENTITY_CONFIRMED, BORN_CONFIRMED)

    def to_dict(self):
        return {
            "conclusion": self.conclusion,
            "max_identity_gap": self.max_identity_gap,
            "witness": self.witness.to_dict() if self.witness else None,
            "samples_used": self.samples_used,
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# simplex self-map catalog
# ---------------------------------------------------------------------------


def permutation_self_map(sigma):
    sigma = check_permutation(sigma)
    idx = np.array(sigma) - 1
    name = "permuted:" + ",".join(map(str, sigma))
    return SimplexSelfMap(lambda u: np.asarray(u, dtype=float)[..., idx], name, {"permutation": list(sigma)})


def parse_self_map(spec):
    """Simplex self-map from a spec string.

    ``identity``, ``barycenter``, ``escort:<generator>``, ``perturbed:<eps>``,
    ``permuted:<sigma>``.
    """
    kind, _, rest = spec.strip().partition(":")
    if kind == "identity":
        return identity_map()
    if kind == "barycenter":
        return barycenter_map()
    if kind == "escort":
        return escort_self_map(parse_generator(rest))
    if kind == "perturbed":
        try:
            return perturbed_self_map(float(rest))
        except ValueError as exc:
            raise DomainError(f"bad perturbation in {spec!r}") from exc
    if kind == "permuted":
        try:
            return permutation_self_map(rest.split(","))
        except ValueError as exc:
            raise DomainError(f"bad permutation in {spec!r}") from exc
    raise DomainError(f"unknown map spec {spec!r}")


def parse_orthant_map(spec):
    """Orthant map from ``conj(<simplex map spec>)`` or a bare simplex map spec."""
    spec = spec.strip()
    if spec.startswith("conj(") and spec.endswith(")"):
        spec = spec[5:-1]
    return conjugate(parse_self_map(spec))


# ---------------------------------------------------------------------------
# orthant maps
# ---------------------------------------------------------------------------


def check_vertex_fixing(Psi, d, tol=TOL_EQ):
    E = np.eye(d)
    resid = np.max(np.abs(Psi(E) - E), axis=1)
    worst = int(np.argmax(resid))
    if resid[worst] > tol:
        raise VertexFixingError(worst + 1, float(resid[worst]))
    return float(resid[worst])


def vertex_dominance_residuals(Psi, x, tol=TOL_EQ):
    """``Psi(x) - x`` for a vertex-fixing orthant map.

    A 1-Lipschitz vertex-fixing map has every entry ``>= 0`` and, since both
    vectors are unit, therefore every entry ``== 0``. A negative entry ``i``
    means ``Psi`` moved ``x`` farther from ``e_i`` than ``x`` was.
    """
    x = np.asarray(x, dtype=float)
    check_vertex_fixing(Psi, x.shape[-1], tol)
    return Psi(x) - x


def dominance_witness(Psi, x, tol=TOL_EQ):
    """Witness for the most negative dominance residual at ``x``, or ``None``."""
    r = vertex_dominance_residuals(Psi, x, tol)
    i = int(np.argmin(r))
    if r[i] >= -tol:
        return None
    e = np.eye(x.shape[-1])[i]
    return Witness(
        "VertexDominance",
        {"map": Psi.name, "x": [float(v) for v in x], "vertex": i + 1},
        {
            "lhs": float(round_distance(Psi(x), e)),
            "rhs": float(round_distance(x, e)),
            "residual": float(r[i]),
        },
    )


def _pairwise_round(X):
    G = np.clip(X @ X.T, -1.0, 1.0)
    D = np.arccos(G)
    near = G > 0.9
    if np.any(near):
        chord = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=-1)
        D = np.where(near, 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0)), D)
    return D


def _expansion(Psi, x, y):
    return float(round_distance(Psi(x), Psi(y)) - round_distance(x, y))


def _project_orthant(x):
    x = np.clip(x, 0.0, None)
    n = np.linalg.norm(x)
    return x / n if n > 0 else None


def _golden_max(g, lo, hi, iters):
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, e = b - phi * (b - a), a + phi * (b - a)
    gc, ge = g(c), g(e)
    for _ in range(iters):
        if gc >= ge:
            b, e, ge = e, c, gc
            c = b - phi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, e, ge
            e = a + phi * (b - a)
            ge = g(e)
    return (c, gc) if gc >= ge else (e, ge)


def _refine_pair(Psi, x, y, iters=GOLDEN_ITERS):
    best = _expansion(Psi, x, y)
    radius = max(0.05, 0.5 * float(round_distance(x, y)))
    for which in (0, 1):
        for j in range(x.size):
            base = (x if which == 0 else y).copy()

            def g(delta, base=base, j=j, which=which):
                p = base.copy()
                p[j] += delta
                p = _project_orthant(p)
                if p is None:
                    return -np.inf
                return _expansion(Psi, p, y) if which == 0 else _expansion(Psi, x, p)

            delta, val = _golden_max(g, -radius, radius, iters)
            if val > best:
                p = base.copy()
                p[j] += delta
                p = _project_orthant(p)
                if which == 0:
                    x = p
                else:
                    y = p
                best = val
    return x, y, best


def sample_orthant(seed, n, d, stream=0):
    """``n`` interior orthant points: square roots of flat-Dirichlet simplex points."""
    u = rng_for(seed, stream).dirichlet(np.ones(d), n)
    u = (1.0 - INTERIOR_MIX) * u + INTERIOR_MIX / d
    return np.sqrt(u)


def lipschitz_witness_search(Psi, d, seed, n, tol=TOL_EQ, refine=True):
    """Look for points the orthant map pushes apart in the round metric.

    Scans all pairs among ``n`` sampled interior points and the ``d``
    vertices. If the worst expansion exceeds ``tol`` it is sharpened by
    coordinate-wise golden-section search and returned as a ``Lipschitz``
    witness; otherwise returns ``None``.
    """
    if n < 2:
        raise DomainError("need at least two sample points")
    X = np.vstack([sample_orthant(seed, n, d), np.eye(d)])
    Y = Psi(X)
    gap = _pairwise_round(Y) - _pairwise_round(X)
    i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
    if gap[i, j] <= tol:
        return None
    x, y, best = X[i], X[j], float(gap[i, j])
    if refine:
        x, y, best = _refine_pair(Psi, x.copy(), y.copy())
    return Witness(
        "Lipschitz",
        {"map": Psi.name, "metric": "round", "x": [float(v) for v in x], "y": [float(v) for v in y], "seed": seed, "n": n},
        {"lhs": float(round_distance(Psi(x), Psi(y))), "rhs": float(round_distance(x, y)), "gap": best},
    )


# ---------------------------------------------------------------------------
# simplex maps
# ---------------------------------------------------------------------------


def _sample_pairs(seed, n, d, stream):
    rng = rng_for(seed, stream)
    U = (1.0 - INTERIOR_MIX) * rng.dirichlet(np.ones(d), n) + INTERIOR_MIX / d
    V = rng.standard_normal((n, d))
    V -= V.mean(axis=1, keepdims=True)
    V /= np.max(np.abs(V), axis=1, keepdims=True)
    return U, V


def _fisher_scan(T, U, V, tol_ineq, h):
    worst = (-np.inf, None)
    for u, v in zip(U, V):
        pushed, original, h_used = fisher_pushforward(T, u, v, h)
        excess = pushed - (original * (1.0 + tol_ineq) + tol_ineq)
        if excess > worst[0]:
            worst = (excess, (u, v, h_used, pushed, original))
    return worst


def _fisher_witness(T, found):
    u, v, h, pushed, original = found
    return Witness(
        "Lipschitz",
        {"map": T.name, "metric": "fisher", "u": [float(a) for a in u], "v": [float(a) for a in v], "h": h},
        {"lhs": pushed, "rhs": original, "ratio": pushed / original},
    )


def _targeted_directions(u, Tu):
    d = u.size
    dirs = [np.eye(d)[i] - u for i in range(d)]
    if np.max(np.abs(Tu - u)) > 0:
        dirs.append(Tu - u)
    out = []
    for v in dirs:
        v = v - v.mean()
        m = np.max(np.abs(v))
        if m > 0:
            out.append(v / m)
    return out


def simplex_rigidity_check(T, d, seed, n=200, tol=TOL_EQ, tol_ineq=TOL_INEQ, h=FD_STEP):
    """Sampled check that a vertex-fixing Fisher non-expanding map is the identity.

    Steps: (a) vertex premise, (b) Fisher non-expansion at ``n`` random
    interior ``(u, v)`` pairs, (c) identity gap on the same ``u``. If both
    premises pass but the gap does not vanish, the search is widened
    (fresh samples, directions toward vertices and along ``T(u) - u``, and
    a pairwise search on the conjugated orthant map) before settling for
    INCONCLUSIVE.
    """
    if n < d:
        raise DomainError("need at least d samples")
    E = np.eye(d)
    vres = np.max(np.abs(T(E) - E), axis=1)
    worst_v = int(np.argmax(vres))
    U, V = _sample_pairs(seed, n, d, stream=0)
    gap = float(np.max(np.abs(T(U) - U)))
    excess, found = _fisher_scan(T, U, V, tol_ineq, h)
    details = {
        "vertex_residuals": [float(r) for r in vres],
        "max_fisher_excess": float(excess),
        "tol": tol,
        "tol_ineq": tol_ineq,
        "h": h,
        "rng": RNG_ALGORITHM,
    }
    used = {"n": n, "seed": seed}
    if vres[worst_v] > tol:
        w = Witness(
            "H3",
            {"map": T.name, "vertex": worst_v + 1, "d": d},
            {"lhs": float(vres[worst_v]), "rhs": 0.0, "tol": tol},
        )
        details["violated"] = "vertex-fixing"
        return RigidityVerdict(PREMISE_VIOLATED, gap, w, used, details)
    if excess > 0:
        details["violated"] = "fisher-nonexpansion"
        return RigidityVerdict(PREMISE_VIOLATED, gap, _fisher_witness(T, found), used, details)
    if gap <= tol:
        return RigidityVerdict(IDENTITY_CONFIRMED, gap, None, used, details)

    # premises held on the first batch but T moved something: widen the search
    order = np.argsort(-np.max(np.abs(T(U) - U), axis=1))[: min(n, 20)]
    for k in order:
        u = U[k]
        dirs = _targeted_directions(u, T(u))
        if dirs:
            ex, fnd = _fisher_scan(T, [u] * len(dirs), dirs, tol_ineq, h)
            if ex > 0:
                details["violated"] = "fisher-nonexpansion"
                details["search"] = "targeted"
                return RigidityVerdict(PREMISE_VIOLATED, gap, _fisher_witness(T, fnd), used, details)
    for r in range(1, SEARCH_ROUNDS + 1):
        U2, V2 = _sample_pairs(seed, n, d, stream=r)
        ex, fnd = _fisher_scan(T, U2, V2, tol_ineq, h)
        used["n"] += n
        if ex > 0:
            details["violated"] = "fisher-nonexpansion"
            details["search"] = f"round-{r}"
            return RigidityVerdict(PREMISE_VIOLATED, gap, _fisher_witness(T, fnd), used, details)
    w = lipschitz_witness_search(conjugate(T), d, seed, n, tol)
    if w is not None:
        details["violated"] = "round-lipschitz"
        return RigidityVerdict(PREMISE_VIOLATED, gap, w, used, details)
    details["note"] = "premises held on every sample but the identity gap exceeds tol"
    return RigidityVerdict(INCONCLUSIVE, gap, None, used, details)


# ---------------------------------------------------------------------------
# readouts
# ---------------------------------------------------------------------------


def chain_residuals(P, samples):
    """Residuals of the contraction-to-Born argument on sample rays.

    Returns a dict with the arrays ``contraction`` (round distance of
    ``R(psi)`` to ``e_i`` minus FS distance of ``psi`` to ``e_i``) and
    ``dominance`` (``|<e_i|psi>| - R(psi)_i``), both ``(n, d)``. Both are
    ``<= 0`` for an admissible readout.
    """
    A = np.asarray(samples, dtype=complex)
    d = A.shape[1]
    R = P.sqrt_transform(A)
    E = np.eye(d)
    contraction = np.empty(A.shape)
    for i in range(d):
        contraction[:, i] = round_distance(R, E[i]) - fs_distance(A, basis_ray(d, i))
    dominance = np.abs(A) - R
    return {"contraction": contraction, "dominance": dominance}


def _chain_summary(P, samples):
    res = chain_residuals(P, samples)
    out = {}
    for key, arr in res.items():
        n, i = np.unravel_index(int(np.argmax(arr)), arr.shape)
        out[key] = {"max": float(arr[n, i]), "sample": int(n), "coordinate": int(i) + 1}
    return out, res


def readout_rigidity_check(P, suite, samples, tol=TOL_EQ, tol_ineq=TOL_INEQ):
    """Check the readout premises, then walk the contraction chain to Born.

    Premises are H1, H2 and H3 on ``suite``. If they all pass, the chain is
    evaluated on ``samples``: FS contraction toward each basis ray,
    coordinate dominance, and finally the Born deviation. Chain residuals
    for the basis rays themselves are always reported as diagnostics.
    """
    A = np.asarray(samples, dtype=complex)
    if A.ndim != 2 or A.shape[0] == 0:
        raise DomainError("readout_rigidity_check needs a nonempty (n, d) sample batch")
    d = suite.dim
    h1 = check_H1(P, suite)
    h2 = check_H2(P, suite, tol_ineq)
    h3 = check_H3(P, d, tol)
    chain, _ = _chain_summary(P, A)
    basis_chain, _ = _chain_summary(P, np.eye(d, dtype=complex))
    dev, at, _ = born_deviation(P, A)
    details = {
        "premises": {c.hypothesis: c.to_dict() for c in (h1, h2, h3)},
        "chain": chain,
        "chain_at_basis": basis_chain,
        "born_deviation": dev,
        "born_deviation_at": amps_to_json(at),
        "tol": tol,
        "tol_ineq": tol_ineq,
        "rng": RNG_ALGORITHM,
    }
    used = {"n": int(A.shape[0]), "seed": suite.seed, "curves": len(suite), "nodes": suite.nodes}
    for c in (h1, h2, h3):
        if not c.passed:
            details["violated"] = c.hypothesis
            return RigidityVerdict(PREMISE_VIOLATED, dev, c.witness, used, details)

    if chain["contraction"]["max"] <= tol and chain["dominance"]["max"] <= tol and dev <= tol:
        return RigidityVerdict(BORN_CONFIRMED, dev, None, used, details)

    # a contraction failure toward a calibrated vertex breaks the FS Lipschitz
    # bound, so H2 must fail somewhere on the geodesic to that vertex
    if chain["contraction"]["max"] > tol:
        n, i = chain["contraction"]["sample"], chain["contraction"]["coordinate"] - 1
        psi = A[n]
        curve = geodesic_curve(basis_ray(d, i), psi, f"vertex-{i + 1}-to-sample-{n}")
        fine = check_H2(P, CurveSuite([curve], 1024, ["chain-search"], suite.seed), tol_ineq)
        details["chain_search"] = fine.to_dict()
        if not fine.passed:
            details["violated"] = "H2"
            return RigidityVerdict(PREMISE_VIOLATED, dev, fine.witness, used, details)
        e = np.eye(d)[i]
        w = Witness(
            "Lipschitz",
            {"readout": P.spec, "metric": "fs-to-round", "psi": amps_to_json(psi), "vertex": i + 1},
            {
                "lhs": float(round_distance(P.sqrt_transform(psi), e)),
                "rhs": float(fs_distance(psi, basis_ray(d, i))),
            },
        )
        details["violated"] = "fs-lipschitz"
        return RigidityVerdict(PREMISE_VIOLATED, dev, w, used, details)
    details["note"] = "premises passed on the suite; chain residual above tol on samples"
    return RigidityVerdict(INCONCLUSIVE, dev, None, used, details)
