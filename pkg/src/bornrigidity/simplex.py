"""Fisher-Rao geometry of the probability simplex and its square-root chart.

The square-root chart ``u -> sqrt(u)`` maps the closed simplex onto the
closed positive orthant of the unit sphere and pulls the round metric back
to one quarter of the Fisher metric. Everything boundary-sensitive goes
through that chart; :func:`fisher_norm_sq` itself is interior-only.

All functions operate on the last axis, so batches of shape ``(n, d)`` work
wherever single vectors do.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import (
    DomainError,
    check_orthant,
    check_same_dim,
    check_simplex,
    check_tangent,
)

#: default central-difference step
FD_STEP = 1e-5
#: how many times the stencil step may be halved before giving up
FD_MAX_SHRINK = 10
#: barycentric retraction used when a chord endpoint sits on the boundary
INTERIOR_EPS = 1e-9


def vertices(d):
    """Simplex vertices (equivalently the orthant's coordinate vertices) as rows."""
    return np.eye(d)


def barycenter(d):
    return np.full(d, 1.0 / d)


def is_interior(u):
    u = check_simplex(u)
    return bool(np.all(u > 0))


def fisher_norm_sq(u, v):
    """Squared Fisher length ``sum_i v_i**2 / u_i`` of tangent ``v`` at interior ``u``."""
    u = check_simplex(u, interior=True)
    v = check_tangent(v)
    check_same_dim(u, v)
    return np.sum(v * v / u, axis=-1)


def sqrt_chart(u):
    u = check_simplex(u)
    return np.sqrt(u)


def sqrt_chart_inverse(x):
    x = check_orthant(x)
    return x * x


class SqrtChart(TransformerMixin, BaseEstimator):
    """Square-root chart as a stateless transformer (simplex -> orthant).

    Composes with the readout transformers, e.g.
    ``make_pipeline(BornReadout(), SqrtChart())`` is the square-root Born
    readout.
    """

    def fit(self, X, y=None):
        X = check_simplex(X)
        self.n_features_in_ = np.shape(X)[-1]
        return self

    def transform(self, X):
        return sqrt_chart(X)

    def inverse_transform(self, X):
        return sqrt_chart_inverse(X)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        return tags


def round_distance(x, y):
    """Great-circle distance between unit vectors with nonnegative overlap.

    Uses ``arccos`` of the (clamped) dot product away from coincidence and
    the chord form ``2 arcsin(|x - y| / 2)`` near it, where ``arccos`` loses
    half the digits.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    check_same_dim(x, y)
    dot = np.clip(np.sum(x * y, axis=-1), -1.0, 1.0)
    chord = np.linalg.norm(x - y, axis=-1)
    near = 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))
    return np.where(dot > 0.9, near, np.arccos(dot))


def retract_interior(x, eps=INTERIOR_EPS):
    """Move an orthant point toward the barycenter direction and renormalize."""
    x = check_orthant(x)
    d = x.shape[-1]
    y = (1.0 - eps) * x + eps / np.sqrt(d)
    return y / np.linalg.norm(y, axis=-1, keepdims=True)


def orthant_chord_geodesic(x, y, t):
    """Point at parameter ``t`` on the normalized chord from ``x`` to ``y``.

    Both endpoints must lie in the open orthant (use :func:`retract_interior`
    for boundary endpoints). The normalized chord traces the minimizing
    great-circle arc, but not at constant speed.
    """
    x = check_orthant(x)
    y = check_orthant(y)
    check_same_dim(x, y)
    if not np.array_equal(x, y) and (np.any(x <= 0) or np.any(y <= 0)):
        raise DomainError("chord endpoints must be strictly positive")
    t = np.asarray(t, dtype=float)
    p = (1.0 - t)[..., np.newaxis] * x + t[..., np.newaxis] * y
    n = np.linalg.norm(p, axis=-1, keepdims=True)
    if np.any(n == 0):
        raise DomainError("chord passes through the origin")
    return p / n


@dataclass(frozen=True)
class SimplexSelfMap:
    """A named map of the simplex into itself.

    ``eval`` must accept arrays of shape ``(..., d)``.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    name: str
    params: dict = field(default_factory=dict)

    def __call__(self, u):
        return self.eval(np.asarray(u, dtype=float))


@dataclass(frozen=True)
class OrthantSelfMap:
    eval: Callable[[np.ndarray], np.ndarray]
    name: str
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))


def conjugate(T):
    """Orthant map ``sqrt o T o square`` induced by a simplex self-map."""

    def psi(x):
        return np.sqrt(np.clip(T(x * x), 0.0, None))

    return OrthantSelfMap(psi, f"conj({T.name})", dict(T.params))


def identity_map():
    return SimplexSelfMap(lambda u: np.array(u, dtype=float), "identity")


def barycenter_map():
    def const(u):
        return np.full_like(u, 1.0 / u.shape[-1])

    return SimplexSelfMap(const, "barycenter")


def _stencil_step(u, v, h):
    for _ in range(FD_MAX_SHRINK + 1):
        if np.all(u - h * np.abs(v) >= 0.0):
            return h
        h /= 2.0
    raise DomainError("finite-difference stencil leaves the simplex; shrink h or move u inward")


def fisher_pushforward(T, u, v, h=FD_STEP):
    """Both sides of the Fisher non-expansion inequality at ``(u, v)``.

    Returns ``(pushed, original, h_used)`` where ``pushed`` is the Fisher
    norm of the central-difference pushforward ``dT.v`` at ``T(u)``.
    """
    u = check_simplex(u, interior=True)
    v = check_tangent(v)
    check_same_dim(u, v)
    h = _stencil_step(u, v, h)
    Tu = check_simplex(T(u), interior=True)
    dTv = (T(u + h * v) - T(u - h * v)) / (2.0 * h)
    return float(fisher_norm_sq(Tu, dTv)), float(fisher_norm_sq(u, v)), h


def fisher_nonexpansion_residual(T, u, v, h=FD_STEP):
    """``g_T(u)(dT v, dT v) - g_u(v, v)``; nonpositive where ``T`` does not expand."""
    pushed, original, _ = fisher_pushforward(T, u, v, h)
    return pushed - original
