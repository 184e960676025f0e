"""Candidate readout maps from rays to outcome distributions for the fixed basis.

Every readout is a stateless scikit-learn transformer: ``transform`` takes a
batch of rays ``(n, d)`` (or a single ray) and returns probability vectors
of the same shape. ``fit`` only records ``n_features_in_`` and is never
required. ``get_params`` doubles as the replay record stored in reports.

Readout spec strings (used by the CLI and in witnesses)::

    born | uniform | step | permuted:2,1,3 | perturbed:0.1
    escort:power:2.0 | escort:linear:3.0 | escort:table:<path>
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import DomainError, check_rays, check_simplex
from .simplex import SimplexSelfMap, sqrt_chart

# ---------------------------------------------------------------------------
# escort generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerGenerator:
    """``f(t) = scale * t**q``."""

    q: float
    scale: float = 1.0

    def __post_init__(self):
        if not self.q > 0 or not self.scale > 0:
            raise DomainError("power generator needs q > 0 and scale > 0")

    def __call__(self, t):
        return self.scale * np.power(np.asarray(t, dtype=float), self.q)

    @property
    def name(self):
        if self.q == 1.0:
            return f"linear:{self.scale!r}"
        if self.scale == 1.0:
            return f"power:{self.q!r}"
        return f"power:{self.q!r}:{self.scale!r}"


def LinearGenerator(c=1.0):
    return PowerGenerator(1.0, c)


@dataclass(frozen=True)
class TabulatedGenerator:
    """Piecewise-linear generator through tabulated nodes on ``[0, 1]``.

    Both columns must be strictly increasing, the grid must span ``[0, 1]``
    and ``f(0)`` must be zero. Monotonicity is enforced on the nodes only;
    between nodes the value is whatever linear interpolation gives.
    """

    t: tuple
    f: tuple
    source: str = field(default="<inline>", compare=False)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        f = np.asarray(self.f, dtype=float)
        if t.ndim != 1 or t.shape != f.shape or t.size < 2:
            raise DomainError("tabulated generator needs two equal-length columns with >= 2 rows")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise DomainError("tabulated generator grid must start at 0 and end at 1")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(f) <= 0):
            raise DomainError("tabulated generator columns must be strictly increasing")
        if f[0] != 0.0:
            raise DomainError("tabulated generator must satisfy f(0) = 0")

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.t, self.f)

    @property
    def name(self):
        return f"table:{self.source}"

    @classmethod
    def from_csv(cls, path):
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if rows:
                        raise DomainError(f"bad generator row {row!r} in {path}")
                    continue  # header
        if not rows:
            raise DomainError(f"no generator rows in {path}")
        t, f = zip(*rows)
        return cls(tuple(t), tuple(f), source=str(path))


def check_generator(f, nodes=257):
    """Verify ``f(0) = 0`` and strict increase on a uniform grid; returns ``f``."""
    grid = np.linspace(0.0, 1.0, nodes)
    vals = f(grid)
    if vals[0] != 0.0:
        raise DomainError(f"generator {f.name} has f(0) = {vals[0]!r}, expected 0")
    if np.any(np.diff(vals) <= 0) or not np.all(np.isfinite(vals)):
        raise DomainError(f"generator {f.name} is not strictly increasing on [0, 1]")
    return f


def parse_generator(spec):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "power":
            parts = rest.split(":")
            return PowerGenerator(*(float(p) for p in parts))
        if kind == "linear":
            return LinearGenerator(float(rest) if rest else 1.0)
        if kind == "table":
            return TabulatedGenerator.from_csv(Path(rest))
    except (TypeError, ValueError, OSError) as exc:
        raise DomainError(f"cannot parse generator spec {spec!r}: {exc}") from exc
    raise DomainError(f"unknown generator spec {spec!r}")


def escort_map(f, u):
    """Escort transform ``f(u_i) / sum_j f(u_j)`` of simplex point(s) ``u``."""
    u = check_simplex(u)
    w = f(u)
    z = np.sum(w, axis=-1, keepdims=True)
    if np.any(z <= 0) or not np.all(np.isfinite(z)):
        raise DomainError("escort normalizer vanished")
    return w / z


def escort_self_map(f):
    return SimplexSelfMap(lambda u: escort_map(f, u), f"escort:{f.name}", {"generator": f.name})


def perturb_toward_barycenter(eps, u):
    """Bump map ``u -> (1 - eps w) u + eps w / d`` with ``w = d**d prod(u)``.

    ``w`` vanishes on every face, so vertices are fixed exactly. For negative
    ``eps`` the result is clipped back onto the simplex.
    """
    if abs(eps) > 0.5:
        raise DomainError("perturbation scale must satisfy |eps| <= 0.5")
    u = check_simplex(u)
    d = u.shape[-1]
    w = float(d) ** d * np.prod(u, axis=-1, keepdims=True)
    out = (1.0 - eps * w) * u + eps * w / d
    if eps < 0:
        out = np.clip(out, 0.0, None)
        out = out / out.sum(axis=-1, keepdims=True)
    return out


def perturbed_self_map(eps):
    return SimplexSelfMap(lambda u: perturb_toward_barycenter(eps, u), f"perturbed:{eps!r}", {"eps": eps})


# ---------------------------------------------------------------------------
# readouts
# ---------------------------------------------------------------------------


def _born(A):
    p = (A * np.conj(A)).real
    return p / p.sum(axis=1, keepdims=True)


class Readout(TransformerMixin, BaseEstimator):
    """Base class: subclasses implement ``_readout`` on an ``(n, d)`` ray batch."""

    def fit(self, X=None, y=None):
        if X is not None:
            A, _ = check_rays(X)
            self.n_features_in_ = A.shape[1]
        return self

    def transform(self, X):
        A, single = check_rays(X)
        P = self._readout(A)
        return P[0] if single else P

    def eval(self, psi):
        return self.transform(np.asarray(psi, dtype=complex).reshape(-1))

    def sqrt_transform(self, X):
        """Square-root readout: the readout pushed through the square-root chart."""
        return sqrt_chart(self.transform(X))

    @property
    def name(self):
        return self.spec.split(":", 1)[0]

    def record(self):
        """JSON-ready description used to replay witnesses."""
        params = {}
        for k, v in self.get_params().items():
            params[k] = v.name if hasattr(v, "name") else (list(v) if isinstance(v, tuple) else v)
        return {"name": self.name, "spec": self.spec, "params": params}

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        return tags


class BornReadout(Readout):
    """``p_i = |<e_i|psi>|**2``."""

    spec = "born"

    def _readout(self, A):
        return _born(A)


class UniformReadout(Readout):
    spec = "uniform"

    def _readout(self, A):
        return np.full(A.shape, 1.0 / A.shape[1])


class StepReadout(Readout):
    """Born rounded to the nearest vertex (argmax, lowest index on ties).

    Deliberately discontinuous; used to exercise the continuity check.
    """

    spec = "step"

    def _readout(self, A):
        P = np.zeros(A.shape)
        P[np.arange(A.shape[0]), np.argmax(np.abs(A), axis=1)] = 1.0
        return P


def check_permutation(sigma, d=None):
    """Validate a 1-based permutation given as a sequence of indices."""
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise DomainError(f"{sigma} is not a permutation of 1..{len(sigma)}")
    if d is not None and len(sigma) != d:
        raise DomainError(f"permutation of length {len(sigma)} used in dimension {d}")
    return sigma


class PermutedBornReadout(Readout):
    """Coordinate ``i`` reports ``|<e_sigma(i)|psi>|**2`` (``sigma`` 1-based)."""

    def __init__(self, permutation=(2, 1)):
        self.permutation = permutation

    @property
    def spec(self):
        return "permuted:" + ",".join(str(s) for s in self.permutation)

    def _readout(self, A):
        sigma = np.array(check_permutation(self.permutation, A.shape[1])) - 1
        return _born(A)[:, sigma]


class EscortReadout(Readout):
    """Escort transform applied to the Born distribution."""

    def __init__(self, generator=PowerGenerator(2.0)):
        self.generator = generator

    @property
    def spec(self):
        return f"escort:{self.generator.name}"

    def _readout(self, A):
        return escort_map(self.generator, _born(A))


class PerturbedBornReadout(Readout):
    """Born pushed toward the barycenter by a bump that vanishes on the boundary."""

    def __init__(self, eps=0.1):
        self.eps = eps

    @property
    def spec(self):
        return f"perturbed:{self.eps!r}"

    def _readout(self, A):
        return perturb_toward_barycenter(self.eps, _born(A))


def born_readout(psi):
    return BornReadout().eval(psi)


def uniform_readout(psi):
    return UniformReadout().eval(psi)


def permuted_born(sigma, psi):
    return PermutedBornReadout(tuple(sigma)).eval(psi)


def escort_readout(f, psi):
    return EscortReadout(f).eval(psi)


def perturbed_born(eps, psi):
    return PerturbedBornReadout(eps).eval(psi)


def sqrt_readout(P, psi):
    return P.sqrt_transform(psi)


def parse_readout(spec):
    """Build a readout from its spec string (see the module docstring)."""
    kind, _, rest = spec.strip().partition(":")
    if kind == "born" and not rest:
        return BornReadout()
    if kind == "uniform" and not rest:
        return UniformReadout()
    if kind == "step" and not rest:
        return StepReadout()
    if kind == "permuted":
        try:
            return PermutedBornReadout(check_permutation(rest.split(",")))
        except ValueError as exc:
            raise DomainError(f"bad permutation in {spec!r}: {exc}") from exc
    if kind == "escort":
        return EscortReadout(check_generator(parse_generator(rest)))
    if kind == "perturbed":
        try:
            eps = float(rest)
        except ValueError as exc:
            raise DomainError(f"bad perturbation scale in {spec!r}") from exc
        if abs(eps) > 0.5:
            raise DomainError("perturbation scale must satisfy |eps| <= 0.5")
        return PerturbedBornReadout(eps)
    raise DomainError(f"unknown readout spec {spec!r}")


__all__ = [
    "BornReadout",
    "EscortReadout",
    "LinearGenerator",
    "PerturbedBornReadout",
    "PermutedBornReadout",
    "PowerGenerator",
    "Readout",
    "StepReadout",
    "TabulatedGenerator",
    "UniformReadout",
    "born_readout",
    "check_generator",
    "check_permutation",
    "escort_map",
    "escort_readout",
    "escort_self_map",
    "parse_generator",
    "parse_readout",
    "permuted_born",
    "perturb_toward_barycenter",
    "perturbed_born",
    "perturbed_self_map",
    "sqrt_readout",
    "uniform_readout",
]
