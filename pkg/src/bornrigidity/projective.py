"""Pure-state geometry on complex projective space.

Rays are stored as complex numpy vectors of unit norm, gauge-fixed so the
largest-modulus amplitude is real and nonnegative (see
:func:`bornrigidity._validation.gauge_fix`). Batches are ``(n, d)`` arrays.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._validation import DomainError, check_rays, check_same_dim, make_rays

#: identifier recorded in reports so sampled states can be regenerated
RNG_ALGORITHM = "numpy.Philox4x64-10(key=seed, counter=[0,0,0,index])"


def rng_for(seed, index):
    """Independent generator for stream ``index`` under ``seed``.

    Streams live in disjoint Philox counter ranges, so draws depend only on
    ``(seed, index)`` and never on call order.
    """
    seed = int(seed)
    index = int(index)
    if seed < 0 or index < 0:
        raise DomainError("seed and index must be nonnegative")
    bitgen = np.random.Philox(key=seed & (2**64 - 1), counter=[0, 0, 0, index])
    return np.random.Generator(bitgen)


def haar_random_ray(seed, index, d):
    """Unitarily invariant random ray, deterministic in ``(seed, index, d)``."""
    if d < 2:
        raise DomainError("dimension must be at least 2")
    z = rng_for(seed, index).standard_normal(2 * d)
    return make_rays(z[:d] + 1j * z[d:])


def haar_random_rays(seed, n, d, start=0):
    return np.array([haar_random_ray(seed, start + k, d) for k in range(n)])


def basis_ray(d, i):
    e = np.zeros(d, dtype=complex)
    e[i] = 1.0
    return e


def overlap(psi, phi):
    """``<psi|phi>`` along the last axis."""
    return np.sum(np.conj(psi) * phi, axis=-1)


def _align(psi, phi):
    ov = overlap(psi, phi)
    mod = np.abs(ov)
    phase = np.where(mod > 0, np.conj(ov) / np.where(mod > 0, mod, 1.0), 1.0)
    return phi * phase[..., np.newaxis], mod


def fs_distance(psi, phi):
    """Fubini-Study distance ``arccos |<psi|phi>|`` in ``[0, pi/2]``.

    Near coincidence the phase-aligned chord ``2 arcsin(|psi - phi'| / 2)`` is
    used instead, which is the same quantity without the ``arccos``
    cancellation.
    """
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    check_same_dim(psi, phi)
    aligned, mod = _align(psi, phi)
    mod = np.clip(mod, 0.0, 1.0)
    chord = np.linalg.norm(psi - aligned, axis=-1)
    near = 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))
    return np.where(mod > 0.9, near, np.arccos(mod))


def fs_geodesic(psi, phi, t):
    """Point(s) at ``t`` on the minimizing geodesic from ``psi`` to ``phi``.

    ``phi`` is first phase-aligned so that ``<psi|phi'>`` is real and
    nonnegative; at the cut locus (orthogonal rays) this picks one of the
    many minimizers. ``t`` may be a scalar or an array.
    """
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    check_same_dim(psi, phi)
    aligned, _ = _align(psi, phi)
    theta = float(fs_distance(psi, phi))
    t = np.asarray(t, dtype=float)
    if theta < 1e-15:
        return make_rays(np.broadcast_to(psi, t.shape + psi.shape).copy())
    a = np.sin((1.0 - t) * theta)[..., np.newaxis]
    b = np.sin(t * theta)[..., np.newaxis]
    return make_rays((a * psi + b * aligned) / np.sin(theta))


@dataclass(frozen=True)
class PureCurve:
    """A curve of rays over the parameter interval ``domain``.

    ``eval`` maps an array of parameters to an ``(n, d)`` batch of rays.
    ``spec`` is a JSON-ready description that :func:`curve_from_spec` can
    rebuild the curve from.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    domain: tuple
    label: str
    dim: int
    spec: dict = field(default_factory=dict, compare=False)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        a, b = self.domain
        if np.any(s < a - 1e-12) or np.any(s > b + 1e-12):
            raise DomainError(f"parameter outside curve domain [{a}, {b}]")
        return self.eval(s)

    def nodes(self, n):
        """``n + 1`` equally spaced parameters covering the domain (``n`` intervals)."""
        a, b = self.domain
        return np.linspace(a, b, n + 1)


def amps_to_json(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def amps_from_json(rows):
    return np.array([complex(re, im) for re, im in rows])


def geodesic_curve(psi, phi, label="geodesic"):
    """Minimizing geodesic from ``psi`` to ``phi`` on ``[0, 1]`` (speed = FS distance)."""
    psi = make_rays(psi)
    phi = make_rays(phi)
    spec = {"kind": "geodesic", "psi": amps_to_json(psi), "phi": amps_to_json(phi)}
    return PureCurve(lambda s: fs_geodesic(psi, phi, s), (0.0, 1.0), label, psi.shape[-1], spec)


def great_circle_curve(psi, chi, label="great-circle"):
    """Unit-speed great circle ``cos(s) psi + sin(s) chi_perp`` on ``[0, pi]``.

    ``chi`` is Gram-Schmidt orthogonalized against ``psi``.
    """
    psi = make_rays(psi)
    chi = np.asarray(chi, dtype=complex)
    perp = chi - overlap(psi, chi) * psi
    norm = np.linalg.norm(perp)
    if norm < 1e-12:
        raise DomainError("great circle direction is parallel to the base ray")
    perp = perp / norm

    def ev(s):
        s = np.asarray(s, dtype=float)[..., np.newaxis]
        return make_rays(np.cos(s) * psi + np.sin(s) * perp)

    spec = {"kind": "great_circle", "psi": amps_to_json(psi), "chi": amps_to_json(chi)}
    return PureCurve(ev, (0.0, float(np.pi)), label, psi.shape[-1], spec)


def coordinate_circle(d, i, j, label=None):
    """The real quarter circle ``cos(s) e_i + sin(s) e_j`` on ``[0, pi/2]``."""
    if i == j:
        raise DomainError("coordinate circle needs two distinct basis indices")

    def ev(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape + (d,), dtype=complex)
        out[..., i] = np.cos(s)
        out[..., j] = np.sin(s)
        return make_rays(out)

    spec = {"kind": "coordinate_circle", "d": d, "i": i, "j": j}
    return PureCurve(ev, (0.0, float(np.pi / 2)), label or f"circle(e{i + 1},e{j + 1})", d, spec)


def curve_from_spec(spec, label=None):
    kind = spec["kind"]
    if kind == "geodesic":
        return geodesic_curve(amps_from_json(spec["psi"]), amps_from_json(spec["phi"]), label or "geodesic")
    if kind == "great_circle":
        return great_circle_curve(amps_from_json(spec["psi"]), amps_from_json(spec["chi"]), label or "great-circle")
    if kind == "coordinate_circle":
        return coordinate_circle(spec["d"], spec["i"], spec["j"], label)
    raise DomainError(f"unknown curve kind {kind!r}")


def _check_stencil(curve, s, h):
    a, b = curve.domain
    s = np.asarray(s, dtype=float)
    if h <= 0:
        raise DomainError("step must be positive")
    if np.any(s - h < a - 1e-12) or np.any(s + h > b + 1e-12):
        raise DomainError("s +/- h falls outside the curve domain")
    return s


def fs_speed(curve, s, h=1e-5):
    """Central-difference Fubini-Study speed of ``curve`` at ``s``."""
    s = _check_stencil(curve, s, h)
    return fs_distance(curve(s + h), curve(s - h)) / (2.0 * h)


def quantum_fisher(curve, s, h=1e-5):
    """Quantum Fisher information ``4 g_FS`` along ``curve`` at ``s``."""
    return 4.0 * fs_speed(curve, s, h) ** 2


def check_ray(psi):
    A, _ = check_rays(psi)
    return A[0]
