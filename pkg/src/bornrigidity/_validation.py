"""Input validation helpers shared by the geometry, readout and check modules."""

import numpy as np

#: equality tolerance used by validators and identity checks
TOL_EQ = 1e-9
#: slack allowed on one-sided inequalities
TOL_INEQ = 1e-7


class DomainError(ValueError):
    """Raised when an input lies outside the domain an operation is defined on."""


def _as_real_2d(X, name):
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    if single:
        X = X[np.newaxis, :]
    if X.ndim != 2:
        raise DomainError(f"{name} must be 1-d or 2-d, got shape {X.shape}")
    if X.shape[1] < 2:
        raise DomainError(f"{name} needs dimension d >= 2, got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise DomainError(f"{name} contains non-finite values")
    return X, single


def check_simplex(X, tol=TOL_EQ, interior=False):
    """Validate probability vectors.

    Accepts a single vector of shape (d,) or a batch of shape (n, d) and
    returns a float array of the same shape. Tiny negative round-off (above
    ``-tol``) is clipped to zero.
    """
    X, single = _as_real_2d(X, "simplex point")
    if np.any(X < -tol):
        raise DomainError("simplex point has negative coordinates")
    if np.any(np.abs(X.sum(axis=1) - 1.0) > tol):
        raise DomainError("simplex point coordinates do not sum to 1")
    X = np.clip(X, 0.0, None)
    if interior and np.any(X <= 0.0):
        raise DomainError("Fisher metric is only defined on the open simplex")
    return X[0] if single else X


def check_tangent(V, tol=TOL_EQ):
    V, single = _as_real_2d(V, "tangent vector")
    if np.any(np.abs(V.sum(axis=1)) > tol):
        raise DomainError("simplex tangent must sum to zero")
    return V[0] if single else V


def check_orthant(X, tol=TOL_EQ):
    """Validate points of the closed positive spherical orthant."""
    X, single = _as_real_2d(X, "orthant point")
    if np.any(X < -tol):
        raise DomainError("orthant point has negative coordinates")
    if np.any(np.abs(np.einsum("ij,ij->i", X, X) - 1.0) > tol):
        raise DomainError("orthant point is not on the unit sphere")
    X = np.clip(X, 0.0, None)
    return X[0] if single else X


def gauge_fix(A, tie_tol=1e-12):
    """Rotate each row so its largest-modulus amplitude is real and >= 0.

    Moduli within ``tie_tol`` of the maximum count as ties, and the lowest
    index wins, so a global phase cannot flip which entry is picked.
    """
    A = np.asarray(A, dtype=complex)
    mod = np.abs(A)
    top = mod >= mod.max(axis=1, keepdims=True) - tie_tol
    k = np.argmax(top, axis=1)
    pivot = A[np.arange(A.shape[0]), k]
    scale = np.abs(pivot)
    phase = np.where(scale > 0, np.conj(pivot) / np.where(scale > 0, scale, 1.0), 1.0)
    out = A * phase[:, np.newaxis]
    out[np.arange(A.shape[0]), k] = scale
    return out


def make_rays(A):
    """Normalize and gauge-fix amplitude vectors into canonical rays.

    ``A`` may be a single amplitude vector (d,) or a batch (n, d).
    """
    A = np.asarray(A, dtype=complex)
    single = A.ndim == 1
    if single:
        A = A[np.newaxis, :]
    if A.ndim != 2 or A.shape[1] < 2:
        raise DomainError(f"rays need shape (n, d) with d >= 2, got {A.shape}")
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        raise DomainError("zero or non-finite amplitude vector")
    out = gauge_fix(A / norms[:, np.newaxis])
    return out[0] if single else out


def check_rays(A, tol=TOL_EQ):
    """Validate unit amplitude vectors; returns a complex (n, d) batch and a flag for single input."""
    A = np.asarray(A, dtype=complex)
    single = A.ndim == 1
    if single:
        A = A[np.newaxis, :]
    if A.ndim != 2 or A.shape[1] < 2:
        raise DomainError(f"rays need shape (n, d) with d >= 2, got {A.shape}")
    if np.any(np.abs(np.linalg.norm(A, axis=1) - 1.0) > tol):
        raise DomainError("ray amplitudes are not normalized")
    return A, single


def check_same_dim(*arrays):
    dims = {np.shape(a)[-1] for a in arrays}
    if len(dims) != 1:
        raise DomainError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()
