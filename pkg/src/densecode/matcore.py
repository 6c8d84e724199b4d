"""Dense complex matrix helpers and Hermitian spectral routines.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here is
a pure function, nothing mutates its input.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
CLIP_TOL = 1e-12


class NotSquare(ValueError):
    """Raised when a square matrix is required."""


class NotHermitian(ValueError):
    """Raised when a matrix deviates from its adjoint by more than the tolerance."""


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a 2-D complex array with finite entries."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"matrix of shape {m.shape} is not square")


def tensor(*mats) -> np.ndarray:
    """Kronecker product, leftmost factor most significant.

    Entry ``(i*rows_b + k, j*cols_b + l)`` of ``tensor(a, b)`` is ``a[i, j] * b[k, l]``.
    """
    if not mats:
        raise ValueError("tensor() needs at least one factor")
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def trace(m) -> complex:
    m = as_matrix(m)
    _require_square(m)
    return complex(np.trace(m))


def hermiticity_defect(m) -> float:
    """Largest entry of ``|m - m^dagger|``."""
    m = as_matrix(m)
    _require_square(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def symmetrize(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(m + m^dagger) / 2`` after checking ``m`` is Hermitian within ``tol``."""
    m = as_matrix(m)
    _require_square(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"max |m - m^dagger| = {defect:.3e} exceeds {tol:.1e}")
    return (m + m.conj().T) / 2


def hermitian_spectrum(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted in descending order."""
    return np.linalg.eigvalsh(symmetrize(m, tol))[::-1]


def hermitian_eigh(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix."""
    return np.linalg.eigh(symmetrize(m, tol))


def is_psd(m, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Check positive semidefiniteness; the minimum eigenvalue is returned either way."""
    lam_min = float(hermitian_spectrum(m)[-1])
    return lam_min >= -tol, lam_min


def clip_spectrum(eigs, tol: float = CLIP_TOL) -> np.ndarray:
    """Zero out eigenvalues below ``tol`` and cap at one, for entropy evaluation."""
    eigs = np.asarray(eigs, dtype=float)
    return np.where(eigs < tol, 0.0, np.minimum(eigs, 1.0))


def unitarity_defect(u) -> float:
    """Largest entry of ``|u^dagger u - I|``."""
    u = as_matrix(u)
    _require_square(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    return u.shape[0] == u.shape[1] and unitarity_defect(u) <= tol
