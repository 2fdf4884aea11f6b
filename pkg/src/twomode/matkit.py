"""Small dense linear-algebra kernel.

Exact cofactor determinants for the 2x2 / 4x4 blocks that carry the symplectic
invariants (evaluated in rational arithmetic, so the only error is the final
rounding), plus thin contract-checking wrappers around LAPACK for Hermitian
eigenproblems, small nonsymmetric spectra and matrix exponentials.
"""

from fractions import Fraction

import numpy as np
import scipy.linalg

from .constants import HERMITIAN_TOL
from .errors import ContractError, DimensionError, UnsupportedSizeError

__all__ = [
    "det",
    "det_exact",
    "hermitian_eig",
    "complex_eigvals",
    "expm",
    "sqrtm_psd",
    "reconstruction_error",
]


def _square(m, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    return m


def _det2(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _det3(m):
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def _det4(m):
    # Laplace expansion along the first two rows (2x2 minors), 24 products total.
    s0 = m[0, 0] * m[1, 1] - m[1, 0] * m[0, 1]
    s1 = m[0, 0] * m[1, 2] - m[1, 0] * m[0, 2]
    s2 = m[0, 0] * m[1, 3] - m[1, 0] * m[0, 3]
    s3 = m[0, 1] * m[1, 2] - m[1, 1] * m[0, 2]
    s4 = m[0, 1] * m[1, 3] - m[1, 1] * m[0, 3]
    s5 = m[0, 2] * m[1, 3] - m[1, 2] * m[0, 3]
    c5 = m[2, 2] * m[3, 3] - m[3, 2] * m[2, 3]
    c4 = m[2, 1] * m[3, 3] - m[3, 1] * m[2, 3]
    c3 = m[2, 1] * m[3, 2] - m[3, 1] * m[2, 2]
    c2 = m[2, 0] * m[3, 3] - m[3, 0] * m[2, 3]
    c1 = m[2, 0] * m[3, 2] - m[3, 0] * m[2, 2]
    c0 = m[2, 0] * m[3, 1] - m[3, 0] * m[2, 1]
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0


_COFACTOR = {1: lambda m: m[0, 0], 2: _det2, 3: _det3, 4: _det4}


def det_exact(m):
    """Exact determinant of a real matrix of size <= 4 as a :class:`fractions.Fraction`.

    Every float is a dyadic rational, so the cofactor expansion carried out in
    rational arithmetic is the exact determinant of the stored entries.
    """
    m = _square(m)
    if m.shape[0] > 4:
        raise UnsupportedSizeError(f"det_exact supports size <= 4, got {m.shape[0]}")
    if np.iscomplexobj(m) or not np.all(np.isfinite(m)):
        raise ContractError("det_exact needs a finite real matrix")
    q = np.array([[Fraction(float(v)) for v in row] for row in m], dtype=object)
    return _COFACTOR[m.shape[0]](q)


def det(m):
    """Determinant; exact cofactor expansion up to 4x4, LU beyond.

    Real matrices up to 4x4 give the correctly rounded determinant even when
    the expansion cancels heavily (large squeezing).

    >>> det(np.eye(4))
    1.0
    """
    m = _square(m)
    n = m.shape[0]
    if n > 4:
        return np.linalg.det(m).item()
    if np.iscomplexobj(m) or not np.all(np.isfinite(m)):
        return np.asarray(_COFACTOR[n](m)).item()
    return float(det_exact(m))


def hermitian_eig(m, check=False):
    """Eigen-decomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Hermitian matrix. Deviations ``|m - m^H|`` above ``HERMITIAN_TOL`` are
        rejected rather than silently symmetrized.
    check : bool
        Verify the residual ``||m v - l v|| <= 1e-9 ||m||`` for every pair.

    Returns
    -------
    w : ndarray
        Real eigenvalues in ascending order.
    v : ndarray
        Orthonormal eigenvectors as columns.
    """
    m = _square(m)
    if not np.all(np.isfinite(m)):
        raise ContractError("matrix contains NaN or Inf")
    dev = np.max(np.abs(m - m.conj().T))
    if dev > HERMITIAN_TOL:
        raise ContractError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    herm = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(herm)
    if check:
        scale = max(np.linalg.norm(herm, 2), 1.0)
        res = np.linalg.norm(herm @ v - v * w, axis=0)
        if np.max(res) > 1e-9 * scale:
            raise ContractError(f"eigen-pair residual {np.max(res):.3e} exceeds tolerance")
    return w, v


def complex_eigvals(m):
    """All eigenvalues (with multiplicity) of a general matrix of size <= 4."""
    m = _square(m)
    if m.shape[0] > 4:
        raise UnsupportedSizeError(f"complex_eigvals supports size <= 4, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise ContractError("matrix contains NaN or Inf")
    return np.linalg.eigvals(m.astype(complex))


def expm(m):
    """Matrix exponential (Pade scaling-and-squaring)."""
    m = _square(m)
    if not np.all(np.isfinite(m)):
        raise ContractError("matrix contains NaN or Inf")
    return scipy.linalg.expm(m)


def sqrtm_psd(m):
    """Principal square root of a real symmetric positive semi-definite matrix."""
    w, v = hermitian_eig(m)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def reconstruction_error(w, v, m):
    """Frobenius norm of ``V diag(w) V^H - m``."""
    return np.linalg.norm((v * w) @ v.conj().T - np.asarray(m))
