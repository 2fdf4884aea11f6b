"""Covariance-matrix algebra for two-mode Gaussian states.

Conventions: hbar = 1, quadrature ordering ``(x1, p1, x2, p2)``, vacuum
covariance ``I/2``, and symplectic maps act on covariance matrices as
``sigma -> S^T sigma S``.  First moments are taken to be zero throughout.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from . import matkit
from .constants import (
    BONA_FIDE_TOL,
    DISCRIMINANT_TOL,
    FACTOR_TOL,
    PAIRING_TOL,
    STANDARD_FORM_TOL,
    SYMMETRY_TOL,
    SYMPLECTIC_TOL,
    VACUUM,
)
from .errors import (
    ContractError,
    FactorizationError,
    InvariantInconsistencyError,
    NumericalInconsistencyError,
    ShapeError,
    UnphysicalStateError,
)

OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = scipy.linalg.block_diag(OMEGA1, OMEGA1)
PT_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


def symplectic_form(modes=2):
    """Block-diagonal symplectic form ``omega + ... + omega``."""
    return scipy.linalg.block_diag(*([OMEGA1] * modes))


# --------------------------------------------------------------------------
# types


@dataclass(frozen=True, eq=False)
class TwoModeCov:
    """A validated 4x4 covariance matrix (read-only)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, TwoModeCov) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None


class SymplecticSpectrum(NamedTuple):
    n_minus: float
    n_plus: float

    @property
    def photon_numbers(self):
        """Mean thermal photon numbers ``n - 1/2`` of the two normal modes."""
        return self.n_minus - VACUUM, self.n_plus - VACUUM


class StandardFormParams(NamedTuple):
    a: float
    b: float
    c1: float
    c2: float

    def matrix(self):
        return standard_form_matrix(*self)


@dataclass(frozen=True)
class Lemma1Factors:
    """Parameters of ``A = S_loc(r1, r2) R(xi) S_tm(r) R(eta) S_l``.

    ``sigma = A^T diag(n-, n-, n+, n+) A``.  ``S_l`` here is the local factor
    *inside* ``A``, i.e. the inverse of the map returned by
    :func:`standard_form_transform`.
    """

    S_l: np.ndarray
    eta: float
    xi: float
    r: float
    r1: float
    r2: float
    stages: dict = field(default_factory=dict, compare=False, repr=False)

    def matrix(self):
        return (
            local_squeeze(self.r1, self.r2)
            @ rotation(self.xi)
            @ two_mode_squeeze(self.r)
            @ rotation(self.eta)
            @ self.S_l
        )


def as_matrix(sigma):
    """Plain ndarray view of a covariance (TwoModeCov or array-like)."""
    if isinstance(sigma, TwoModeCov):
        return sigma.matrix
    return np.asarray(sigma, dtype=float)


# --------------------------------------------------------------------------
# symplectic building blocks


def rotation(phi):
    """Two-mode rotation mixing ``x1, x2`` and ``p1, p2`` by the same angle."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array(
        [
            [c, 0.0, -s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, s, 0.0, c],
        ]
    )


def local_squeeze(r1, r2):
    return np.diag([np.exp(r1), np.exp(-r1), np.exp(r2), np.exp(-r2)])


def two_mode_squeeze(r):
    """``diag(e^r, e^-r, e^-r, e^r)``, identical to ``local_squeeze(r, -r)``.

    Acting alone on the vacuum it yields a product of oppositely squeezed
    modes; the entangled two-mode squeezed vacuum is ``tmsv_symplectic(r)``.
    """
    return local_squeeze(r, -r)


def tmsv_symplectic(r):
    """Entangling two-mode squeezer ``R(pi/4) S_tm(r) R(-pi/4)``.

    ``S^T (I/2) S`` is the two-mode squeezed vacuum, ``a = b = cosh(2r)/2``
    and ``c1 = -c2 = sinh(2r)/2``.
    """
    return rotation(np.pi / 4) @ two_mode_squeeze(r) @ rotation(-np.pi / 4)


def phase_rotation(theta):
    """Single-mode phase-space rotation (2x2)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def single_squeeze(r):
    """Single-mode squeeze ``diag(e^r, e^-r)`` (2x2)."""
    return np.diag([np.exp(r), np.exp(-r)])


def local(s1, s2):
    """Direct sum ``S1 + S2`` of two single-mode maps."""
    return scipy.linalg.block_diag(np.asarray(s1, float), np.asarray(s2, float))


def symplectic_defect(S):
    S = np.asarray(S, dtype=float)
    om = symplectic_form(S.shape[0] // 2)
    return np.linalg.norm(S.T @ om @ S - om)


def is_symplectic(S, tol=SYMPLECTIC_TOL):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        return False
    return symplectic_defect(S) <= tol * max(1.0, np.linalg.norm(S) ** 2)


def euler_single(S):
    """Split a 2x2 symplectic matrix as ``rot(t1) @ squeeze(r) @ rot(t2)``.

    Returns ``(t1, r, t2)`` with ``r >= 0``.
    """
    u, sv, vt = np.linalg.svd(np.asarray(S, dtype=float))
    if np.linalg.det(u) < 0:
        # det S = 1 forces det u = det vt
        u = u @ np.diag([1.0, -1.0])
        vt = np.diag([1.0, -1.0]) @ vt
    r = 0.5 * np.log(sv[0] / sv[1])
    return np.arctan2(u[1, 0], u[0, 0]), r, np.arctan2(vt[1, 0], vt[0, 0])


# --------------------------------------------------------------------------
# validation and invariants


def bona_fide_min_eig(m):
    """Smallest eigenvalue of the Hermitian matrix ``sigma + i/2 Omega``."""
    m = np.asarray(m, dtype=float)
    om = symplectic_form(m.shape[0] // 2)
    w, _ = matkit.hermitian_eig(m + 0.5j * om)
    return w[0]


def _check_cov(m, size):
    m = np.asarray(m, dtype=float)
    if m.shape != (size, size):
        raise ShapeError(f"expected a {size}x{size} covariance matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractError("covariance matrix contains NaN or Inf")
    asym = np.max(np.abs(m - m.T))
    if asym > SYMMETRY_TOL:
        raise ShapeError(f"covariance matrix is not symmetric (max |m - m^T| = {asym:.3e})")
    m = 0.5 * (m + m.T)
    if np.linalg.eigvalsh(m)[0] <= 0.0:
        raise UnphysicalStateError(
            "covariance matrix is not positive definite", min_eigenvalue=bona_fide_min_eig(m)
        )
    lam = bona_fide_min_eig(m)
    if lam < -BONA_FIDE_TOL:
        raise UnphysicalStateError(
            f"uncertainty relation violated: min eig(sigma + i/2 Omega) = {lam:.6g}",
            min_eigenvalue=lam,
        )
    return m


def validate(m):
    """Accept ``m`` as a physical two-mode covariance matrix.

    Raises
    ------
    ShapeError
        Wrong shape or not symmetric.
    UnphysicalStateError
        Not positive definite or ``sigma + i/2 Omega`` has a negative
        eigenvalue; the offending eigenvalue is attached as ``min_eigenvalue``.
    """
    if isinstance(m, TwoModeCov):
        return m
    return TwoModeCov(_check_cov(m, 4))


def validate_single(m):
    """Validate a 2x2 single-mode covariance, returning it as an ndarray."""
    return _check_cov(m, 2)


def blocks(sigma):
    """Return ``(alpha, beta, gamma, delta, epsilon)``.

    ``delta`` collects the x-quadrature entries (rows/cols 1, 3 in one-based
    indexing), ``epsilon`` the p-quadrature entries (rows/cols 2, 4).
    """
    m = as_matrix(sigma)
    alpha = m[:2, :2].copy()
    beta = m[2:, 2:].copy()
    gamma = m[:2, 2:].copy()
    delta = m[np.ix_([0, 2], [0, 2])]
    epsilon = m[np.ix_([1, 3], [1, 3])]
    return alpha, beta, gamma, delta, epsilon


def local_invariants(sigma):
    """``(Det alpha, Det beta, Det gamma, Det sigma)``."""
    m = as_matrix(sigma)
    return (
        matkit.det(m[:2, :2]),
        matkit.det(m[2:, 2:]),
        matkit.det(m[:2, 2:]),
        matkit.det(m),
    )


def delta_invariant(sigma):
    """``Det alpha + Det beta + 2 Det gamma``, summed exactly."""
    m = as_matrix(sigma)
    da, db, dg = (matkit.det_exact(b) for b in (m[:2, :2], m[2:, 2:], m[:2, 2:]))
    return float(da + db + 2 * dg)


def symplectic_eigenvalues(sigma):
    """Closed-form symplectic spectrum from ``Delta`` and ``Det sigma``.

    ``n+^2 = (Delta + sqrt(Delta^2 - 4 Det sigma)) / 2`` and
    ``n-^2 = Det sigma / n+^2``; the second form is algebraically identical
    to the minus-branch root but avoids cancellation.  The discriminant is
    formed in exact arithmetic: for (nearly) pure states it is a tiny
    difference of large terms, and rounding it first would put an error of
    order ``sqrt(eps) * |sigma|^2`` into both eigenvalues.
    """
    m = as_matrix(sigma)
    da, db, dg = (matkit.det_exact(b) for b in (m[:2, :2], m[2:, 2:], m[:2, 2:]))
    dq = matkit.det_exact(m)
    delta_q = da + db + 2 * dg
    delta = float(delta_q)
    d = float(dq)
    disc = float(delta_q * delta_q - 4 * dq)
    if disc < 0.0:
        if disc < -DISCRIMINANT_TOL * max(1.0, delta * delta):
            raise NumericalInconsistencyError(
                f"Delta^2 - 4 Det sigma = {disc:.3e} < 0; not a positive-definite covariance"
            )
        disc = 0.0
    n_plus_sq = 0.5 * (delta + np.sqrt(disc))
    if n_plus_sq <= 0.0 or d <= 0.0:
        raise NumericalInconsistencyError("non-positive invariants; not a positive-definite covariance")
    n_minus_sq = d / n_plus_sq
    return SymplecticSpectrum(float(np.sqrt(n_minus_sq)), float(np.sqrt(n_plus_sq)))


def spectrum_oracle(sigma):
    """Symplectic spectrum from the eigenvalues of ``i Omega sigma``.

    The four eigenvalues must pair up as ``+-n-``, ``+-n+``.
    """
    m = as_matrix(sigma)
    ev = matkit.complex_eigvals(1j * OMEGA @ m)
    scale = max(1.0, np.max(np.abs(ev)))
    if np.max(np.abs(ev.imag)) > PAIRING_TOL * scale:
        raise NumericalInconsistencyError("eigenvalues of i Omega sigma are not real")
    re = np.sort(ev.real)
    if abs(re[0] + re[3]) > PAIRING_TOL * scale or abs(re[1] + re[2]) > PAIRING_TOL * scale:
        raise NumericalInconsistencyError(f"eigenvalues of i Omega sigma are not +- paired: {re}")
    mags = np.sort(np.abs(re))
    return SymplecticSpectrum(float(0.5 * (mags[0] + mags[1])), float(0.5 * (mags[2] + mags[3])))


# --------------------------------------------------------------------------
# standard form


def standard_form_matrix(a, b, c1, c2):
    return np.array(
        [
            [a, 0.0, c1, 0.0],
            [0.0, a, 0.0, c2],
            [c1, 0.0, b, 0.0],
            [0.0, c2, 0.0, b],
        ]
    )


def standard_form(sigma):
    """Standard-form coefficients from the four local invariants.

    ``c1^2`` and ``c2^2`` are the roots of ``t^2 - s t + (Det gamma)^2`` with
    ``s = ((ab)^2 + (Det gamma)^2 - Det sigma) / (ab)``.  The roots are not
    taken from the quadratic formula, whose discriminant cancels completely
    when ``|c1| = |c2|``.  Instead, with ``T = ab s`` computed exactly,

    ``(c1 + c2)^2 ab = T + 2 Det gamma ab`` and ``(c1 - c2)^2 ab = T - 2 Det gamma ab``,

    whose product ``T^2 - 4 (Det gamma)^2 Det alpha Det beta`` is also exact.
    The non-cancelling factor is evaluated directly and the other from the
    product.  The common sign of ``(c1, c2)`` is fixed by ``c1 >= |c2|``.
    """
    m = as_matrix(sigma)
    da, db, dg = (matkit.det_exact(b) for b in (m[:2, :2], m[2:, 2:], m[:2, 2:]))
    ds = matkit.det_exact(m)
    if da <= 0 or db <= 0:
        raise InvariantInconsistencyError("local determinants must be positive")
    a, b = np.sqrt(float(da)), np.sqrt(float(db))
    ab = np.sqrt(float(da * db))
    t_q = da * db + dg * dg - ds
    prod = float(t_q * t_q - 4 * dg * dg * da * db)
    t, g_ = float(t_q), float(dg)
    scale = max(1.0, t * t)
    if t < -STANDARD_FORM_TOL * max(1.0, ab * ab) or prod < -STANDARD_FORM_TOL * scale:
        raise InvariantInconsistencyError(f"no real standard form: T = {t:.3e}, product = {prod:.3e}")
    big = t + 2.0 * abs(g_) * ab
    small = max(prod, 0.0) / big if big > 0.0 else 0.0
    plus, minus = (big, small) if g_ >= 0.0 else (small, big)
    p = np.sqrt(max(plus, 0.0) / ab)  # c1 + c2
    q = np.sqrt(max(minus, 0.0) / ab)  # c1 - c2
    return StandardFormParams(float(a), float(b), float(0.5 * (p + q)), float(0.5 * (p - q)))


def _normalize_mode(block):
    """2x2 symplectic ``M`` with ``M^T block M = sqrt(det block) I``."""
    w, o = np.linalg.eigh(block)
    if np.linalg.det(o) < 0:
        o = o[:, ::-1]
        w = w[::-1]
    nu = np.sqrt(w[0] * w[1])
    return o @ np.diag(np.sqrt(nu / w))


def _rot_to_angle(o):
    return float(np.arctan2(o[1, 0], o[0, 0]))


def williamson_single(sigma1):
    """Single-mode normal form ``sigma1 = O^T (nu I) O``; returns ``(O, nu)``."""
    m = np.asarray(sigma1, dtype=float)
    M = _normalize_mode(m)
    return np.linalg.inv(M), float(np.sqrt(matkit.det(m)))


def standard_form_transform(sigma):
    """Local symplectic ``S_l`` with ``S_l^T sigma S_l`` in standard form.

    Each diagonal block is first brought to a multiple of the identity, then
    local rotations from the SVD of the transformed off-diagonal block make
    it diagonal.
    """
    m = as_matrix(sigma)
    m1 = _normalize_mode(m[:2, :2])
    m2 = _normalize_mode(m[2:, 2:])
    g = m1.T @ m[:2, 2:] @ m2
    u, _, vt = np.linalg.svd(g)
    v = vt.T
    if np.linalg.det(u) < 0:
        u = u @ np.diag([1.0, -1.0])
        v = v @ np.diag([1.0, -1.0])
    if np.linalg.det(v) < 0:
        v = v @ np.diag([1.0, -1.0])
    S = local(m1 @ u, m2 @ v)
    sf = S.T @ m @ S
    return S, 0.5 * (sf + sf.T)


# --------------------------------------------------------------------------
# normal-mode decomposition


def williamson(sigma):
    """Williamson normal form ``sigma = S^T nu S`` with ``nu = diag(n-, n-, n+, n+)``.

    Built from the real Schur form of the antisymmetric matrix
    ``sigma^(1/2) Omega sigma^(1/2)``.
    """
    m = as_matrix(sigma)
    half = matkit.sqrtm_psd(m).real
    h = half @ OMEGA @ half
    h = 0.5 * (h - h.T)
    t, k = scipy.linalg.schur(h, output="real")
    cols = []
    vals = []
    for j in range(2):
        i0, i1 = 2 * j, 2 * j + 1
        x = t[i0, i1]
        if x >= 0:
            cols.append((k[:, i0], k[:, i1]))
        else:
            cols.append((k[:, i1], k[:, i0]))
        vals.append(abs(x))
    order = np.argsort(vals)
    K = np.column_stack([c for j in order for c in cols[j]])
    n = np.repeat(np.asarray(vals)[order], 2)
    S = np.diag(1.0 / np.sqrt(n)) @ K.T @ half
    return S, np.diag(n)


def lemma1_factor(sigma):
    """Factor ``sigma = A^T nu A`` with ``A = S_loc(r1,r2) R(xi) S_tm(r) R(eta) S_l``.

    All parameters are closed-form: ``eta`` diagonalizes the x-quadrature
    submatrix of the standard form and ``r`` equalizes its eigenvalues ``l1,
    l2`` (``e^{4r} = l1/l2``); ``xi`` then diagonalizes the p-quadrature
    submatrix with the smaller eigenvalue on mode 1; ``r1, r2`` balance the
    remaining diagonal.

    Raises
    ------
    FactorizationError
        Recomposition residual exceeds ``FACTOR_TOL`` (relative to ``||sigma||``).
    """
    m = as_matrix(sigma)
    T, sf = standard_form_transform(m)
    S_l = np.linalg.inv(T)
    stages = {"standard_form": sf}
    p = sf
    if abs(sf[0, 2]) == 0.0 and abs(sf[1, 3]) == 0.0:
        # product state: already normal, at most a mode swap is needed
        eta = r = r1 = r2 = 0.0
        xi = 0.0 if sf[0, 0] <= sf[2, 2] else np.pi / 2
    else:
        _, _, _, dlt, _ = blocks(p)
        w, o = np.linalg.eigh(dlt)
        if np.linalg.det(o) < 0:
            o = o @ np.diag([1.0, -1.0])
        eta = -_rot_to_angle(o)
        r = 0.25 * np.log(w[0] / w[1])
        X = rotation(-eta) @ two_mode_squeeze(-r)
        p = X.T @ p @ X
        stages["after_two_mode"] = p
        _, _, _, _, eps = blocks(p)
        w2, o2 = np.linalg.eigh(eps)
        if np.linalg.det(o2) < 0:
            o2 = o2 @ np.diag([1.0, -1.0])
        xi = -_rot_to_angle(o2)
        Y = rotation(-xi)
        p = Y.T @ p @ Y
        stages["after_rotation"] = p
        s = np.sqrt(w[0] * w[1])
        r1 = 0.25 * np.log(s / w2[0])
        r2 = 0.25 * np.log(s / w2[1])
    factors = Lemma1Factors(S_l, float(eta), float(xi), float(r), float(r1), float(r2), stages)
    A = factors.matrix()
    spec = symplectic_eigenvalues(m)
    nu = np.diag([spec.n_minus, spec.n_minus, spec.n_plus, spec.n_plus])
    residual = np.linalg.norm(A.T @ nu @ A - m)
    if residual > FACTOR_TOL * max(1.0, np.linalg.norm(m)):
        raise FactorizationError(f"factorization recomposition residual {residual:.3e}", residual=residual)
    stages["nu"] = nu
    return factors


# --------------------------------------------------------------------------
# transformations of states


def apply(S, sigma):
    """``S^T sigma S``, revalidated."""
    S = np.asarray(S, dtype=float)
    if S.shape != (4, 4) or not is_symplectic(S):
        raise ContractError("transform is not a 4x4 symplectic matrix")
    m = as_matrix(sigma)
    out = S.T @ m @ S
    return validate(0.5 * (out + out.T))


def partial_transpose(sigma):
    """Momentum sign flip on mode 2, ``L sigma L`` with ``L = diag(1, 1, 1, -1)``.

    The result need not be a physical covariance matrix.
    """
    m = as_matrix(sigma)
    return PT_FLIP @ m @ PT_FLIP


def wigner_at(sigma, X):
    """Wigner function of a zero-mean Gaussian state at phase-space point(s) ``X``.

    ``W(X) = exp(-X sigma^-1 X^T / 2) / ((2 pi)^n sqrt(Det sigma))``, normalized
    so that its integral over phase space is 1.  ``X`` may be a single
    vector or an array of shape ``(..., 2n)``.
    """
    m = as_matrix(sigma)
    d = matkit.det(m)
    if d <= 0.0:
        raise np.linalg.LinAlgError("covariance matrix is singular")
    inv = np.linalg.inv(m)
    X = np.asarray(X, dtype=float)
    q = np.einsum("...i,ij,...j->...", X, inv, X)
    n = m.shape[0] // 2
    return np.exp(-0.5 * q) / ((2.0 * np.pi) ** n * np.sqrt(d))
