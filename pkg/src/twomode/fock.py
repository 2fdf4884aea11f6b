"""Truncated Fock-space oracle.

Builds density matrices of Gaussian states directly in the number basis and
evaluates entropies, purities, covariances and negativities by brute force.
None of the closed forms in :mod:`twomode.measures` are used here.

Two-mode index layout is mode-1-major: ``|k1 k2> <-> k1 * (N + 1) + k2``.

Generator signs are fixed so that ``cov(U rho U^dag) = S^T cov(rho) S`` for
the matching matrix ``S`` of :mod:`twomode.gaussian`; :func:`check_conventions`
re-derives this numerically.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gaussian as g
from . import matkit
from .constants import EIG_ZERO, TRACE_DEFICIT_TOL, UNITARY_TOL
from .errors import ConventionError, ContractError, CutoffTooSmallError


@dataclass(frozen=True)
class LadderOps:
    a: np.ndarray
    adag: np.ndarray
    number: np.ndarray

    @property
    def cutoff(self):
        return self.a.shape[0] - 1


@dataclass(frozen=True, eq=False)
class FockDM:
    matrix: np.ndarray
    cutoff: int
    modes: int

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def trace_deficit(self):
        return 1.0 - np.trace(self.matrix).real


@lru_cache(maxsize=16)
def _ladder(N):
    a = np.diag(np.sqrt(np.arange(1, N + 1, dtype=float)), 1).astype(complex)
    adag = a.conj().T
    return a, adag, adag @ a


def ladder(N):
    """Annihilation, creation and number operators on ``span{|0>, ..., |N>}``."""
    if N < 1:
        raise ContractError("cutoff must be >= 1")
    return LadderOps(*(m.copy() for m in _ladder(N)))


def _check_deficit(deficit, what, limit=TRACE_DEFICIT_TOL):
    if deficit > limit:
        raise CutoffTooSmallError(
            f"{what}: truncated trace deficit {deficit:.3e} exceeds {limit:g}",
            deficit=deficit,
        )


def thermal_weights(nbar, N):
    """Geometric photon-number distribution ``nbar^k / (1 + nbar)^(k+1)``, k = 0..N."""
    if nbar < 0:
        raise ContractError("mean photon number must be non-negative")
    if N < 1:
        raise ContractError("cutoff must be >= 1")
    k = np.arange(N + 1)
    if nbar == 0:
        return (k == 0).astype(float)
    return (nbar / (1.0 + nbar)) ** k / (1.0 + nbar)


def thermal_dm(nbar, N, max_deficit=TRACE_DEFICIT_TOL):
    """Single-mode thermal state at cutoff ``N``; the tail is not renormalized.

    Raises :class:`CutoffTooSmallError` when the missing tail probability
    exceeds ``max_deficit`` (pass ``numpy.inf`` for convergence studies).
    """
    p = thermal_weights(nbar, N)
    _check_deficit(1.0 - p.sum(), f"thermal state nbar={nbar:g} at cutoff {N}", max_deficit)
    return FockDM(np.diag(p).astype(complex), N, 1)


# --------------------------------------------------------------------------
# unitaries


def phase_unitary(theta, N):
    """Phase shift matching ``gaussian.phase_rotation(theta)``."""
    return np.diag(np.exp(-1j * theta * np.arange(N + 1)))


def squeeze_unitary(r, N):
    """Single-mode squeeze matching ``gaussian.single_squeeze(r)``.

    Equal to ``exp(r/2 a^2 - r/2 a^dag^2)`` at squeezing parameter ``-r``.
    """
    a, adag, _ = _ladder(N)
    return matkit.expm(0.5 * r * (adag @ adag - a @ a))


def single_mode_unitary(S, N):
    """Fock unitary for an arbitrary 2x2 symplectic matrix, via its Euler angles."""
    t1, r, t2 = g.euler_single(S)
    # S = P(t1) Q(r) P(t2) acts as sigma -> S^T sigma S, i.e. P(t1) first
    return phase_unitary(t2, N) @ squeeze_unitary(r, N) @ phase_unitary(t1, N)


def _two_mode_ops(N):
    a, adag, _ = _ladder(N)
    eye = np.eye(N + 1)
    return np.kron(a, eye), np.kron(eye, a)


def quarter_turn(N):
    """Exact rotation by pi/2: ``|k1 k2> -> (-1)^k1 |k2 k1>``.

    A permutation of the truncated basis, so it carries no truncation error.
    """
    d = N + 1
    k1, k2 = np.divmod(np.arange(d * d), d)
    U = np.zeros((d * d, d * d), dtype=complex)
    U[k2 * d + k1, k1 * d + k2] = (-1.0) ** k1
    return U


def beamsplitter_unitary(phi, N):
    """Two-mode rotation matching ``gaussian.rotation(phi)``.

    The angle is split as ``phi = phi0 + k pi/2`` with ``|phi0| <= pi/4``;
    the quarter turns are applied exactly and only ``phi0`` goes through the
    truncated generator, whose error grows with the angle.
    """
    k = int(np.round(phi / (0.5 * np.pi)))
    phi0 = phi - 0.5 * np.pi * k
    if phi0 == 0.0:
        U = np.eye((N + 1) ** 2, dtype=complex)
    else:
        A, B = _two_mode_ops(N)
        U = matkit.expm(phi0 * (A.conj().T @ B - A @ B.conj().T))
    if k % 4:
        U = U @ np.linalg.matrix_power(quarter_turn(N), k % 4)
    return U


def tmsv_unitary(r, N):
    """Entangling two-mode squeezer matching ``gaussian.tmsv_symplectic(r)``."""
    A, B = _two_mode_ops(N)
    return matkit.expm(r * (A.conj().T @ B.conj().T - A @ B))


def gaussian_unitary(kind, param, N):
    """Fock-space unitary of one elementary Gaussian operation.

    ``kind`` is one of ``phase``, ``single_squeeze`` (single-mode, dimension
    N+1), ``two_mode_squeeze`` (the local ``diag(e^r, e^-r, e^-r, e^r)``),
    ``tmsv`` or ``beamsplitter`` (two-mode, dimension (N+1)^2).
    """
    if N < 1:
        raise ContractError("cutoff must be >= 1")
    if kind == "phase":
        return phase_unitary(param, N)
    if kind == "single_squeeze":
        return squeeze_unitary(param, N)
    if kind == "two_mode_squeeze":
        return np.kron(squeeze_unitary(param, N), squeeze_unitary(-param, N))
    if kind == "tmsv":
        return tmsv_unitary(param, N)
    if kind == "beamsplitter":
        return beamsplitter_unitary(param, N)
    raise ValueError(f"unknown Gaussian unitary kind {kind!r}")


_PHASE_SPACE = {
    "phase": g.phase_rotation,
    "single_squeeze": g.single_squeeze,
    "two_mode_squeeze": g.two_mode_squeeze,
    "tmsv": g.tmsv_symplectic,
    "beamsplitter": g.rotation,
}


def check_conventions(N=20, param=0.3, tol=1e-4):
    """Verify every generator against its phase-space matrix.

    Uses the covariance push-forward on a low-energy reference state, so the
    truncation error is far below ``tol``.  Raises :class:`ConventionError` on
    a mismatch; returns the largest deviation otherwise.
    """
    a, adag, _ = _ladder(N)
    # asymmetric single-mode reference: squeezed, weakly thermal
    p = thermal_weights(0.1, N)
    sq = squeeze_unitary(0.15, N) @ phase_unitary(0.4, N)
    ref1 = sq @ np.diag(p).astype(complex) @ sq.conj().T
    vac = np.zeros(N + 1)
    vac[0] = 1.0
    ref2 = np.kron(ref1, np.diag(vac).astype(complex))
    worst = 0.0
    for kind, to_matrix in _PHASE_SPACE.items():
        U = gaussian_unitary(kind, param, N)
        if np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) > UNITARY_TOL:
            raise ConventionError(f"{kind}: generated operator is not unitary")
        ref = ref1 if U.shape[0] == N + 1 else ref2
        modes = 1 if ref is ref1 else 2
        rho = FockDM(ref, N, modes)
        S = to_matrix(param)
        expected = S.T @ cov_from_fock(rho) @ S
        got = cov_from_fock(FockDM(U @ ref @ U.conj().T, N, modes))
        dev = np.max(np.abs(got - expected))
        if dev > tol:
            raise ConventionError(f"{kind}: covariance push-forward mismatch {dev:.3e}")
        worst = max(worst, dev)
    return worst


# --------------------------------------------------------------------------
# state construction


def build_state(factors, photon_numbers, N, max_deficit=TRACE_DEFICIT_TOL):
    """Density matrix of ``U_A (nu_{n-} x nu_{n+}) U_A^dag``.

    Parameters
    ----------
    factors : gaussian.Lemma1Factors
    photon_numbers : (float, float)
        Thermal photon numbers ``(n- - 1/2, n+ - 1/2)`` of the normal modes.
    N : int
        Cutoff per mode.
    max_deficit : float
        Largest accepted truncation loss of either thermal factor.
    """
    nm, np_ = photon_numbers
    rho1 = thermal_dm(nm, N, max_deficit).matrix
    rho2 = thermal_dm(np_, N, max_deficit).matrix
    rho = np.kron(rho1, rho2)
    S1 = factors.S_l[:2, :2]
    S2 = factors.S_l[2:, 2:]
    # A = S_loc R(xi) S_tm R(eta) S_l; unitaries compose in reverse order
    steps = [
        np.kron(squeeze_unitary(factors.r1, N), squeeze_unitary(factors.r2, N)),
        beamsplitter_unitary(factors.xi, N),
        gaussian_unitary("two_mode_squeeze", factors.r, N),
        beamsplitter_unitary(factors.eta, N),
        np.kron(single_mode_unitary(S1, N), single_mode_unitary(S2, N)),
    ]
    for U in steps:
        rho = U @ rho @ U.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return FockDM(rho, N, 2)


def build_from_covariance(sigma, N, max_deficit=TRACE_DEFICIT_TOL):
    """Fock density matrix of the Gaussian state with covariance ``sigma``."""
    sigma = g.validate(sigma)
    factors = g.lemma1_factor(sigma)
    # validation admits n- slightly below 1/2; that is a pure normal mode
    photons = tuple(max(n, 0.0) for n in g.symplectic_eigenvalues(sigma).photon_numbers)
    return build_state(factors, photons, N, max_deficit)


def build_single(sigma1, N, max_deficit=TRACE_DEFICIT_TOL):
    """Single-mode Gaussian state ``U nu_nbar U^dag`` from a 2x2 covariance."""
    m = g.validate_single(sigma1)
    O, nu = g.williamson_single(m)
    rho = thermal_dm(max(nu - 0.5, 0.0), N, max_deficit).matrix
    U = single_mode_unitary(O, N)
    return FockDM(U @ rho @ U.conj().T, N, 1)


# --------------------------------------------------------------------------
# measures


def _eigvals(rho):
    m = rho.matrix if isinstance(rho, FockDM) else np.asarray(rho)
    off = m - np.diag(np.diag(m))
    if not off.any():
        return np.sort(np.diag(m).real)
    w, _ = matkit.hermitian_eig(m)
    return w


def entropy_fock(rho):
    """``-sum l ln l`` over the spectrum; eigenvalues below 1e-14 contribute nothing."""
    w = _eigvals(rho)
    w = w[w > EIG_ZERO]
    return float(-np.sum(w * np.log(w)))


def purity_fock(rho):
    m = rho.matrix if isinstance(rho, FockDM) else np.asarray(rho)
    return float(np.sum(np.abs(m) ** 2))


def partial_trace(rho, keep_mode):
    """Reduced single-mode state; ``keep_mode`` is 1 or 2."""
    d = rho.cutoff + 1
    t = rho.matrix.reshape(d, d, d, d)
    if keep_mode == 1:
        red = np.einsum("ijkj->ik", t)
    elif keep_mode == 2:
        red = np.einsum("ijil->jl", t)
    else:
        raise ValueError("keep_mode must be 1 or 2")
    return FockDM(red, rho.cutoff, 1)


def partial_transpose_fock(rho):
    """Transpose on mode 2: ``<i j| rho^T2 |k l> = <i l| rho |k j>``."""
    d = rho.cutoff + 1
    t = rho.matrix.reshape(d, d, d, d)
    return t.transpose(0, 3, 2, 1).reshape(d * d, d * d)


def negativity_fock(rho):
    """``(||rho^T2||_1 - Tr rho) / 2`` from the eigenvalues of the partial transpose."""
    w, _ = matkit.hermitian_eig(partial_transpose_fock(rho))
    return float(0.5 * (np.sum(np.abs(w)) - np.sum(w)))


def cov_from_fock(rho):
    """Covariance matrix ``Re<{R_i, R_j}>/2 - <R_i><R_j>`` with quadratures
    ``x = (a + a^dag)/sqrt 2``, ``p = -i (a - a^dag)/sqrt 2``."""
    N = rho.cutoff
    a, adag, _ = _ladder(N)
    x = (a + adag) / np.sqrt(2.0)
    p = -1j * (a - adag) / np.sqrt(2.0)
    if rho.modes == 1:
        quads = [x, p]
    else:
        eye = np.eye(N + 1)
        quads = [np.kron(x, eye), np.kron(p, eye), np.kron(eye, x), np.kron(eye, p)]
    m = rho.matrix
    n = len(quads)
    means = np.array([np.trace(m @ q).real for q in quads])
    mq = [m @ q for q in quads]
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            # Tr(rho R_i R_j) = sum((rho R_i)^T * R_j)
            v = np.sum(mq[i].T * quads[j])
            cov[i, j] = cov[j, i] = v.real - means[i] * means[j]
    return cov


def mutual_information_fock(rho):
    return (
        entropy_fock(partial_trace(rho, 1))
        + entropy_fock(partial_trace(rho, 2))
        - entropy_fock(rho)
    )
