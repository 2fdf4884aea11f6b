"""Closed-form measures checked against the truncated Fock-space oracle.

A verification record lists, for one state, each closed-form value, the
value obtained by brute force in the number basis, their absolute gap and the
tolerance the gap must respect.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import fock
from . import gaussian as g
from . import measures as ms
from .constants import TRACE_DEFICIT_TOL, VACUUM
from .states import random_valid

DEFAULT_TOLERANCES = {
    "entropy": 1e-3,
    "purity": 1e-3,
    "mutual_information": 2e-3,
}
NEGATIVITY_THRESHOLD = 1e-4
PPT_MARGIN = 1e-4


@dataclass(frozen=True)
class Check:
    quantity: str
    closed_form: float
    oracle: float
    tolerance: Optional[float]

    @property
    def gap(self):
        return abs(self.closed_form - self.oracle)

    @property
    def ok(self):
        return self.tolerance is None or self.gap <= self.tolerance


@dataclass
class VerificationRecord:
    cutoff: int
    trace_deficit: float
    path: str
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def check(self, quantity):
        return next(c for c in self.checks if c.quantity == quantity)


def _is_product(m):
    return not np.any(m[:2, 2:])


def verify_state(sigma, cutoff=24, tolerances=None, max_deficit=TRACE_DEFICIT_TOL):
    """Compare closed-form measures of ``sigma`` with the Fock-space oracle.

    Product covariances (vanishing correlation block) are checked mode by
    mode on ``(N+1)``-dimensional spaces, which keeps large cutoffs cheap.
    Correlated states are built on the full ``(N+1)^2`` space from
    :func:`gaussian.lemma1_factor`.

    The record carries entropy, purity and mutual-information checks with
    tolerances, the PPT verdict concordance (gap 0 or 1, tolerance 0), and the
    covariance round-trip error as an untoleranced diagnostic.
    """
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    sigma = g.validate(sigma)
    m = sigma.matrix
    s_closed = ms.von_neumann_two(sigma)
    mu_closed = ms.purity(sigma)
    i_closed = ms.mutual_information(sigma)
    nt_minus = ms.pt_spectrum(sigma).n_minus

    if _is_product(m):
        r1 = fock.build_single(m[:2, :2], cutoff, max_deficit)
        r2 = fock.build_single(m[2:, 2:], cutoff, max_deficit)
        s1, s2 = fock.entropy_fock(r1), fock.entropy_fock(r2)
        s_oracle = s1 + s2
        mu_oracle = fock.purity_fock(r1) * fock.purity_fock(r2)
        # entropy of the joint state is additive, so the reduced entropies are s1, s2
        i_oracle = s1 + s2 - s_oracle
        negativity = 0.0
        cov = scipy.linalg.block_diag(fock.cov_from_fock(r1), fock.cov_from_fock(r2))
        deficit = max(r1.trace_deficit, r2.trace_deficit)
        path = "product"
    else:
        rho = fock.build_from_covariance(sigma, cutoff, max_deficit)
        s_oracle = fock.entropy_fock(rho)
        mu_oracle = fock.purity_fock(rho)
        i_oracle = fock.mutual_information_fock(rho)
        negativity = fock.negativity_fock(rho)
        cov = fock.cov_from_fock(rho)
        deficit = rho.trace_deficit
        path = "two-mode"

    record = VerificationRecord(cutoff=cutoff, trace_deficit=float(deficit), path=path)
    record.checks += [
        Check("entropy", s_closed, s_oracle, tol["entropy"]),
        Check("purity", mu_closed, mu_oracle, tol["purity"]),
        Check("mutual_information", i_closed, i_oracle, tol["mutual_information"]),
        Check(
            "ppt_verdict",
            float(nt_minus < VACUUM - PPT_MARGIN),
            float(negativity > NEGATIVITY_THRESHOLD),
            0.0,
        ),
        Check("covariance", 0.0, float(np.max(np.abs(cov - m))), None),
    ]
    return record


# --------------------------------------------------------------------------
# oracle corpus


@dataclass(frozen=True)
class CorpusState:
    index: int
    sigma: g.TwoModeCov
    factors: g.Lemma1Factors
    nu: np.ndarray


def mode_photons(sigma):
    """Mean photon number ``(Tr sigma_k - 1) / 2`` of each mode."""
    m = g.as_matrix(sigma)
    return 0.5 * (np.trace(m[:2, :2]) - 1.0), 0.5 * (np.trace(m[2:, 2:]) - 1.0)


def construction_tail(sigma, cutoff):
    """Bound on the photon-number weight beyond ``cutoff`` along the Fock construction.

    A state whose covariance has largest eigenvalue ``l`` has a total
    photon-number distribution decaying like ``q^n`` with
    ``q = (l - 1/2)/(l + 1/2)``.  The bound is ``max q^(cutoff+1)`` over the
    thermal input and every stage up to the last two-mode rotation.  The
    final local map is excluded because no measure checked by
    :func:`verify_state` depends on it.  For the thermal input the bound is
    the exact truncated trace deficit.
    """
    f = g.lemma1_factor(sigma)
    spec = g.symplectic_eigenvalues(sigma)
    m = np.diag(np.repeat([spec.n_minus, spec.n_plus], 2))
    worst = 0.0
    for S in (None, g.local_squeeze(f.r1, f.r2), g.rotation(f.xi), g.two_mode_squeeze(f.r)):
        if S is not None:
            m = S.T @ m @ S
        lam = np.linalg.eigvalsh(m).max()
        worst = max(worst, ((lam - VACUUM) / (lam + VACUUM)) ** (cutoff + 1))
    return worst


def oracle_corpus(
    size=10,
    seed=20031,
    max_thermal=1.5,
    max_squeeze=0.8,
    cutoff=24,
    max_tail=TRACE_DEFICIT_TOL,
    ppt_margin=0.05,
):
    """Seeded corpus of mixed two-mode states that a cutoff-``N`` space represents.

    Candidates are drawn in sequence from one generator with
    :func:`states.random_valid` and kept when

    * :func:`construction_tail` at ``cutoff`` is at most ``max_tail``,
    * ``|nt- - 1/2| >= ppt_margin``, so no state sits on the separability boundary.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    draws = 0
    while len(out) < size:
        draws += 1
        if draws > 1000 * size:
            raise RuntimeError("corpus filters reject nearly every candidate")
        sigma, factors, nu = random_valid(rng, max_thermal, max_squeeze)
        if construction_tail(sigma, cutoff) > max_tail:
            continue
        if abs(ms.pt_spectrum(sigma).n_minus - VACUUM) < ppt_margin:
            continue
        out.append(CorpusState(len(out), sigma, factors, nu))
    return out
