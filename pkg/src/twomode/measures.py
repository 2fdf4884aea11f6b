"""Scalar measures of mixedness and correlation for Gaussian states.

Entropies are in nats.  Every two-mode measure is a function of symplectic
spectra: of the global state, of the reduced states, and of the partial
transpose.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import gaussian as g
from . import matkit
from .constants import BONA_FIDE_TOL, F_DOMAIN_TOL, LOG_ZERO, PPT_TOL, SYMMETRIC_STATE_TOL, VACUUM
from .errors import DomainError, UnphysicalStateError, UnsupportedStateError


def _xlogx(t):
    return 0.0 if t < LOG_ZERO else t * np.log(t)


def f_entropy(x):
    """Entropy of a thermal mode with symplectic eigenvalue ``x``.

    ``f(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2)``, with ``f(1/2) = 0``.
    """
    x = float(x)
    if x < VACUUM - F_DOMAIN_TOL:
        raise DomainError(f"f(x) requires x >= 1/2, got {x!r}")
    x = max(x, VACUUM)
    return _xlogx(x + 0.5) - _xlogx(x - 0.5)


def _f_physical(x):
    """``f`` of a symplectic eigenvalue of a validated state.

    Validation admits eigenvalues down to ``1/2 - BONA_FIDE_TOL``; those are
    rounding noise around a pure mode and are read as ``1/2``.
    """
    if x < VACUUM - BONA_FIDE_TOL:
        raise UnphysicalStateError(f"symplectic eigenvalue {x:.12g} < 1/2", min_eigenvalue=None)
    return f_entropy(max(x, VACUUM))


def purity(sigma):
    """``Tr rho^2 = 1 / (2^n sqrt(Det sigma))`` for an n-mode covariance."""
    m = g.as_matrix(sigma)
    n = m.shape[0] // 2
    return 1.0 / (2**n * np.sqrt(matkit.det(m)))


def linear_entropy(sigma):
    return 1.0 - purity(sigma)


def von_neumann_single(sigma1):
    """Entropy of a single-mode state, ``f(sqrt(Det sigma1))``."""
    m = np.asarray(sigma1, dtype=float)
    d = matkit.det(m)
    return _f_physical(np.sqrt(max(d, 0.0)))


def von_neumann_from_purity(mu):
    """Single-mode entropy expressed through the purity alone.

    ``S = (1 - mu)/(2 mu) ln((1 + mu)/(1 - mu)) - ln(2 mu / (1 + mu))``.
    """
    if not 0.0 < mu <= 1.0:
        raise DomainError("purity must lie in (0, 1]")
    if mu == 1.0:
        return 0.0
    return (1.0 - mu) / (2.0 * mu) * np.log((1.0 + mu) / (1.0 - mu)) - np.log(2.0 * mu / (1.0 + mu))


def von_neumann_two(sigma):
    n = g.symplectic_eigenvalues(sigma)
    return _f_physical(n.n_minus) + _f_physical(n.n_plus)


def mutual_information(sigma):
    """``f(a) + f(b) - f(n-) - f(n+)`` with ``a = sqrt(Det alpha)``, ``b = sqrt(Det beta)``."""
    da, db, _, _ = g.local_invariants(sigma)
    return _f_physical(np.sqrt(da)) + _f_physical(np.sqrt(db)) - von_neumann_two(sigma)


def pt_spectrum(sigma):
    """Symplectic spectrum ``(nt-, nt+)`` of the partially transposed covariance."""
    return g.symplectic_eigenvalues(g.partial_transpose(sigma))


def ppt_separable(sigma):
    return pt_spectrum(sigma).n_minus >= VACUUM - PPT_TOL


def g_eof(x):
    """Entanglement of formation of a symmetric state as a function of ``nt-``.

    Defined for ``0 < x < 1/2``; zero for ``x >= 1/2``.
    """
    x = float(x)
    if x <= 0.0:
        raise DomainError("g(x) requires x > 0")
    if x >= VACUUM:
        return 0.0
    plus = (0.5 + x) ** 2 / (2.0 * x)
    minus = (0.5 - x) ** 2 / (2.0 * x)
    return _xlogx(plus) - _xlogx(minus)


def is_symmetric(sigma, tol=SYMMETRIC_STATE_TOL):
    sf = g.standard_form(sigma)
    return abs(sf.a - sf.b) <= tol


def eof_symmetric(sigma):
    """``max(0, g(nt-))`` for symmetric states (standard form ``a = b``)."""
    sf = g.standard_form(sigma)
    if abs(sf.a - sf.b) > SYMMETRIC_STATE_TOL:
        raise UnsupportedStateError(
            f"entanglement of formation is only available for symmetric states (|a - b| = {abs(sf.a - sf.b):.3e})"
        )
    return max(0.0, g_eof(pt_spectrum(sigma).n_minus))


def log_negativity(sigma):
    """``max(0, -ln(2 nt-))``."""
    return max(0.0, -np.log(2.0 * pt_spectrum(sigma).n_minus))


@dataclass(frozen=True)
class MeasureReport:
    purity: float
    linear_entropy: float
    von_neumann: float
    mutual_information: float
    n_minus: float
    n_plus: float
    nt_minus: float
    nt_plus: float
    separable: bool
    log_negativity: float
    eof: Optional[float] = None

    def as_dict(self):
        return asdict(self)


def measure_report(sigma):
    sigma = g.validate(sigma)
    spec = g.symplectic_eigenvalues(sigma)
    pt = pt_spectrum(sigma)
    mu = purity(sigma)
    svn = _f_physical(spec.n_minus) + _f_physical(spec.n_plus)
    eof = eof_symmetric(sigma) if is_symmetric(sigma) else None
    return MeasureReport(
        purity=mu,
        linear_entropy=1.0 - mu,
        von_neumann=svn,
        mutual_information=mutual_information(sigma),
        n_minus=spec.n_minus,
        n_plus=spec.n_plus,
        nt_minus=pt.n_minus,
        nt_plus=pt.n_plus,
        separable=pt.n_minus >= VACUUM - PPT_TOL,
        log_negativity=max(0.0, -np.log(2.0 * pt.n_minus)),
        eof=eof,
    )
