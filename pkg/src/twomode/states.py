"""Constructors for canonical Gaussian states and a seeded random generator."""

from dataclasses import dataclass, fields

import numpy as np

from . import gaussian as g
from .errors import DomainError

KINDS = ("vacuum", "thermal", "squeezed_thermal", "tmsv", "tms_thermal", "standard_form")
SINGLE_MODE_KINDS = ("vacuum", "thermal", "squeezed_thermal")


class SpecError(DomainError):
    """A state specification has out-of-range or missing parameters."""


@dataclass(frozen=True)
class StateSpec:
    """Parameters of a named state family.

    ``nbar1, nbar2`` are thermal photon numbers, ``r`` the entangling two-mode
    squeezing, ``r1, r2`` local squeezings, ``a, b, c1, c2`` standard-form
    entries.  ``modes=1`` selects the single-mode variant of ``vacuum``,
    ``thermal`` and ``squeezed_thermal`` (parameters ``nbar1``, ``r1``).
    """

    kind: str
    nbar1: float = 0.0
    nbar2: float = 0.0
    r: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    a: float = 0.5
    b: float = 0.5
    c1: float = 0.0
    c2: float = 0.0
    modes: int = 2

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _thermal_diag(n1, n2=None):
    if n2 is None:
        return np.diag([n1 + 0.5, n1 + 0.5])
    return np.diag([n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5])


def _check(spec):
    if spec.kind not in KINDS:
        raise SpecError(f"unknown state kind {spec.kind!r}; expected one of {', '.join(KINDS)}")
    if spec.modes not in (1, 2):
        raise SpecError("modes must be 1 or 2")
    if spec.modes == 1 and spec.kind not in SINGLE_MODE_KINDS:
        raise SpecError(f"kind {spec.kind!r} has no single-mode variant")
    values = [getattr(spec, f.name) for f in fields(spec) if f.name not in ("kind", "modes")]
    if not all(np.isfinite(v) for v in values):
        raise SpecError("state parameters must be finite")
    if spec.nbar1 < 0 or spec.nbar2 < 0:
        raise SpecError("mean photon numbers must be non-negative")


def make(spec):
    """Covariance matrix of the state described by ``spec``.

    Returns a :class:`~twomode.gaussian.TwoModeCov` for two-mode kinds and a
    plain 2x2 array for single-mode kinds.

    >>> make(StateSpec("thermal", nbar1=1, nbar2=2)).matrix.diagonal()
    array([1.5, 1.5, 2.5, 2.5])
    """
    _check(spec)
    kind = spec.kind
    if spec.modes == 1:
        if kind == "vacuum":
            m = _thermal_diag(0.0)
        elif kind == "thermal":
            m = _thermal_diag(spec.nbar1)
        else:
            S = g.single_squeeze(spec.r1)
            m = S.T @ _thermal_diag(spec.nbar1) @ S
        return g.validate_single(m)

    if kind == "vacuum":
        return g.validate(_thermal_diag(0.0, 0.0))
    if kind == "thermal":
        return g.validate(_thermal_diag(spec.nbar1, spec.nbar2))
    if kind == "squeezed_thermal":
        return g.apply(g.local_squeeze(spec.r1, spec.r2), _thermal_diag(spec.nbar1, spec.nbar2))
    if kind == "tmsv":
        return g.apply(g.tmsv_symplectic(spec.r), _thermal_diag(0.0, 0.0))
    if kind == "tms_thermal":
        return g.apply(g.tmsv_symplectic(spec.r), _thermal_diag(spec.nbar1, spec.nbar2))
    # standard_form: taken verbatim, must be physical
    if spec.a <= 0 or spec.b <= 0:
        raise SpecError("standard-form a and b must be positive")
    return g.validate(g.standard_form_matrix(spec.a, spec.b, spec.c1, spec.c2))


def vacuum():
    return make(StateSpec("vacuum"))


def thermal(nbar1, nbar2):
    return make(StateSpec("thermal", nbar1=nbar1, nbar2=nbar2))


def tmsv(r):
    return make(StateSpec("tmsv", r=r))


def standard_form_state(a, b, c1, c2):
    return make(StateSpec("standard_form", a=a, b=b, c1=c1, c2=c2))


# --------------------------------------------------------------------------
# random states

# Order in which the 13 uniforms of one draw are consumed.
DRAW_ORDER = (
    "theta1_a", "t_a", "theta2_a",  # local map on mode 1: rot . squeeze . rot
    "theta1_b", "t_b", "theta2_b",  # local map on mode 2
    "eta", "xi", "r", "r1", "r2",
    "nbar_a", "nbar_b",
)


def random_valid(seed, max_thermal=1.0, max_squeeze=0.5, rotations=True):
    """Random physical state together with the decomposition that produced it.

    One draw consumes 13 doubles from ``numpy.random.Generator(PCG64(seed))``
    via ``rng.random(13)`` in the order of :data:`DRAW_ORDER`.  Angles are
    mapped to ``[0, 2 pi)``, squeezings to ``[-max_squeeze, max_squeeze)``
    and photon numbers to ``[0, max_thermal)``; the photon numbers are
    sorted so that mode 1 carries ``n-``.  With ``rotations=False`` every
    angle is zero.

    Parameters
    ----------
    seed : int or numpy.random.Generator
        A generator is advanced in place, which lets callers draw sequences.

    Returns
    -------
    sigma : TwoModeCov
    factors : Lemma1Factors
    nu : ndarray
        ``diag(n-, n-, n+, n+)``, with ``sigma = A^T nu A``.
    """
    if max_thermal < 0 or max_squeeze < 0:
        raise SpecError("bounds must be non-negative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.PCG64(seed))
    u = dict(zip(DRAW_ORDER, rng.random(len(DRAW_ORDER))))
    ang = (lambda k: 2.0 * np.pi * u[k]) if rotations else (lambda k: 0.0)
    sq = lambda k: max_squeeze * (2.0 * u[k] - 1.0)  # noqa: E731

    def local_mode(m):
        return g.phase_rotation(ang(f"theta1_{m}")) @ g.single_squeeze(sq(f"t_{m}")) @ g.phase_rotation(
            ang(f"theta2_{m}")
        )

    S_l = g.local(local_mode("a"), local_mode("b"))
    factors = g.Lemma1Factors(S_l, ang("eta"), ang("xi"), sq("r"), sq("r1"), sq("r2"))
    nbars = sorted([max_thermal * u["nbar_a"], max_thermal * u["nbar_b"]])
    nu = np.diag(np.repeat(np.asarray(nbars) + 0.5, 2))
    A = factors.matrix()
    m = A.T @ nu @ A
    return g.validate(0.5 * (m + m.T)), factors, nu
