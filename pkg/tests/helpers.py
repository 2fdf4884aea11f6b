"""Shared builders for the test suite."""

import numpy as np

from twomode import gaussian as g

# (criterion number, title, passed, detail) appended by test_acceptance
ACCEPTANCE = []

SF_EXAMPLE = (2.0, 1.0, 0.5, -0.3)
SYM_EXAMPLE = (1.0, 1.0, 0.6, -0.6)


def sf_matrix(a, b, c1, c2):
    return g.standard_form_matrix(a, b, c1, c2)


def random_local_single(rng, max_squeeze=0.8):
    t1, t2 = rng.uniform(0, 2 * np.pi, 2)
    return g.phase_rotation(t1) @ g.single_squeeze(rng.uniform(-max_squeeze, max_squeeze)) @ g.phase_rotation(t2)


def random_local(rng, max_squeeze=0.8):
    return g.local(random_local_single(rng, max_squeeze), random_local_single(rng, max_squeeze))


def random_factor_chain(rng, length=4, max_squeeze=0.6):
    """Product of randomly chosen factor types: local map, R(phi), S_tm(r), S_loc(r1, r2)."""
    S = np.eye(4)
    for _ in range(length):
        kind = rng.integers(4)
        if kind == 0:
            F = random_local(rng, max_squeeze)
        elif kind == 1:
            F = g.rotation(rng.uniform(0, 2 * np.pi))
        elif kind == 2:
            F = g.two_mode_squeeze(rng.uniform(-max_squeeze, max_squeeze))
        else:
            F = g.local_squeeze(*rng.uniform(-max_squeeze, max_squeeze, 2))
        S = S @ F
    return S


def geometric_entropy(nbar, terms=4000):
    """Shannon entropy of the photon-number distribution of a thermal mode, summed directly."""
    k = np.arange(terms)
    p = (nbar / (1.0 + nbar)) ** k / (1.0 + nbar)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))
