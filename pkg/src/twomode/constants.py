"""Numerical tolerances shared across the package.

All thresholds live here so that a change of policy is a one-line edit.
"""

VACUUM = 0.5  # vacuum quadrature variance, hbar = 1

SYMMETRY_TOL = 1e-12  # max |m - m^T| for a covariance matrix
HERMITIAN_TOL = 1e-10  # max |m - m^H| accepted by hermitian_eig
BONA_FIDE_TOL = 1e-10  # min eigenvalue of sigma + i/2 Omega may dip this far below 0
PHYSICAL_TOL = 1e-10  # n_minus >= 1/2 - PHYSICAL_TOL
SYMPLECTIC_TOL = 1e-9  # ||S^T Omega S - Omega||_F
DISCRIMINANT_TOL = 1e-12  # clamp Delta^2 - 4 Det sigma in [-tol, 0) to zero
STANDARD_FORM_TOL = 1e-10  # negative discriminant allowed when solving for c1^2, c2^2
PAIRING_TOL = 1e-8  # eigenvalues of i Omega sigma must come in +/- pairs
F_DOMAIN_TOL = 1e-12  # f(x) accepts x >= 1/2 - tol
LOG_ZERO = 1e-15  # (x - 1/2) ln(x - 1/2) is taken as 0 below this
SYMMETRIC_STATE_TOL = 1e-9  # |a - b| for the entanglement-of-formation closed form
PPT_TOL = 1e-10  # separable iff nt_minus >= 1/2 - tol
FACTOR_TOL = 1e-7  # factorization recomposition residual (Frobenius)
WILLIAMSON_TOL = 1e-8

# Fock oracle
TRACE_DEFICIT_TOL = 1e-6
EIG_ZERO = 1e-14  # eigenvalues below this contribute nothing to -sum l ln l
UNITARY_TOL = 1e-8
