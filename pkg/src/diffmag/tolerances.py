"""Numerical tolerances used across the package (one place, not per call site)."""

# Hermiticity / unitarity residuals on constructed matrices.
UNITARITY_TOL = 1e-12

# Algebraic identities (commutators, closed-form vs numeric comparisons).
ALGEBRA_TOL = 1e-10

# Eigenvalue-pair cutoff in mixed-state Fisher information sums.
QFI_PAIR_CUTOFF = 1e-12

# A half-space counts as saturated when |slack| falls below this.
SATURATION_TOL = 1e-8

# Vertices closer than this (max-norm) are duplicates.
VERTEX_DEDUP_TOL = 1e-7

# Relative singular-value cutoff for covariance pseudo-inverses.
PINV_RCOND = 1e-10

# Eigenvalues of an observable closer than this are one outcome.
OUTCOME_MERGE_TOL = 1e-9
