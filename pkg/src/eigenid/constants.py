# Commands should only import the default_tolerances dict from this file, library
# modules import the single constants they need.

# Relative tolerance for accepting a grid as Hermitian in strict mode.
HERMITIAN_TOL = 1e-12

# Normalized tolerance for both sides of the identity, and for determinant products.
IDENTITY_TOL = 1e-8

# Spectral gap tolerance, relative to 1 + spectral range. Below it a spectrum is not
# simple and reconstruction is refused.
GAP_TOL = 1e-8

# Slack used when checking Cauchy interlacing of minor spectra.
INTERLACING_SLACK = 1e-10

# Per-order tolerance for the purely unitary algebra (multiplied by n).
UNITARY_TOL_PER_ORDER = 1e-10

# Per-order tolerance for the block factorization of M_n (multiplied by n).
BLOCK_TOL_PER_ORDER = 1e-9

# Tolerance for the three-way Sylvester determinant agreement.
SYLVESTER_TOL = 1e-10

# Magnitudes within this distance below zero are rounding noise and get clamped.
MAGNITUDE_CLAMP = 1e-12

# Row and column sums of a magnitude matrix must be 1 within this, times n.
STOCHASTIC_TOL_PER_ORDER = 1e-8

# A matrix counts as shifted when an eigenvalue is within this of zero, relative to
# 1 + max |lambda|.
ZERO_EIGENVALUE_TOL = 1e-8

# Implicit QL sweeps allowed per eigenvalue before giving up.
MAX_QL_SWEEPS = 50

# Pivots with smaller magnitude make the determinant exactly zero.
PIVOT_UNDERFLOW = 1e-300

# Header keyword of the matrix text format.
MATRIX_FILE_MAGIC = "%%eigenid"

# Version of the report schema, bump on any incompatible change.
REPORT_VERSION = 1

# Name of the optional configuration file, looked up in the current directory.
CONFIG_FILE_NAME = "eigenid.yml"

default_tolerances = {
    "tol": IDENTITY_TOL,
    "gap-tol": GAP_TOL,
    "slack": INTERLACING_SLACK,
    "unitary-tol": None,
    "block-tol": None,
}
