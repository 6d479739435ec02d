"""
Constants for the cohomological-equation solver.
Defaults for every TORUS_* setting, used when Django settings are not configured.
"""

# Obstruction / residual tolerance
OBSTRUCTION_TOL = 1e-9

# Spectrum
HYPERBOLICITY_BAND = 1e-8
ROOT_TOL = 1e-12
ROOT_MAX_ITERATIONS = 500

# Splitting invariants (Bezout residuals, projector identities)
SPLITTING_RESIDUAL_TOL = 1e-8
# Imaginary part allowed on a projector before it is rejected
PROJECTOR_IMAG_TOL = 1e-10

# Adapted norm
MAX_ADAPTED_EXPONENT = 10000

# Fourier series
PRUNE_THRESHOLD = 1e-15

# Solver
ENUMERATION_CAP = 10**7
ORBIT_STEP_CAP = 100000
CONTINUITY_ORDERS = (0, 1, 2)

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_OBSTRUCTED = 2
EXIT_NOT_HYPERBOLIC = 3
EXIT_ORACLE_FAILURE = 4
# `spectrum` reports a non-hyperbolic matrix with 2
EXIT_SPECTRUM_NOT_HYPERBOLIC = 2

# Output files written by `solve` and `obstructions`
SOLUTION_FILENAME = "f.json"
REPORT_FILENAME = "report.json"

SETTING_DEFAULTS = {
    "TORUS_OBSTRUCTION_TOL": OBSTRUCTION_TOL,
    "TORUS_HYPERBOLICITY_BAND": HYPERBOLICITY_BAND,
    "TORUS_ROOT_TOL": ROOT_TOL,
    "TORUS_ROOT_MAX_ITERATIONS": ROOT_MAX_ITERATIONS,
    "TORUS_MAX_ADAPTED_EXPONENT": MAX_ADAPTED_EXPONENT,
    "TORUS_ENUMERATION_CAP": ENUMERATION_CAP,
    "TORUS_PRUNE_THRESHOLD": PRUNE_THRESHOLD,
    "TORUS_ORBIT_STEP_CAP": ORBIT_STEP_CAP,
    "TORUS_CONTINUITY_ORDERS": list(CONTINUITY_ORDERS),
}
