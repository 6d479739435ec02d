"""
Structured error handling for the cohomology solver.
Every domain failure carries an error code, a user-facing message and
the CLI exit code it maps to.
"""

from typing import Any, Dict, Optional

from .constants import EXIT_CONFIG_ERROR, EXIT_NOT_HYPERBOLIC, EXIT_OBSTRUCTED


class SolverErrorCode:
    """Error codes for consistent error reporting"""

    # Lattice errors
    NOT_UNIMODULAR = "TORUS_001"
    NOT_UNIMODULAR_POLYNOMIAL = "TORUS_002"
    DIMENSION_MISMATCH = "TORUS_003"
    ZERO_VECTOR = "TORUS_004"
    ZERO_FREQUENCY = "TORUS_005"

    # Spectral errors
    NO_CONVERGENCE = "TORUS_101"
    NOT_HYPERBOLIC = "TORUS_102"
    ILL_CONDITIONED = "TORUS_103"

    # Solver errors
    OBSTRUCTION_VIOLATED = "TORUS_201"
    ENUMERATION_OVERFLOW = "TORUS_202"

    # Input errors
    INVALID_PROBLEM = "TORUS_301"


class SolverErrorMessage:
    """User-facing messages for solver errors"""

    NOT_UNIMODULAR = "The matrix is not in GL(p, Z): its determinant is not +1 or -1."
    NOT_UNIMODULAR_POLYNOMIAL = "The polynomial's constant term is not +1 or -1, its companion matrix is not unimodular."
    DIMENSION_MISMATCH = "Dimensions of the operands do not match."
    ZERO_VECTOR = "The zero vector has no growth type."
    ZERO_FREQUENCY = "Orbit functionals are defined for nonzero frequencies only; use phi_zero for m = 0."

    NO_CONVERGENCE = "The root finder did not converge within the iteration cap."
    NOT_HYPERBOLIC = "The matrix has an eigenvalue on (or too close to) the unit circle."
    ILL_CONDITIONED = "The stable/unstable splitting failed its numerical checks."

    OBSTRUCTION_VIOLATED = "The right-hand side is not a coboundary: an obstruction functional does not vanish."
    ENUMERATION_OVERFLOW = "The candidate frequency box exceeds the enumeration cap."

    INVALID_PROBLEM = "The problem configuration is invalid."


class TorusCohomologyError(Exception):
    """Base class of every domain error raised by the cohomology app"""

    code = SolverErrorCode.INVALID_PROBLEM
    default_message = SolverErrorMessage.INVALID_PROBLEM
    error_type = "solver_error"
    exit_code = EXIT_CONFIG_ERROR

    def __init__(self, message: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        self.message = message or self.default_message
        self.details = details or {}
        super().__init__(self.message)

    def as_dict(self) -> Dict[str, Any]:
        """
        Structured error payload

        Returns:
            {"success": False, "error": {"code", "message", "type"[, "details"]}}
        """
        error = {
            "code": self.code,
            "message": self.message,
            "type": self.error_type,
        }
        if self.details:
            error["details"] = self.details
        return {"success": False, "error": error}


class NotUnimodular(TorusCohomologyError):
    code = SolverErrorCode.NOT_UNIMODULAR
    default_message = SolverErrorMessage.NOT_UNIMODULAR
    error_type = "lattice_error"


class NotUnimodularPolynomial(TorusCohomologyError):
    code = SolverErrorCode.NOT_UNIMODULAR_POLYNOMIAL
    default_message = SolverErrorMessage.NOT_UNIMODULAR_POLYNOMIAL
    error_type = "lattice_error"


class DimensionMismatch(TorusCohomologyError):
    code = SolverErrorCode.DIMENSION_MISMATCH
    default_message = SolverErrorMessage.DIMENSION_MISMATCH
    error_type = "lattice_error"


class ZeroVector(TorusCohomologyError):
    code = SolverErrorCode.ZERO_VECTOR
    default_message = SolverErrorMessage.ZERO_VECTOR
    error_type = "lattice_error"


class ZeroFrequency(TorusCohomologyError):
    code = SolverErrorCode.ZERO_FREQUENCY
    default_message = SolverErrorMessage.ZERO_FREQUENCY
    error_type = "lattice_error"


class NoConvergence(TorusCohomologyError):
    code = SolverErrorCode.NO_CONVERGENCE
    default_message = SolverErrorMessage.NO_CONVERGENCE
    error_type = "spectral_error"


class NotHyperbolic(TorusCohomologyError):
    code = SolverErrorCode.NOT_HYPERBOLIC
    default_message = SolverErrorMessage.NOT_HYPERBOLIC
    error_type = "spectral_error"
    exit_code = EXIT_NOT_HYPERBOLIC


class IllConditioned(TorusCohomologyError):
    code = SolverErrorCode.ILL_CONDITIONED
    default_message = SolverErrorMessage.ILL_CONDITIONED
    error_type = "spectral_error"
    exit_code = EXIT_NOT_HYPERBOLIC


class ObstructionViolated(TorusCohomologyError):
    code = SolverErrorCode.OBSTRUCTION_VIOLATED
    default_message = SolverErrorMessage.OBSTRUCTION_VIOLATED
    error_type = "solver_error"
    exit_code = EXIT_OBSTRUCTED

    def __init__(self, report, message: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        self.report = report
        super().__init__(message, details)


class EnumerationOverflow(TorusCohomologyError):
    code = SolverErrorCode.ENUMERATION_OVERFLOW
    default_message = SolverErrorMessage.ENUMERATION_OVERFLOW
    error_type = "solver_error"


class InvalidProblem(TorusCohomologyError):
    code = SolverErrorCode.INVALID_PROBLEM
    default_message = SolverErrorMessage.INVALID_PROBLEM
    error_type = "config_error"
