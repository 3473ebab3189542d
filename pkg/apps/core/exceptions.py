"""
Exception hierarchy and DRF exception handler for the polar-svd service.
"""

from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import exception_handler

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NON_CONVERGENCE = 3
EXIT_USAGE = 64


def custom_exception_handler(exc, context):
    """
    Custom exception handler that provides consistent error responses.
    """
    if isinstance(exc, PolarSVDError):
        return Response(
            {
                "success": False,
                "error": {
                    "code": exc.status_code,
                    "message": exc.detail,
                    "details": exc.as_dict(),
                },
            },
            status=exc.status_code,
        )

    # Call REST framework's default exception handler first
    response = exception_handler(exc, context)

    if response is not None:
        response.data = {
            "success": False,
            "error": {
                "code": response.status_code,
                "message": get_error_message(exc),
                "details": response.data,
            },
        }

    return response


def get_error_message(exc):
    """Get a human-readable error message from an exception."""
    if hasattr(exc, "detail"):
        if isinstance(exc.detail, str):
            return exc.detail
        elif isinstance(exc.detail, list):
            return exc.detail[0] if exc.detail else "An error occurred"
        elif isinstance(exc.detail, dict):
            for key, value in exc.detail.items():
                if isinstance(value, list):
                    return f"{key}: {value[0]}"
                return f"{key}: {value}"
    return str(exc)


class PolarSVDError(Exception):
    """
    Base exception for every numerical and input error.
    """

    status_code = status.HTTP_400_BAD_REQUEST
    exit_code = EXIT_DOMAIN
    default_detail = "A polar-svd error occurred."
    default_code = "polar_svd_error"

    def __init__(self, detail=None, code=None):
        self.detail = detail if detail is not None else self.default_detail
        self.code = code if code is not None else self.default_code
        self.group = None
        super().__init__(self.detail)

    def as_dict(self):
        data = {"code": self.code, "detail": self.detail}
        if self.group is not None:
            data["group"] = self.group
        return data


class DomainError(PolarSVDError):
    """
    Exception raised when an argument lies outside its mathematical domain.
    """

    default_detail = "Argument outside its valid domain."
    default_code = "domain_error"


class UnsupportedOrderError(DomainError):
    """
    Exception raised for a Zolotarev order outside 1..8.
    """

    default_detail = "Unsupported Zolotarev order."
    default_code = "unsupported_order"


class ShapeError(DomainError):
    """
    Exception raised when operand shapes do not conform.
    """

    default_detail = "Matrix shapes do not conform."
    default_code = "shape_mismatch"


class SymmetryError(ShapeError):
    """
    Exception raised when a matrix expected to be symmetric is not.
    """

    default_detail = "Matrix is not symmetric within tolerance."
    default_code = "not_symmetric"


class NotPositiveDefiniteError(DomainError):
    """
    Exception raised when a Cholesky factorization meets a non-positive pivot.
    """

    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    default_detail = "Matrix is not positive definite."
    default_code = "not_positive_definite"


class SingularMatrixError(DomainError):
    """
    Exception raised when a matrix is numerically singular.
    """

    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    default_detail = "Matrix is numerically singular."
    default_code = "singular_matrix"


class InfeasiblePlanError(DomainError):
    """
    Exception raised when a worker budget cannot be split into r groups.
    """

    default_detail = "Worker budget is too small for the requested groups."
    default_code = "infeasible_plan"


class MatrixMarketParseError(DomainError):
    """
    Exception raised for malformed or unsupported Matrix Market input.
    """

    default_detail = "Could not parse Matrix Market file."
    default_code = "parse_error"

    def __init__(self, detail=None, line=None):
        self.line = line
        if detail is not None and line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)

    def as_dict(self):
        data = super().as_dict()
        data["line"] = self.line
        return data


class NonConvergenceError(PolarSVDError):
    """
    Exception raised when an iteration exceeds its hard cap.
    """

    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    exit_code = EXIT_NON_CONVERGENCE
    default_detail = "Iteration did not converge."
    default_code = "non_convergence"

    def __init__(self, detail=None, log=()):
        self.log = tuple(log)
        super().__init__(detail)

    def as_dict(self):
        data = super().as_dict()
        data["iterations"] = len(self.log)
        return data


class UsageError(PolarSVDError):
    """
    Exception raised for conflicting or missing command-line flags.
    """

    exit_code = EXIT_USAGE
    default_detail = "Invalid command usage."
    default_code = "usage_error"
