"""
Exception hierarchy.

Every error carries a human readable ``detail`` naming the violated invariant and the
process ``exit_code`` the CLI maps it to (0 success, 1 usage, 2 validation,
3 verification deviation).
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_VERIFICATION = 3
EXIT_INTERNAL = 4


class GreenNetError(Exception):
    exit_code = EXIT_VALIDATION

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UsageError(GreenNetError):
    exit_code = EXIT_USAGE


class NetworkValidationError(GreenNetError):
    """Raw network input violates a network invariant"""


class MatrixFileError(GreenNetError):
    """Matrix file is not a square order/rows document"""


class DimensionError(GreenNetError, ValueError):
    pass


class VertexLookupError(GreenNetError, LookupError):
    pass


class DegenerateDipoleError(GreenNetError, ValueError):
    pass


class WeightError(GreenNetError, ValueError):
    """Weight not strictly positive or not unit norm"""


class AttachmentError(GreenNetError, ValueError):
    pass


class SpectralError(GreenNetError):
    """Operator is not (lambda, omega)-elliptic"""


class SymmetryError(GreenNetError):
    pass


class SingularPerturbationError(GreenNetError):
    pass


class IllConditionedError(GreenNetError):
    pass


class SingularBlockError(GreenNetError):
    pass


class UnsupportedError(GreenNetError):
    pass


class VerificationError(GreenNetError):
    exit_code = EXIT_VERIFICATION
