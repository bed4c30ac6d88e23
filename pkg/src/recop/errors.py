"""Exception hierarchy shared across the package.

Every error carries a ``category`` used by the service and CLI to map
failures onto the exit-code contract: "input" errors are the caller's
problem (bad file, bad expression, samples on a singular locus), "math"
errors mean the computation itself broke down (e.g. a leaf matrix turned
out singular between tolerance cracks).
"""


class RecopError(Exception):
    """Base class for all package errors."""

    category = "input"


class ExprSyntaxError(RecopError):
    """Malformed expression text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(RecopError):
    """Identifier that is neither a chart coordinate nor a known function."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown symbol '{name}' (at position {position})")
        self.name = name
        self.position = position


class DomainError(RecopError):
    """Singular numeric operation: division by zero, log/sqrt of a
    non-positive argument, zero base with negative exponent."""


class SampleDomainError(RecopError):
    """A sample point hit a singular locus of the input expressions."""

    def __init__(self, point, cause: DomainError):
        coords = [float(x) for x in point]
        super().__init__(f"evaluation failed at sample {coords}: {cause}")
        self.point = coords
        self.cause = cause


class AmbientMismatchError(RecopError):
    """Subspaces of different ambient dimensions were compared."""


class SingularMatrixError(RecopError):
    """Gaussian elimination met a pivot below the singularity threshold."""

    category = "math"


class ResidualExceededError(RecopError):
    """The constructed operator failed its own residual check; the
    inputs are too ill-conditioned at this point for the requested
    residual tolerance."""

    category = "math"

    def __init__(self, point, residual_recursion: float, residual_leaf: float, tol: float):
        coords = [float(x) for x in point]
        super().__init__(
            f"construction residuals ({residual_recursion:.3e} recursion, "
            f"{residual_leaf:.3e} leaf) exceed tolerance {tol:.3e} at sample {coords}"
        )
        self.point = coords


class OddRankError(RecopError):
    """An antisymmetric matrix produced an odd numerical rank, which
    signals a misconfigured rank tolerance or a near-singular sample."""

    def __init__(self, rank: int, point=None, tol_rank: float | None = None):
        where = f" at sample {[float(x) for x in point]}" if point is not None else ""
        detail = f" (tol_rank={tol_rank!r})" if tol_rank is not None else ""
        super().__init__(
            f"antisymmetric matrix has odd computed rank {rank}{where};"
            f" adjust the rank tolerance or exclude the sample{detail}"
        )
        self.rank = rank


class SpecParseError(RecopError):
    """Problem file is not well-formed JSON."""


class SpecValidationError(RecopError):
    """Problem document is structurally valid JSON but violates the
    input contract (wrong keys, bad expression, missing seed, ...)."""
