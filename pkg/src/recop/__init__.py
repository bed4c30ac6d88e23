"""recop: recursion operators between regular Poisson bivectors.

Decides, over a sample set, whether two Poisson bivectors admit a
recursion operator (equal constant rank and coinciding characteristic
distributions) and constructs the operator pointwise, together with the
dual operator and the leafwise symplectic matrices.
"""

__version__ = "0.1.0"

from .builder import (
    LeafData,
    RecursionPointResult,
    Tolerances,
    Verdict,
    build_at,
    build_leaf,
    build_point,
    decide_existence,
    splitting_independence_check,
    verify_recursion,
)
from .errors import (
    AmbientMismatchError,
    DomainError,
    ExprSyntaxError,
    OddRankError,
    RecopError,
    ResidualExceededError,
    SampleDomainError,
    SingularMatrixError,
    SpecParseError,
    SpecValidationError,
    UnknownSymbolError,
)
from .expressions import Chart, ScalarExpr, parse_expr
from .fields import (
    BivectorField,
    TensorField11,
    eval_bivector,
    jacobi_residual,
    nijenhuis_torsion,
    nijenhuis_torsion_numeric,
    sharp,
)
from .linalg import Subspace, column_space, invert, subspace_equal
from .problem import Problem, load_problem, problem_from_dict
from .commands import run_build, run_check, run_leafwise, run_verify
from .reports import canonical_dumps, report_exit_status

__all__ = [
    "__version__",
    "AmbientMismatchError",
    "BivectorField",
    "Chart",
    "DomainError",
    "ExprSyntaxError",
    "LeafData",
    "OddRankError",
    "Problem",
    "RecopError",
    "RecursionPointResult",
    "ResidualExceededError",
    "SampleDomainError",
    "ScalarExpr",
    "SingularMatrixError",
    "SpecParseError",
    "SpecValidationError",
    "Subspace",
    "TensorField11",
    "Tolerances",
    "UnknownSymbolError",
    "Verdict",
    "build_at",
    "build_leaf",
    "build_point",
    "canonical_dumps",
    "column_space",
    "decide_existence",
    "eval_bivector",
    "invert",
    "jacobi_residual",
    "load_problem",
    "nijenhuis_torsion",
    "nijenhuis_torsion_numeric",
    "parse_expr",
    "problem_from_dict",
    "report_exit_status",
    "run_build",
    "run_check",
    "run_leafwise",
    "run_verify",
    "sharp",
    "splitting_independence_check",
    "subspace_equal",
    "verify_recursion",
]
