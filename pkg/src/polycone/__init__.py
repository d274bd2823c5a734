"""polycone: positive solutions of parametrized generalized polynomial systems.

The library reduces systems of generalized polynomial equations and
inequalities over positive variables to binomial conditions on a bounded
coefficient set, produces explicit parametrizations of the positive
solution set where the structure guarantees one, and solves univariate
trinomials through sign-characteristic functions.
"""

from .errors import (
    BranchError,
    ConditionViolated,
    DegenerateExponent,
    DimensionTooLarge,
    DomainError,
    EmptyCone,
    EmptyNetwork,
    EmptyRegion,
    IncompatibleSimplex,
    InfeasibleRegion,
    NotASolution,
    ParseError,
    PolyconeError,
    RangeError,
    SemanticError,
    UndeclaredSpecies,
)
from .linalg import (
    EPS,
    Mat,
    SubspaceBasis,
    generalized_inverse,
    kernel_basis,
    orthogonal_complement_of_image,
    rank,
    rref,
)
from .model import (
    ClassCone,
    ClassPartition,
    CoefficientSet,
    GenSystem,
    ParamVec,
    SimplexChoice,
    coefficient_set,
    param_vec,
    validate,
)
from .reduction import (
    BinomialCondition,
    Decomposition,
    ReducedSystem,
    binomial_conditions,
    class_freedoms,
    class_indicator,
    class_subsystems,
    decompose,
    differencing_matrix,
    reduce_system,
)
from .signchar import SignChar, TrinomialProblem, TrinomialSolution, solve_trinomial
from .solve import (
    SamplePoint,
    SliceSolution,
    SolutionBranch,
    SolutionDescription,
    VerifyReport,
    binomial_normal_form,
    coefficient_vector,
    describe_solution_set,
    fix_variables,
    lift,
    round_trip,
    sample_solutions,
    solve_on_slice,
    verify,
)
from .sysfile import (
    NetworkFile,
    Reaction,
    SystemFile,
    network_to_system,
    parse_network,
    parse_system,
    serialize_system,
)

__version__ = "0.1.0"

__all__ = [
    "EPS",
    "Mat",
    "SubspaceBasis",
    "generalized_inverse",
    "kernel_basis",
    "orthogonal_complement_of_image",
    "rank",
    "rref",
    "ClassCone",
    "ClassPartition",
    "CoefficientSet",
    "GenSystem",
    "ParamVec",
    "SimplexChoice",
    "coefficient_set",
    "param_vec",
    "validate",
    "BinomialCondition",
    "Decomposition",
    "ReducedSystem",
    "binomial_conditions",
    "class_freedoms",
    "class_indicator",
    "class_subsystems",
    "decompose",
    "differencing_matrix",
    "reduce_system",
    "SignChar",
    "TrinomialProblem",
    "TrinomialSolution",
    "solve_trinomial",
    "SamplePoint",
    "SliceSolution",
    "SolutionBranch",
    "SolutionDescription",
    "VerifyReport",
    "binomial_normal_form",
    "coefficient_vector",
    "describe_solution_set",
    "fix_variables",
    "lift",
    "round_trip",
    "sample_solutions",
    "solve_on_slice",
    "verify",
    "NetworkFile",
    "Reaction",
    "SystemFile",
    "network_to_system",
    "parse_network",
    "parse_system",
    "serialize_system",
    "PolyconeError",
    "EmptyCone",
    "IncompatibleSimplex",
    "DimensionTooLarge",
    "ParseError",
    "SemanticError",
    "UndeclaredSpecies",
    "EmptyNetwork",
    "DomainError",
    "BranchError",
    "RangeError",
    "DegenerateExponent",
    "ConditionViolated",
    "NotASolution",
    "InfeasibleRegion",
    "EmptyRegion",
]
