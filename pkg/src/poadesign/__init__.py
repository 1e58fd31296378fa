"""Price-of-anarchy guarantees and optimal utility design for resource
allocation games whose players hold bounded, mutually inconsistent estimates
of resource values."""

__version__ = "0.1.0"

from .design import (
    PoaReport,
    TripleIndex,
    UtilityDesign,
    build_design_lp,
    build_primal_lp,
    enumerate_triples,
    optimal_design,
    poa_class,
)
from .game import (
    Allocation,
    BasisPair,
    BudgetExceeded,
    GameInstance,
    NO_EQUILIBRIUM,
    NoEquilibrium,
    UncertaintyLevel,
    coverage_count,
    enumerate_equilibria,
    game_from_dict,
    game_from_json,
    game_to_dict,
    game_to_json,
    is_equilibrium,
    poa_of_instance,
    uncertainty_of,
    utility,
    welfare,
    with_basis,
)
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LpSolution,
    NumericalFailure,
    lp_solve,
)
from .oracle import (
    BestResponseRun,
    best_response_path,
    brute_force_class_poa,
    extremal_valuations,
    no_pne_example,
)
from .setcover import (
    Amplification,
    MismatchReport,
    SizeExceeded,
    amplification,
    build_worstcase_game,
    mismatch_poa,
    optimal_design_closed_form,
    optimal_design_finite,
    optimal_design_limit,
    optimal_poa_finite,
    optimal_poa_limit,
    setcover_poa,
)

__all__ = [
    "Allocation",
    "Amplification",
    "BasisPair",
    "BestResponseRun",
    "BudgetExceeded",
    "GameInstance",
    "INFEASIBLE",
    "LinearProgram",
    "LpSolution",
    "MismatchReport",
    "NO_EQUILIBRIUM",
    "NoEquilibrium",
    "NumericalFailure",
    "OPTIMAL",
    "PoaReport",
    "SizeExceeded",
    "TripleIndex",
    "UNBOUNDED",
    "UncertaintyLevel",
    "UtilityDesign",
    "amplification",
    "best_response_path",
    "brute_force_class_poa",
    "build_design_lp",
    "build_primal_lp",
    "build_worstcase_game",
    "coverage_count",
    "enumerate_equilibria",
    "enumerate_triples",
    "extremal_valuations",
    "game_from_dict",
    "game_from_json",
    "game_to_dict",
    "game_to_json",
    "is_equilibrium",
    "lp_solve",
    "mismatch_poa",
    "no_pne_example",
    "optimal_design",
    "optimal_design_closed_form",
    "optimal_design_finite",
    "optimal_design_limit",
    "optimal_poa_finite",
    "optimal_poa_limit",
    "poa_class",
    "poa_of_instance",
    "setcover_poa",
    "uncertainty_of",
    "utility",
    "welfare",
    "with_basis",
]
