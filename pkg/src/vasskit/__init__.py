"""Toolkit for bounded (branching) vector addition systems with states:
step semantics, exhaustive solvers with run-tree witnesses, gadget
compilers, countdown games and the reductions between the models."""

from .model import (
    BadSplit,
    Branch,
    BranchNotUnary,
    Configuration,
    Context,
    Double,
    FireError,
    FullRun,
    Halve,
    Inapplicable,
    Partial,
    RunNode,
    RunTree,
    System,
    Test,
    Transition,
    Unary,
    ValidationReport,
    VassError,
    WrongState,
    fire,
    fire_branch,
    initial_configuration,
    rename_states,
    try_fire,
    validate_run_tree,
    validate_system,
    with_bound,
)
from .solver import (
    ComputesFailure,
    ComputesReport,
    DerivedSet,
    FrontierSet,
    HasBranching,
    MissingInitialState,
    OutOfBounds,
    ReachAnswer,
    SearchLimitExceeded,
    UnboundedSystem,
    accepts,
    check_computes,
    context_set,
    derivable,
    leaf_frontiers,
    reach_context,
    reach_linear,
    reach_set,
)
from .gadgets import (
    BoundDecrease,
    BoundNotPowerOfTwoMinusOne,
    GadgetError,
    GadgetHandle,
    NotDimensionOne,
    NotPowerOfTwo,
    TestValueExceedsBound,
    UpperTestWithoutBound,
    compile_doubling_only,
    compile_halving_only,
    compile_to_2d,
    desugar_tests,
    gadget_branch_copy,
    gadget_copy2,
    gadget_xmx,
    raise_bound,
)
from .reductions import (
    CountdownGame,
    GameConfiguration,
    GameMove,
    GameSolution,
    HasDoubling,
    MoreThanTwoOutgoing,
    NotNormalized,
    Player,
    ReductionError,
    TestsNotDesugared,
    TwoCounterImage,
    normalize_game,
    reduce_countdown,
    reduce_to_2brvass,
    solve_countdown,
)

__all__ = [name for name in dir() if not name.startswith("_")]
