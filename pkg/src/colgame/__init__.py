"""Executable semantics for games between a machine and its environment.

Formulas denote games, strategies denote machines, and every claim about
who wins is something you can adjudicate, simulate, or exhaustively
check.  See the README for the command-line and HTTP surfaces.
"""

from .core import (
    BOT,
    TOP,
    BudgetExceeded,
    Counterexample,
    Discrepancy,
    Game,
    GameState,
    IllegalPosition,
    LabeledMove,
    MoveError,
    Player,
    Run,
    RunFormatError,
    Verdict,
    delays,
    format_run,
    is_delay,
    legal,
    legal_extension,
    legal_runs,
    lm,
    moves,
    parse_run,
    replay,
    run_equivalence,
    static_check,
    winner,
)
from .combinators import (
    ChoiceKind,
    ParallelKind,
    SequentialKind,
    bit_game,
    choice,
    choice_quant,
    elementary,
    first_mover_wins,
    memory_game,
    negation,
    parallel,
    pimpl,
    precurrence,
    primpl,
    sequential,
    srecurrence,
    stack,
    tau,
)
from .formula import (
    ArityMismatch,
    FreeVariable,
    GameExpr,
    InterpretError,
    Interpretation,
    ParseError,
    ParseTree,
    UnboundAtom,
    interpret,
    parse,
    render,
)
from .toymachines import Catalog, Halted, StillRunning, ToyMachine, default_catalog, toy_run
from .machine import (
    EnvScript,
    FsmSpec,
    LosingRun,
    MalformedSpec,
    SimResult,
    Strategy,
    StrategyKind,
    TraceStep,
    defeat_search,
    delayed,
    enumerate_state_output_echo_fsms,
    fsm_from_dict,
    fsm_strategy,
    make_fsm,
    random_env,
    random_strategy,
    scripted_env,
    scripted_strategy,
    silent_env,
    silent_strategy,
    simulate,
    trace_to_text,
    verify_wins,
)
from .strategies import (
    ShapeMismatch,
    UnknownStrategy,
    choose_left,
    choose_right,
    copycat,
    function_strategy,
    halting_semidecider,
    halting_to_acceptance,
    kolmogorov_via_halting,
    make_env,
    make_strategy,
    re_switch,
)

__version__ = "0.1.0"
