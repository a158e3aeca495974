"""Machine-against-environment simulation and exhaustive verification.

The scheduler alternates in cycles: first the environment emits any
finite number of moves, then the machine observes everything it has not
seen yet and emits at most one move.  Illegal emissions are appended to
the run like any others and adjudicated by the first-offender rule,
which ends the simulation.  A cycle in which neither side emits and
neither side's state advanced is quiescent and also ends it: a strategy
that is still computing keeps changing its state, so slow machines are
not cut off, while settled positions stop burning budget.

Strategies are pure step functions over explicit state, so a single
Strategy value can be replayed and searched without shared mutation.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Optional

from .core import (
    BOT,
    TOP,
    BudgetExceeded,
    Game,
    GameState,
    LabeledMove,
    Player,
    Run,
    Verdict,
    check_move_text,
    format_run,
    state_moves,
    winner,
)

DEFAULT_TAIL_CYCLES = 64


class StrategyKind(Enum):
    UNRESTRICTED = "unrestricted"
    FINITE_STATE = "finite-state"


@dataclass(frozen=True)
class Strategy:
    """A deterministic machine: state plus a one-move-per-cycle step.

    ``step(state, newly_observed)`` returns the successor state and at
    most one move text to emit.  States must be immutable values;
    equality of successive states is what quiescence detection reads.
    """

    initial: Any
    step: Callable
    kind: StrategyKind = StrategyKind.UNRESTRICTED
    name: str = ""


@dataclass(frozen=True)
class EnvScript:
    """A deterministic environment: emits a finite move batch per cycle."""

    initial: Any
    step: Callable  # (state, position, rng) -> (state, [move texts])
    name: str = ""


@dataclass(frozen=True)
class TraceStep:
    index: int
    env_moves: tuple
    machine_move: Optional[str]
    position: Run


@dataclass(frozen=True)
class SimResult:
    run: Run
    verdict: Verdict
    trace: tuple


def _move_token(text: str) -> str:
    return text if text else "_"


def trace_to_text(trace) -> str:
    """One line per cycle: ``#i env=[..] mach=[..] run=".."``."""
    lines = []
    for step in trace:
        env = ",".join(_move_token(t) for t in step.env_moves)
        mach = _move_token(step.machine_move) if step.machine_move is not None else ""
        lines.append(f'#{step.index} env=[{env}] mach=[{mach}] run="{format_run(step.position)}"')
    return "\n".join(lines)


def simulate(game: Game, machine: Strategy, env: EnvScript, step_budget: int, seed: int = 0) -> SimResult:
    """Play ``machine`` against ``env`` for at most ``step_budget`` cycles.

    Deterministic in (game, machine, env, step_budget, seed).  The run is
    adjudicated when an illegal move ends play, on quiescence, or when
    the budget runs out.
    """
    rng = random.Random(seed)
    state: Optional[GameState] = game.start
    run: Run = ()
    trace = []
    env_state = env.initial
    mach_state = machine.initial
    observed = 0

    for index in range(step_budget):
        new_env_state, batch = env.step(env_state, run, rng)
        env_emitted = []
        broke = False
        for text in batch:
            move = LabeledMove(BOT, check_move_text(text))
            run = run + (move,)
            env_emitted.append(text)
            nxt = state.try_move(move)
            if nxt is None:
                broke = True
                break
            state = nxt
        if broke:
            trace.append(TraceStep(index, tuple(env_emitted), None, run))
            return SimResult(run, winner(game, run), tuple(trace))

        newly = run[observed:]
        observed = len(run)
        new_mach_state, emitted = machine.step(mach_state, newly)
        if emitted is not None:
            move = LabeledMove(TOP, check_move_text(emitted))
            run = run + (move,)
            observed = len(run)
            nxt = state.try_move(move)
            trace.append(TraceStep(index, tuple(env_emitted), emitted, run))
            if nxt is None:
                return SimResult(run, winner(game, run), tuple(trace))
            state = nxt
        else:
            trace.append(TraceStep(index, tuple(env_emitted), None, run))

        quiescent = (
            not env_emitted
            and emitted is None
            and new_env_state == env_state
            and new_mach_state == mach_state
        )
        env_state, mach_state = new_env_state, new_mach_state
        if quiescent:
            break

    return SimResult(run, winner(game, run), tuple(trace))


# ---------------------------------------------------------------------------
# Stock environments.


def silent_env() -> EnvScript:
    return EnvScript(initial=None, step=lambda state, run, rng: (state, []), name="silent")


def scripted_env(cycles) -> EnvScript:
    """Plays the given per-cycle batches, then stays silent forever."""
    batches = tuple(tuple(batch) for batch in cycles)
    for batch in batches:
        for text in batch:
            check_move_text(text)

    def step(state, run, rng):
        if state >= len(batches):
            return state, []
        return state + 1, list(batches[state])

    return EnvScript(initial=0, step=step, name="script")


def random_env(game: Game, bound: int, move_chance: float = 0.7) -> EnvScript:
    """Plays a random legal move (or passes) each cycle, seeded by simulate."""

    def step(state, run, rng):
        options = sorted(state_moves(_replay_state(game, run), BOT, bound))
        options = [m for m in options if len(m) <= bound]
        if options and rng.random() < move_chance:
            return state, [rng.choice(options)]
        return state, []

    return EnvScript(initial=None, step=step, name=f"random[{bound}]")


def _replay_state(game: Game, run: Run) -> GameState:
    state = game.start
    for move in run:
        nxt = state.try_move(move)
        if nxt is None:
            raise ValueError("environment asked for moves at an illegal position")
        state = nxt
    return state


# ---------------------------------------------------------------------------
# Stock machine wrappers.


def silent_strategy() -> Strategy:
    return Strategy(initial=None, step=lambda s, newly: (s, None), name="silent")


def scripted_strategy(moves) -> Strategy:
    """Emits the given moves one per cycle, then stays silent."""
    fixed = tuple(moves)
    for text in fixed:
        check_move_text(text)

    def step(state, newly):
        if state >= len(fixed):
            return state, None
        return state + 1, fixed[state]

    return Strategy(initial=0, step=step, name="script")


def random_strategy(game: Game, bound: int, seed: int = 0) -> Strategy:
    """Plays a random legal move (or passes) each cycle.

    Carries the observed position in its state; randomness is derived
    from the seed and cycle count, so replays are deterministic.
    """

    def step(state, newly):
        position, cycle = state
        position = position + tuple(newly)
        rng = random.Random(f"{seed}:{cycle}")
        options = sorted(state_moves(_replay_state(game, position), TOP, bound))
        options = [m for m in options if len(m) <= bound]
        if options and rng.random() < 0.7:
            move = rng.choice(options)
            return ((position + (LabeledMove(TOP, move),), cycle + 1), move)
        return ((position, cycle + 1), None)

    return Strategy(initial=((), 0), step=step, name=f"random[{seed}]")


def delayed(machine: Strategy, name: str = "") -> Strategy:
    """The same strategy with every emission held back one cycle.

    Winning strategies for static games stay winning under this wrapper;
    that is the speed-independence the static property promises.
    """

    def step(state, newly):
        inner_state, held = state
        new_inner, emitted = machine.step(inner_state, newly)
        return (new_inner, emitted), held

    return Strategy(
        initial=(machine.initial, None),
        step=step,
        kind=machine.kind,
        name=name or f"delayed({machine.name})",
    )


# ---------------------------------------------------------------------------
# Finite-state machines (the sub-Turing device class).


class MalformedSpec(ValueError):
    pass


@dataclass(frozen=True)
class FsmSpec:
    """A finite-state transducer over labeled moves.

    ``transitions`` maps (state, (player, move text)) to
    (next state, optional emission); it must be total on
    states x alphabet.  Observed moves outside the alphabet fall into
    the designated sink when the environment made them; the device's own
    out-of-alphabet emissions are skipped, since it tracked them when it
    played them.
    """

    states: frozenset
    start: Any
    alphabet: frozenset  # of (Player, text) pairs; the empty move is written "_"
    transitions: dict    # (state, (Player, text)) -> (state, Optional[str])
    sink: Any

    def __post_init__(self):
        if self.start not in self.states:
            raise MalformedSpec(f"start state {self.start!r} not in states")
        if self.sink not in self.states:
            raise MalformedSpec(f"sink state {self.sink!r} not in states")
        for state in self.states:
            for key in self.alphabet:
                if (state, key) not in self.transitions:
                    raise MalformedSpec(f"transition missing for {(state, key)!r}")
        for (state, key), (nxt, emit) in self.transitions.items():
            if state not in self.states or nxt not in self.states:
                raise MalformedSpec(f"transition {(state, key)!r} references unknown state")
            if key not in self.alphabet:
                raise MalformedSpec(f"transition on {key!r} outside the alphabet")
            if emit is not None and emit != "_":
                check_move_text(emit)


def make_fsm(states, start, alphabet, rules, sink=None) -> FsmSpec:
    """Build an FsmSpec, completing unspecified pairs with sink moves.

    ``rules`` maps (state, (player, text)) to (next state, emission).
    """
    states = frozenset(states)
    alphabet = frozenset((player, text) for player, text in alphabet)
    if sink is None:
        sink = "sink"
        states = states | {sink}
    transitions = dict(rules)
    for state in states:
        for key in alphabet:
            transitions.setdefault((state, key), (sink, None))
    return FsmSpec(states, start, alphabet, transitions, sink)


def fsm_strategy(spec: FsmSpec) -> Strategy:
    """Drive an FsmSpec as a Strategy.

    The device consumes one observed move per internal tick.  A tick
    whose transition emits ends the cycle's work, leaving the rest of
    the backlog for later cycles; at most one emission per cycle.
    """

    def step(state, newly):
        current, backlog = state
        backlog = backlog + tuple((m.label, m.text if m.text else "_") for m in newly)
        while backlog:
            key, backlog = backlog[0], backlog[1:]
            if key in spec.alphabet:
                current, emitted = spec.transitions[(current, key)]
                if emitted is not None:
                    return (current, backlog), "" if emitted == "_" else emitted
            elif key[0] is BOT:
                current = spec.sink
        return (current, backlog), None

    return Strategy(
        initial=(spec.start, ()),
        step=step,
        kind=StrategyKind.FINITE_STATE,
        name="fsm",
    )


def fsm_from_dict(doc: dict) -> FsmSpec:
    """Load an FsmSpec from its JSON form.

    Format: {"states": [..], "start": s, "sink": s?, "alphabet":
    [["B", "0"], ..], "rules": [[state, label, move, next, emit-or-null], ..]}
    """
    label_of = {"T": TOP, "B": BOT}
    try:
        alphabet = [(label_of[l], t) for l, t in doc["alphabet"]]
        rules = {
            (state, (label_of[label], text)): (nxt, emit)
            for state, label, text, nxt, emit in doc["rules"]
        }
        return make_fsm(doc["states"], doc["start"], alphabet, rules, doc.get("sink"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedSpec):
            raise
        raise MalformedSpec(f"bad finite-state spec document: {exc}") from exc


def enumerate_state_output_echo_fsms(num_states: int, numerals: int):
    """All state-determined echo responders with at most ``num_states`` states.

    The family under test for the separation result: the device reads
    the environment's numeral, lands in a state, and its answer is a
    function of that state alone (every transition into a state carries
    the state's fixed output).  Machines are enumerated up to state
    renaming: assignments of numerals to state-blocks crossed with one
    answer (or none) per block.  With fewer states than numerals, two
    numerals share a block, so no member answers every numeral correctly.
    """
    alphabet = [(BOT, str(k)) for k in range(numerals)]

    def partitions(values):
        if not values:
            yield []
            return
        head, rest = values[0], values[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                if len(part) <= num_states:
                    yield part[:i] + [[head] + part[i]] + part[i + 1 :]
            if len(part) + 1 <= num_states:
                yield [[head]] + part

    for blocks in partitions(list(range(numerals))):
        answer_space = itertools.product([None, *map(str, range(numerals))], repeat=len(blocks))
        for answers in answer_space:
            states = ["s0"] + [f"q{i}" for i in range(len(blocks))]
            rules = {}
            for i, block in enumerate(blocks):
                for k in block:
                    rules[("s0", (BOT, str(k)))] = (f"q{i}", answers[i])
            yield make_fsm(states, "s0", alphabet, rules)


# ---------------------------------------------------------------------------
# Exhaustive verification over bounded environment behaviour.


@dataclass(frozen=True)
class LosingRun:
    run: Run
    verdict: Verdict
    script: tuple  # one Optional[str] per environment opportunity

    def __str__(self) -> str:
        return f"{format_run(self.run)!r} ({self.verdict})"


def _search(game: Game, machine: Strategy, env_depth: int, env_bound: int,
            step_budget: Optional[int], node_limit: Optional[int]):
    """First losing branch over all bounded environment scripts, or None.

    The environment gets ``env_depth`` opportunities; at each it plays
    nothing or one legal move within ``env_bound``.  Branches are
    explored passes-first, moves in text order, so the returned
    counterexample is the enumeration-first one.  The explored cycles
    mirror simulate() exactly; replaying the returned script through
    simulate() reproduces the losing run.
    """
    budget = step_budget if step_budget is not None else env_depth + DEFAULT_TAIL_CYCLES
    nodes = [node_limit if node_limit is not None else 5_000_000]

    def tick():
        nodes[0] -= 1
        if nodes[0] < 0:
            raise BudgetExceeded("environment-script search exceeded its node limit")

    def machine_turn(state, run, observed, mach_state):
        """Returns (state, run, observed, mach_state, emitted, final_verdict?)."""
        newly = run[observed:]
        observed = len(run)
        mach_state, emitted = machine.step(mach_state, newly)
        if emitted is None:
            return state, run, observed, mach_state, None, None
        move = LabeledMove(TOP, check_move_text(emitted))
        run = run + (move,)
        observed = len(run)
        nxt = state.try_move(move)
        if nxt is None:
            return state, run, observed, mach_state, emitted, winner(game, run)
        return nxt, run, observed, mach_state, emitted, None

    def tail(state, run, observed, mach_state, cycle):
        """No environment opportunities left; run the machine out."""
        while cycle < budget:
            tick()
            prev = mach_state
            state, run, observed, mach_state, emitted, verdict = machine_turn(
                state, run, observed, mach_state
            )
            if verdict is not None:
                return run, verdict
            cycle += 1
            if emitted is None and mach_state == prev:
                break
        return run, winner(game, run)

    def explore(state, run, observed, mach_state, cycle, script):
        if cycle >= env_depth:
            run, verdict = tail(state, run, observed, mach_state, cycle)
            return (run, verdict, script) if verdict.winner is BOT else None
        options = [None] + sorted(
            m for m in state_moves(state, BOT, env_bound) if len(m) <= env_bound
        )
        for option in options:
            tick()
            b_state, b_run, b_observed = state, run, observed
            if option is not None:
                move = LabeledMove(BOT, option)
                b_run = b_run + (move,)
                b_state = b_state.try_move(move)
            b_state, b_run, b_observed, b_mach, emitted, verdict = machine_turn(
                b_state, b_run, b_observed, mach_state
            )
            if verdict is not None:
                if verdict.winner is BOT:
                    return b_run, verdict, script + (option,)
                continue
            found = explore(b_state, b_run, b_observed, b_mach, cycle + 1, script + (option,))
            if found is not None:
                return found
        return None

    return explore(game.start, (), 0, machine.initial, 0, ())


def verify_wins(game: Game, machine: Strategy, env_depth: int, env_bound: int,
                step_budget: Optional[int] = None,
                node_limit: Optional[int] = None) -> Optional[LosingRun]:
    """None when the machine wins against every bounded environment script.

    Otherwise the first losing run in enumeration order.  The script
    space: at each of ``env_depth`` opportunities the environment plays
    nothing or one of its legal moves within ``env_bound``.
    """
    found = _search(game, machine, env_depth, env_bound, step_budget, node_limit)
    if found is None:
        return None
    run, verdict, script = found
    return LosingRun(run, verdict, script)


def defeat_search(game: Game, machine: Strategy, env_depth: int, env_bound: int,
                  step_budget: Optional[int] = None,
                  node_limit: Optional[int] = None) -> Optional[EnvScript]:
    """A replayable script that defeats the machine, or None.

    Returns None exactly when verify_wins returns None on the same
    arguments; replaying the script through simulate() reproduces the
    losing run verify_wins reports.
    """
    found = _search(game, machine, env_depth, env_bound, step_budget, node_limit)
    if found is None:
        return None
    _, _, script = found
    return scripted_env([[m] if m is not None else [] for m in script])
