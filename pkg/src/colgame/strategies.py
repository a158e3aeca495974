"""Stock strategies and the name registry the CLI and service share.

The reduction strategies (halting-to-acceptance, description-size,
switch-on-witness) only ever execute catalog programs; the annotation
tables stay on the referee's side of the board.  Each one is written as
a pure state machine so simulation and exhaustive search can replay it.
"""
from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Callable, Optional

from .core import BOT, TOP, Game, LabeledMove, check_move_text, is_numeral
from .formula import Chall, GameExpr, Interpretation, Neg, Pimpl, Por, Primpl
from .machine import (
    EnvScript,
    Strategy,
    StrategyKind,
    fsm_from_dict,
    fsm_strategy,
    random_env,
    random_strategy,
    scripted_env,
    scripted_strategy,
    silent_env,
    silent_strategy,
)
from .toymachines import Catalog, Halted, toy_run

TOY_STEPS_PER_CYCLE = 64


class ShapeMismatch(ValueError):
    """The expression is not one the strategy knows how to play."""


class UnknownStrategy(ValueError):
    pass


def _env_moves(newly):
    return [m.text for m in newly if m.label is BOT]


# ---------------------------------------------------------------------------
# Copycat and the choice strategies.


def _mirror_sound(expr: GameExpr) -> bool:
    if isinstance(expr, Por):
        return expr.left == Neg(expr.right) or expr.right == Neg(expr.left)
    if isinstance(expr, Pimpl):
        return expr.left == expr.right
    return False


def copycat(expr: Optional[GameExpr] = None) -> Strategy:
    """Mirror every adversary move into the twin parallel component.

    Sound on A \\/ ~A and A -> A shapes, where the components are equal
    up to one negation; passing the expression turns the shape check on.
    """
    if expr is not None and not _mirror_sound(expr):
        raise ShapeMismatch(f"copycat cannot mirror {type(expr).__name__} shapes")

    def step(state, newly):
        queue = state
        for text in _env_moves(newly):
            if text.startswith("0."):
                queue = queue + ("1." + text[2:],)
            elif text.startswith("1."):
                queue = queue + ("0." + text[2:],)
        if queue:
            return queue[1:], queue[0]
        return queue, None

    return Strategy(initial=(), step=step, kind=StrategyKind.FINITE_STATE, name="copycat")


def _chooser(move: str, name: str) -> Strategy:
    def step(state, newly):
        if state:
            return state, None
        return True, move

    return Strategy(initial=False, step=step, kind=StrategyKind.FINITE_STATE, name=name)


def choose_left() -> Strategy:
    return _chooser("0", "choose-left")


def choose_right() -> Strategy:
    return _chooser("1", "choose-right")


def function_strategy(f: Callable[[int], int], name: str = "function") -> Strategy:
    """Answer the adversary's numeral n with f(n).

    Plays games of the pick-a-value, get-an-answer shape, where both
    moves are bare numerals.
    """

    def step(state, newly):
        if state == "done":
            return state, None
        for text in _env_moves(newly):
            if is_numeral(text):
                return "done", str(f(int(text)))
        return state, None

    return Strategy(initial="waiting", step=step, name=name)


# ---------------------------------------------------------------------------
# Oracle reductions over a toy-machine catalog.
#
# All three play against a resource on the left of an implication.
# Addressing, fixed by the combinator layer: component 0 is the negated
# antecedent, component 1 the consequent; a reusable antecedent adds a
# copy index, so its moves carry the further prefix "i.".  Role flip
# under negation means the machine makes the antecedent's value choices
# and the adversary answers its inner choice.


def halting_to_acceptance(catalog: Catalog, chunk: int = TOY_STEPS_PER_CYCLE) -> Strategy:
    """Decide acceptance given one question to a halting oracle.

    Waits for the adversary to pick a machine k and input n in the
    consequent, mirrors that pair into the antecedent, and on a "halts"
    answer actually runs program k on n to completion to read off the
    accept/reject outcome.  A "never halts" answer settles it at once:
    a machine that never halts accepts nothing.  If the oracle answer
    was a lie, the antecedent is already won and the simulation is free
    to spin out.
    """

    def step(state, newly):
        phase = state[0]
        for text in _env_moves(newly):
            if phase == "need_k" and text.startswith("1.") and is_numeral(text[2:]):
                state, phase = ("need_n", int(text[2:])), "need_n"
            elif phase == "need_n" and text.startswith("1.") and is_numeral(text[2:]):
                state, phase = ("query", state[1], int(text[2:]), 0), "query"
            elif phase == "await" and text == "0.0":
                state, phase = ("run", state[1], state[2], 0), "run"
            elif phase == "await" and text == "0.1":
                state, phase = ("answer", "1.1"), "answer"

        if phase == "query":
            _, k, n, sent = state
            if k not in range(len(catalog)):
                return ("answer", "1.1"), None
            if sent == 0:
                return ("query", k, n, 1), f"0.{k}"
            return ("await", k, n), f"0.{n}"
        if phase == "run":
            _, k, n, spent = state
            outcome = toy_run(catalog, k, n, spent + chunk)
            if isinstance(outcome, Halted):
                return ("answer", "1.0" if outcome.accepted else "1.1"), None
            return ("run", k, n, spent + chunk), None
        if phase == "answer":
            return ("done",), state[1]
        return state, None

    return Strategy(initial=("need_k",), step=step, name="halt2accept")


def kolmogorov_via_halting(catalog: Catalog, chunk: int = TOY_STEPS_PER_CYCLE) -> Strategy:
    """Find the least program producing a value, given a halting oracle.

    Scans candidate indices upward.  The oracle screens out the
    non-halters; each survivor is actually executed on input 0 and its
    output compared against the target.  The first match is by
    construction the least producer.  An unproducible target sends the
    scan past the catalog forever, which is the honest behaviour: that
    instance has no winning answer.
    """

    def step(state, newly):
        phase = state[0]
        for text in _env_moves(newly):
            if phase == "need_m" and text.startswith("1.") and is_numeral(text[2:]):
                state, phase = ("query", int(text[2:]), 0, 0), "query"
            elif phase == "await" and text == f"0.{state[2]}.0":
                state, phase = ("run", state[1], state[2], 0), "run"
            elif phase == "await" and text == f"0.{state[2]}.1":
                state, phase = ("query", state[1], state[2] + 1, 0), "query"

        if phase == "query":
            _, m, i, sent = state
            if sent == 0:
                return ("query", m, i, 1), f"0.{i}.{i}"
            return ("await", m, i), f"0.{i}.0"
        if phase == "run":
            _, m, i, spent = state
            outcome = toy_run(catalog, i, 0, spent + chunk) if i in range(len(catalog)) else Halted(False)
            if isinstance(outcome, Halted):
                if outcome.output == m:
                    return ("done",), f"1.{i}"
                return ("query", m, i + 1, 0), None
            return ("run", m, i, spent + chunk), None
        return state, None

    return Strategy(initial=("need_m",), step=step, name="kolmogorov")


def re_switch(semidecider: Callable[[int], Callable[[int], bool]], chunk: int = TOY_STEPS_PER_CYCLE) -> Strategy:
    """Switch sides if and when a semidecision procedure finds a witness.

    Plays the pick-x, then no-unless-I-switch shape: start on the
    negative claim, feed the semidecider a growing budget one slice per
    cycle, and switch exactly when it reports a witness.  Never
    switching is the honest play for the negative instances.
    """

    def step(state, newly):
        phase = state[0]
        for text in _env_moves(newly):
            if phase == "wait" and is_numeral(text):
                state, phase = ("run", semidecider(int(text)), 0), "run"

        if phase == "run":
            _, probe, spent = state
            if probe(spent + chunk):
                return ("done",), "s"
            return ("run", probe, spent + chunk), None
        return state, None

    return Strategy(initial=("wait",), step=step, name="re-switch")


def halting_semidecider(catalog: Catalog) -> Callable[[int], Callable[[int], bool]]:
    """Does machine x halt on input 0?  Positive instances are found by
    running the program; indices outside the catalog never produce a
    witness."""

    def probe_for(x: int) -> Callable[[int], bool]:
        if x not in range(len(catalog)):
            return lambda budget: False
        return lambda budget: isinstance(toy_run(catalog, x, 0, budget), Halted)

    return probe_for


# ---------------------------------------------------------------------------
# Name registry.  One string names one machine or environment, so the
# CLI, the service, and the tests all draw from the same table.

_FUNCTIONS = {
    "id": lambda n: n,
    "succ": lambda n: n + 1,
}


def _load_json(path: str):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _decode_script_move(text: str) -> str:
    # script files follow the run format, where "_" writes the empty move
    return "" if text == "_" else text


def make_strategy(spec: str, game: Game, expr: Optional[GameExpr] = None,
                  interp: Optional[Interpretation] = None, bound: int = 8) -> Strategy:
    """Build the machine a registry name denotes.

    Names: copycat, choose-left, choose-right, silent, function:<id|succ>,
    halt2accept, kolmogorov, re-switch, fsm:<file>, script:<file>,
    random:<seed>.
    """
    name, _, arg = spec.partition(":")
    if name == "copycat":
        return copycat(expr)
    if name == "choose-left":
        return choose_left()
    if name == "choose-right":
        return choose_right()
    if name == "silent":
        return silent_strategy()
    if name == "function":
        if arg not in _FUNCTIONS:
            raise UnknownStrategy(f"unknown function {arg!r}; expected one of {sorted(_FUNCTIONS)}")
        if expr is not None and not isinstance(expr, Chall):
            raise ShapeMismatch(f"function strategies play pick-then-answer games, not {type(expr).__name__}")
        return function_strategy(_FUNCTIONS[arg], name=spec)
    if name in ("halt2accept", "kolmogorov", "re-switch"):
        catalog = interp.catalog if interp is not None else None
        if catalog is None:
            raise UnknownStrategy(f"{name} needs an interpretation with a machine catalog")
        shape = {"halt2accept": Pimpl, "kolmogorov": Primpl, "re-switch": Chall}[name]
        if expr is not None and not isinstance(expr, shape):
            raise ShapeMismatch(f"{name} plays {shape.__name__} games, not {type(expr).__name__}")
        if name == "halt2accept":
            return halting_to_acceptance(catalog)
        if name == "kolmogorov":
            return kolmogorov_via_halting(catalog)
        return re_switch(halting_semidecider(catalog))
    if name == "fsm":
        return fsm_strategy(fsm_from_dict(_load_json(arg)))
    if name == "script":
        doc = _load_json(arg)
        moves = doc["moves"] if isinstance(doc, dict) else doc
        return scripted_strategy([_decode_script_move(m) for m in moves])
    if name == "random":
        try:
            seed = int(arg) if arg else 0
        except ValueError:
            raise UnknownStrategy(f"random strategy wants an integer seed, got {arg!r}")
        return random_strategy(game, bound, seed)
    raise UnknownStrategy(f"unknown machine {spec!r}")


def make_env(spec: str, game: Game, bound: int = 8) -> EnvScript:
    """Build the environment a registry name denotes.

    Names: silent, script:<file>, random, random:<seed>.  The bare
    random environment draws from the simulation seed; the seeded form
    carries its own generator.
    """
    name, _, arg = spec.partition(":")
    if name == "silent":
        return silent_env()
    if name == "script":
        doc = _load_json(arg)
        cycles = doc["cycles"] if isinstance(doc, dict) else doc
        return scripted_env([[_decode_script_move(m) for m in batch] for batch in cycles])
    if name == "random":
        if not arg:
            return random_env(game, bound)
        try:
            seed = int(arg)
        except ValueError:
            raise UnknownStrategy(f"random environment wants an integer seed, got {arg!r}")
        base = random_env(game, bound)

        def step(state, run, rng):
            own = random.Random(f"{seed}:{state}")
            _, batch = base.step(None, run, own)
            return state + 1, batch

        return EnvScript(initial=0, step=step, name=f"random[{seed}]")
    raise UnknownStrategy(f"unknown environment {spec!r}")
