"""Runs, legality, winner adjudication, delays, and the static-game test.

A game is modelled behaviourally.  Positions are immutable ``GameState``
objects; a state knows which labeled moves extend it legally, who wins if
play stops here, and which moves each player has within an enumeration
bound.  Everything else in the library (combinators, simulation, the
exhaustive checkers) is built on this one protocol.

Conventions used throughout:

* ``Player.TOP`` is the machine, ``Player.BOT`` its environment.
* A move is a string of printable non-whitespace characters excluding
  ``:``.  The empty string is a valid move; in the textual run format it
  is written ``_``, so the literal one-character move ``_`` is reserved
  and rejected.
* A run is a tuple of labeled moves.  The textual format is
  whitespace-separated ``T:<move>`` / ``B:<move>`` tokens.
* An illegal run is lost by the player who made the first illegal move,
  regardless of anything that follows it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Optional, Sequence

EMPTY_MOVE_TOKEN = "_"


class Player(Enum):
    TOP = "T"
    BOT = "B"

    def opponent(self) -> "Player":
        return Player.BOT if self is Player.TOP else Player.TOP

    def __repr__(self) -> str:
        return self.name

    def __str__(self) -> str:
        return self.value


TOP = Player.TOP
BOT = Player.BOT


class MoveError(ValueError):
    """Raised for move or run text that the format cannot represent."""


class RunFormatError(MoveError):
    """Raised when textual run input cannot be parsed."""


class IllegalPosition(ValueError):
    """Raised when an operation requires a legal position and got none."""


class BudgetExceeded(RuntimeError):
    """An exhaustive check hit its configured node limit."""


def check_move_text(text: str) -> str:
    """Validate a move string, returning it unchanged.

    The empty move is fine; the literal ``_`` is reserved by the run
    format and rejected here so that formatting stays invertible.
    """
    if text == EMPTY_MOVE_TOKEN:
        raise MoveError("the one-character move '_' is reserved for the empty move")
    for ch in text:
        if ch == ":" or ch.isspace() or not ch.isprintable():
            raise MoveError(f"move contains forbidden character {ch!r}: {text!r}")
    return text


@dataclass(frozen=True)
class LabeledMove:
    label: Player
    text: str

    def flip(self) -> "LabeledMove":
        return LabeledMove(self.label.opponent(), self.text)

    def __str__(self) -> str:
        return f"{self.label.value}:{self.text or EMPTY_MOVE_TOKEN}"


Run = tuple  # tuple[LabeledMove, ...]


def lm(label: Player, text: str) -> LabeledMove:
    return LabeledMove(label, check_move_text(text))


def parse_run(text: str) -> Run:
    """Parse whitespace-separated ``T:<move>`` / ``B:<move>`` tokens."""
    moves = []
    for token in text.split():
        if len(token) < 2 or token[0] not in "TB" or token[1] != ":":
            raise RunFormatError(f"bad run token {token!r}: expected T:<move> or B:<move>")
        body = token[2:]
        if body == "":
            raise RunFormatError(f"bad run token {token!r}: empty move is written as '_'")
        move = "" if body == EMPTY_MOVE_TOKEN else body
        if ":" in move:
            raise RunFormatError(f"bad run token {token!r}: moves may not contain ':'")
        moves.append(lm(Player.TOP if token[0] == "T" else Player.BOT, move))
    return tuple(moves)


def format_run(run: Sequence[LabeledMove]) -> str:
    return " ".join(str(m) for m in run)


def is_numeral(text: str) -> bool:
    """Canonical decimal numeral: no sign, no leading zeros (except "0")."""
    if not text.isascii() or not text.isdigit():
        return False
    return text == "0" or text[0] != "0"


class GameState:
    """One position of a game.  Immutable; stepping returns a new state."""

    __slots__ = ()

    def try_move(self, move: LabeledMove) -> Optional["GameState"]:
        """The position after ``move``, or None when the move is illegal."""
        raise NotImplementedError

    def winner(self) -> Player:
        """Who wins if the (legal) play stops at this position."""
        raise NotImplementedError

    def moves(self, player: Player, bound: int) -> set:
        """Legal move texts for ``player`` whose numerals are < bound."""
        raise NotImplementedError


@dataclass(frozen=True)
class Game:
    """A game, i.e. an initial position plus an optional display name."""

    start: GameState
    name: str = ""

    def __repr__(self) -> str:
        return f"Game({self.name or self.start.__class__.__name__})"


@dataclass(frozen=True)
class Verdict:
    winner: Player
    offender: Optional[Player] = None
    offender_index: Optional[int] = None

    def __str__(self) -> str:
        if self.offender is None:
            return f"{self.winner.name} wins"
        return (
            f"{self.winner.name} wins "
            f"({self.offender.name} made the first illegal move, index {self.offender_index})"
        )


def replay(game: Game, run: Sequence[LabeledMove]):
    """Walk ``run`` from the initial position.

    Returns ``(state, None)`` when every step is legal, otherwise
    ``(last_legal_state, index_of_first_illegal_move)``.
    """
    state = game.start
    for i, move in enumerate(run):
        nxt = state.try_move(move)
        if nxt is None:
            return state, i
        state = nxt
    return state, None


def legal(game: Game, run: Sequence[LabeledMove]) -> bool:
    """Whether every prefix of ``run`` is a legal position of ``game``."""
    return replay(game, run)[1] is None


def winner(game: Game, run: Sequence[LabeledMove]) -> Verdict:
    """Adjudicate a finite run.

    A legal run is decided by the game; an illegal one is lost by the
    player who made the first illegal move, no matter what follows.
    """
    state, bad = replay(game, run)
    if bad is not None:
        offender = run[bad].label
        return Verdict(offender.opponent(), offender, bad)
    return Verdict(state.winner())


def legal_extension(game: Game, position: Sequence[LabeledMove], move: LabeledMove) -> bool:
    """Whether ``move`` legally extends the legal position ``position``."""
    state, bad = replay(game, position)
    if bad is not None:
        raise IllegalPosition(f"position is illegal at index {bad}")
    return state.try_move(move) is not None


def moves(game: Game, position: Sequence[LabeledMove], player: Player, bound: int) -> set:
    """All of ``player``'s legal moves at ``position`` within ``bound``.

    The bound restricts both the numerals appearing in a move and the
    total move length, giving a finite, exhaustively enumerable alphabet.
    Raises IllegalPosition when ``position`` is not legal.
    """
    state, bad = replay(game, position)
    if bad is not None:
        raise IllegalPosition(f"position is illegal at index {bad}")
    return {m for m in state.moves(player, bound) if len(m) <= bound}


def state_moves(state: GameState, player: Player, bound: int) -> set:
    """Bound-filtered moves for an already-replayed state."""
    return {m for m in state.moves(player, bound) if len(m) <= bound}


# ---------------------------------------------------------------------------
# Delays.
#
# An omega is a p-delay of gamma when both players make the same moves in
# the same order as in gamma, and p's moves only move rightward: whenever
# p's n-th move comes after the k-th non-p move in gamma, it still does
# in omega.


def _split(run: Sequence[LabeledMove], player: Player):
    """(p-moves, other moves, count of others before each p-move)."""
    mine, others, before = [], [], []
    for move in run:
        if move.label is player:
            mine.append(move)
            before.append(len(others))
        else:
            others.append(move)
    return mine, others, before


def is_delay(candidate: Sequence[LabeledMove], original: Sequence[LabeledMove], player: Player) -> bool:
    """Whether ``candidate`` is a ``player``-delay of ``original``."""
    mine, others, before = _split(original, player)
    c_mine, c_others, c_before = _split(candidate, player)
    if mine != c_mine or others != c_others:
        return False
    return all(cb >= b for cb, b in zip(c_before, before))


def delays(run: Sequence[LabeledMove], player: Player, max_len: int) -> set:
    """All ``player``-delays of ``run`` (finite: same length as ``run``).

    ``max_len`` guards the combinatorial blow-up; runs longer than it are
    rejected.
    """
    run = tuple(run)
    if len(run) > max_len:
        raise ValueError(f"run of length {len(run)} exceeds max_len={max_len}")
    mine, others, before = _split(run, player)
    n = len(run)
    out = set()
    for slots in itertools.combinations(range(n), len(mine)):
        # others fill the remaining slots in order; count them before each slot
        candidate_before = [slot - rank for rank, slot in enumerate(slots)]
        if any(cb < b for cb, b in zip(candidate_before, before)):
            continue
        merged: list = [None] * n
        for rank, slot in enumerate(slots):
            merged[slot] = mine[rank]
        it = iter(others)
        for i in range(n):
            if merged[i] is None:
                merged[i] = next(it)
        out.add(tuple(merged))
    return out


# ---------------------------------------------------------------------------
# Exhaustive enumeration and the static-game test.


def _labeled_options(state: GameState, bound: int) -> list:
    """Both players' bound-limited moves at ``state``, in a fixed order.

    Environment moves sort before machine moves, then by move text; the
    deterministic order is what makes "first counterexample" well defined.
    """
    options = []
    for player in (BOT, TOP):
        for text in sorted(state_moves(state, player, bound)):
            options.append(LabeledMove(player, text))
    return options


def legal_runs(game: Game, depth: int, bound: int, node_limit: Optional[int] = None) -> Iterator[Run]:
    """Depth-first enumeration of legal runs over the bounded alphabet.

    Yields every legal run of length <= depth (the empty run first), in
    lexicographic order of the per-position option lists.
    """
    budget = [node_limit if node_limit is not None else -1]

    def tick():
        if budget[0] == 0:
            raise BudgetExceeded("legal-run enumeration exceeded its node limit")
        budget[0] -= 1

    def walk(state: GameState, prefix: Run) -> Iterator[Run]:
        tick()
        yield prefix
        if len(prefix) >= depth:
            return
        for option in _labeled_options(state, bound):
            nxt = state.try_move(option)
            if nxt is not None:
                yield from walk(nxt, prefix + (option,))

    yield from walk(game.start, ())


@dataclass(frozen=True)
class Counterexample:
    """A witness that a game is not static within the explored bounds."""

    run: Run
    delayed: Run
    player: Player

    def __str__(self) -> str:
        return (
            f"run {format_run(self.run)!r} is won by {self.player.name}, but its "
            f"{self.player.name}-delay {format_run(self.delayed)!r} is not"
        )


def static_check(
    game: Game, depth: int, bound: int, node_limit: Optional[int] = None
) -> Optional[Counterexample]:
    """Search for a violation of the static property within bounds.

    For every legal run up to ``depth`` over the bounded alphabet, every
    delay of it by the run's winner must keep the same winner; delays
    falling outside the legality tree are adjudicated by the illegal-run
    rule.  Returns None when no violation exists in the explored space,
    else the first counterexample in enumeration order.
    """
    budget = node_limit if node_limit is not None else 2_000_000
    for run in legal_runs(game, depth, bound, node_limit=budget):
        # Only cross-player reorderings exist; single-player runs have no
        # proper delays at all.
        if not run or all(m.label is run[0].label for m in run):
            continue
        p = winner(game, run).winner
        for delayed in sorted(delays(run, p, depth), key=lambda r: tuple(map(str, r))):
            if delayed == run:
                continue
            budget -= len(delayed)
            if budget <= 0:
                raise BudgetExceeded("static check exceeded its node limit")
            if winner(game, delayed).winner is not p:
                return Counterexample(run, delayed, p)
    return None


# ---------------------------------------------------------------------------
# Run-level equivalence, used by the algebraic-law test suites.


@dataclass(frozen=True)
class Discrepancy:
    run: Run
    detail: str

    def __str__(self) -> str:
        return f"at {format_run(self.run)!r}: {self.detail}"


def run_equivalence(a: Game, b: Game, depth: int, bound: int) -> Optional[Discrepancy]:
    """Check that two games agree on legality and winner to ``depth``.

    Explores every run over the union of both games' bounded alphabets.
    A run that is illegal in both games is in agreement by the
    first-offender rule, whatever comes after the offending move.
    Returns the first disagreement found, or None.
    """

    def walk(sa: GameState, sb: GameState, prefix: Run) -> Optional[Discrepancy]:
        wa, wb = sa.winner(), sb.winner()
        if wa is not wb:
            return Discrepancy(prefix, f"winners differ: {wa.name} vs {wb.name}")
        if len(prefix) >= depth:
            return None
        seen = set()
        for player in (BOT, TOP):
            texts = state_moves(sa, player, bound) | state_moves(sb, player, bound)
            for text in sorted(texts):
                option = LabeledMove(player, text)
                if option in seen:
                    continue
                seen.add(option)
                na, nb = sa.try_move(option), sb.try_move(option)
                if (na is None) != (nb is None):
                    which = "first" if na is None else "second"
                    return Discrepancy(
                        prefix + (option,), f"move {str(option)!r} is illegal only in the {which} game"
                    )
                if na is not None:
                    found = walk(na, nb, prefix + (option,))
                    if found is not None:
                        return found
        return None

    return walk(a.start, b.start, ())
