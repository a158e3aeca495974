"""Game constructors: the operator algebra over behavioural games.

Move addressing conventions, chosen so that textual runs stay flat:

* choice moves are the bare tokens ``0`` / ``1`` (or a numeral for the
  quantifier forms); afterwards play continues as the chosen component
  with unprefixed moves;
* parallel subgames prefix their moves with ``0.`` / ``1.``, recurrence
  copies with ``<index>.``;
* a prefixed empty move is written with the ``_`` placeholder ("4._" is
  the empty move addressed to copy 4), and the placeholder is decoded
  exactly once, at the prefix-stripping boundary;
* sequential games use the bare switch token ``s``, stack games ``+``
  and ``-``, with unprefixed inner moves.

The control tokens can collide with inner moves once games nest (the
switch of an inner sequential game looks like the outer switch).  The
rule here is innermost-first: a control token is consumed by the active
inner component whenever it is legal there, and only otherwise acts at
the outer level.  Nested sequential games therefore flatten the way the
associativity of sequential conjunction suggests: each further ``s``
advances one more component.
"""
from __future__ import annotations

from enum import Enum
from typing import Callable, Optional

from .core import (
    BOT,
    TOP,
    Game,
    GameState,
    LabeledMove,
    Player,
    is_numeral,
)

# If a switching move were made infinitely many times in a legal run of
# an unbounded branch recurrence, the winner would be TOP by fiat.  All
# runs this library adjudicates are finite, so the rule is recorded here
# but never executed.
INFINITE_SWITCH_WINNER = TOP


class ChoiceKind(Enum):
    CHAND = "chand"  # chooser: environment
    CHOR = "chor"    # chooser: machine


class ParallelKind(Enum):
    PAND = "pand"
    POR = "por"


class SequentialKind(Enum):
    SAND = "sand"  # switcher: environment
    SOR = "sor"    # switcher: machine


def _encode_sub(text: str) -> str:
    return text if text else "_"


def _decode_sub(text: str) -> str:
    return "" if text == "_" else text


def _split_prefix(text: str):
    """Split "<head>.<rest>" at the first dot, or return None."""
    i = text.find(".")
    if i < 0:
        return None
    return text[:i], text[i + 1 :]


# ---------------------------------------------------------------------------
# Elementary games.


class _ElementaryState(GameState):
    __slots__ = ("truth",)

    def __init__(self, truth: bool):
        self.truth = truth

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        return None

    def winner(self) -> Player:
        return TOP if self.truth else BOT

    def moves(self, player: Player, bound: int) -> set:
        return set()


def elementary(truth: bool) -> Game:
    """A game with no moves, won by TOP iff ``truth`` holds."""
    return Game(_ElementaryState(bool(truth)), name="true" if truth else "false")


# ---------------------------------------------------------------------------
# Negation: swap the players' roles.


class _NegState(GameState):
    __slots__ = ("inner",)

    def __init__(self, inner: GameState):
        self.inner = inner

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        nxt = self.inner.try_move(move.flip())
        return None if nxt is None else _NegState(nxt)

    def winner(self) -> Player:
        return self.inner.winner().opponent()

    def moves(self, player: Player, bound: int) -> set:
        return self.inner.moves(player.opponent(), bound)


def negation(game: Game) -> Game:
    return Game(_NegState(game.start), name=f"neg({game.name})")


# ---------------------------------------------------------------------------
# Choice games.  An unresolved choice is lost by its chooser.


class _ChoiceState(GameState):
    __slots__ = ("chooser", "left", "right")

    def __init__(self, chooser: Player, left: GameState, right: GameState):
        self.chooser = chooser
        self.left = left
        self.right = right

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        if move.label is not self.chooser:
            return None
        if move.text == "0":
            return self.left
        if move.text == "1":
            return self.right
        return None

    def winner(self) -> Player:
        return self.chooser.opponent()

    def moves(self, player: Player, bound: int) -> set:
        if player is not self.chooser:
            return set()
        return {t for t in ("0", "1") if int(t) < bound}


def choice(kind: ChoiceKind, left: Game, right: Game) -> Game:
    """Binary choice: ``0`` picks the left component, ``1`` the right.

    The environment chooses in CHAND, the machine in CHOR; play then
    continues as the chosen component.
    """
    chooser = BOT if kind is ChoiceKind.CHAND else TOP
    return Game(
        _ChoiceState(chooser, left.start, right.start),
        name=f"{kind.value}({left.name},{right.name})",
    )


class _ChoiceQuantState(GameState):
    __slots__ = ("chooser", "body")

    def __init__(self, chooser: Player, body: Callable[[int], GameState]):
        self.chooser = chooser
        self.body = body

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        if move.label is not self.chooser or not is_numeral(move.text):
            return None
        return self.body(int(move.text))

    def winner(self) -> Player:
        return self.chooser.opponent()

    def moves(self, player: Player, bound: int) -> set:
        if player is not self.chooser:
            return set()
        return {str(i) for i in range(bound)}


def choice_quant(kind: ChoiceKind, body: Callable[[int], Game]) -> Game:
    """Choice over all numerals: the chooser names c, play becomes body(c)."""
    chooser = BOT if kind is ChoiceKind.CHAND else TOP
    cache: dict = {}

    def start_of(value: int) -> GameState:
        if value not in cache:
            cache[value] = body(value).start
        return cache[value]

    return Game(_ChoiceQuantState(chooser, start_of), name=f"{kind.value}-quant")


# ---------------------------------------------------------------------------
# Parallel games: interleaved subruns, components addressed by 0. / 1.


class _ParallelState(GameState):
    __slots__ = ("kind", "left", "right")

    def __init__(self, kind: ParallelKind, left: GameState, right: GameState):
        self.kind = kind
        self.left = left
        self.right = right

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        parts = _split_prefix(move.text)
        if parts is None:
            return None
        head, rest = parts
        sub = LabeledMove(move.label, _decode_sub(rest))
        if head == "0":
            nxt = self.left.try_move(sub)
            return None if nxt is None else _ParallelState(self.kind, nxt, self.right)
        if head == "1":
            nxt = self.right.try_move(sub)
            return None if nxt is None else _ParallelState(self.kind, self.left, nxt)
        return None

    def winner(self) -> Player:
        left_top = self.left.winner() is TOP
        right_top = self.right.winner() is TOP
        if self.kind is ParallelKind.PAND:
            return TOP if (left_top and right_top) else BOT
        return TOP if (left_top or right_top) else BOT

    def moves(self, player: Player, bound: int) -> set:
        out = {f"0.{_encode_sub(t)}" for t in self.left.moves(player, bound)}
        out |= {f"1.{_encode_sub(t)}" for t in self.right.moves(player, bound)}
        return out


def parallel(kind: ParallelKind, left: Game, right: Game) -> Game:
    """Both components played concurrently in interleaved subruns."""
    return Game(
        _ParallelState(kind, left.start, right.start),
        name=f"{kind.value}({left.name},{right.name})",
    )


def pimpl(antecedent: Game, consequent: Game) -> Game:
    """Parallel implication, by definition neg(antecedent) por consequent."""
    g = parallel(ParallelKind.POR, negation(antecedent), consequent)
    return Game(g.start, name=f"pimpl({antecedent.name},{consequent.name})")


# ---------------------------------------------------------------------------
# Parallel recurrence: one copy per numeral index, all played at once.


class _PrecurrenceState(GameState):
    __slots__ = ("base", "copies", "bound_n")

    def __init__(self, base: GameState, copies: tuple, bound_n: Optional[int]):
        self.base = base          # pristine initial state of the underlying game
        self.copies = copies      # sorted tuple of (index, state)
        self.bound_n = bound_n    # None means one copy per numeral

    def _copy_state(self, index: int) -> GameState:
        for i, state in self.copies:
            if i == index:
                return state
        return self.base

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        parts = _split_prefix(move.text)
        if parts is None or not is_numeral(parts[0]):
            return None
        index = int(parts[0])
        if self.bound_n is not None and index >= self.bound_n:
            return None
        nxt = self._copy_state(index).try_move(LabeledMove(move.label, _decode_sub(parts[1])))
        if nxt is None:
            return None
        updated = tuple(sorted({**dict(self.copies), index: nxt}.items()))
        return _PrecurrenceState(self.base, updated, self.bound_n)

    def winner(self) -> Player:
        if any(state.winner() is not TOP for _, state in self.copies):
            return BOT
        untouched_exist = self.bound_n is None or len(self.copies) < self.bound_n
        if untouched_exist and self.base.winner() is not TOP:
            return BOT
        return TOP

    def moves(self, player: Player, bound: int) -> set:
        limit = bound if self.bound_n is None else min(bound, self.bound_n)
        out = set()
        for index in range(limit):
            for t in self._copy_state(index).moves(player, bound):
                out.add(f"{index}.{_encode_sub(t)}")
        return out


def precurrence(game: Game, bound: Optional[int] = None) -> Game:
    """Parallel recurrence: play any number of copies of ``game`` at once.

    Moves carry a decimal copy-index prefix.  With ``bound`` given, only
    indices below it are legal, which makes the game a finite parallel
    conjunction; without it, untouched copies always remain, so winning
    also requires the underlying game's empty position to be TOP-won.
    """
    if bound is not None and bound < 0:
        raise ValueError("bound must be a natural number")
    suffix = "" if bound is None else f"[{bound}]"
    return Game(
        _PrecurrenceState(game.start, (), bound),
        name=f"prec{suffix}({game.name})",
    )


def primpl(antecedent: Game, consequent: Game) -> Game:
    """Recurrence implication: precurrence(antecedent) pimpl consequent."""
    g = pimpl(precurrence(antecedent), consequent)
    return Game(g.start, name=f"primpl({antecedent.name},{consequent.name})")


# ---------------------------------------------------------------------------
# Sequential games: one active component; the switcher may advance once.


class _SequentialState(GameState):
    __slots__ = ("switcher", "first", "second", "switched")

    def __init__(self, switcher: Player, first: GameState, second: GameState, switched: bool):
        self.switcher = switcher
        self.first = first
        self.second = second
        self.switched = switched

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        if move.label is self.switcher:
            # The switcher's own switch count picks its component.  Its
            # `s` is always the outermost unused switch (control-first):
            # capture must not depend on the components' inner state,
            # which the opponent can change.
            if self.switched:
                nxt = self.second.try_move(move)
                if nxt is not None:
                    return _SequentialState(self.switcher, self.first, nxt, True)
                return None
            if move.text == "s":
                return _SequentialState(self.switcher, self.first, self.second, True)
            nxt = self.first.try_move(move)
            if nxt is not None:
                return _SequentialState(self.switcher, nxt, self.second, False)
            return None
        # Non-switcher moves go to the oldest component that accepts them;
        # the abandoned component keeps absorbing late moves so that a
        # reply overtaken by the switch stays legal.  The second component
        # opens only once the switch has been made.
        nxt = self.first.try_move(move)
        if nxt is not None:
            return _SequentialState(self.switcher, nxt, self.second, self.switched)
        if self.switched:
            nxt = self.second.try_move(move)
            if nxt is not None:
                return _SequentialState(self.switcher, self.first, nxt, True)
        return None

    def winner(self) -> Player:
        return (self.second if self.switched else self.first).winner()

    def moves(self, player: Player, bound: int) -> set:
        if player is self.switcher:
            out = set((self.second if self.switched else self.first).moves(player, bound))
            if not self.switched:
                out.add("s")
            return out
        out = set(self.first.moves(player, bound))
        if self.switched:
            out |= self.second.moves(player, bound)
        return out


def sequential(kind: SequentialKind, left: Game, right: Game) -> Game:
    """Play starts in the left component; the switcher may move it on.

    The environment owns the switch in SAND, the machine in SOR.  Only
    the component that is active when the run stops is adjudicated, but
    the left component stays open to the non-switcher even after the
    switch: a reply that the switch overtook is absorbed there rather
    than rejected, which is what keeps these games static.
    """
    switcher = BOT if kind is SequentialKind.SAND else TOP
    return Game(
        _SequentialState(switcher, left.start, right.start, False),
        name=f"{kind.value}({left.name},{right.name})",
    )


class _SrecurrenceState(GameState):
    __slots__ = ("base", "copies")

    def __init__(self, base: GameState, copies: tuple):
        self.base = base
        self.copies = copies  # every copy started so far, oldest first; never empty

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        if move.label is BOT:
            # The restarter plays the newest copy.  Its `s` always starts
            # a fresh copy (control-first): capture must not depend on the
            # copy's inner state, which the opponent can change.
            if move.text == "s":
                return _SrecurrenceState(self.base, self.copies + (self.base,))
            nxt = self.copies[-1].try_move(move)
            if nxt is not None:
                return _SrecurrenceState(self.base, self.copies[:-1] + (nxt,))
            return None
        # Machine moves go to the oldest copy that accepts them, abandoned
        # copies included: an answer overtaken by a restart stays legal.
        for i, copy in enumerate(self.copies):
            nxt = copy.try_move(move)
            if nxt is not None:
                return _SrecurrenceState(
                    self.base, self.copies[:i] + (nxt,) + self.copies[i + 1 :]
                )
        return None

    def winner(self) -> Player:
        return self.copies[-1].winner()

    def moves(self, player: Player, bound: int) -> set:
        if player is BOT:
            out = set(self.copies[-1].moves(player, bound))
            out.add("s")
            return out
        out: set = set()
        for copy in self.copies:
            out |= copy.moves(player, bound)
        return out


def srecurrence(game: Game) -> Game:
    """Sequential recurrence: the environment may restart at any time.

    Each environment switch abandons the current copy for a fresh one;
    only the copy that is active when the run stops is adjudicated.
    Abandoned copies still absorb late machine moves, so a restart never
    turns an in-flight reply illegal.  (On the infinite-switch fiat for
    endless runs see INFINITE_SWITCH_WINNER.)
    """
    return Game(_SrecurrenceState(game.start, (game.start,)), name=f"srec({game.name})")


# ---------------------------------------------------------------------------
# Stack recurrence: copies pushed and popped by the environment.


class _StackState(GameState):
    __slots__ = ("base", "copies", "live")

    def __init__(self, base: GameState, copies: tuple, live: tuple):
        self.base = base
        self.copies = copies  # every copy ever pushed, in creation order
        self.live = live  # indices into copies, bottom first; never empty

    def _with_copy(self, index: int, state: GameState) -> "_StackState":
        return _StackState(
            self.base, self.copies[:index] + (state,) + self.copies[index + 1 :], self.live
        )

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        if move.label is BOT:
            # The environment plays the live top.  Its `+`/`-` always
            # push/pop this stack (control-first): capture must not
            # depend on the copy's inner state, which the opponent can
            # change.  `-` on the bottom copy is illegal.
            if move.text == "+":
                return _StackState(
                    self.base, self.copies + (self.base,), self.live + (len(self.copies),)
                )
            if move.text == "-":
                if len(self.live) == 1:
                    return None
                return _StackState(self.base, self.copies, self.live[:-1])
            top = self.live[-1]
            nxt = self.copies[top].try_move(move)
            if nxt is not None:
                return self._with_copy(top, nxt)
            return None
        # Machine moves go to the oldest copy that accepts them, popped
        # copies included: an answer overtaken by a pop stays legal.
        for i, st in enumerate(self.copies):
            nxt = st.try_move(move)
            if nxt is not None:
                return self._with_copy(i, nxt)
        return None

    def winner(self) -> Player:
        # Popped copies are discarded; every never-popped copy must be
        # TOP-won.
        return TOP if all(self.copies[i].winner() is TOP for i in self.live) else BOT

    def moves(self, player: Player, bound: int) -> set:
        if player is BOT:
            out = set(self.copies[self.live[-1]].moves(player, bound))
            out.add("+")
            if len(self.live) > 1:
                out.add("-")
            return out
        out: set = set()
        for st in self.copies:
            out |= st.moves(player, bound)
        return out


def stack(game: Game) -> Game:
    """Stack-style use of copies of ``game``.

    ``+`` (environment) suspends the current copy under a fresh one;
    ``-`` abandons the top copy and resumes the one beneath, and is
    illegal on the bottom copy.  Unprefixed environment moves address
    the top copy; machine moves go to the oldest copy that accepts
    them, so a pop never turns an in-flight reply illegal.  Popped
    copies are discarded from adjudication; every never-popped copy
    must be TOP-won.
    """
    return Game(_StackState(game.start, (game.start,), (0,)), name=f"stack({game.name})")


# ---------------------------------------------------------------------------
# tau: a ceiling on the total number of moves, counting both players.


class _TauState(GameState):
    __slots__ = ("remaining", "inner")

    def __init__(self, remaining: int, inner: GameState):
        self.remaining = remaining
        self.inner = inner

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        if self.remaining <= 0:
            return None
        nxt = self.inner.try_move(move)
        return None if nxt is None else _TauState(self.remaining - 1, nxt)

    def winner(self) -> Player:
        return self.inner.winner()

    def moves(self, player: Player, bound: int) -> set:
        if self.remaining <= 0:
            return set()
        return self.inner.moves(player, bound)


def tau(limit: int, game: Game) -> Game:
    """Allow at most ``limit`` moves in total; the (limit+1)-th is illegal."""
    if limit < 0:
        raise ValueError("limit must be a natural number")
    return Game(_TauState(limit, game.start), name=f"tau[{limit}]({game.name})")


# ---------------------------------------------------------------------------
# The one-bit storage game and the memory resource built from it.


class _BitState(GameState):
    # stage: 0 nothing written, 1 written, 2 read requested, 3 answered
    __slots__ = ("stage", "bit")

    def __init__(self, stage: int, bit: Optional[str]):
        self.stage = stage
        self.bit = bit

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        if self.stage == 0 and move.label is BOT and move.text in ("0", "1"):
            return _BitState(1, move.text)
        if self.stage == 1 and move.label is BOT and move.text == "":
            return _BitState(2, self.bit)
        if self.stage == 2 and move.label is TOP and move.text in ("0", "1"):
            return _BitState(3, self.bit if move.text == self.bit else None)
        return None

    def winner(self) -> Player:
        # With no unanswered read request TOP has kept its promise; an
        # answered request is won iff the echoed bit matches.
        if self.stage == 2:
            return BOT
        if self.stage == 3:
            return TOP if self.bit is not None else BOT
        return TOP

    def moves(self, player: Player, bound: int) -> set:
        if self.stage == 0 and player is BOT:
            return {t for t in ("0", "1") if int(t) < bound}
        if self.stage == 1 and player is BOT:
            return {""}
        if self.stage == 2 and player is TOP:
            return {t for t in ("0", "1") if int(t) < bound}
        return set()


def bit_game() -> Game:
    """Write-once one-bit storage.

    The environment writes 0 or 1, later requests a read with the empty
    move, and the machine must return the written bit.  A requested but
    unanswered read is lost by the machine; a wrong answer likewise.
    """
    return Game(_BitState(0, None), name="BIT")


def memory_game() -> Game:
    """Unbounded rewritable memory: precurrence(srecurrence(bit_game()))."""
    g = precurrence(srecurrence(bit_game()))
    return Game(g.start, name="T")


# ---------------------------------------------------------------------------
# The canonical non-static game, used to exercise the static checker.


class _FirstMoverState(GameState):
    __slots__ = ("first",)

    def __init__(self, first: Optional[Player]):
        self.first = first

    def try_move(self, move: LabeledMove) -> Optional[GameState]:
        return self if self.first is not None else _FirstMoverState(move.label)

    def winner(self) -> Player:
        # Nobody has moved: the contest of speed has not started, and the
        # machine has nothing to answer for.
        return self.first if self.first is not None else TOP

    def moves(self, player: Player, bound: int) -> set:
        return {str(i) for i in range(bound)}


def first_mover_wins() -> Game:
    """Every move is legal; whoever moves first wins.

    A pure contest of speed: the outcome depends on timing rather than
    content, which is exactly what the static property forbids.
    """
    return Game(_FirstMoverState(None), name="first-mover-wins")
