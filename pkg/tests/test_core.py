"""Run format, adjudication primitives, delays, and the static test."""
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colgame.combinators import (
    ChoiceKind,
    choice,
    choice_quant,
    elementary,
    first_mover_wins,
    parallel,
    ParallelKind,
)
from colgame.core import (
    BOT,
    TOP,
    Counterexample,
    LabeledMove,
    MoveError,
    RunFormatError,
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
from conftest import pq_interp
from colgame.formula import interpret, parse


def B(text):
    return lm(BOT, text)


def T(text):
    return lm(TOP, text)


def PQ(kind=ChoiceKind.CHAND, p=True, q=True):
    return choice(kind, elementary(p), elementary(q))


class TestRunFormat:
    def test_round_trip(self):
        run = (B("5"), T(""), B("0.1"), T("x=y"))
        assert parse_run(format_run(run)) == run

    def test_empty_move_token(self):
        assert format_run((T(""),)) == "T:_"
        assert parse_run("T:_") == (T(""),)

    def test_empty_run(self):
        assert format_run(()) == ""
        assert parse_run("") == ()
        assert parse_run("   ") == ()

    def test_bad_labels_rejected(self):
        with pytest.raises(RunFormatError):
            parse_run("X:0")
        with pytest.raises(RunFormatError):
            parse_run("T0")

    def test_literal_underscore_move_rejected(self):
        with pytest.raises(MoveError):
            lm(TOP, "_")

    def test_move_text_validation(self):
        with pytest.raises(MoveError):
            lm(BOT, "a b")
        with pytest.raises(MoveError):
            lm(BOT, "a:b")


class TestLegalityAndWinner:
    def test_empty_run_always_legal(self):
        assert legal(PQ(), ())

    def test_chooser_side(self):
        g = PQ(ChoiceKind.CHOR)
        assert legal(g, (T("0"),))
        assert not legal(g, (B("0"),))
        assert moves(g, (), BOT, 10) == set()

    def test_elementary_winners(self):
        assert winner(elementary(True), ()).winner is TOP
        assert winner(elementary(False), ()).winner is BOT
        assert not legal(elementary(True), (B("0"),))

    def test_pending_chand_won_by_top(self):
        assert winner(PQ(), ()).winner is TOP

    def test_illegal_run_lost_by_offender(self):
        g = choice_quant(ChoiceKind.CHAND, lambda n: elementary(True))
        verdict = winner(g, (T("5"),))
        assert verdict.winner is BOT
        assert verdict.offender is TOP
        assert verdict.offender_index == 0

    def test_moves_binary_choice(self):
        g = PQ()
        assert moves(g, (), BOT, 10) == {"0", "1"}
        assert moves(g, (), TOP, 10) == set()

    def test_moves_universe_truncated_at_bound(self):
        g = choice_quant(ChoiceKind.CHAND, lambda n: elementary(True))
        assert moves(g, (), BOT, 3) == {"0", "1", "2"}

    def test_replay_reports_first_offender(self):
        g = PQ()
        state, bad = replay(g, (B("0"), B("1")))
        assert bad == 1

    def test_legal_extension(self):
        g = PQ()
        assert legal_extension(g, (), B("0"))
        assert not legal_extension(g, (), B("2"))

    def test_echo_adjudication(self, echo_game):
        assert winner(echo_game, parse_run("B:5 T:5")).winner is TOP
        assert winner(echo_game, parse_run("B:5 T:4")).winner is BOT
        assert winner(echo_game, parse_run("B:5")).winner is BOT


class TestDelays:
    def test_independent_moves_commute(self):
        got = delays(parse_run("T:a B:b"), TOP, 2)
        assert got == {parse_run("T:a B:b"), parse_run("B:b T:a")}

    def test_top_move_cannot_move_left(self):
        got = delays(parse_run("B:b T:a"), TOP, 2)
        assert got == {parse_run("B:b T:a")}

    def test_empty_run(self):
        assert delays((), TOP, 0) == {()}

    def test_is_delay_examples(self):
        assert is_delay(parse_run("B:b T:a"), parse_run("T:a B:b"), TOP)
        assert not is_delay(parse_run("T:a B:b"), parse_run("B:b T:a"), TOP)

    def test_is_delay_reflexive(self):
        run = parse_run("T:a B:b T:c B:d")
        assert is_delay(run, run, TOP)
        assert is_delay(run, run, BOT)

    def test_max_len_guard(self):
        with pytest.raises(ValueError):
            delays(parse_run("T:a B:b T:c"), TOP, 2)

    def test_agreement_exhaustive_len_5(self):
        """delays() and is_delay() agree on every pair of short runs."""
        alphabet = (T("a"), B("b"))
        all_runs = [
            run
            for n in range(6)
            for run in itertools.product(alphabet, repeat=n)
        ]
        for original in all_runs:
            for player in (TOP, BOT):
                delayed_set = delays(original, player, 5)
                for candidate in all_runs:
                    assert is_delay(candidate, original, player) == (
                        candidate in delayed_set
                    ), (candidate, original, player)

    @given(
        st.lists(
            st.tuples(st.sampled_from("TB"), st.sampled_from("ab")), max_size=6
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_every_delay_preserves_subsequences(self, seq):
        run = tuple(lm(TOP if l == "T" else BOT, t) for l, t in seq)
        for player in (TOP, BOT):
            for d in delays(run, player, 6):
                assert [m for m in d if m.label is player] == [
                    m for m in run if m.label is player
                ]
                assert [m for m in d if m.label is not player] == [
                    m for m in run if m.label is not player
                ]


class TestStaticCheck:
    def test_por_negation_is_static(self):
        g = interpret(parse("P \\/ ~P").expr, pq_interp(True))
        assert static_check(g, 4, 3) is None

    def test_first_mover_wins_flagged(self):
        example = static_check(first_mover_wins(), 2, 2)
        assert isinstance(example, Counterexample)
        # the winner of the original run must lose the delayed one
        original = winner(first_mover_wins(), example.run)
        delayed = winner(first_mover_wins(), example.delayed)
        assert original.winner is example.player
        assert delayed.winner is not example.player
        assert is_delay(example.delayed, example.run, example.player)

    def test_trivial_game_static(self):
        assert static_check(elementary(True), 0, 0) is None


class TestLegalRuns:
    def test_enumeration_is_deterministic_and_prefix_closed(self):
        g = parallel(ParallelKind.PAND, PQ(), PQ())
        runs = list(legal_runs(g, 3, 2))
        assert runs == list(legal_runs(g, 3, 2))
        seen = set(runs)
        for run in runs:
            assert run[:-1] in seen or run == ()

    def test_run_equivalence_detects_mismatch(self):
        assert run_equivalence(elementary(True), elementary(True), 2, 2) is None
        diff = run_equivalence(elementary(True), elementary(False), 2, 2)
        assert diff is not None
