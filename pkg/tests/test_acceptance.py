"""Release gate: one test per shipping criterion, each printing its own
pass/fail line with timing so a plain pytest log shows the whole gate
at a glance.  Budgets are asserted where a criterion carries one."""

import itertools
import random
import time
from contextlib import contextmanager

from conftest import generated_static_corpus, pq_interp, truthful_oracle_env

from colgame.combinators import (
    ChoiceKind,
    ParallelKind,
    SequentialKind,
    bit_game,
    choice,
    elementary,
    first_mover_wins,
    negation,
    parallel,
    pimpl,
    precurrence,
    sequential,
    srecurrence,
    tau,
)
from colgame.core import (
    BOT,
    TOP,
    Counterexample,
    delays,
    is_delay,
    legal,
    lm,
    run_equivalence,
    static_check,
    winner,
)
from colgame.formula import interpret, parse, render
from colgame.machine import (
    EnvScript,
    LosingRun,
    defeat_search,
    enumerate_state_output_echo_fsms,
    fsm_strategy,
    make_fsm,
    random_env,
    scripted_env,
    silent_env,
    simulate,
    verify_wins,
)
from colgame.strategies import make_strategy

H2A = (
    "(all x. all y. (Halts(x,y) | ~Halts(x,y))) -> "
    "all x. all y. (Accepts(x,y) | ~Accepts(x,y))"
)
KOLM = "(all x. all y. (Halts(x,y) | ~Halts(x,y))) >- all t. exi z. K(z,t)"
RESW = "all x. ((~Halts(x,0)) sor Halts(x,0))"
ECHO = "all x. exi y. Eq(y,x)"


@contextmanager
def gate(capsys, label: str, budget=None):
    """Time a criterion body and print one [PASS]/[FAIL] line for it."""
    t0 = time.monotonic()
    ok = False
    try:
        yield
        elapsed = time.monotonic() - t0
        if budget is not None:
            assert elapsed < budget, f"{label}: {elapsed:.1f}s over its {budget:.0f}s budget"
        ok = True
    finally:
        elapsed = time.monotonic() - t0
        with capsys.disabled():
            print(f"[{'PASS' if ok else 'FAIL'}] {label} ({elapsed:.1f}s)")


def test_validity_witness(capsys):
    with gate(capsys, "validity witness", budget=10.0):
        tree = parse("P \\/ ~P")
        for truth in (True, False):
            interp = pq_interp(truth)
            game = interpret(tree.expr, interp)
            machine = make_strategy("copycat", game, expr=tree.expr, interp=interp)
            assert verify_wins(game, machine, 4, 3) is None, f"P={truth}"


def test_invalidity_witness(capsys):
    with gate(capsys, "invalidity witness", budget=1.0):
        tree = parse("P | ~P")
        for spec, truth in [("choose-left", False), ("choose-right", True), ("silent", True)]:
            interp = pq_interp(truth)
            game = interpret(tree.expr, interp)
            machine = make_strategy(spec, game, expr=tree.expr, interp=interp)
            found = verify_wins(game, machine, 4, 3)
            assert isinstance(found, LosingRun), f"{spec} under P={truth}"


def test_static_suite(capsys):
    with gate(capsys, "static suite", budget=60.0):
        interp = pq_interp(True, False)
        corpus = generated_static_corpus()
        assert len(corpus) >= 200
        for expr in corpus:
            found = static_check(interpret(expr, interp), 4, 3)
            assert found is None, f"{render(expr)}: {found}"

        fm = first_mover_wins()
        found = static_check(fm, 2, 2)
        assert isinstance(found, Counterexample)
        assert found.run and found.delayed and found.player in (TOP, BOT)
        assert is_delay(found.delayed, found.run, found.player)
        assert winner(fm, found.run).winner is found.player
        assert winner(fm, found.delayed).winner is not found.player


def _law_battery():
    true, false = elementary(True), elementary(False)
    return [
        true,
        false,
        choice(ChoiceKind.CHAND, true, false),
        choice(ChoiceKind.CHOR, false, true),
        bit_game(),
        sequential(SequentialKind.SAND, choice(ChoiceKind.CHAND, true, false), false),
        parallel(ParallelKind.PAND, true, choice(ChoiceKind.CHOR, false, true)),
    ]


def test_algebraic_laws(capsys):
    with gate(capsys, "algebraic laws"):
        battery = _law_battery()
        discrepancies = []
        for g in battery:
            d = run_equivalence(g, negation(negation(g)), 4, 3)
            if d is not None:
                discrepancies.append(("dneg", g.name, d))
        for g, h in itertools.product(battery, battery):
            pairs = [
                ("par-demorgan",
                 negation(parallel(ParallelKind.PAND, g, h)),
                 parallel(ParallelKind.POR, negation(g), negation(h))),
                ("seq-demorgan",
                 sequential(SequentialKind.SOR, g, h),
                 negation(sequential(SequentialKind.SAND, negation(g), negation(h)))),
                ("pimpl-def",
                 pimpl(g, h),
                 parallel(ParallelKind.POR, negation(g), h)),
            ]
            for law, a, b in pairs:
                d = run_equivalence(a, b, 4, 3)
                if d is not None:
                    discrepancies.append((law, a.name, d))
        assert discrepancies == []


def _pick_then_oracle(first_move: str, catalog) -> EnvScript:
    """Script one opening move, then answer halting queries truthfully."""
    oracle = truthful_oracle_env(catalog)

    def step(state, run, rng):
        picked, inner = state
        if not picked:
            return (True, inner), [first_move]
        inner2, batch = oracle.step(inner, run, rng)
        return (True, inner2), batch

    return EnvScript(initial=(False, oracle.initial), step=step, name="pick+oracle")


def test_reduction_strategies(capsys, catalog, std_interp):
    with gate(capsys, "reduction strategies", budget=120.0):
        for text, spec, depth, bound in [
            (H2A, "halt2accept", 6, 10),
            (KOLM, "kolmogorov", 6, 6),
            (RESW, "re-switch", 6, 10),
        ]:
            tree = parse(text)
            game = interpret(tree.expr, std_interp)
            machine = make_strategy(spec, game, expr=tree.expr, interp=std_interp)
            assert verify_wins(game, machine, depth, bound) is None, spec

        # The description scanner must name the least program for every
        # value the catalog can print.
        tree = parse(KOLM)
        game = interpret(tree.expr, std_interp)
        for m in sorted(catalog.outputs()):
            machine = make_strategy("kolmogorov", game, expr=tree.expr, interp=std_interp)
            result = simulate(game, machine, _pick_then_oracle(f"1.{m}", catalog), 200)
            assert result.verdict.winner is TOP, m
            assert result.run[-1].text == f"1.{catalog.minimal_producer(m)}", m


def _bit_server():
    states = ["w", "r0", "r1"]
    alphabet = [(BOT, "0"), (BOT, "1"), (BOT, "_"), (BOT, "s")]
    rules = {
        ("w", (BOT, "0")): ("r0", None),
        ("w", (BOT, "1")): ("r1", None),
        ("w", (BOT, "s")): ("w", None),
        ("r0", (BOT, "_")): ("r0", "0"),
        ("r1", (BOT, "_")): ("r1", "1"),
        ("r0", (BOT, "s")): ("w", None),
        ("r1", (BOT, "s")): ("w", None),
        ("r0", (BOT, "0")): ("r0", None),
        ("r0", (BOT, "1")): ("r1", None),
        ("r1", (BOT, "0")): ("r0", None),
        ("r1", (BOT, "1")): ("r1", None),
    }
    return make_fsm(states, "w", alphabet, rules)


def test_subturing_separation(capsys, echo_game, std_interp):
    with gate(capsys, "sub-Turing separation", budget=120.0):
        server = fsm_strategy(_bit_server())
        assert len(_bit_server().states) <= 4
        assert verify_wins(bit_game(), server, 6, 4) is None
        assert verify_wins(srecurrence(bit_game()), server, 6, 4) is None

        specs = list(enumerate_state_output_echo_fsms(4, 5))
        assert len(specs) == 18906
        for spec in specs:
            script = defeat_search(echo_game, fsm_strategy(spec), 2, 5)
            assert script is not None, spec

        tree = parse(ECHO)
        unrestricted = make_strategy(
            "function:id", echo_game, expr=tree.expr, interp=std_interp
        )
        assert verify_wins(echo_game, unrestricted, 2, 5) is None


def test_tau_prec_bounds(capsys):
    with gate(capsys, "tau/prec bounds"):
        rng = random.Random(20260816)

        base = srecurrence(bit_game())
        capped = tau(3, base)
        texts = ["0", "1", "", "s", "2", "x"]
        for _ in range(1000):
            run = tuple(
                lm(rng.choice((TOP, BOT)), rng.choice(texts))
                for _ in range(rng.randint(0, 6))
            )
            assert legal(capped, run) == (legal(base, run) and len(run) <= 3)

        body = choice(ChoiceKind.CHAND, elementary(True), elementary(False))
        open_copies = precurrence(body)
        two_copies = precurrence(body, 2)
        prec_texts = [f"{i}.{t}" for i in range(4) for t in ("0", "1", "x")] + ["junk"]
        for _ in range(1000):
            run = tuple(
                lm(rng.choice((TOP, BOT)), rng.choice(prec_texts))
                for _ in range(rng.randint(0, 5))
            )
            indices_ok = all(
                not m.text.partition(".")[2] or not m.text.partition(".")[0].isdigit()
                or int(m.text.partition(".")[0]) < 2
                for m in run
            )
            assert legal(two_copies, run) == (legal(open_copies, run) and indices_ok)


def test_delay_combinatorics(capsys):
    with gate(capsys, "delay combinatorics"):
        alphabet = [lm(TOP, "a"), lm(BOT, "b")]
        for n in range(6):
            for run in itertools.product(alphabet, repeat=n):
                for player in (TOP, BOT):
                    enumerated = delays(run, player, n)
                    for cand in itertools.product(alphabet, repeat=n):
                        assert (cand in enumerated) == is_delay(cand, run, player)


def test_replay_integrity(capsys, echo_game, catalog, std_interp):
    with gate(capsys, "replay integrity"):
        cases = []

        tree = parse(ECHO)
        ident = make_strategy("function:id", echo_game, expr=tree.expr, interp=std_interp)
        for n in range(8):
            cases.append((echo_game, ident, scripted_env([[str(n)]])))
        cases.append((echo_game, ident, silent_env()))

        par = parse("P \\/ ~P")
        for truth in (True, False):
            interp = pq_interp(truth)
            game = interpret(par.expr, interp)
            mirror = make_strategy("copycat", game, expr=par.expr, interp=interp)
            cases.append((game, mirror, silent_env()))
            cases.append((game, mirror, scripted_env([["0.0"]])))
            cases.append((game, mirror, random_env(game, 3)))

        cho = parse("P | ~P")
        for spec in ("choose-left", "choose-right", "silent"):
            for truth in (True, False):
                interp = pq_interp(truth)
                game = interpret(cho.expr, interp)
                cases.append(
                    (game, make_strategy(spec, game, expr=cho.expr, interp=interp),
                     silent_env())
                )

        server = fsm_strategy(_bit_server())
        for script in [[["1"], [""]], [["0"], [""]], [["1"]]]:
            cases.append((bit_game(), server, scripted_env(script)))
        for script in [[["1"], [""], ["s"], ["0"], [""]], [["s"], ["s"]],
                       [["0"], [""], ["s"]]]:
            cases.append((srecurrence(bit_game()), server, scripted_env(script)))

        h2a = parse(H2A)
        h2a_game = interpret(h2a.expr, std_interp)
        for script in [[["1.0"], ["1.3"], [], ["0.0"]], [["1.1"], ["1.0"], [], ["0.1"]],
                       [["1.77"], ["1.0"]]]:
            machine = make_strategy("halt2accept", h2a_game, expr=h2a.expr, interp=std_interp)
            cases.append((h2a_game, machine, scripted_env(script)))

        kolm = parse(KOLM)
        kolm_game = interpret(kolm.expr, std_interp)
        for m in (0, 3):
            machine = make_strategy("kolmogorov", kolm_game, expr=kolm.expr, interp=std_interp)
            cases.append((kolm_game, machine, _pick_then_oracle(f"1.{m}", catalog)))

        resw = parse(RESW)
        resw_game = interpret(resw.expr, std_interp)
        for x in (0, 1, 12):
            machine = make_strategy("re-switch", resw_game, expr=resw.expr, interp=std_interp)
            cases.append((resw_game, machine, scripted_env([[str(x)]])))

        fm = first_mover_wins()
        cases.append((fm, make_strategy("silent", fm), random_env(fm, 2)))

        capped = tau(3, srecurrence(bit_game()))
        for script in [[["1"], [""]], [["s"], ["1"], [""]]]:
            cases.append((capped, server, scripted_env(script)))

        for seed in range(8):
            game = interpret(cho.expr, pq_interp(bool(seed % 2)))
            cases.append(
                (game, make_strategy(f"random:{seed}", game), random_env(game, 3))
            )
        for seed in range(4):
            game = srecurrence(bit_game())
            cases.append(
                (game, make_strategy(f"random:{seed}", game), random_env(game, 3))
            )

        assert len(cases) >= 50
        for i, (game, machine, env) in enumerate(cases):
            result = simulate(game, machine, env, 200, seed=i)
            assert winner(game, result.run) == result.verdict, (i, game.name)
