"""Grammar, rendering, and interpretation of game expressions."""
import random

import pytest

from colgame.core import BOT, TOP, legal, parse_run, winner
from colgame.formula import (
    Atom,
    Bit,
    Chall,
    Chand,
    Chexists,
    Chor,
    Elementary,
    Interpretation,
    InterpretError,
    MemT,
    Neg,
    Num,
    Pand,
    ParseError,
    Pimpl,
    Por,
    Prec,
    PrecBounded,
    Primpl,
    Sand,
    Sor,
    Srec,
    Stack,
    Tau,
    UnboundAtom,
    Var,
    interpret,
    parse,
    render,
)
from conftest import pq_interp, random_expr


class TestParsing:
    def test_atoms_and_literals(self):
        assert parse("P").expr == Atom("P")
        assert parse("TRUE").expr == Elementary(True)
        assert parse("FALSE").expr == Elementary(False)
        assert parse("BIT").expr == Bit()
        assert parse("T").expr == MemT()

    def test_atom_arguments(self):
        assert parse("Halts(x, 0)").expr == Atom("Halts", (Var("x"), Num(0)))

    def test_precedence_chain(self):
        # & binds tighter than |, which binds tighter than /\ ...
        e = parse("P & Q | R").expr
        assert e == Chor(Chand(Atom("P"), Atom("Q")), Atom("R"))
        e = parse("P | Q /\\ R").expr
        assert e == Pand(Chor(Atom("P"), Atom("Q")), Atom("R"))
        e = parse("P /\\ Q \\/ R").expr
        assert e == Por(Pand(Atom("P"), Atom("Q")), Atom("R"))
        e = parse("P \\/ Q sand R").expr
        assert e == Sand(Por(Atom("P"), Atom("Q")), Atom("R"))
        e = parse("P sand Q sor R").expr
        assert e == Sor(Sand(Atom("P"), Atom("Q")), Atom("R"))

    def test_implications_right_associative(self):
        e = parse("A -> B -> C").expr
        assert e == Pimpl(Atom("A"), Pimpl(Atom("B"), Atom("C")))
        e = parse("A >- B -> C").expr
        assert e == Primpl(Atom("A"), Pimpl(Atom("B"), Atom("C")))

    def test_prefix_operators_scope_rightward(self):
        e = parse("~P sor Q").expr
        assert e == Neg(Sor(Atom("P"), Atom("Q")))
        e = parse("all z. Halts(z, 0) >- P").expr
        assert e == Chall("z", Primpl(Atom("Halts", (Var("z"), Num(0))), Atom("P")))
        e = parse("prec[2] srec BIT").expr
        assert e == PrecBounded(2, Srec(Bit()))

    def test_parenthesized_tight_scope(self):
        e = parse("(~P) sor Q").expr
        assert e == Sor(Neg(Atom("P")), Atom("Q"))

    def test_halting_problem_shape(self):
        e = parse("all x. all y. (Halts(x,y) | ~Halts(x,y))").expr
        h = Atom("Halts", (Var("x"), Var("y")))
        assert e == Chall("x", Chall("y", Chor(h, Neg(h))))

    def test_quantifier_tokens(self):
        assert parse("exi y. Eq(y, x)").expr == Chexists("y", Atom("Eq", (Var("y"), Var("x"))))

    def test_stack_tau_spelling(self):
        assert parse("stack BIT").expr == Stack(Bit())
        assert parse("tau[3] P").expr == Tau(3, Atom("P"))

    def test_parse_errors_carry_position(self):
        for text in ["", "P &", "(P", "P \\/", "all . P", "tau P", "prec[x] P", "P Q"]:
            with pytest.raises(ParseError):
                parse(text)
        err = None
        try:
            parse("P & ")
        except ParseError as exc:
            err = exc
        assert err is not None and err.position is not None


class TestRendering:
    def test_frozen_renderings(self):
        assert render(Primpl(Atom("A"), Atom("B"))) == "A >- B"
        assert render(PrecBounded(2, Srec(Bit()))) == "prec[2] srec BIT"
        # trailing prefix node needs no parens: scope runs to end of group
        assert render(Por(Atom("P"), Neg(Atom("P")))) == "P \\/ ~P"
        assert render(Neg(Por(Atom("P"), Atom("Q")))) == "~P \\/ Q"
        # prefix node followed by more input must be parenthesized
        assert render(Sor(Neg(Atom("P")), Atom("Q"))) == "(~P) sor Q"

    def test_roundtrip_pinned(self):
        texts = [
            "P | (~P)",
            "(all x. all y. (Halts(x,y) | ~Halts(x,y))) >- all t. exi z. K(z,t)",
            "all x. ((~Halts(x,0)) sor Halts(x,0))",
            "all x. exi y. Eq(y,x)",
            "tau[2] (P & Q)",
            "stack (BIT \\/ T)",
        ]
        for text in texts:
            tree = parse(text)
            assert parse(render(tree.expr)).expr == tree.expr

    def test_roundtrip_random(self):
        rng = random.Random(99)
        for _ in range(1000):
            expr = random_expr(rng, depth=4)
            assert parse(render(expr)).expr == expr


class TestInterpretation:
    def test_elementary_atom(self):
        g = interpret(parse("P | ~P").expr, pq_interp(True))
        assert winner(g, parse_run("T:0")).winner is TOP
        assert winner(g, parse_run("T:1")).winner is BOT

    def test_echo_game(self, std_interp):
        g = interpret(parse("all x. exi y. Eq(y,x)").expr, std_interp)
        assert winner(g, parse_run("B:5 T:5")).winner is TOP
        assert winner(g, parse_run("B:5 T:4")).winner is BOT

    def test_unbound_atom(self):
        with pytest.raises(UnboundAtom):
            interpret(parse("P").expr, Interpretation(atoms={}))

    def test_arity_mismatch(self, std_interp):
        with pytest.raises(InterpretError):
            interpret(parse("Eq(0)").expr, std_interp)

    def test_free_variable(self, std_interp):
        with pytest.raises(InterpretError):
            interpret(parse("Eq(y, 0)").expr, std_interp)

    def test_rebinding_rejected_by_parser(self):
        with pytest.raises(ParseError):
            parse("all x. all x. Eq(x, x)")

    def test_rebinding_rejected_by_interpreter(self, std_interp):
        # hand-built tree bypasses the parser guard; quantifier bodies are
        # lazy, so the error surfaces when the outer choice is resolved
        expr = Chall("x", Chall("x", Atom("Eq", (Var("x"), Var("x")))))
        g = interpret(expr, std_interp)
        with pytest.raises(InterpretError):
            legal(g, parse_run("B:0"))

    def test_catalog_backed_builtins(self, std_interp):
        # machine 0 accepts everything, machine 1 never halts
        g = interpret(parse("Halts(0, 3)").expr, std_interp)
        assert winner(g, parse_run("")).winner is TOP
        g = interpret(parse("Halts(1, 0)").expr, std_interp)
        assert winner(g, parse_run("")).winner is BOT
        g = interpret(parse("Accepts(9, 0)").expr, std_interp)
        assert winner(g, parse_run("")).winner is TOP
        g = interpret(parse("Accepts(9, 1)").expr, std_interp)
        assert winner(g, parse_run("")).winner is BOT

    def test_minimal_producer_builtin(self, std_interp):
        g = interpret(parse("K(2, 0)").expr, std_interp)
        assert winner(g, parse_run("")).winner is TOP
        g = interpret(parse("K(4, 0)").expr, std_interp)
        assert winner(g, parse_run("")).winner is BOT

    def test_numeral_choices_enumerable(self, std_interp):
        from colgame.core import moves

        g = interpret(parse("all x. TRUE").expr, std_interp)
        assert moves(g, parse_run(""), BOT, 8) == {str(i) for i in range(8)}

    def test_game_named_by_rendering(self, std_interp):
        g = interpret(parse("all x. exi y. Eq(y,x)").expr, std_interp)
        assert g.name == "all x. exi y. Eq(y,x)"


class TestInterpretationDocs:
    def test_dict_roundtrip(self, std_interp):
        doc = std_interp.to_dict()
        back = Interpretation.from_dict(doc)
        assert back.to_dict() == doc

    def test_predicate_table(self):
        doc = {
            "atoms": {
                "Graph": {
                    "kind": "predicate",
                    "arity": 2,
                    "table": [[n, n + 1, True] for n in range(8)],
                }
            },
            "universe_bound": 8,
        }
        interp = Interpretation.from_dict(doc)
        g = interpret(parse("all x. exi y. Graph(x,y)").expr, interp)
        assert winner(g, parse_run("B:3 T:4")).winner is TOP
        assert winner(g, parse_run("B:3 T:3")).winner is BOT

    def test_const_binding(self):
        interp = Interpretation.from_dict(
            {"atoms": {"P": {"kind": "const", "value": True}}}
        )
        g = interpret(parse("P").expr, interp)
        assert winner(g, parse_run("")).winner is TOP
