"""Shared fixtures: interpretations, games, and a seeded expression generator."""
import random

import pytest

from colgame.formula import (
    Atom,
    BuiltinBinding,
    Chall,
    Chand,
    Chexists,
    Chor,
    ConstBinding,
    Elementary,
    Interpretation,
    Neg,
    Pand,
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
    interpret,
    parse,
)
from colgame.toymachines import default_catalog


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def std_interp(catalog):
    return Interpretation(
        atoms={
            "Eq": BuiltinBinding("Eq"),
            "Halts": BuiltinBinding("Halts"),
            "Accepts": BuiltinBinding("Accepts"),
            "K": BuiltinBinding("K"),
        },
        catalog=catalog,
    )


@pytest.fixture(scope="session")
def echo_game(std_interp):
    return interpret(parse("all x. exi y. Eq(y,x)").expr, std_interp)


def pq_interp(p: bool, q: bool = True) -> Interpretation:
    return Interpretation(atoms={"P": ConstBinding(p), "Q": ConstBinding(q)})


_LEAVES = [Atom("P"), Atom("Q"), Elementary(True), Elementary(False)]
_UNARY = [Neg, Prec, Srec, Stack, lambda b: PrecBounded(2, b), lambda b: Tau(3, b)]
_BINARY = [Chand, Chor, Pand, Por, Pimpl, Primpl, Sand, Sor]


def random_expr(rng: random.Random, depth: int, scope: frozenset = frozenset()):
    """A random expression over elementary atoms; every operator reachable.

    Quantified bodies never mention the bound variable (atoms here take
    no arguments); the quantifier still contributes its numeral-choice
    game structure.
    """
    if depth <= 0 or rng.random() < 0.3:
        return rng.choice(_LEAVES)
    roll = rng.random()
    free = [v for v in ("x", "y") if v not in scope]
    if roll >= 0.92 and free:
        var = rng.choice(free)
        quant = rng.choice([Chall, Chexists])
        return quant(var, random_expr(rng, depth - 1, scope | {var}))
    if roll < 0.35:
        return rng.choice(_UNARY)(random_expr(rng, depth - 1, scope))
    op = rng.choice(_BINARY)
    return op(random_expr(rng, depth - 1, scope), random_expr(rng, depth - 1, scope))


def generated_static_corpus(count: int = 220, seed: int = 20240817):
    """The deterministic expression corpus the static sweep runs over."""
    rng = random.Random(seed)
    return [random_expr(rng, rng.randint(1, 4)) for _ in range(count)]


def truthful_oracle_env(catalog):
    """Answers halting queries about catalog machines, honestly.

    Watches for the machine's second numeral commitment inside an
    antecedent copy ("0.<i>." twice) and replies halts/doesn't-halt for
    machine i on input 0.  Each copy is answered once.
    """
    from colgame.core import TOP
    from colgame.machine import EnvScript

    def step(answered, run, rng):
        by_copy = {}
        for move in run:
            if move.label is TOP and move.text.startswith("0."):
                copy = move.text[2:].split(".", 1)[0]
                by_copy[copy] = by_copy.get(copy, 0) + 1
        batch = []
        for copy, count in sorted(by_copy.items(), key=lambda kv: int(kv[0])):
            if count >= 2 and copy not in answered:
                verdict = "0" if catalog.halts(int(copy), 0) else "1"
                batch.append(f"0.{copy}.{verdict}")
                answered = answered | {copy}
        return answered, batch

    return EnvScript(initial=frozenset(), step=step, name="truthful-oracle")
