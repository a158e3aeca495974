"""Formula surface syntax: parsing, rendering, and interpretation.

ASCII connectives, from loosest to tightest binding:

    ->  >-        implications (right-associative)
    sor           sequential disjunction
    sand          sequential conjunction
    \\/            parallel disjunction
    /\\            parallel conjunction
    |             machine's choice
    &             environment's choice

Prefix forms (``~``, ``prec``, ``prec[n]``, ``srec``, ``stack``,
``tau[n]``, ``all x.``, ``exi x.``) scope maximally rightward: the body
runs to the end of the enclosing group, so ``all x. P & Q`` quantifies
over the whole ``P & Q``.  Parenthesize the operand to cut the scope
short.  ``BIT``, ``T``, ``TRUE`` and ``FALSE`` are reserved constants;
any other identifier is an atom, optionally applied to a tuple of terms
(variables or numerals).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from . import combinators as comb
from .core import Game
from .toymachines import Catalog


# ---------------------------------------------------------------------------
# Terms and expression nodes.


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self) -> str:
        return str(self.value)


Term = Union[Var, Num]


@dataclass(frozen=True)
class GameExpr:
    pass


@dataclass(frozen=True)
class Atom(GameExpr):
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Elementary(GameExpr):
    truth: bool


@dataclass(frozen=True)
class Bit(GameExpr):
    pass


@dataclass(frozen=True)
class MemT(GameExpr):
    pass


@dataclass(frozen=True)
class Neg(GameExpr):
    body: GameExpr


@dataclass(frozen=True)
class Chand(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Chor(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Chall(GameExpr):
    var: str
    body: GameExpr


@dataclass(frozen=True)
class Chexists(GameExpr):
    var: str
    body: GameExpr


@dataclass(frozen=True)
class Pand(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Por(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Pimpl(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Prec(GameExpr):
    body: GameExpr


@dataclass(frozen=True)
class PrecBounded(GameExpr):
    bound: int
    body: GameExpr


@dataclass(frozen=True)
class Primpl(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Sand(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Sor(GameExpr):
    left: GameExpr
    right: GameExpr


@dataclass(frozen=True)
class Srec(GameExpr):
    body: GameExpr


@dataclass(frozen=True)
class Tau(GameExpr):
    limit: int
    body: GameExpr


@dataclass(frozen=True)
class Stack(GameExpr):
    body: GameExpr


# ---------------------------------------------------------------------------
# Errors.


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected: tuple = ()):
        self.position = position
        self.expected = expected
        hint = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"parse error at offset {position}: {message}{hint}")


class InterpretError(ValueError):
    pass


class UnboundAtom(InterpretError):
    pass


class ArityMismatch(InterpretError):
    pass


class FreeVariable(InterpretError):
    pass


# ---------------------------------------------------------------------------
# Tokenizer.

_KEYWORDS = {
    "sand", "sor", "prec", "srec", "stack", "tau", "all", "exi",
    "BIT", "T", "TRUE", "FALSE",
}
_TWO_CHAR = ("/\\", "\\/", "->", ">-")
_ONE_CHAR = "~&|()[].,"


@dataclass(frozen=True)
class _Token:
    kind: str   # sym | ident | num | kw | end
    text: str
    pos: int


def _tokenize(text: str) -> list:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        pair = text[i : i + 2]
        if pair in _TWO_CHAR:
            tokens.append(_Token("sym", pair, i))
            i += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(_Token("sym", ch, i))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(_Token("kw" if word in _KEYWORDS else "ident", word, i))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            word = text[i:j]
            if word != "0" and word.startswith("0"):
                raise ParseError(f"non-canonical numeral {word!r}", i)
            tokens.append(_Token("num", word, i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


# ---------------------------------------------------------------------------
# Parser: precedence climbing with maximal-rightward prefix scope.

_BINARY = {
    "->": (1, "right", Pimpl),
    ">-": (1, "right", Primpl),
    "sor": (2, "left", Sor),
    "sand": (3, "left", Sand),
    "\\/": (4, "left", Por),
    "/\\": (5, "left", Pand),
    "|": (6, "left", Chor),
    "&": (7, "left", Chand),
}

@dataclass
class ParseTree:
    """A parsed expression plus source spans for diagnostics."""

    expr: GameExpr
    text: str
    spans: dict = field(default_factory=dict)  # id(node) -> (start, end)

    def span_of(self, node: GameExpr) -> Optional[tuple]:
        return self.spans.get(id(node))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.spans: dict = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text:
            raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, (text,))
        return tok

    def _record(self, node: GameExpr, start: int, end: int) -> GameExpr:
        self.spans[id(node)] = (start, end)
        return node

    def parse(self) -> GameExpr:
        expr = self.expr(0, frozenset())
        tail = self.peek()
        if tail.kind != "end":
            raise ParseError(f"unexpected trailing {tail.text!r}", tail.pos)
        return expr

    def expr(self, min_prec: int, scope: frozenset) -> GameExpr:
        start = self.peek().pos
        lhs = self.operand(scope)
        while True:
            tok = self.peek()
            entry = _BINARY.get(tok.text) if tok.kind in ("sym", "kw") else None
            if entry is None or entry[0] < min_prec:
                return lhs
            self.take()
            prec, assoc, ctor = entry
            rhs = self.expr(prec if assoc == "right" else prec + 1, scope)
            lhs = self._record(ctor(lhs, rhs), start, self._end_pos())

    def _end_pos(self) -> int:
        prev = self.tokens[self.pos - 1] if self.pos else self.tokens[0]
        return prev.pos + len(prev.text)

    def _bracketed_nat(self) -> int:
        self.expect("[")
        tok = self.take()
        if tok.kind != "num":
            raise ParseError(f"got {tok.text!r}", tok.pos, ("numeral",))
        self.expect("]")
        return int(tok.text)

    def _quantifier_var(self, scope: frozenset) -> str:
        tok = self.take()
        if tok.kind != "ident":
            raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, ("variable name",))
        if tok.text in scope:
            raise ParseError(f"variable {tok.text!r} is already bound here", tok.pos)
        self.expect(".")
        return tok.text

    def operand(self, scope: frozenset) -> GameExpr:
        tok = self.take()
        start = tok.pos
        if tok.text == "(":
            inner = self.expr(0, scope)
            self.expect(")")
            return inner
        if tok.text == "~":
            return self._record(Neg(self.expr(0, scope)), start, self._end_pos())
        if tok.text == "prec":
            bound = self._bracketed_nat() if self.peek().text == "[" else None
            body = self.expr(0, scope)
            node = Prec(body) if bound is None else PrecBounded(bound, body)
            return self._record(node, start, self._end_pos())
        if tok.text == "srec":
            return self._record(Srec(self.expr(0, scope)), start, self._end_pos())
        if tok.text == "stack":
            return self._record(Stack(self.expr(0, scope)), start, self._end_pos())
        if tok.text == "tau":
            limit = self._bracketed_nat()
            return self._record(Tau(limit, self.expr(0, scope)), start, self._end_pos())
        if tok.text == "all":
            var = self._quantifier_var(scope)
            body = self.expr(0, scope | {var})
            return self._record(Chall(var, body), start, self._end_pos())
        if tok.text == "exi":
            var = self._quantifier_var(scope)
            body = self.expr(0, scope | {var})
            return self._record(Chexists(var, body), start, self._end_pos())
        if tok.text == "BIT":
            return self._record(Bit(), start, self._end_pos())
        if tok.text == "T":
            return self._record(MemT(), start, self._end_pos())
        if tok.text == "TRUE":
            return self._record(Elementary(True), start, self._end_pos())
        if tok.text == "FALSE":
            return self._record(Elementary(False), start, self._end_pos())
        if tok.kind == "ident":
            args: tuple = ()
            if self.peek().text == "(":
                self.take()
                terms = [self._term(scope)]
                while self.peek().text == ",":
                    self.take()
                    terms.append(self._term(scope))
                self.expect(")")
                args = tuple(terms)
            return self._record(Atom(tok.text, args), start, self._end_pos())
        raise ParseError(
            f"got {tok.text or 'end of input'!r}", tok.pos, ("formula",)
        )

    def _term(self, scope: frozenset) -> Term:
        tok = self.take()
        if tok.kind == "ident":
            return Var(tok.text)
        if tok.kind == "num":
            return Num(int(tok.text))
        raise ParseError(f"got {tok.text!r}", tok.pos, ("term",))


def parse(text: str) -> ParseTree:
    """Parse a formula; raises ParseError with position and expectations."""
    parser = _Parser(text)
    expr = parser.parse()
    return ParseTree(expr, text, parser.spans)


# ---------------------------------------------------------------------------
# Rendering.  parse(render(e)).expr == e for every well-formed expression.

_NODE_PREC = {
    Pimpl: 1, Primpl: 1, Sor: 2, Sand: 3, Por: 4, Pand: 5, Chor: 6, Chand: 7,
}
_BINARY_TEXT = {
    Pimpl: "->", Primpl: ">-", Sor: "sor", Sand: "sand",
    Por: "\\/", Pand: "/\\", Chor: "|", Chand: "&",
}

# Prefix scope runs to the end of the group.  The prefix body therefore
# binds loosest of all: parenthesize a prefix node anywhere more input
# would follow it, i.e. whenever it is not the group's final constituent.


def _is_prefix(e: GameExpr) -> bool:
    return isinstance(e, (Neg, Prec, PrecBounded, Srec, Stack, Tau, Chall, Chexists))


def render(expr: GameExpr) -> str:
    """Canonical text for an expression, with minimal parentheses."""

    def wrap(e: GameExpr) -> str:
        return f"({go(e, 0, False)})"

    def go(e: GameExpr, min_prec: int, tail_follows: bool) -> str:
        if isinstance(e, Atom):
            if not e.args:
                return e.name
            return f"{e.name}({','.join(str(t) for t in e.args)})"
        if isinstance(e, Elementary):
            return "TRUE" if e.truth else "FALSE"
        if isinstance(e, Bit):
            return "BIT"
        if isinstance(e, MemT):
            return "T"
        if _is_prefix(e):
            if tail_follows:
                return wrap(e)
            if isinstance(e, Neg):
                return f"~{go(e.body, 0, False)}"
            if isinstance(e, Prec):
                return f"prec {go(e.body, 0, False)}"
            if isinstance(e, PrecBounded):
                return f"prec[{e.bound}] {go(e.body, 0, False)}"
            if isinstance(e, Srec):
                return f"srec {go(e.body, 0, False)}"
            if isinstance(e, Stack):
                return f"stack {go(e.body, 0, False)}"
            if isinstance(e, Tau):
                return f"tau[{e.limit}] {go(e.body, 0, False)}"
            if isinstance(e, Chall):
                return f"all {e.var}. {go(e.body, 0, False)}"
            return f"exi {e.var}. {go(e.body, 0, False)}"
        prec = _NODE_PREC[type(e)]
        if prec < min_prec:
            return wrap(e)
        op = _BINARY_TEXT[type(e)]
        right_assoc = prec == 1
        left_min = prec + 1 if right_assoc else prec
        right_min = prec if right_assoc else prec + 1
        left = go(e.left, left_min, True)
        right = go(e.right, right_min, tail_follows)
        return f"{left} {op} {right}"

    return go(expr, 0, False)


def atom_names(expr: GameExpr) -> frozenset:
    """Every atom name occurring in the expression.

    interpret() resolves atoms under quantifiers lazily, so a binding gap
    can surface mid-play; callers that need the failure up front check the
    interpretation against this set instead.
    """
    found = set()

    def go(e: GameExpr) -> None:
        if isinstance(e, Atom):
            found.add(e.name)
        elif isinstance(e, (Neg, Prec, PrecBounded, Srec, Stack, Tau, Chall, Chexists)):
            go(e.body)
        elif hasattr(e, "left"):
            go(e.left)
            go(e.right)

    go(expr)
    return frozenset(found)


# ---------------------------------------------------------------------------
# Interpretations: atom bindings, a machine catalog, an enumeration bound.


_BUILTIN_ARITY = {"Halts": 2, "Accepts": 2, "K": 2, "Eq": 2}


@dataclass(frozen=True)
class ConstBinding:
    value: bool


@dataclass(frozen=True)
class PredicateBinding:
    """A finite truth table; argument tuples not listed are false."""

    arity: int
    rows: frozenset  # of argument tuples that hold


@dataclass(frozen=True)
class BuiltinBinding:
    name: str  # Halts | Accepts | K | Eq


Binding = Union[ConstBinding, PredicateBinding, BuiltinBinding]


@dataclass
class Interpretation:
    atoms: dict = field(default_factory=dict)  # name -> Binding
    catalog: Optional[Catalog] = None
    universe_bound: int = 8

    @staticmethod
    def from_dict(doc: dict, default_catalog: Optional[Catalog] = None) -> "Interpretation":
        atoms = {}
        for name, spec in doc.get("atoms", {}).items():
            kind = spec.get("kind")
            if kind == "const":
                atoms[name] = ConstBinding(bool(spec["value"]))
            elif kind == "predicate":
                rows = spec.get("table", [])
                arities = {len(row) - 1 for row in rows}
                if len(arities) > 1:
                    raise ArityMismatch(f"atom {name!r}: table rows of unequal width")
                arity = arities.pop() if arities else int(spec.get("arity", 1))
                holds = frozenset(
                    tuple(int(v) for v in row[:-1]) for row in rows if row[-1]
                )
                atoms[name] = PredicateBinding(arity, holds)
            elif kind == "builtin":
                builtin = spec["name"]
                if builtin not in _BUILTIN_ARITY:
                    raise InterpretError(f"unknown builtin {builtin!r}")
                atoms[name] = BuiltinBinding(builtin)
            else:
                raise InterpretError(f"atom {name!r}: unknown binding kind {kind!r}")
        catalog = default_catalog
        if doc.get("catalog"):
            catalog = Catalog.from_list(doc["catalog"])
        return Interpretation(
            atoms=atoms,
            catalog=catalog,
            universe_bound=int(doc.get("universe_bound", 8)),
        )

    def to_dict(self) -> dict:
        atoms = {}
        for name, binding in self.atoms.items():
            if isinstance(binding, ConstBinding):
                atoms[name] = {"kind": "const", "value": binding.value}
            elif isinstance(binding, PredicateBinding):
                atoms[name] = {
                    "kind": "predicate",
                    "arity": binding.arity,
                    "table": sorted([*row, True] for row in binding.rows),
                }
            else:
                atoms[name] = {"kind": "builtin", "name": binding.name}
        doc = {"atoms": atoms, "universe_bound": self.universe_bound}
        if self.catalog is not None:
            doc["catalog"] = self.catalog.to_list()
        return doc


def _eval_builtin(name: str, args: tuple, interp: Interpretation) -> bool:
    if name == "Eq":
        return args[0] == args[1]
    catalog = interp.catalog
    if catalog is None:
        raise InterpretError(f"builtin {name!r} needs a machine catalog")
    if name == "Halts":
        return catalog.halts(args[0], args[1])
    if name == "Accepts":
        return catalog.accepts(args[0], args[1])
    if name == "K":
        minimal = catalog.minimal_producer(args[1])
        return minimal is not None and args[0] == minimal
    raise InterpretError(f"unknown builtin {name!r}")


def interpret(expr: GameExpr, interp: Interpretation) -> Game:
    """Turn an expression into a game under ``interp``.

    Raises UnboundAtom, ArityMismatch or FreeVariable for ill-bound
    input; quantifier bodies are instantiated lazily per numeral.
    """

    def atom_game(e: Atom, env: dict) -> Game:
        binding = interp.atoms.get(e.name)
        if binding is None:
            raise UnboundAtom(f"atom {e.name!r} is not bound by the interpretation")
        values = []
        for term in e.args:
            if isinstance(term, Num):
                values.append(term.value)
            else:
                if term.name not in env:
                    raise FreeVariable(f"variable {term.name!r} occurs free")
                values.append(env[term.name])
        if isinstance(binding, ConstBinding):
            if values:
                raise ArityMismatch(f"atom {e.name!r} is a constant but got arguments")
            return comb.elementary(binding.value)
        if isinstance(binding, PredicateBinding):
            if len(values) != binding.arity:
                raise ArityMismatch(
                    f"atom {e.name!r} expects {binding.arity} arguments, got {len(values)}"
                )
            return comb.elementary(tuple(values) in binding.rows)
        if len(values) != _BUILTIN_ARITY[binding.name]:
            raise ArityMismatch(
                f"atom {e.name!r} expects {_BUILTIN_ARITY[binding.name]} arguments, got {len(values)}"
            )
        return comb.elementary(_eval_builtin(binding.name, tuple(values), interp))

    def go(e: GameExpr, env: dict) -> Game:
        if isinstance(e, Atom):
            return atom_game(e, env)
        if isinstance(e, Elementary):
            return comb.elementary(e.truth)
        if isinstance(e, Bit):
            return comb.bit_game()
        if isinstance(e, MemT):
            return comb.memory_game()
        if isinstance(e, Neg):
            return comb.negation(go(e.body, env))
        if isinstance(e, Chand):
            return comb.choice(comb.ChoiceKind.CHAND, go(e.left, env), go(e.right, env))
        if isinstance(e, Chor):
            return comb.choice(comb.ChoiceKind.CHOR, go(e.left, env), go(e.right, env))
        if isinstance(e, (Chall, Chexists)):
            if e.var in env:
                raise InterpretError(f"variable {e.var!r} is bound twice along a path")
            kind = comb.ChoiceKind.CHAND if isinstance(e, Chall) else comb.ChoiceKind.CHOR
            return comb.choice_quant(kind, lambda c: go(e.body, {**env, e.var: c}))
        if isinstance(e, Pand):
            return comb.parallel(comb.ParallelKind.PAND, go(e.left, env), go(e.right, env))
        if isinstance(e, Por):
            return comb.parallel(comb.ParallelKind.POR, go(e.left, env), go(e.right, env))
        if isinstance(e, Pimpl):
            return comb.pimpl(go(e.left, env), go(e.right, env))
        if isinstance(e, Prec):
            return comb.precurrence(go(e.body, env))
        if isinstance(e, PrecBounded):
            return comb.precurrence(go(e.body, env), e.bound)
        if isinstance(e, Primpl):
            return comb.primpl(go(e.left, env), go(e.right, env))
        if isinstance(e, Sand):
            return comb.sequential(comb.SequentialKind.SAND, go(e.left, env), go(e.right, env))
        if isinstance(e, Sor):
            return comb.sequential(comb.SequentialKind.SOR, go(e.left, env), go(e.right, env))
        if isinstance(e, Srec):
            return comb.srecurrence(go(e.body, env))
        if isinstance(e, Tau):
            return comb.tau(e.limit, go(e.body, env))
        if isinstance(e, Stack):
            return comb.stack(go(e.body, env))
        raise InterpretError(f"cannot interpret node {e!r}")

    game = go(expr, {})
    return Game(game.start, name=render(expr))
