"""Propositional formulas over a countable set of atoms plus absurdity.

The grammar is

    X ::= atom | bot | X & X | X "|" X | X -> X

with negation ``~X`` as sugar for ``X -> bot``.  Negation is never a
constructor: parsing ``~p`` yields the implication, and the printer folds
``X -> bot`` back into ``~X``.  Formulas are immutable values with structural
equality, so evaluators are free to memoize on them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

__all__ = [
    "Formula",
    "Atom",
    "Absurdity",
    "Conj",
    "Disj",
    "Impl",
    "BOT",
    "neg",
    "is_neg",
    "FormulaSyntaxError",
    "parse_formula",
    "format_formula",
    "substitute",
    "atoms_of",
    "depth",
    "subformulas",
    "formula_to_obj",
    "formula_from_obj",
]


class Formula:
    """Base class for formula values; construct the subclasses only."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __post_init__(self) -> None:
        if not _ATOM_RE.fullmatch(self.name):
            raise ValueError(f"not an atom name: {self.name!r}")
        if self.name == "bot":
            # absurdity is a distinct constant, never a named atom
            raise ValueError("'bot' is reserved for absurdity; use Absurdity()")


@dataclass(frozen=True, slots=True)
class Absurdity(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Conj(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Disj(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Impl(Formula):
    left: Formula
    right: Formula


BOT = Absurdity()

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def neg(f: Formula) -> Formula:
    return Impl(f, BOT)


def is_neg(f: Formula) -> bool:
    return isinstance(f, Impl) and f.right == BOT


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message: str, text: str, pos: int) -> None:
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<amp>&)|(?P<bar>\|)|(?P<tilde>~)"
    r"|(?P<lpar>\()|(?P<rpar>\))|(?P<word>[A-Za-z_][A-Za-z0-9_']*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastgroup is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaSyntaxError(
                f"unexpected character {stripped[0]!r}", text, len(text) - len(stripped)
            )
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent with precedence ~ > & > | > -> and right-assoc ->."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> None:
        tok = self.take()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {what}", self.text, tok[2])

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.take()
            return Impl(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "bar":
            self.take()
            f = Disj(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "amp":
            self.take()
            f = Conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "tilde":
            self.take()
            return neg(self.unary())
        if kind == "word":
            self.take()
            return BOT if value == "bot" else Atom(value)
        if kind == "lpar":
            self.take()
            f = self.implication()
            self.expect("rpar", "')'")
            return f
        raise FormulaSyntaxError("expected a formula", self.text, pos)


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    f = parser.implication()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise FormulaSyntaxError("trailing input", text, pos)
    return f


def _prec(f: Formula) -> int:
    # 4 = atoms, bot, printed negations; 3 = &; 2 = |; 1 = ->
    if isinstance(f, (Atom, Absurdity)) or is_neg(f):
        return 4
    if isinstance(f, Conj):
        return 3
    if isinstance(f, Disj):
        return 2
    return 1


def format_formula(f: Formula) -> str:
    """Minimal-parentheses text; parse_formula(format_formula(f)) == f."""

    def wrap(g: Formula, floor: int) -> str:
        s = format_formula(g)
        return f"({s})" if _prec(g) < floor else s

    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Absurdity):
        return "bot"
    if is_neg(f):
        assert isinstance(f, Impl)
        return "~" + wrap(f.left, 4)
    if isinstance(f, Conj):
        return f"{wrap(f.left, 3)} & {wrap(f.right, 4)}"
    if isinstance(f, Disj):
        return f"{wrap(f.left, 2)} | {wrap(f.right, 3)}"
    assert isinstance(f, Impl)
    # right-associative: parenthesize an implication on the left only
    return f"{wrap(f.left, 2)} -> {format_formula(f.right)}"


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution of formulas for atoms; bot is untouched."""
    if isinstance(f, Atom):
        return mapping.get(f.name, f)
    if isinstance(f, Absurdity):
        return f
    ctor: Callable[[Formula, Formula], Formula] = type(f)  # type: ignore[assignment]
    assert isinstance(f, (Conj, Disj, Impl))
    return ctor(substitute(f.left, mapping), substitute(f.right, mapping))


def atoms_of(f: Formula) -> frozenset[str]:
    """Named atoms occurring in f; absurdity is excluded."""
    if isinstance(f, Atom):
        return frozenset({f.name})
    if isinstance(f, Absurdity):
        return frozenset()
    assert isinstance(f, (Conj, Disj, Impl))
    return atoms_of(f.left) | atoms_of(f.right)


def depth(f: Formula) -> int:
    """Connective nesting depth: atoms and bot are 0."""
    if isinstance(f, (Atom, Absurdity)):
        return 0
    assert isinstance(f, (Conj, Disj, Impl))
    return 1 + max(depth(f.left), depth(f.right))


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (Conj, Disj, Impl)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


_OPS = {"and": Conj, "or": Disj, "imp": Impl}


def formula_to_obj(f: Formula) -> object:
    """JSON-ready structure mirroring the constructors."""
    if isinstance(f, Atom):
        return {"op": "atom", "name": f.name}
    if isinstance(f, Absurdity):
        return {"op": "bot"}
    for tag, ctor in _OPS.items():
        if isinstance(f, ctor):
            return {
                "op": tag,
                "left": formula_to_obj(f.left),
                "right": formula_to_obj(f.right),
            }
    raise TypeError(f"not a formula: {f!r}")


def formula_from_obj(obj: object) -> Formula:
    if not isinstance(obj, dict) or "op" not in obj:
        raise ValueError(f"not a formula object: {obj!r}")
    op = obj["op"]
    if op == "atom":
        return Atom(obj["name"])
    if op == "bot":
        return BOT
    if op in _OPS:
        return _OPS[op](formula_from_obj(obj["left"]), formula_from_obj(obj["right"]))
    raise ValueError(f"unknown formula op: {op!r}")
