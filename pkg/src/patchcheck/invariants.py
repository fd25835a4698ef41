"""Typed model of likely invariants and the grammar for single invariant lines.

The supported fragment covers linear integer comparisons over program
variables (including `orig(...)` pre-state variables), class-equality atoms,
and one-of atoms. Anything else is kept verbatim as an Opaque atom and
compared by normalized text only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Optional, Union

ORIG_MARKER = "orig$"


class PointKind(Enum):
    ENTER = "ENTER"
    EXIT = "EXIT"


@dataclass(frozen=True)
class ProgramPoint:
    """A method entry or exit location at which invariants are stated."""

    class_name: str
    method_signature: str
    kind: PointKind
    exit_index: Optional[int] = None

    def __post_init__(self):
        if not self.class_name or not self.method_signature:
            raise ValueError("program point needs a class and a method signature")
        if self.kind is PointKind.ENTER and self.exit_index is not None:
            raise ValueError("entry points carry no exit index")

    def render(self) -> str:
        suffix = self.kind.value
        if self.exit_index is not None:
            suffix += str(self.exit_index)
        return f"{self.class_name}.{self.method_signature}:::{suffix}"

    def sort_key(self):
        return (
            self.class_name,
            self.method_signature,
            self.kind.value,
            self.exit_index is not None,
            self.exit_index or 0,
        )


class Relation(Enum):
    LT = "<"
    LE = "<="
    EQ = "=="
    NE = "!="
    GE = ">="
    GT = ">"


@dataclass(frozen=True)
class LinearComparison:
    """sum(coefficient * variable) REL constant, all integer-valued.

    An empty term tuple is the degenerate form produced by cancellation
    (e.g. `x == x`); the parser itself only emits atoms whose source line
    mentions at least one variable.
    """

    terms: tuple[tuple[int, str], ...]
    relation: Relation
    constant: int

    def __post_init__(self):
        seen = set()
        for coeff, var in self.terms:
            if coeff == 0:
                raise ValueError("zero coefficients must be dropped")
            if var in seen:
                raise ValueError(f"duplicate variable {var!r}")
            seen.add(var)


@dataclass(frozen=True)
class ClassEquality:
    expression: str
    class_literal: str


@dataclass(frozen=True)
class OneOf:
    expression: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class Opaque:
    normalized_text: str


InvariantAtom = Union[LinearComparison, ClassEquality, OneOf, Opaque]


@dataclass(frozen=True)
class Invariant:
    point: ProgramPoint
    raw_text: str
    atom: InvariantAtom


def collapse_whitespace(text: str) -> str:
    return " ".join(text.split())


def atom_text(atom: InvariantAtom) -> str:
    """Deterministic rendering; re-parses to an equal atom for every variant."""
    if isinstance(atom, LinearComparison):
        if not atom.terms:
            lhs = "0"
        else:
            parts = []
            for i, (coeff, var) in enumerate(atom.terms):
                sign = "-" if coeff < 0 else ("+" if i else "")
                mag = abs(coeff)
                body = var if mag == 1 else f"{mag} * {var}"
                parts.append(f"{sign} {body}".strip() if i else f"{sign}{body}")
            lhs = " ".join(parts)
        return f"{lhs} {atom.relation.value} {atom.constant}"
    if isinstance(atom, ClassEquality):
        return f"{atom.expression}.getClass() == {atom.class_literal}.class"
    if isinstance(atom, OneOf):
        return f"{atom.expression} one of {{ {', '.join(atom.values)} }}"
    return atom.normalized_text


_IDENT = r"[A-Za-z_$][A-Za-z0-9_$]*"
_IDENT_CHAIN = rf"{_IDENT}(?:\.{_IDENT})*"

_CLASS_EQ_RE = re.compile(
    rf"^(?P<recv>{_IDENT_CHAIN})\.getClass\(\)\s*==\s*(?P<cls>{_IDENT_CHAIN})\.class$"
)
_ONE_OF_RE = re.compile(rf"^(?P<var>{_IDENT_CHAIN})\s+one of\s+\{{(?P<vals>.*)\}}$")

_TOKEN_RE = re.compile(
    rf"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<ident>{_IDENT_CHAIN})"
    r"|(?P<op><=|>=|==|!=|<|>|\+|-|\*|\(|\)))"
)

_RELATIONS = {r.value: r for r in Relation}
_MAX_DECIMALS = 6


class _LineTokens:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                if text[pos:].strip():
                    raise _OutsideFragment
                break
            pos = m.end()
            for kind in ("num", "ident", "op"):
                if m.group(kind) is not None:
                    self.tokens.append((kind, m.group(kind)))
                    break
        self.index = 0

    def peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise _OutsideFragment
        self.index += 1
        return tok


class _OutsideFragment(Exception):
    pass


def _parse_number(text: str) -> Fraction:
    if "." in text:
        decimals = len(text.split(".", 1)[1])
        if decimals > _MAX_DECIMALS:
            raise _OutsideFragment
    return Fraction(text)


def _parse_varref(tokens: _LineTokens) -> str:
    kind, value = tokens.take()
    if kind != "ident":
        raise _OutsideFragment
    if value == "orig" and tokens.peek() == ("op", "("):
        tokens.take()
        inner_kind, inner = tokens.take()
        if inner_kind != "ident" or tokens.take() != ("op", ")"):
            raise _OutsideFragment
        return ORIG_MARKER + inner
    return value


def _parse_side(tokens: _LineTokens) -> tuple[dict[str, Fraction], Fraction, set[str]]:
    """One side of a comparison: sum of signed terms."""
    coeffs: dict[str, Fraction] = {}
    constant = Fraction(0)
    mentioned: set[str] = set()
    first = True
    while True:
        tok = tokens.peek()
        if tok is None or (tok[0] == "op" and tok[1] in _RELATIONS):
            if first:
                raise _OutsideFragment
            return coeffs, constant, mentioned
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            if tok[1] == "-":
                sign = -1
            tokens.take()
        elif not first:
            raise _OutsideFragment
        first = False

        tok = tokens.peek()
        if tok is None:
            raise _OutsideFragment
        if tok[0] == "num":
            magnitude = _parse_number(tokens.take()[1])
            nxt = tokens.peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "*":
                tokens.take()
                var = _parse_varref(tokens)
            elif nxt is not None and nxt[0] == "ident":
                var = _parse_varref(tokens)
            else:
                constant += sign * magnitude
                continue
            mentioned.add(var)
            coeffs[var] = coeffs.get(var, Fraction(0)) + sign * magnitude
        elif tok[0] == "ident":
            var = _parse_varref(tokens)
            mentioned.add(var)
            coeffs[var] = coeffs.get(var, Fraction(0)) + sign
        else:
            raise _OutsideFragment


def _parse_linear(text: str) -> LinearComparison:
    tokens = _LineTokens(text)
    left_coeffs, left_const, left_vars = _parse_side(tokens)
    kind, rel_text = tokens.take()
    if kind != "op" or rel_text not in _RELATIONS:
        raise _OutsideFragment
    right_coeffs, right_const, right_vars = _parse_side(tokens)
    if tokens.peek() is not None:
        raise _OutsideFragment
    if not left_vars and not right_vars:
        raise _OutsideFragment  # pure-constant comparison: not a variable property

    coeffs = dict(left_coeffs)
    for var, c in right_coeffs.items():
        coeffs[var] = coeffs.get(var, Fraction(0)) - c
    constant = right_const - left_const

    scale = lcm(constant.denominator, *(c.denominator for c in coeffs.values())) if coeffs else constant.denominator
    terms = tuple(
        (int(c * scale), var)
        for var, c in sorted(coeffs.items())
        if c != 0
    )
    return LinearComparison(terms, _RELATIONS[rel_text], int(constant * scale))


def _split_one_of_values(body: str) -> tuple[str, ...]:
    values: list[str] = []
    current: list[str] = []
    in_string: Optional[str] = None
    for ch in body:
        if in_string:
            current.append(ch)
            if ch == in_string:
                in_string = None
        elif ch in "\"'":
            in_string = ch
            current.append(ch)
        elif ch == ",":
            values.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        values.append(tail)
    return tuple(v for v in values if v)


def parse_atom(text: str) -> InvariantAtom:
    """Parse one invariant line; lines outside the fragment become Opaque."""
    normalized = collapse_whitespace(text)
    m = _CLASS_EQ_RE.match(normalized)
    if m is not None:
        return ClassEquality(m.group("recv"), m.group("cls"))
    m = _ONE_OF_RE.match(normalized)
    if m is not None:
        values = _split_one_of_values(m.group("vals"))
        if values:
            return OneOf(m.group("var"), values)
        return Opaque(normalized)
    try:
        return _parse_linear(normalized)
    except _OutsideFragment:
        return Opaque(normalized)


def make_invariant(point: ProgramPoint, text: str) -> Invariant:
    return Invariant(point, collapse_whitespace(text), parse_atom(text))
