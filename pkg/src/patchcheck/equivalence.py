"""Semantic equivalence of invariant atoms via canonical normal forms.

Canonicalization decides equivalence of linear comparisons over the
rationals exactly; an optional external solver hook can additionally
recognize integer-only equivalences for atom pairs whose canonical forms
differ. Without a hook configured the normalizer's verdict stands.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .errors import UnsupportedAtom
from .invariants import (
    ClassEquality,
    InvariantAtom,
    LinearComparison,
    OneOf,
    Opaque,
    Relation,
    atom_text,
    collapse_whitespace,
)

TAUTOLOGY = LinearComparison((), Relation.EQ, 0)
CONTRADICTION = LinearComparison((), Relation.NE, 0)

_DEGENERATE_TRUTH = {
    Relation.LT: lambda c: 0 < c,
    Relation.LE: lambda c: 0 <= c,
    Relation.EQ: lambda c: 0 == c,
    Relation.NE: lambda c: 0 != c,
}

_FLIP = {Relation.GE: Relation.LE, Relation.GT: Relation.LT}


def _normalize_linear(atom: LinearComparison) -> LinearComparison:
    merged: dict[str, int] = {}
    for coeff, var in atom.terms:
        merged[var] = merged.get(var, 0) + coeff
    terms = [(c, v) for v, c in sorted(merged.items()) if c != 0]
    relation = atom.relation
    constant = atom.constant

    if relation in _FLIP:
        relation = _FLIP[relation]
        terms = [(-c, v) for c, v in terms]
        constant = -constant

    if not terms:
        return TAUTOLOGY if _DEGENERATE_TRUTH[relation](constant) else CONTRADICTION

    if relation in (Relation.EQ, Relation.NE) and terms[0][0] < 0:
        terms = [(-c, v) for c, v in terms]
        constant = -constant

    divisor = 0
    for c, _ in terms:
        divisor = gcd(divisor, abs(c))
    divisor = gcd(divisor, abs(constant))
    if divisor > 1:
        terms = [(c // divisor, v) for c, v in terms]
        constant //= divisor

    return LinearComparison(tuple(terms), relation, constant)


def normalize(atom: InvariantAtom) -> InvariantAtom:
    """Idempotent canonical form; preserves the atom's satisfying assignments."""
    if isinstance(atom, LinearComparison):
        return _normalize_linear(atom)
    if isinstance(atom, OneOf):
        return OneOf(atom.expression, tuple(sorted(set(atom.values))))
    if isinstance(atom, Opaque):
        return Opaque(collapse_whitespace(atom.normalized_text))
    return atom


def in_linear_fragment(atom: InvariantAtom) -> bool:
    return isinstance(atom, LinearComparison)


@dataclass
class SolverHook:
    """Pipes an SMT-LIB query into an external command and reads the verdict.

    Any output other than a bare `sat`/`unsat` token counts as unknown, which
    falls back to the normalizer's verdict.
    """

    command: str
    timeout: float = 30.0

    def check(self, query: str) -> str:
        try:
            proc = subprocess.run(
                shlex.split(self.command),
                input=query.encode("utf-8"),
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                timeout=self.timeout,
            )
        except (OSError, subprocess.TimeoutExpired):
            return "unknown"
        for line in proc.stdout.decode("utf-8", "replace").splitlines():
            token = line.strip()
            if token in ("sat", "unsat"):
                return token
        return "unknown"


def equivalent(a: InvariantAtom, b: InvariantAtom, solver: Optional[SolverHook] = None) -> bool:
    na = normalize(a)
    nb = normalize(b)
    if na == nb:
        return True
    if solver is not None and in_linear_fragment(a) and in_linear_fragment(b):
        return solver.check(emit_equivalence_query(a, b)) == "unsat"
    return False


_SMT_RELATION = {
    Relation.LT: "<",
    Relation.LE: "<=",
    Relation.GE: ">=",
    Relation.GT: ">",
}


def _smt_int(value: int) -> str:
    return str(value) if value >= 0 else f"(- {-value})"


def _smt_formula(atom: LinearComparison) -> str:
    if not atom.terms:
        lhs = "0"
    else:
        rendered = [f"(* {_smt_int(c)} |{v}|)" for c, v in atom.terms]
        lhs = rendered[0] if len(rendered) == 1 else f"(+ {' '.join(rendered)})"
    rhs = _smt_int(atom.constant)
    if atom.relation is Relation.EQ:
        return f"(= {lhs} {rhs})"
    if atom.relation is Relation.NE:
        return f"(not (= {lhs} {rhs}))"
    return f"({_SMT_RELATION[atom.relation]} {lhs} {rhs})"


def emit_equivalence_query(a: InvariantAtom, b: InvariantAtom) -> str:
    """SMT-LIB2 text asserting the two atoms are NOT equivalent.

    `unsat` from a solver therefore means the atoms are equivalent. Pure text
    generation; never invokes anything.
    """
    if not in_linear_fragment(a) or not in_linear_fragment(b):
        raise UnsupportedAtom("solver queries cover linear comparisons only")
    assert isinstance(a, LinearComparison) and isinstance(b, LinearComparison)
    variables = sorted({v for _, v in a.terms} | {v for _, v in b.terms})
    lines = ["(set-logic QF_LIA)"]
    lines.extend(f"(declare-const |{v}| Int)" for v in variables)
    fa = _smt_formula(a)
    fb = _smt_formula(b)
    lines.append(f"(assert (not (and (=> {fa} {fb}) (=> {fb} {fa}))))")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def canonical_text(atom: InvariantAtom) -> str:
    """Stable ordering key: the rendered canonical form, tagged by kind."""
    norm = normalize(atom)
    if isinstance(norm, LinearComparison):
        tag = "lin"
    elif isinstance(norm, ClassEquality):
        tag = "cls"
    elif isinstance(norm, OneOf):
        tag = "one"
    else:
        tag = "opq"
    return f"{tag}:{atom_text(norm)}"
