import itertools
import random

import pytest

from oracles import enumeration_equivalent, eval_linear
from patchcheck.equivalence import (
    SolverHook,
    canonical_text,
    emit_equivalence_query,
    equivalent,
    normalize,
)
from patchcheck.errors import UnsupportedAtom
from patchcheck.invariants import (
    LinearComparison,
    Opaque,
    OneOf,
    Relation,
    parse_atom,
)

VARS = ("a", "b", "c")


def random_linear(rng: random.Random, max_vars: int = 3) -> LinearComparison:
    n_terms = rng.randint(1, max_vars)
    variables = rng.sample(VARS[:max_vars], n_terms)
    terms = tuple(
        (rng.choice([-4, -3, -2, -1, 1, 2, 3, 4]), var) for var in sorted(variables)
    )
    relation = rng.choice(list(Relation))
    return LinearComparison(terms, relation, rng.randint(-4, 4))


def test_flipped_comparison_shares_canonical_form():
    a = parse_atom("a >= b")
    b = parse_atom("b <= a")
    assert normalize(a) == normalize(b)
    assert normalize(a) == LinearComparison(((-1, "a"), (1, "b")), Relation.LE, 0)
    assert equivalent(a, b)
    assert enumeration_equivalent(a, b)


def test_self_equality_normalizes_to_tautology():
    assert normalize(parse_atom("x == x")) == LinearComparison((), Relation.EQ, 0)
    assert normalize(parse_atom("x - x >= 5")) == LinearComparison((), Relation.NE, 0)


def test_gcd_division():
    atom = parse_atom("2x - 2y == 0")
    assert normalize(atom) == LinearComparison(((1, "x"), (-1, "y")), Relation.EQ, 0)
    assert equivalent(atom, parse_atom("x - y == 0")) == enumeration_equivalent(
        atom, parse_atom("x - y == 0")
    )


def test_strictness_matters():
    assert not equivalent(parse_atom("x > 0"), parse_atom("x >= 0"))
    assert not enumeration_equivalent(parse_atom("x > 0"), parse_atom("x >= 0"))


def test_equality_orientation_is_canonical():
    assert equivalent(parse_atom("x - y == 0"), parse_atom("y == x"))
    assert enumeration_equivalent(parse_atom("x - y == 0"), parse_atom("y == x"))


def test_rational_semantics_distinguishes_integer_tightening():
    # x >= 4 and x > 3 agree on every integer but differ at rationals in (3, 4)
    assert not equivalent(parse_atom("x >= 4"), parse_atom("x > 3"))
    assert not enumeration_equivalent(parse_atom("x >= 4"), parse_atom("x > 3"))


def test_normalize_is_idempotent_and_semantics_preserving():
    rng = random.Random(7)
    for _ in range(300):
        atom = random_linear(rng)
        norm = normalize(atom)
        assert normalize(norm) == norm
        variables = sorted({v for _, v in atom.terms})
        for values in itertools.product(range(-3, 4), repeat=len(variables)):
            point = dict(zip(variables, values))
            assert eval_linear(atom, point) == eval_linear(norm, point)


def test_equivalent_is_an_equivalence_relation():
    rng = random.Random(11)
    atoms = [random_linear(rng) for _ in range(60)]
    for atom in atoms:
        assert equivalent(atom, atom)
    for a, b in itertools.combinations(atoms, 2):
        assert equivalent(a, b) == equivalent(b, a)
    for a, b, c in itertools.combinations(atoms[:25], 3):
        if equivalent(a, b) and equivalent(b, c):
            assert equivalent(a, c)


def test_cross_kind_atoms_never_equivalent():
    linear = parse_atom("x >= 0")
    assert not equivalent(linear, Opaque("x >= 0"))
    assert not equivalent(Opaque("m one of { 1 }"), OneOf("m", ("1",)))


def test_one_of_normalization_sorts_and_dedups():
    assert normalize(OneOf("m", ("3", "1", "3"))) == OneOf("m", ("1", "3"))
    assert equivalent(OneOf("m", ("2", "1")), OneOf("m", ("1", "2", "2")))


def test_opaque_normalization_collapses_whitespace():
    assert normalize(Opaque("a   ==>    b")) == Opaque("a ==> b")


def test_query_for_flipped_pair():
    query = emit_equivalence_query(parse_atom("a >= b"), parse_atom("b <= a"))
    assert query.startswith("(set-logic QF_LIA)")
    assert "(declare-const |a| Int)" in query
    assert "(declare-const |b| Int)" in query
    assert query.rstrip().endswith("(check-sat)")
    assert "(assert (not (and (=> " in query


def test_query_identical_atoms_repeats_the_formula():
    atom = parse_atom("x > 0")
    query = emit_equivalence_query(atom, atom)
    assertion = next(l for l in query.splitlines() if l.startswith("(assert"))
    formula = "(> (* 1 |x|) 0)"
    assert assertion.count(formula) == 4


def test_query_rejects_non_linear_atoms():
    with pytest.raises(UnsupportedAtom):
        emit_equivalence_query(parse_atom("x >= 0"), Opaque("weird"))
    with pytest.raises(UnsupportedAtom):
        emit_equivalence_query(OneOf("m", ("1",)), parse_atom("x >= 0"))


def test_solver_hook_upgrades_and_falls_back():
    a = parse_atom("x >= 4")
    b = parse_atom("x > 3")
    assert not equivalent(a, b)
    assert equivalent(a, b, solver=SolverHook("echo unsat"))
    assert not equivalent(a, b, solver=SolverHook("echo sat"))
    assert not equivalent(a, b, solver=SolverHook("echo flurble"))
    assert not equivalent(a, b, solver=SolverHook("definitely-not-a-command-xyz"))
    # hook is never consulted when canonical forms already match
    assert equivalent(parse_atom("a >= b"), parse_atom("b <= a"), solver=SolverHook("echo sat"))


def test_canonical_text_is_stable_and_kind_tagged():
    assert canonical_text(parse_atom("a >= b")) == canonical_text(parse_atom("b <= a"))
    assert canonical_text(parse_atom("x >= 0")).startswith("lin:")
    assert canonical_text(Opaque("zzz")).startswith("opq:")


def test_normalizer_matches_enumeration_oracle_on_random_pairs():
    rng = random.Random(13)
    for _ in range(500):
        a = random_linear(rng)
        b = random_linear(rng)
        got = equivalent(a, b)
        expected = enumeration_equivalent(a, b)
        if got != expected:
            expected = enumeration_equivalent(a, b, extent=10)
        assert got == expected, f"{a} vs {b}"
