"""Correct/error specifications and the two overfitting rules.

The semantic stage never answers "correct": its negative outcome is
Inconclusive, which the pipeline resolves with the syntactic stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .equivalence import SolverHook, equivalent, in_linear_fragment, normalize, canonical_text
from .corpus import PointMap
from .invariants import Invariant, ProgramPoint


class SpecKind(Enum):
    CORRECT = "correct"
    ERROR = "error"


class Rule(Enum):
    OVERFITTING_1 = "Overfitting1"
    OVERFITTING_2 = "Overfitting2"


class Decision(Enum):
    OVERFITTING = "overfitting"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Specification:
    kind: SpecKind
    items: dict[ProgramPoint, frozenset[Invariant]]


@dataclass(frozen=True)
class SemanticVerdict:
    decision: Decision
    fired_rules: frozenset[Rule]
    witnesses: tuple[tuple[Rule, ProgramPoint, Invariant], ...]


class _PointIndex:
    """Per-point lookup by canonical atom, with an optional solver escape hatch."""

    def __init__(self, point_map: PointMap, solver: Optional[SolverHook]):
        self.solver = solver
        self.by_point: dict[ProgramPoint, dict] = {}
        for point, invs in point_map.items():
            index = self.by_point.setdefault(point, {})
            for inv in invs:
                index.setdefault(normalize(inv.atom), inv)

    def has_equivalent(self, point: ProgramPoint, inv: Invariant) -> bool:
        index = self.by_point.get(point)
        if index is None:
            return False
        if normalize(inv.atom) in index:
            return True
        if self.solver is not None and in_linear_fragment(inv.atom):
            return any(
                in_linear_fragment(other.atom)
                and equivalent(inv.atom, other.atom, self.solver)
                for other in index.values()
            )
        return False


def build_correct_spec(
    passing_buggy: PointMap,
    passing_ground_truth: PointMap,
    solver: Optional[SolverHook] = None,
) -> Specification:
    """Equivalence-aware intersection at identical program points."""
    ground_truth = _PointIndex(passing_ground_truth, solver)
    items: dict[ProgramPoint, frozenset[Invariant]] = {}
    for point, invs in passing_buggy.items():
        if point not in passing_ground_truth:
            continue
        kept = frozenset(
            inv for inv in invs if ground_truth.has_equivalent(point, inv)
        )
        if kept:
            items[point] = kept
    return Specification(SpecKind.CORRECT, items)


def build_error_spec(
    failing_buggy: PointMap,
    failing_ground_truth: PointMap,
    solver: Optional[SolverHook] = None,
) -> Specification:
    """Buggy failing-trace invariants with no ground-truth counterpart."""
    ground_truth = _PointIndex(failing_ground_truth, solver)
    items: dict[ProgramPoint, frozenset[Invariant]] = {}
    for point, invs in failing_buggy.items():
        kept = frozenset(
            inv for inv in invs if not ground_truth.has_equivalent(point, inv)
        )
        if kept:
            items[point] = kept
    return Specification(SpecKind.ERROR, items)


def _witness_key(entry: tuple[Rule, ProgramPoint, Invariant]):
    rule, point, inv = entry
    return (rule.value, point.sort_key(), canonical_text(inv.atom), inv.raw_text)


def classify_semantic(
    spec_c: Specification,
    spec_e: Specification,
    patched_passing: PointMap,
    patched_failing: PointMap,
    solver: Optional[SolverHook] = None,
) -> SemanticVerdict:
    """Apply both overfitting rules and report every witness, in stable order."""
    if spec_c.kind is not SpecKind.CORRECT or spec_e.kind is not SpecKind.ERROR:
        raise ValueError("specification kinds are swapped")

    witnesses: list[tuple[Rule, ProgramPoint, Invariant]] = []

    passing = _PointIndex(patched_passing, solver)
    for point, invs in spec_c.items.items():
        for inv in invs:
            if not passing.has_equivalent(point, inv):
                witnesses.append((Rule.OVERFITTING_1, point, inv))

    failing = _PointIndex(patched_failing, solver)
    for point, invs in spec_e.items.items():
        for inv in invs:
            if failing.has_equivalent(point, inv):
                witnesses.append((Rule.OVERFITTING_2, point, inv))

    witnesses.sort(key=_witness_key)
    fired = frozenset(rule for rule, _, _ in witnesses)
    decision = Decision.OVERFITTING if witnesses else Decision.INCONCLUSIVE
    return SemanticVerdict(decision, fired, tuple(witnesses))
