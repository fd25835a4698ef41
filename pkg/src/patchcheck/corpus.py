"""Invariant dump files and the six-slot corpus that feeds the classifier.

Dump format: records separated by a line of at least 40 '=' characters.
The first line of a record is `<class>.<method>(<params>):::ENTER` or
`:::EXIT` optionally followed by digits; every following non-empty line is
one invariant. UTF-8, LF or CRLF.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .equivalence import canonical_text, normalize
from .errors import EmptyInput, MalformedHeader
from .invariants import Invariant, PointKind, ProgramPoint, make_invariant

SEPARATOR = "=" * 75
_SEPARATOR_RE = re.compile(r"^={40,}$")
_HEADER_RE = re.compile(r"^(?P<sig>[^\s].*\)):::(?:(?P<enter>ENTER)|EXIT(?P<idx>\d*))$")

PointMap = dict[ProgramPoint, frozenset[Invariant]]


class Variant(Enum):
    BUGGY = "buggy"
    GROUND_TRUTH = "groundtruth"
    PATCHED = "patched"


class Partition(Enum):
    PASSING = "passing"
    FAILING = "failing"


SLOTS: tuple[tuple[Variant, Partition], ...] = tuple(
    (variant, partition) for variant in Variant for partition in Partition
)


def parse_point_header(line: str) -> ProgramPoint:
    m = _HEADER_RE.match(line)
    if m is None:
        raise ValueError(line)
    sig = m.group("sig")
    paren = sig.index("(")
    dot = sig.rfind(".", 0, paren)
    if dot <= 0:
        raise ValueError(line)
    class_name = sig[:dot]
    method_signature = sig[dot + 1 :]
    if m.group("enter"):
        return ProgramPoint(class_name, method_signature, PointKind.ENTER)
    idx = m.group("idx")
    return ProgramPoint(
        class_name, method_signature, PointKind.EXIT, int(idx) if idx else None
    )


def _dedup(invariants: list[Invariant]) -> frozenset[Invariant]:
    """Keep the first invariant per canonical atom (file order)."""
    by_key: dict = {}
    for inv in invariants:
        key = normalize(inv.atom)
        if key not in by_key:
            by_key[key] = inv
    return frozenset(by_key.values())


def parse_invariant_file(text: str) -> PointMap:
    """Parse a dump into a map from program point to its invariant set."""
    lines = text.replace("\r\n", "\n").split("\n")
    records: list[tuple[int, list[str]]] = []
    current: list[tuple[int, str]] = []
    for line_no, line in enumerate(lines, start=1):
        if _SEPARATOR_RE.match(line.strip()):
            if current:
                records.append((current[0][0], [l for _, l in current]))
                current = []
        elif line.strip():
            current.append((line_no, line.strip()))
    if current:
        records.append((current[0][0], [l for _, l in current]))
    if not records:
        raise EmptyInput("no invariant records found")

    collected: dict[ProgramPoint, list[Invariant]] = {}
    for header_line_no, record in records:
        try:
            point = parse_point_header(record[0])
        except ValueError:
            raise MalformedHeader(header_line_no, record[0]) from None
        bucket = collected.setdefault(point, [])
        bucket.extend(make_invariant(point, line) for line in record[1:])
    return {point: _dedup(invs) for point, invs in collected.items()}


def _invariant_sort_key(inv: Invariant) -> tuple[str, str]:
    return (canonical_text(inv.atom), inv.raw_text)


def serialize_point_map(point_map: PointMap) -> str:
    out: list[str] = []
    for point in sorted(point_map, key=ProgramPoint.sort_key):
        out.append(SEPARATOR)
        out.append(point.render())
        for inv in sorted(point_map[point], key=_invariant_sort_key):
            out.append(inv.raw_text)
    return "\n".join(out) + "\n" if out else ""


@dataclass
class InvariantCorpus:
    """Invariant sets per (program variant, trace partition); all six slots exist.

    Treated as immutable after construction; safe for concurrent reads.
    """

    entries: dict[tuple[Variant, Partition], PointMap] = field(default_factory=dict)

    def __post_init__(self):
        for slot in SLOTS:
            self.entries.setdefault(slot, {})
        unknown = set(self.entries) - set(SLOTS)
        if unknown:
            raise ValueError(f"unknown corpus slots: {unknown}")

    def slot(self, variant: Variant, partition: Partition) -> PointMap:
        return self.entries[(variant, partition)]

    def canonical_view(self):
        """Per-slot {point: frozenset(canonical atoms)}; the equality basis."""
        return {
            slot: {
                point: frozenset(normalize(inv.atom) for inv in invs)
                for point, invs in point_map.items()
            }
            for slot, point_map in self.entries.items()
        }

    def equals(self, other: "InvariantCorpus") -> bool:
        return self.canonical_view() == other.canonical_view()


_CORPUS_HEADER = "# invariant corpus"
_SLOT_LINE_RE = re.compile(r"^## (?P<variant>\w+) (?P<partition>\w+)$")


def serialize_corpus(corpus: InvariantCorpus) -> str:
    """Deterministic text form; empty corpus yields a header-only document."""
    parts = [_CORPUS_HEADER]
    for variant, partition in SLOTS:
        parts.append(f"## {variant.value} {partition.value}")
        body = serialize_point_map(corpus.slot(variant, partition))
        if body:
            parts.append(body.rstrip("\n"))
    return "\n".join(parts) + "\n"


def parse_corpus(text: str) -> InvariantCorpus:
    lines = text.replace("\r\n", "\n").split("\n")
    if not lines or lines[0].strip() != _CORPUS_HEADER:
        raise EmptyInput("missing corpus header")
    entries: dict[tuple[Variant, Partition], PointMap] = {}
    slot: tuple[Variant, Partition] | None = None
    body: list[str] = []

    def flush():
        if slot is not None:
            joined = "\n".join(body)
            entries[slot] = parse_invariant_file(joined) if joined.strip() else {}

    for line in lines[1:]:
        m = _SLOT_LINE_RE.match(line.strip())
        if m is not None:
            flush()
            slot = (Variant(m.group("variant")), Partition(m.group("partition")))
            body = []
        else:
            body.append(line)
    flush()
    return InvariantCorpus(entries)


def filter_by_methods(point_map: PointMap, methods: set[tuple[str, str]]) -> PointMap:
    """Retain exactly the points whose (class, signature) is in `methods`."""
    return {
        point: invs
        for point, invs in point_map.items()
        if (point.class_name, point.method_signature) in methods
    }


def split_method_ref(ref: str) -> tuple[str, str]:
    """'a.b.C.f(int, long)' -> ('a.b.C', 'f(int, long)')."""
    paren = ref.index("(")
    dot = ref.rfind(".", 0, paren)
    if dot <= 0:
        raise ValueError(f"method reference needs a class prefix: {ref!r}")
    return ref[:dot], ref[dot + 1 :]
