"""Exact membership in the span of 4T (and optionally 1T) relations.

Rows are kept in echelon form keyed by their leading column, each with
leading coefficient 1.  A vector lies in the span exactly when reducing its
leading entry against the stored rows eventually empties it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .diagram import CHORD, Diagram, LinComb
from .relations import GuardExceeded, enumerate_chord_diagrams, relation_generators, stu_expand

MAX_SPAN_DEGREE = 5


class SpanError(ValueError):
    pass


def _reduce(row: dict, pivots: dict) -> dict:
    """Subtract pivot rows until the leading column is not a pivot."""
    row = dict(row)
    while row:
        lead = min(row)
        prow = pivots.get(lead)
        if prow is None:
            return row
        f = row[lead]
        for c, v in prow.items():
            nv = row.get(c, 0) - f * v
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    return row


@dataclass
class SpanBasis:
    degree: int
    p: int
    kinds: tuple[str, ...]
    columns: list[Diagram]
    pivots: dict[int, dict[int, Fraction]] = field(default_factory=dict)
    n_relations: int = 0
    build_seconds: float = 0.0

    def __post_init__(self):
        self.index = {d: i for i, d in enumerate(self.columns)}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def quotient_dim(self) -> int:
        return len(self.columns) - self.rank

    def add(self, row: dict) -> bool:
        """Insert a row; True when it raised the rank."""
        row = _reduce(row, self.pivots)
        if not row:
            return False
        lead = min(row)
        f = row[lead]
        self.pivots[lead] = {c: Fraction(v) / f for c, v in row.items()}
        return True

    def vector(self, v: LinComb) -> dict:
        out = {}
        for d, c in v.items():
            if d.kind != CHORD or d.p != self.p or d.degree != self.degree:
                raise SpanError(f"{d!r} is not a degree-{self.degree} chord diagram on {self.p} strings")
            out[self.index[d]] = Fraction(c)
        return out

    def residual(self, v: LinComb) -> dict:
        return _reduce(self.vector(v), self.pivots)

    def reduce_fully(self) -> None:
        """Back-substitute so every pivot column appears in one row only."""
        for lead in sorted(self.pivots, reverse=True):
            row = self.pivots[lead]
            changed = True
            while changed:
                changed = False
                for c in sorted(row):
                    if c != lead and c in self.pivots:
                        f = row[c]
                        for k, v in self.pivots[c].items():
                            nv = row.get(k, 0) - f * v
                            if nv:
                                row[k] = nv
                            else:
                                row.pop(k, None)
                        changed = True
                        break

    def to_triplets(self) -> str:
        lines = [
            f"# span degree {self.degree} strings {self.p} kinds {','.join(self.kinds)} "
            f"rows {self.rank} columns {len(self.columns)}"
        ]
        for r, lead in enumerate(sorted(self.pivots)):
            for c, v in sorted(self.pivots[lead].items()):
                lines.append(f"{r} {c} {v.numerator}/{v.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplets(cls, text: str) -> "SpanBasis":
        lines = text.splitlines()
        head = lines[0].split()
        meta = dict(zip(head[2::2], head[3::2]))
        degree, p = int(meta["degree"]), int(meta["strings"])
        basis = cls(degree, p, tuple(meta["kinds"].split(",")), enumerate_chord_diagrams(degree, p))
        rows: dict[int, dict] = {}
        for line in lines[1:]:
            if not line.strip():
                continue
            r, c, v = line.split()
            rows.setdefault(int(r), {})[int(c)] = Fraction(v)
        for row in rows.values():
            basis.pivots[min(row)] = row
        return basis


def _row_of(rel: LinComb, index: dict) -> dict:
    return {index[d]: Fraction(c) for d, c in rel.items()}


def build_span(n: int, p: int, kinds: Sequence[str] = ("4T",), max_degree: int = MAX_SPAN_DEGREE) -> SpanBasis:
    """Echelon basis of the relation span among degree-n chord diagrams."""
    if n > max_degree:
        raise GuardExceeded(f"span construction refused above degree {max_degree} (asked for {n})")
    t0 = time.perf_counter()
    basis = SpanBasis(n, p, tuple(kinds), enumerate_chord_diagrams(n, p))
    seen = set()
    for kind in kinds:
        for rel in relation_generators(kind, n, p).relations:
            row = _row_of(rel, basis.index)
            lead = min(row)
            f = row[lead]
            key = frozenset((c, v / f) for c, v in row.items())
            if key in seen:
                continue
            seen.add(key)
            basis.n_relations += 1
            basis.add(row)
    basis.build_seconds = time.perf_counter() - t0
    return basis


_BASES: dict = {}


def cached_span(n: int, p: int, kinds: Sequence[str] = ("4T",)) -> SpanBasis:
    key = (n, p, tuple(kinds))
    if key not in _BASES:
        _BASES[key] = build_span(n, p, kinds)
    return _BASES[key]


def in_span(v: LinComb, basis: SpanBasis | None = None, kinds: Sequence[str] = ("4T",)) -> bool:
    """Whether ``v`` (any diagrams; expanded by STU) lies in the relation span.

    Without a basis, mixed degrees are checked degree by degree against
    cached bases; with one, every term must match its degree.
    """
    v = stu_expand(v)
    if not v:
        return True
    if basis is not None:
        return not basis.residual(v)
    parts: dict[tuple, LinComb] = {}
    for d, c in v.items():
        key = (d.degree, d.p)
        parts[key] = parts.get(key, LinComb()) + LinComb.of(d, c)
    for (n, p), part in parts.items():
        if cached_span(n, p, kinds).residual(part):
            return False
    return True


def in_span_all(vectors: Iterable[LinComb], basis: SpanBasis) -> list[bool]:
    return [not basis.residual(stu_expand(v)) if v else True for v in vectors]
