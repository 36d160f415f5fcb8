"""STU expansion, 4T/1T relation families, AS/IHX combinations, enumeration."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .diagram import (
    CHORD,
    GENERALIZED,
    JACOBI,
    Diagram,
    DiagramError,
    LinComb,
    _require,
    canonicalize,
    chord_diagram,
    chord_words,
    flip_vertices,
    has_isolated_chord,
    make_diagram,
)

MAX_ENUMERATION = 20_000


class StructuralError(DiagramError):
    """A trivalent vertex cannot be reached from any string."""


class GuardExceeded(ValueError):
    """Exhaustive enumeration would be too large."""


# -- editable graph --------------------------------------------------------------

def _ends(d: Diagram):
    """Endpoint names for rebuilding: legs -> ('L', leg), slots -> (k, s)."""
    def end(h):
        if h < d.n_legs:
            return ("L", h)
        return divmod(h - d.n_legs, 3)
    return end


def _stu_step(d: Diagram, k: int, slot: int) -> tuple[Diagram, Diagram]:
    """Remove trivalent vertex ``k`` whose ``slot`` goes to a leg on a string.

    Returns (T, U) with S = T - U: in T the neighbour at the next
    counterclockwise slot is attached below the neighbour at the one after.
    """
    end = _ends(d)
    leg = d.partner[d.dart(k, slot)]
    assert leg < d.n_legs
    b = d.partner[d.dart(k, (slot + 1) % 3)]
    c = d.partner[d.dart(k, (slot + 2) % 3)]
    own = {d.dart(k, s) for s in range(3)}
    tris = [t for t in range(d.n_tri) if t != k]
    base_edges = []
    for h, q in enumerate(d.partner):
        if h < q and h not in own and q not in own:
            base_edges.append((end(h), end(q)))

    def build(lower, upper):
        strings = []
        for s in d.strings:
            row = []
            for x in s:
                if x == leg:
                    row += [("new", 0), ("new", 1)]
                else:
                    row.append(("L", x))
            strings.append(row)
        edges = list(base_edges)
        if lower in own:  # b and c form a loop at k
            edges.append((("new", 0), ("new", 1)))
        else:
            edges.append((("new", 0), end(lower)))
            edges.append((("new", 1), end(upper)))
        return make_diagram(GENERALIZED, d.p, strings, tris=tris, edges=edges)

    return build(b, c), build(c, b)


def stu_candidates(d: Diagram) -> list[tuple[int, int]]:
    """(vertex, slot) pairs where a trivalent vertex touches a string leg,
    ordered by the leg's position."""
    out = []
    for s in d.strings:
        for leg in s:
            q = d.partner[leg]
            if q >= d.n_legs:
                out.append(divmod(q - d.n_legs, 3))
    return out


def stu_expand(d: Diagram | LinComb, choose: Callable[[list], tuple] | None = None) -> LinComb:
    """Linear combination of chord diagrams equal to ``d`` modulo STU.

    By default the vertex next to the lowest string leg (in reading order) is
    eliminated first; ``choose`` may pick any other candidate.
    """
    if isinstance(d, LinComb):
        return d.map(lambda x: stu_expand(x, choose))
    _require(d, (CHORD, GENERALIZED), "STU expansion")
    if choose is None:
        signed = canonicalize(d)
        if signed.sign == 0:
            return LinComb()
        return _stu_cached(signed.diagram) * signed.sign
    return _stu_rec(d, choose)


_STU_CACHE: dict[Diagram, LinComb] = {}


def _stu_cached(d: Diagram) -> LinComb:
    hit = _STU_CACHE.get(d)
    if hit is not None:
        return hit
    if d.kind == CHORD:
        res = LinComb.of(d)
    else:
        cands = stu_candidates(d)
        if not cands:
            raise StructuralError("a component of the internal graph does not touch any string")
        T, U = _stu_step(d, *cands[0])
        res = LinComb()
        for part, s in ((T, 1), (U, -1)):
            signed = canonicalize(part)
            if signed.sign:
                res = res + _stu_cached(signed.diagram) * (s * signed.sign)
    _STU_CACHE[d] = res
    return res


def _stu_rec(d: Diagram, choose) -> LinComb:
    if d.kind == CHORD:
        return LinComb.of(d)
    cands = stu_candidates(d)
    if not cands:
        raise StructuralError("a component of the internal graph does not touch any string")
    T, U = _stu_step(d, *choose(cands))
    return _stu_rec(T, choose) - _stu_rec(U, choose)


def stu_all_orders(d: Diagram) -> list[LinComb]:
    """Expansions along every elimination order (exponential; for testing)."""
    if d.kind == CHORD:
        return [LinComb.of(d)]
    cands = stu_candidates(d)
    if not cands:
        raise StructuralError("a component of the internal graph does not touch any string")
    results = []
    for kv in dict.fromkeys((k, s) for k, s in cands):
        T, U = _stu_step(d, *kv)
        for a in stu_all_orders(T):
            for b in stu_all_orders(U):
                results.append(a - b)
    return results


def random_choice(seed: int) -> Callable[[list], tuple]:
    rng = random.Random(seed)
    return lambda cands: rng.choice(cands)


# -- enumeration ---------------------------------------------------------------------

def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def count_chord_diagrams(n: int, p: int) -> int:
    return math.comb(2 * n + p - 1, p - 1) * _double_factorial(2 * n - 1)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _matchings(points: list[int]):
    if not points:
        yield []
        return
    a = points[0]
    for k in range(1, len(points)):
        rest = points[1:k] + points[k + 1:]
        for m in _matchings(rest):
            yield [(a, points[k])] + m


def enumerate_chord_diagrams(n: int, p: int, limit: int = MAX_ENUMERATION) -> list[Diagram]:
    """All chord diagrams of degree n on p strings, deterministic order."""
    if n < 0 or p < 1:
        raise ValueError("need n >= 0 and p >= 1")
    total = count_chord_diagrams(n, p)
    if total > limit:
        raise GuardExceeded(f"{total} chord diagrams of degree {n} on {p} strings exceed the limit {limit}")
    out = []
    for comp in _compositions(2 * n, p):
        strings, k = [], 0
        for c in comp:
            strings.append(tuple(range(k, k + c)))
            k += c
        for m in _matchings(list(range(2 * n))):
            partner = [0] * (2 * n)
            for a, b in m:
                partner[a], partner[b] = b, a
            out.append(Diagram(CHORD, p, tuple(strings), (), 2 * n, 0, tuple(partner)))
    return out


# -- relation families --------------------------------------------------------------

@dataclass
class RelationSet:
    degree: int
    p: int
    kind: str
    relations: list[LinComb] = field(default_factory=list)

    def __len__(self):
        return len(self.relations)


def four_term_relations(d: Diagram) -> list[LinComb]:
    """Every 4T instance built from ``d``: an endpoint of one chord slides
    past both endpoints of another, ``sum_k ([above d_k] - [below d_k])``."""
    words = [list(w) for w in chord_words(d)]
    n = d.degree
    out = []
    for c in range(n):
        ends_c = [(s, i) for s, w in enumerate(words) for i, x in enumerate(w) if x == c]
        for moving in ends_c:
            base = [list(w) for w in words]
            del base[moving[0]][moving[1]]
            for other in range(n):
                if other == c:
                    continue
                rel = LinComb()
                for s, w in enumerate(base):
                    for i, x in enumerate(w):
                        if x != other:
                            continue
                        above = [list(r) for r in base]
                        above[s].insert(i + 1, c)
                        below = [list(r) for r in base]
                        below[s].insert(i, c)
                        rel = rel + LinComb.of(chord_diagram(above, d.p)) - LinComb.of(chord_diagram(below, d.p))
                out.append(rel)
    return out


def relation_generators(kind: str, n: int, p: int, limit: int = MAX_ENUMERATION) -> RelationSet:
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    diagrams = enumerate_chord_diagrams(n, p, limit)
    rs = RelationSet(n, p, kind)
    if kind == "4T":
        for d in diagrams:
            rs.relations.extend(r for r in four_term_relations(d) if r)
    elif kind == "1T":
        rs.relations.extend(LinComb.of(d) for d in diagrams if has_isolated_chord(d))
    else:
        raise ValueError(f"unknown relation kind {kind!r}")
    return rs


# -- AS / IHX ------------------------------------------------------------------------

def internal_edges(d: Diagram) -> list[int]:
    """Darts (one per edge) of edges joining two distinct trivalent vertices."""
    out = []
    for h, q in enumerate(d.partner):
        if h < q and h >= d.n_legs and q >= d.n_legs:
            if (h - d.n_legs) // 3 != (q - d.n_legs) // 3:
                out.append(h)
    return out


def _ihx_variants(d: Diagram, h: int) -> list[Diagram]:
    """The I, H and X graphs at the edge through dart ``h``."""
    L = d.n_legs
    q = d.partner[h]
    u, su = divmod(h - L, 3)
    v, sv = divmod(q - L, 3)
    ports = [d.dart(u, (su + 1) % 3), d.dart(u, (su + 2) % 3), d.dart(v, (sv + 1) % 3), d.dart(v, (sv + 2) % 3)]
    own = set(ports) | {h, q}
    end = _ends(d)
    tris = [t for t in range(d.n_tri) if t not in (u, v)] + ["u", "v"]
    base = []
    for x, y in enumerate(d.partner):
        if x < y and x not in own and y not in own:
            base.append((end(x), end(y)))
    out = []
    # port order A, B, C, D -> (u: A B | v: C D), (A C | B D), (A D | B C)
    for arrangement in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)):
        slot_of = {}
        for pos, port_idx in enumerate(arrangement):
            slot_of[ports[port_idx]] = ("u", 1 + pos) if pos < 2 else ("v", pos - 1)
        edges = list(base) + [(("u", 0), ("v", 0))]
        done = set()
        for port in ports:
            if port in done:
                continue
            target = d.partner[port]
            if target in slot_of:
                edges.append((slot_of[port], slot_of[target]))
                done |= {port, target}
            else:
                edges.append((slot_of[port], end(target)))
                done.add(port)
        if d.kind == JACOBI:
            legs = {("L", leg): d.colors[leg] for leg in range(L)}
            out.append(make_diagram(JACOBI, None, leg_colors=legs, tris=tris, edges=edges))
        else:
            strings = [[("L", leg) for leg in s] for s in d.strings]
            out.append(make_diagram(GENERALIZED, d.p, strings, tris=tris, edges=edges))
    return out


def local_relation(d: Diagram, site: int, kind: str) -> LinComb:
    """AS at trivalent vertex ``site`` (d + flipped d), or IHX at the edge
    through dart ``site`` (I - H + X)."""
    _require(d, (JACOBI,), "local relation")
    if kind == "AS":
        if not 0 <= site < d.n_tri:
            raise DiagramError(f"site {site} is not a trivalent vertex")
        return LinComb.of(d) + LinComb.of(flip_vertices(d, [site]))
    if kind == "IHX":
        if site not in internal_edges(d) and d.partner[site] not in internal_edges(d):
            raise DiagramError(f"dart {site} is not on an edge between two trivalent vertices")
        i, hh, x = _ihx_variants(d, site)
        return LinComb.of(i) - LinComb.of(hh) + LinComb.of(x)
    raise ValueError(f"unknown local relation {kind!r}")


# -- export ----------------------------------------------------------------------------

def relation_set_text(rs: RelationSet) -> str:
    from .dsl import serialize_lincomb

    chunks = [f"# {rs.kind} relations, degree {rs.degree}, {rs.p} strings, {len(rs)} relations\n"]
    for k, r in enumerate(rs.relations, start=1):
        chunks.append(f"relation {k}\n" + serialize_lincomb(r))
    return "".join(chunks)


def relation_set_triplets(rs: RelationSet, columns: Sequence[Diagram]) -> str:
    index = {d: i for i, d in enumerate(columns)}
    lines = [f"# kind {rs.kind} degree {rs.degree} strings {rs.p} rows {len(rs)} columns {len(columns)}"]
    for row, r in enumerate(rs.relations):
        for d, c in sorted(r.items(), key=lambda kv: index[kv[0]]):
            c = Fraction(c)
            lines.append(f"{row} {index[d]} {c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"
