"""gl_N weight systems through ribbon-graph boundary walks.

Every trivalent vertex is resolved into its own cyclic order (sign +) and
the reversed one (sign -).  The resolved graph is thickened into a ribbon
surface; each boundary curve is cut by the leg tips ("beads") into arcs,
and every arc carries a summation index.  A bead between incoming arc ``i``
and outgoing arc ``j`` stands for ``e[i,j]``.  Bead-free curves give N.

``phi`` multiplies the bead generators of each string bottom to top in
U(gl_N); ``psi`` records each bead-carrying curve as a necklace.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .diagram import CHORD, GENERALIZED, JACOBI, Diagram, DiagramError, LinComb, _require, make_diagram
from .necklace import Necklace, NecklacePoly, canonical_necklace
from .tensor import TensorEnvPoly, _acc, from_encoded, normal_order, normal_order_encoded


@dataclass(frozen=True)
class ResolvedFatGraph:
    sign: int
    diagram: Diagram
    reversed_vertices: tuple[bool, ...]

    def rotation(self) -> list[int]:
        """Successor of each dart in the chosen cyclic order at its vertex."""
        d = self.diagram
        rot = list(range(d.n_darts))
        for k, rev in enumerate(self.reversed_vertices):
            a, b, c = d.dart(k, 0), d.dart(k, 1), d.dart(k, 2)
            if rev:
                rot[a], rot[c], rot[b] = c, b, a
            else:
                rot[a], rot[b], rot[c] = b, c, a
        return rot


@dataclass(frozen=True)
class BoundaryComponent:
    beads: tuple[int, ...]          # legs in walk order
    arcs: tuple[int, ...]           # arc k runs from bead k to bead k+1


@dataclass(frozen=True)
class BoundaryDecomposition:
    components: tuple[BoundaryComponent, ...]
    n_free: int                     # bead-free boundary curves
    sides: dict                     # leg -> (incoming arc, outgoing arc)
    n_arcs: int


def resolve_vertices(d: Diagram) -> list[ResolvedFatGraph]:
    """All 2^t resolutions; vertex 0 varies slowest, own order first."""
    out = []
    for choice in itertools.product((False, True), repeat=d.n_tri):
        out.append(ResolvedFatGraph((-1) ** sum(choice), d, choice))
    return out


def boundary_walk(r: ResolvedFatGraph) -> BoundaryDecomposition:
    """Boundary curves of the ribbon surface of ``r``.

    The walk follows ``h -> rot(partner(h))`` backwards, i.e. it keeps the
    surface on its right; beads are read in that direction.
    """
    d = r.diagram
    rot = r.rotation()
    partner = d.partner
    # inverse face permutation: h -> partner(rot^{-1}(h))
    inv_rot = [0] * len(rot)
    for h, g in enumerate(rot):
        inv_rot[g] = h
    step = [partner[inv_rot[h]] for h in range(len(rot))]
    seen = [False] * len(rot)
    comps = []
    n_free = 0
    sides: dict[int, tuple[int, int]] = {}
    n_arcs = 0
    for start in range(len(rot)):
        if seen[start]:
            continue
        cycle = []
        h = start
        while not seen[h]:
            seen[h] = True
            cycle.append(h)
            h = step[h]
        beads = [h for h in cycle if h < d.n_legs]
        if not beads:
            n_free += 1
            continue
        # rotate so the smallest leg comes first, for determinism
        k0 = cycle.index(min(beads))
        beads = [h for h in cycle[k0:] + cycle[:k0] if h < d.n_legs]
        m = len(beads)
        arcs = tuple(range(n_arcs, n_arcs + m))
        for t, leg in enumerate(beads):
            sides[leg] = (arcs[t - 1], arcs[t])
        n_arcs += m
        comps.append(BoundaryComponent(tuple(beads), arcs))
    return BoundaryDecomposition(tuple(comps), n_free, sides, n_arcs)


# -- phi ----------------------------------------------------------------------

def phi_symbolic(d: Diagram) -> list[tuple[int, int, tuple]]:
    """Pre-summation form: per resolution ``(sign, n_free, words)`` where each
    string word lists ``(in_arc, out_arc)`` pairs bottom to top."""
    _require(d, (CHORD, GENERALIZED), "phi")
    out = []
    for r in resolve_vertices(d):
        bd = boundary_walk(r)
        words = tuple(tuple(bd.sides[leg] for leg in s) for s in d.strings)
        out.append((r.sign, bd.n_free, words))
    return out


def _phi_grouped(d: Diagram, N: int, resolutions: Iterable[int]) -> dict:
    """Raw index sums for some resolutions, grouped for normal ordering."""
    sym = phi_symbolic(d)
    grouped: dict = {}
    for ridx in resolutions:
        sign, n_free, words = sym[ridx]
        n_arcs = 1 + max((a for w in words for g in w for a in g), default=-1)
        coeff = sign * N**n_free
        heads = [tuple((i, j) for i, j in w) for w in words[:-1]]
        last = words[-1]
        for x in itertools.product(range(N), repeat=n_arcs):
            head = tuple(tuple(x[i] * N + x[j] for i, j in w) for w in heads)
            tail = tuple(x[i] * N + x[j] for i, j in last)
            inner = grouped.get(head)
            if inner is None:
                inner = grouped[head] = {}
            _acc(inner, tail, coeff)
    return grouped


def _phi_chunk(args) -> dict:
    d, N, chunk = args
    return normal_order_encoded(_phi_grouped(d, N, chunk), N)


def phi(d: Diagram | LinComb, N: int, jobs: int = 1, p: int | None = None) -> TensorEnvPoly:
    """Weight system A(p) -> U(gl_N)^{(x)p}, normal-ordered.

    ``p`` is only needed for an empty linear combination.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if isinstance(d, LinComb):
        ps = {x.p for x in d} | ({p} if p is not None else set())
        if len(ps) > 1:
            raise DiagramError("linear combination mixes different string counts")
        p = ps.pop() if ps else 1
        total = TensorEnvPoly.zero(N, p)
        for x, c in d.items():
            total = total + phi(x, N, jobs).scale(c)
        return total
    _require(d, (CHORD, GENERALIZED), "phi")
    n_res = 1 << d.n_tri
    if jobs > 1 and n_res >= 16:
        chunks = [list(range(k, n_res, jobs)) for k in range(jobs)]
        acc: dict = {}
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_phi_chunk, [(d, N, c) for c in chunks if c]):
                for m, c in part.items():
                    _acc(acc, m, c)
    else:
        acc = _phi_chunk((d, N, range(n_res)))
    return from_encoded(acc, N, d.p)


def phi_count_raw(d: Diagram, N: int) -> int:
    """Number of monomials before any collection: sum over resolutions of
    N**arcs."""
    return sum(N ** (1 + max((a for w in words for g in w for a in g), default=-1)) for _, _, words in phi_symbolic(d))


# -- psi ----------------------------------------------------------------------

def psi_terms(d: Diagram) -> list[tuple[int, int, tuple[Necklace, ...]]]:
    """One ``(sign, power of N, necklace monomial)`` per resolution."""
    _require(d, (JACOBI,), "psi")
    out = []
    for r in resolve_vertices(d):
        bd = boundary_walk(r)
        mono = tuple(sorted(canonical_necklace([d.colors[leg] for leg in c.beads]) for c in bd.components))
        out.append((r.sign, bd.n_free, mono))
    return out


def psi(d: Diagram | LinComb, p: int | None = None) -> NecklacePoly:
    """Weight system B(p) -> S(p) with symbolic N."""
    if isinstance(d, LinComb):
        if p is None:
            p = max((max(x.colors, default=1) for x in d), default=1)
        total = NecklacePoly(p)
        for x, c in d.items():
            total = total + psi(x, p).scale(c)
        return total
    _require(d, (JACOBI,), "psi")
    if p is None:
        p = max(d.colors, default=1)
    out = NecklacePoly(p)
    for sign, k, mono in psi_terms(d):
        out._add(mono, (0,) * k + (sign,))
    return out


# -- chi ----------------------------------------------------------------------

def chi(d: Diagram, p: int | None = None) -> LinComb:
    """Average of all attachments of color-c legs to string c."""
    _require(d, (JACOBI,), "chi")
    if p is None:
        p = max(d.colors, default=1)
    by_color = [[leg for leg in range(d.n_legs) if d.colors[leg] == c] for c in range(1, p + 1)]
    if any(c > p for c in d.colors):
        raise DiagramError(f"color above p={p}")
    weight = Fraction(1, math.prod(math.factorial(len(g)) for g in by_color))
    tris = list(range(d.n_tri))

    def end(h):
        if h < d.n_legs:
            return ("leg", h)
        k, s = divmod(h - d.n_legs, 3)
        return (k, s)

    edges = [(end(h), end(q)) for h, q in enumerate(d.partner) if h < q]
    out = LinComb()
    for orders in itertools.product(*(itertools.permutations(g) for g in by_color)):
        strings = [[("leg", leg) for leg in o] for o in orders]
        g = make_diagram(GENERALIZED, p, strings, tris=tris, edges=edges)
        out = out + LinComb.of(g, weight)
    return out


def expand_psi(q: NecklacePoly, N: int):
    return q.evaluate(N)


def raw_phi(d: Diagram, N: int) -> TensorEnvPoly:
    """Reference path for ``phi``: enumerate every raw monomial and normal-order
    each one separately, without grouping."""
    return normal_order(
        ((tuple(tuple(g) for g in mono), c) for mono, c in _raw_monomials(d, N)), N, d.p
    )


def _raw_monomials(d: Diagram, N: int):
    for sign, n_free, words in phi_symbolic(d):
        n_arcs = 1 + max((a for w in words for g in w for a in g), default=-1)
        for x in itertools.product(range(1, N + 1), repeat=n_arcs):
            yield tuple(tuple((x[i], x[j]) for i, j in w) for w in words), sign * N**n_free


_LETTERS = "ijklmnopqrstuvwxyzabcdefgh"


def index_expression(d: Diagram) -> list[tuple[int, int, tuple[tuple[str, ...], ...]]]:
    """``phi`` before summation and normal ordering.

    Each resolution gives ``(sign, power of N, words)``; a word lists the
    generators of one string bottom to top, written as two-letter index
    pairs.  Indices are named i, j, k, ... in order of first appearance,
    separately in each term.
    """
    out = []
    for sign, n_free, words in phi_symbolic(d):
        names: dict[int, str] = {}
        rows = []
        for w in words:
            row = []
            for a, b in w:
                for x in (a, b):
                    if x not in names:
                        if len(names) >= len(_LETTERS):
                            raise ValueError("too many summation indices to name")
                        names[x] = _LETTERS[len(names)]
                row.append(names[a] + names[b])
            rows.append(tuple(row))
        out.append((sign, n_free, tuple(rows)))
    return out


def format_index_expression(expr) -> str:
    """One line per term, e.g. ``+ e_ij e_jk (x) e_li e_kl``."""
    lines = []
    for sign, n_free, rows in expr:
        factors = [" ".join(f"e_{g}" for g in row) or "1" for row in rows]
        scale = "" if n_free == 0 else ("N " if n_free == 1 else f"N^{n_free} ")
        lines.append(("+ " if sign > 0 else "- ") + scale + " (x) ".join(factors))
    return "\n".join(lines) + "\n"
