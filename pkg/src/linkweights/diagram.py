"""Chord, generalized and Jacobi diagrams as half-edge structures.

A diagram has ``L`` univalent vertices (legs) and ``T`` trivalent vertices.
Darts are numbered ``0..L-1`` for legs and ``L + 3*k + s`` for slot ``s`` of
trivalent vertex ``k``; slots are listed in counterclockwise order.  The
``partner`` tuple is the edge involution on darts.

Legs of chord/generalized diagrams sit on ``p`` oriented strings; ``strings``
lists, per string, the leg indices from bottom to top.  Legs of Jacobi
diagrams carry colors instead.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

CHORD = "chord"
GENERALIZED = "generalized"
JACOBI = "jacobi"
KINDS = (CHORD, GENERALIZED, JACOBI)


class DiagramError(ValueError):
    """Structurally invalid diagram or an operation applied to the wrong kind."""


@dataclass(frozen=True)
class Diagram:
    kind: str
    p: int | None
    strings: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    n_legs: int
    n_tri: int
    partner: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DiagramError(f"unknown diagram kind {self.kind!r}")
        n_darts = self.n_legs + 3 * self.n_tri
        if len(self.partner) != n_darts:
            raise DiagramError("partner table has the wrong length")
        for h, q in enumerate(self.partner):
            if not 0 <= q < n_darts or q == h or self.partner[q] != h:
                raise DiagramError(f"half-edge {h} is not properly paired")
        if self.kind == JACOBI:
            if self.strings:
                raise DiagramError("jacobi diagrams have no strings")
            if len(self.colors) != self.n_legs:
                raise DiagramError("every jacobi leg needs a color")
            for c in self.colors:
                if c < 1 or (self.p is not None and c > self.p):
                    raise DiagramError(f"color {c} out of range")
        else:
            if self.p is None or self.p < 1 or len(self.strings) != self.p:
                raise DiagramError("diagrams on strings need p >= 1 strings")
            if self.colors:
                raise DiagramError("legs on strings carry no colors")
            seen = sorted(leg for s in self.strings for leg in s)
            if seen != list(range(self.n_legs)):
                raise DiagramError("every leg must sit exactly once on a string")
            if self.kind == CHORD and self.n_tri:
                raise DiagramError("chord diagrams have no trivalent vertices")
            if self.kind == GENERALIZED and not self.n_tri:
                object.__setattr__(self, "kind", CHORD)

    @property
    def degree(self) -> int:
        return (self.n_legs + self.n_tri) // 2

    @property
    def n_darts(self) -> int:
        return self.n_legs + 3 * self.n_tri

    def dart(self, tri: int, slot: int) -> int:
        return self.n_legs + 3 * tri + slot

    def vertex_of(self, h: int) -> tuple[int, int]:
        """``(-1, leg)`` for a leg dart, ``(k, slot)`` for a trivalent slot."""
        if h < self.n_legs:
            return (-1, h)
        return divmod(h - self.n_legs, 3)

    def leg_positions(self) -> dict[int, tuple[int, int]]:
        """Map leg -> (string index, position from the bottom)."""
        return {leg: (s, k) for s, legs in enumerate(self.strings) for k, leg in enumerate(legs)}

    def __repr__(self):
        from .dsl import serialize_diagram

        return f"Diagram({serialize_diagram(self).strip()!r})"


class SignedDiagram(NamedTuple):
    sign: int
    diagram: Diagram | None


def make_diagram(kind, p, string_legs=(), leg_colors=None, tris=(), edges=()) -> Diagram:
    """Assemble a diagram from named parts.

    ``string_legs`` lists leg keys per string (bottom to top); for Jacobi
    diagrams ``leg_colors`` maps leg keys to colors, in leg order.  ``tris``
    lists trivalent vertex keys.  Each edge joins two endpoints, an endpoint
    being a leg key or a ``(tri_key, slot)`` pair.
    """
    if kind == JACOBI:
        leg_keys = list(leg_colors)
        colors = tuple(leg_colors[k] for k in leg_keys)
        strings = ()
    else:
        leg_keys = [k for s in string_legs for k in s]
        colors = ()
    leg_index = {k: i for i, k in enumerate(leg_keys)}
    if len(leg_index) != len(leg_keys):
        raise DiagramError("duplicate leg")
    if kind != JACOBI:
        strings = tuple(tuple(leg_index[k] for k in s) for s in string_legs)
    n_legs = len(leg_keys)
    tri_index = {k: i for i, k in enumerate(tris)}

    def dart_of(end):
        if end in leg_index:
            return leg_index[end]
        key, slot = end
        return n_legs + 3 * tri_index[key] + slot

    partner = [-1] * (n_legs + 3 * len(tris))
    for a, b in edges:
        ha, hb = dart_of(a), dart_of(b)
        if partner[ha] != -1 or partner[hb] != -1 or ha == hb:
            raise DiagramError(f"half-edge used twice in edge {a!r}-{b!r}")
        partner[ha], partner[hb] = hb, ha
    if -1 in partner:
        raise DiagramError("unpaired half-edge")
    if kind != JACOBI and not tris:
        kind = CHORD
    return Diagram(kind, p, strings, colors, n_legs, len(tris), tuple(partner))


def chord_diagram(words: Iterable[Iterable], p: int | None = None) -> Diagram:
    """Chord diagram from per-string label sequences; each label occurs twice."""
    words = [list(w) for w in words]
    if p is None:
        p = len(words)
    while len(words) < p:
        words.append([])
    legs = []
    ends: dict = {}
    for s, w in enumerate(words):
        row = []
        for k, label in enumerate(w):
            key = (s, k)
            row.append(key)
            ends.setdefault(label, []).append(key)
        legs.append(row)
    for label, e in ends.items():
        if len(e) != 2:
            raise DiagramError(f"chord label {label!r} must occur exactly twice")
    return make_diagram(CHORD, p, legs, edges=[tuple(e) for e in ends.values()])


def chord_words(d: Diagram) -> tuple[tuple[int, ...], ...]:
    """Per-string chord labels, chords numbered by first appearance bottom-to-top."""
    _require(d, (CHORD,))
    label: dict[int, int] = {}
    out = []
    for s in d.strings:
        row = []
        for leg in s:
            other = d.partner[leg]
            if other not in label:
                label[leg] = label[other] = len(label) // 2
            row.append(label[leg])
        out.append(tuple(row))
    return tuple(out)


def _require(d: Diagram, kinds, what="operation"):
    if d.kind not in kinds:
        raise DiagramError(f"{what} needs a {' or '.join(kinds)} diagram, got {d.kind}")


# -- canonical forms ---------------------------------------------------------

def _traverse(d: Diagram, start_queue, start_tri_dart, mask, labelled):
    """Breadth-first relabelling.

    ``start_queue`` holds already-labelled legs in order.  When
    ``start_tri_dart`` is given, the traversal instead begins at the trivalent
    vertex owning that dart (slot 0 := that dart).  The i-th discovered
    trivalent vertex lists its remaining slots in counterclockwise order when
    bit i of ``mask`` is clear, reversed otherwise.

    Returns (vertex order, new dart index per old dart, parity).
    """
    L = d.n_legs
    order = []  # ('L', leg) or ('T', k, (d0, d1, d2))
    new_dart: dict[int, int] = {}
    next_dart = 0
    n_found = 0
    parity = 0
    queue = []

    def add_tri(h):
        nonlocal next_dart, n_found, parity
        k, s = divmod(h - L, 3)
        a, b, c = h, L + 3 * k + (s + 1) % 3, L + 3 * k + (s + 2) % 3
        if mask >> n_found & 1:
            b, c = c, b
            parity ^= 1
        n_found += 1
        labelled.add(("T", k))
        order.append(("T", k, (a, b, c)))
        for x in (a, b, c):
            new_dart[x] = next_dart
            next_dart += 1
        queue.append(len(order) - 1)

    def add_leg(leg):
        nonlocal next_dart
        labelled.add(("L", leg))
        order.append(("L", leg))
        new_dart[leg] = next_dart
        next_dart += 1
        queue.append(len(order) - 1)

    for leg in start_queue:
        add_leg(leg)
    if start_tri_dart is not None:
        add_tri(start_tri_dart)
    i = 0
    while i < len(queue):
        item = order[queue[i]]
        i += 1
        darts = (item[1],) if item[0] == "L" else item[2]
        for h in darts:
            q = d.partner[h]
            if q in new_dart:
                continue
            if q < L:
                add_leg(q)
            else:
                add_tri(q)
    return order, new_dart, parity


def _code(d: Diagram, order, new_dart, colored):
    verts = tuple(
        ("L", d.colors[it[1]] if colored else 0) if it[0] == "L" else ("T", 0) for it in order
    )
    partners = [0] * len(new_dart)
    for old, new in new_dart.items():
        partners[new] = new_dart[d.partner[old]]
    return (verts, tuple(partners))


def _best(candidates):
    """Minimal code among (code, parity, payload); sign 0 on odd self-symmetry."""
    best = None
    parities = set()
    payload = None
    for code, parity, pl in candidates:
        if best is None or code < best:
            best, parities, payload = code, {parity}, pl
        elif code == best:
            parities.add(parity)
    sign = 0 if len(parities) > 1 else (-1 if 1 in parities else 1)
    return best, sign, payload


def _floating_components(d: Diagram, labelled):
    """Canonical codes of components not yet reached, sorted."""
    comps = []
    L = d.n_legs
    remaining = [k for k in range(d.n_tri) if ("T", k) not in labelled]
    legs_left = [leg for leg in range(L) if ("L", leg) not in labelled]
    # group into connected components
    seen_comp: set = set()
    units = [("L", leg) for leg in legs_left] + [("T", k) for k in remaining]
    for u in units:
        if u in seen_comp:
            continue
        comp_marks: set = set()
        if u[0] == "L":
            _traverse(d, [u[1]], None, 0, comp_marks)
        else:
            _traverse(d, [], L + 3 * u[1], 0, comp_marks)
        seen_comp |= comp_marks
        comp_legs = sorted(x[1] for x in comp_marks if x[0] == "L")
        comp_tris = sorted(x[1] for x in comp_marks if x[0] == "T")
        t = len(comp_tris)
        cands = []
        if comp_legs:
            min_color = min(d.colors[leg] for leg in comp_legs) if d.colors else 0
            starts = [([leg], None) for leg in comp_legs if not d.colors or d.colors[leg] == min_color]
        else:
            starts = [([], L + 3 * k + s) for k in comp_tris for s in range(3)]
        for legs0, tri0 in starts:
            for mask in range(1 << t):
                order, nd, par = _traverse(d, legs0, tri0, mask, set())
                cands.append((_code(d, order, nd, bool(d.colors)), par, (order, nd)))
        code, sign, payload = _best(cands)
        comps.append((code, sign, payload))
    comps.sort(key=lambda c: c[0])
    return comps


def _rebuild(d: Diagram, leg_seq, tri_seq, kind, p, strings, colors):
    """Diagram with legs/trivalent vertices renumbered.

    ``leg_seq`` lists old legs in new order, ``tri_seq`` lists
    ``(old_k, (d0, d1, d2))`` with the old darts placed in new slots.
    """
    L = len(leg_seq)
    new = {}
    for i, leg in enumerate(leg_seq):
        new[leg] = i
    for k, (_, darts) in enumerate(tri_seq):
        for s, h in enumerate(darts):
            new[h] = L + 3 * k + s
    partner = [0] * len(new)
    for old, nh in new.items():
        partner[nh] = new[d.partner[old]]
    return Diagram(kind, p, strings, colors, L, len(tri_seq), tuple(partner))


def canonicalize(d: Diagram) -> SignedDiagram:
    """Canonical representative under relabelling and AS.

    Each cyclic-order flip at a trivalent vertex costs a factor -1; a diagram
    isomorphic to itself through an odd number of flips has sign 0.
    """
    sign, form = _canonical(d)
    return SignedDiagram(sign, form if sign else None)


def is_isomorphic(a: Diagram, b: Diagram) -> bool:
    """Same diagram up to relabelling, rotations and flips."""
    return _canonical(a)[1] == _canonical(b)[1]


@functools.lru_cache(maxsize=200_000)
def _canonical(d: Diagram) -> tuple[int, Diagram]:
    if d.kind == CHORD:
        return 1, chord_diagram(chord_words(d), d.p)

    if d.kind == JACOBI:
        comps = _floating_components(d, set())
        sign = 1
        leg_seq, tri_seq = [], []
        for _, s, (order, _) in comps:
            sign *= s
            for it in order:
                if it[0] == "L":
                    leg_seq.append(it[1])
                else:
                    tri_seq.append((it[1], it[2]))
        colors = tuple(d.colors[leg] for leg in leg_seq)
        return sign, _rebuild(d, leg_seq, tri_seq, JACOBI, None, (), colors)

    # generalized: legs are anchored by their positions on the strings
    legs0 = [leg for s in d.strings for leg in s]
    probe: set = set()
    _traverse(d, legs0, None, 0, probe)
    t_reach = sum(1 for x in probe if x[0] == "T")
    cands = []
    for mask in range(1 << t_reach):
        order, nd, par = _traverse(d, legs0, None, mask, set())
        cands.append((_code(d, order, nd, False), par, order))
    _, sign, order = _best(cands)
    floating = _floating_components(d, probe)
    for _, s, _ in floating:
        sign *= s
    tri_seq = [(it[1], it[2]) for it in order if it[0] == "T"]
    for _, _, (forder, _) in floating:
        tri_seq.extend((it[1], it[2]) for it in forder if it[0] == "T")
    strings, k = [], 0
    for s in d.strings:
        strings.append(tuple(range(k, k + len(s))))
        k += len(s)
    return sign, _rebuild(d, legs0, tri_seq, GENERALIZED, d.p, tuple(strings), ())


# -- involutions and predicates ---------------------------------------------

def flip_vertices(d: Diagram, which: Iterable[int] | None = None) -> Diagram:
    """Reverse the cyclic order at the given trivalent vertices (default: all)."""
    which = range(d.n_tri) if which is None else which
    perm = list(range(d.n_darts))
    for k in which:
        a, b = d.dart(k, 1), d.dart(k, 2)
        perm[a], perm[b] = b, a
    partner = [0] * d.n_darts
    for h in range(d.n_darts):
        partner[perm[h]] = perm[d.partner[h]]
    return Diagram(d.kind, d.p, d.strings, d.colors, d.n_legs, d.n_tri, tuple(partner))


def reverse_strings(d: Diagram) -> Diagram:
    """Reverse the orientation of every string, keeping cyclic orders."""
    _require(d, (CHORD, GENERALIZED), "string reversal")
    strings = tuple(tuple(reversed(s)) for s in d.strings)
    return Diagram(d.kind, d.p, strings, d.colors, d.n_legs, d.n_tri, d.partner)


def tau_A(d: Diagram) -> Diagram:
    """Reflect the plane picture: reverse every string and flip every vertex."""
    _require(d, (CHORD, GENERALIZED), "tau_A")
    return flip_vertices(reverse_strings(d))


def tau_B_apply(d: Diagram) -> tuple[int, Diagram]:
    _require(d, (JACOBI,), "tau_B")
    return (-1) ** d.n_legs, d


def has_isolated_chord(d: Diagram) -> bool:
    """True if some chord intersects no other chord: both its ends lie on one
    string and every leg between them is paired with another leg between them."""
    _require(d, (CHORD,), "isolated-chord test")
    for s in d.strings:
        pos = {leg: k for k, leg in enumerate(s)}
        for k, leg in enumerate(s):
            q = d.partner[leg]
            if q in pos and pos[q] > k:
                inside = s[k + 1:pos[q]]
                if all(pos.get(d.partner[x], -1) in range(k + 1, pos[q]) for x in inside):
                    return True
    return False


# -- formal linear combinations ---------------------------------------------

def _q(x) -> Fraction | int:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


class LinComb:
    """Exact rational linear combination of canonical diagrams."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms: dict[Diagram, Fraction | int] = {}
        if terms:
            for dgm, c in (terms.items() if isinstance(terms, dict) else terms):
                self._add(dgm, c)

    def _add(self, dgm, c):
        if not c:
            return
        signed = canonicalize(dgm)
        if signed.sign == 0:
            return
        key = signed.diagram
        v = self._terms.get(key, 0) + signed.sign * c
        if v:
            self._terms[key] = _q(v)
        else:
            self._terms.pop(key, None)

    @classmethod
    def of(cls, d: Diagram, coeff=1) -> "LinComb":
        return cls([(d, coeff)])

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __getitem__(self, d: Diagram):
        signed = canonicalize(d)
        if signed.sign == 0:
            return 0
        return signed.sign * self._terms.get(signed.diagram, 0)

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "LinComb") -> "LinComb":
        out = LinComb()
        out._terms = dict(self._terms)
        for d, c in other._terms.items():
            v = out._terms.get(d, 0) + c
            if v:
                out._terms[d] = _q(v)
            else:
                del out._terms[d]
        return out

    def __neg__(self):
        out = LinComb()
        out._terms = {d: -c for d, c in self._terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        out = LinComb()
        if scalar:
            out._terms = {d: _q(c * scalar) for d, c in self._terms.items()}
        return out

    __rmul__ = __mul__

    def map(self, f: Callable[[Diagram], "Diagram | LinComb"]) -> "LinComb":
        """Linear extension of ``f``."""
        out = LinComb()
        for d, c in self._terms.items():
            img = f(d)
            out = out + (img * c if isinstance(img, LinComb) else LinComb.of(img, c))
        return out

    def sorted_items(self):
        from .dsl import serialize_diagram

        return sorted(self._terms.items(), key=lambda kv: serialize_diagram(kv[0]))

    def degrees(self) -> set[int]:
        return {d.degree for d in self._terms}

    def __repr__(self):
        return f"LinComb({len(self)} terms)"
