"""Line-oriented text format for diagrams and linear combinations.

Full form::

    type generalized
    strings 2
    leg a on 1          # file order per string = bottom to top
    leg b on 2
    leg c on 2
    vertex v x y z      # slot names, counterclockwise
    edge a v.0          # slot by index ...
    edge b v.y          # ... or by name
    edge c v.2

Jacobi legs use ``leg <name> color <c>``.  Chord diagrams may be written in
shorthand, ``p=2; s1: A B; s2: B A``.  Statements are separated by newlines
or ``;`` and ``#`` starts a comment.

A linear combination is a sequence of ``term <rational>`` lines, each
followed by one diagram.  A file without ``term`` lines is a single diagram
with coefficient 1.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .diagram import (
    CHORD,
    GENERALIZED,
    JACOBI,
    KINDS,
    Diagram,
    DiagramError,
    LinComb,
    chord_words,
    make_diagram,
)


class DiagramSyntaxError(DiagramError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + msg)


class ArityError(DiagramSyntaxError):
    pass


class PairingError(DiagramSyntaxError):
    pass


class ColorError(DiagramSyntaxError):
    pass


_SHORTHAND_HEAD = re.compile(r"^p\s*=\s*(\d+)$")
_SHORTHAND_STRING = re.compile(r"^s(\d+)\s*:(.*)$")


def _statements(text: str):
    """Yield (line, col, statement) with comments stripped."""
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        for piece in line.split(";"):
            stripped = piece.strip()
            if stripped:
                yield ln, col + len(piece) - len(piece.lstrip()) + 1, stripped
            col += len(piece) + 1


def parse_diagram(text: str) -> Diagram:
    stmts = list(_statements(text))
    if not stmts:
        raise DiagramSyntaxError("empty diagram")
    if _SHORTHAND_HEAD.match(stmts[0][2]):
        return _parse_shorthand(stmts)
    return _parse_full(stmts)


def _parse_shorthand(stmts) -> Diagram:
    ln, col, head = stmts[0]
    p = int(_SHORTHAND_HEAD.match(head).group(1))
    if p < 1:
        raise DiagramSyntaxError("p must be positive", ln, col)
    words: list[list[str]] = [[] for _ in range(p)]
    seen = set()
    counts: dict[str, list] = {}
    for ln, col, st in stmts[1:]:
        m = _SHORTHAND_STRING.match(st)
        if not m:
            raise DiagramSyntaxError(f"expected 's<k>: labels', got {st!r}", ln, col)
        s = int(m.group(1))
        if not 1 <= s <= p or s in seen:
            raise DiagramSyntaxError(f"bad or repeated string index s{s}", ln, col)
        seen.add(s)
        words[s - 1] = m.group(2).split()
        for label in words[s - 1]:
            counts.setdefault(label, []).append((ln, col))
    for label, where in counts.items():
        if len(where) != 2:
            raise PairingError(f"chord label {label!r} occurs {len(where)} times", *where[-1])
    legs = [[(s, k) for k in range(len(w))] for s, w in enumerate(words)]
    ends: dict[str, list] = {}
    for s, w in enumerate(words):
        for k, label in enumerate(w):
            ends.setdefault(label, []).append((s, k))
    return make_diagram(CHORD, p, legs, edges=[tuple(e) for e in ends.values()])


def _parse_full(stmts) -> Diagram:
    kind = None
    p = None
    legs: dict[str, tuple] = {}  # name -> ('on', s) | ('color', c)
    leg_order: list[str] = []
    verts: dict[str, list[str]] = {}
    edges = []
    for ln, col, st in stmts:
        tok = st.split()
        head = tok[0]
        if head == "type" or (head in KINDS and len(tok) == 1):
            k = tok[1] if head == "type" and len(tok) == 2 else (head if head in KINDS else None)
            if k not in KINDS:
                raise DiagramSyntaxError(f"unknown diagram type in {st!r}", ln, col)
            kind = k
        elif head == "strings":
            if len(tok) != 2 or not tok[1].isdigit() or int(tok[1]) < 1:
                raise DiagramSyntaxError(f"bad strings statement {st!r}", ln, col)
            p = int(tok[1])
        elif head == "leg":
            if len(tok) == 4 and tok[2] in ("on", "color"):
                mode, val = tok[2], tok[3]
            elif len(tok) == 3:
                mode, val = None, tok[2]
            else:
                raise DiagramSyntaxError(f"bad leg statement {st!r}", ln, col)
            if not re.fullmatch(r"-?\d+", val):
                raise DiagramSyntaxError(f"leg index must be an integer in {st!r}", ln, col)
            name = tok[1]
            if name in legs or name in verts:
                raise DiagramSyntaxError(f"duplicate name {name!r}", ln, col)
            legs[name] = (mode, int(val), ln, col)
            leg_order.append(name)
        elif head == "vertex":
            if len(tok) < 2:
                raise DiagramSyntaxError("vertex needs a name", ln, col)
            name, slots = tok[1], tok[2:]
            if len(slots) != 3:
                raise ArityError(
                    f"vertex {name!r} has {len(slots)} half-edges; only 1- and 3-valent vertices are allowed",
                    ln, col,
                )
            if name in legs or name in verts:
                raise DiagramSyntaxError(f"duplicate name {name!r}", ln, col)
            verts[name] = slots
        elif head == "edge":
            if len(tok) != 3:
                raise DiagramSyntaxError(f"edge needs two endpoints: {st!r}", ln, col)
            edges.append((tok[1], tok[2], ln, col))
        else:
            raise DiagramSyntaxError(f"unknown statement {head!r}", ln, col)

    if kind is None:
        modes = {v[0] for v in legs.values()}
        kind = JACOBI if "color" in modes else (GENERALIZED if verts else CHORD)
    if kind == CHORD and verts:
        raise DiagramSyntaxError("chord diagrams cannot have trivalent vertices")

    def endpoint(tok, ln, col):
        if "." in tok:
            name, slot = tok.split(".", 1)
            if name not in verts:
                raise DiagramSyntaxError(f"unknown vertex {name!r}", ln, col)
            names = verts[name]
            if slot in names:
                return (name, names.index(slot))
            if slot in ("0", "1", "2"):
                return (name, int(slot))
            raise DiagramSyntaxError(f"vertex {name!r} has no slot {slot!r}", ln, col)
        if tok in legs:
            return tok
        if tok in verts:
            raise DiagramSyntaxError(f"endpoint {tok!r} must name a slot, e.g. {tok}.0", ln, col)
        raise DiagramSyntaxError(f"unknown endpoint {tok!r}", ln, col)

    used: dict = {}
    pairs = []
    for a, b, ln, col in edges:
        ea, eb = endpoint(a, ln, col), endpoint(b, ln, col)
        for e in (ea, eb):
            if e in used or ea == eb:
                raise PairingError(f"half-edge {e!r} used twice", ln, col)
            used[e] = (ln, col)
        pairs.append((ea, eb))
    for name in leg_order:
        if name not in used:
            _, _, ln, col = legs[name]
            raise PairingError(f"leg {name!r} is not attached to any edge", ln, col)
    for name, slots in verts.items():
        for s in range(3):
            if (name, s) not in used:
                raise PairingError(f"half-edge {name}.{slots[s]} is unpaired")

    if kind == JACOBI:
        colors = {}
        for name in leg_order:
            mode, c, ln, col = legs[name]
            if mode == "on":
                raise DiagramSyntaxError("jacobi legs take a color, not a string", ln, col)
            if c < 1 or (p is not None and c > p):
                raise ColorError(f"color {c} out of range", ln, col)
            colors[name] = c
        return make_diagram(JACOBI, None, leg_colors=colors, tris=list(verts), edges=pairs)

    n_strings = p if p is not None else max((legs[n][1] for n in leg_order), default=1)
    per_string: list[list[str]] = [[] for _ in range(n_strings)]
    for name in leg_order:
        mode, s, ln, col = legs[name]
        if mode == "color":
            raise DiagramSyntaxError("legs on strings take 'on <string>'", ln, col)
        if not 1 <= s <= n_strings:
            raise ColorError(f"string {s} out of range 1..{n_strings}", ln, col)
        per_string[s - 1].append(name)
    return make_diagram(kind, n_strings, per_string, tris=list(verts), edges=pairs)


def _chord_label(i: int) -> str:
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(65 + r) + s
    return s


def serialize_diagram(d: Diagram) -> str:
    """Deterministic text form; chord diagrams use the shorthand."""
    if d.kind == CHORD:
        words = chord_words(d)
        parts = [f"p={d.p}"]
        for s, w in enumerate(words, start=1):
            parts.append(f"s{s}: " + " ".join(_chord_label(c) for c in w) if w else f"s{s}:")
        return "; ".join(parts) + "\n"
    lines = [f"type {d.kind}"]
    if d.kind == JACOBI:
        for leg, c in enumerate(d.colors):
            lines.append(f"leg l{leg + 1} color {c}")
    else:
        lines.append(f"strings {d.p}")
        for s, legs in enumerate(d.strings, start=1):
            for leg in legs:
                lines.append(f"leg l{leg + 1} on {s}")
    for k in range(d.n_tri):
        lines.append(f"vertex t{k + 1} a b c")

    def name(h):
        if h < d.n_legs:
            return f"l{h + 1}"
        k, s = divmod(h - d.n_legs, 3)
        return f"t{k + 1}.{s}"

    for h, q in enumerate(d.partner):
        if h < q:
            lines.append(f"edge {name(h)} {name(q)}")
    return "\n".join(lines) + "\n"


def format_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_lincomb(text: str) -> LinComb:
    blocks: list[tuple[Fraction, list[str]]] = []
    loose: list[str] = []
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if body.startswith("term ") or body == "term":
            parts = body.split()
            if len(parts) != 2:
                raise DiagramSyntaxError(f"bad term line {raw!r}")
            try:
                coeff = Fraction(parts[1])
            except ValueError:
                raise DiagramSyntaxError(f"bad coefficient {parts[1]!r}") from None
            blocks.append((coeff, []))
        elif blocks:
            blocks[-1][1].append(raw)
        else:
            loose.append(raw)
    if not blocks:
        return LinComb.of(parse_diagram("\n".join(loose)))
    if any(x.split("#", 1)[0].strip() for x in loose):
        raise DiagramSyntaxError("text before the first 'term' line")
    out = LinComb()
    for coeff, lines in blocks:
        out = out + LinComb.of(parse_diagram("\n".join(lines)), coeff)
    return out


def serialize_lincomb(v: LinComb) -> str:
    if not v:
        return "0\n"
    chunks = []
    for d, c in v.sorted_items():
        chunks.append(f"term {format_rational(c)}\n" + serialize_diagram(d))
    return "".join(chunks)
