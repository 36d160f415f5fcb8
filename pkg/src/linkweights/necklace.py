"""Necklace generators of [S(gl_N)^{(x)p}]^{gl_N} and polynomials in them.

Coefficients are polynomials in the symbolic rank ``N``, stored as tuples
``(a0, a1, ...)`` of exact rationals with no trailing zeros.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .tensor import SymTensorPoly


class NecklaceError(ValueError):
    pass


def min_rotation(word: tuple) -> tuple:
    return min(word[k:] + word[:k] for k in range(len(word)))


@dataclass(frozen=True, order=True)
class Necklace:
    word: tuple[int, ...]

    def __post_init__(self):
        if not self.word:
            raise NecklaceError("a necklace needs at least one bead")
        if self.word != min_rotation(self.word):
            raise NecklaceError(f"{self.word} is not a minimal rotation; use canonical_necklace")

    def __len__(self):
        return len(self.word)

    def reversed(self) -> "Necklace":
        return Necklace(min_rotation(tuple(reversed(self.word))))

    def is_symmetric(self) -> bool:
        return self.reversed() == self

    def __str__(self):
        sep = "," if any(c > 9 for c in self.word) else ""
        return "x[" + sep.join(map(str, self.word)) + "]"


def canonical_necklace(word: Iterable[int] | str, p: int | None = None) -> Necklace:
    if isinstance(word, str):
        word = [int(ch) for ch in word.replace(",", "")] if "," not in word else [int(t) for t in word.split(",")]
    word = tuple(word)
    if not word:
        raise NecklaceError("empty necklace word")
    for c in word:
        if c < 1 or (p is not None and c > p):
            raise NecklaceError(f"color {c} out of range")
    return Necklace(min_rotation(word))


def tau_S(m: Necklace) -> Necklace:
    return m.reversed()


# -- polynomials in N ---------------------------------------------------------

def _trim(c: tuple) -> tuple:
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(_norm(x) for x in c)


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _padd(a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    return _trim(tuple((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)))


def _pmul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(tuple(out))


def _peval(a: tuple, N: int):
    return sum(c * N**k for k, c in enumerate(a))


def format_npoly(a: tuple) -> str:
    parts = []
    for k, c in enumerate(a):
        if not c:
            continue
        c = Fraction(c)
        mag = str(abs(c.numerator)) if c.denominator == 1 else f"{abs(c.numerator)}/{c.denominator}"
        body = mag if k == 0 else (f"{mag}*N" if k == 1 else f"{mag}*N^{k}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def parse_npoly(text: str) -> tuple:
    text = text.replace(" ", "")
    if text in ("", "0"):
        return ()
    coeffs: dict[int, Fraction] = {}
    for sign, mag, npart in re.findall(r"([+-]?)([0-9/]+)(\*N(?:\^\d+)?)?", text):
        k = 0 if not npart else (int(npart[3:]) if "^" in npart else 1)
        v = Fraction(mag) * (-1 if sign == "-" else 1)
        coeffs[k] = coeffs.get(k, 0) + v
    n = max(coeffs) + 1
    return _trim(tuple(coeffs.get(k, 0) for k in range(n)))


Monomial = tuple  # sorted tuple of Necklace


class NecklacePoly:
    """Polynomial in necklace generators with coefficients in Q[N].

    ``terms`` maps a sorted tuple of necklaces (a multiset; the empty tuple is
    the unit) to a coefficient polynomial in N.
    """

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping | None = None):
        self.p = p
        self.terms: dict[Monomial, tuple] = {}
        for mono, coeff in (terms or {}).items():
            self._add(mono, coeff)

    def _add(self, mono, coeff):
        if not isinstance(coeff, tuple):
            coeff = (coeff,)
        mono = tuple(sorted(mono))
        for m in mono:
            if self.p is not None and any(c > self.p for c in m.word):
                raise NecklaceError(f"necklace {m} uses a color above p={self.p}")
        v = _padd(self.terms.get(mono, ()), _trim(coeff))
        if v:
            self.terms[mono] = v
        else:
            self.terms.pop(mono, None)

    @classmethod
    def necklace(cls, m: Necklace, p: int, coeff=1) -> "NecklacePoly":
        return cls(p, {(m,): coeff})

    @classmethod
    def constant(cls, p: int, coeff=1) -> "NecklacePoly":
        return cls(p, {(): coeff})

    @classmethod
    def N(cls, p: int) -> "NecklacePoly":
        return cls(p, {(): (0, 1)})

    def _check(self, other):
        if not isinstance(other, NecklacePoly):
            raise TypeError("expected a NecklacePoly")
        if self.p != other.p:
            raise NecklaceError(f"mismatched p: {self.p} vs {other.p}")

    def __add__(self, other):
        self._check(other)
        out = NecklacePoly(self.p)
        out.terms = dict(self.terms)
        for m, c in other.terms.items():
            out._add(m, c)
        return out

    def __neg__(self):
        out = NecklacePoly(self.p)
        out.terms = {m: tuple(-x for x in c) for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "NecklacePoly":
        """Multiply by a rational or by a polynomial in N given as a tuple."""
        s = s if isinstance(s, tuple) else (s,)
        out = NecklacePoly(self.p)
        for m, c in self.terms.items():
            out._add(m, _pmul(c, _trim(s)))
        return out

    def __mul__(self, other):
        if not isinstance(other, NecklacePoly):
            return self.scale(other)
        self._check(other)
        out = NecklacePoly(self.p)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out._add(m1 + m2, _pmul(c1, c2))
        return out

    def __rmul__(self, s):
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, NecklacePoly):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"NecklacePoly(p={self.p}, {len(self)} terms)"

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: tuple(m.word for m in kv[0]))

    def to_text(self) -> str:
        if not self.terms:
            return "0\n"
        lines = []
        for mono, c in self.sorted_terms():
            lines.append(" * ".join([f"({format_npoly(c)})"] + [str(m) for m in mono]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, p: int) -> "NecklacePoly":
        out = cls(p)
        for line in text.splitlines():
            line = line.strip()
            if not line or line == "0":
                continue
            m = re.fullmatch(r"\(([^)]*)\)((?:\s*\*\s*x\[[0-9,]+\])*)", line)
            if not m:
                raise NecklaceError(f"cannot parse term {line!r}")
            necks = [canonical_necklace(w) for w in re.findall(r"x\[([0-9,]+)\]", m.group(2))]
            out._add(tuple(necks), parse_npoly(m.group(1)))
        return out

    def to_json(self) -> str:
        rows = [
            {"coeff": [str(Fraction(x)) for x in c], "monomial": [list(m.word) for m in mono]}
            for mono, c in self.sorted_terms()
        ]
        return json.dumps({"p": self.p, "terms": rows}, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "NecklacePoly":
        data = json.loads(text)
        out = cls(data["p"])
        for row in data["terms"]:
            out._add(tuple(Necklace(tuple(w)) for w in row["monomial"]), tuple(Fraction(x) for x in row["coeff"]))
        return out

    def necklaces(self) -> set[Necklace]:
        return {m for mono in self.terms for m in mono}

    def evaluate(self, N: int) -> SymTensorPoly:
        """Expand every necklace at a concrete rank and substitute N."""
        out = SymTensorPoly(N, self.p)
        cache: dict[Necklace, SymTensorPoly] = {}
        for mono, c in self.terms.items():
            term = SymTensorPoly.one(N, self.p).scale(_peval(c, N))
            for m in mono:
                if m not in cache:
                    cache[m] = expand_necklace(m, N, self.p)
                term = term * cache[m]
            out = out + term
        return out


def tau_S_poly(q: NecklacePoly) -> NecklacePoly:
    out = NecklacePoly(q.p)
    for mono, c in q.terms.items():
        out._add(tuple(m.reversed() for m in mono), c)
    return out


def iter_necklace_expansion(m: Necklace, N: int, p: int):
    """Raw terms of the expansion: one commutative monomial per index
    assignment to the arcs, N**len(m) in total.

    Bead ``t`` sits between arc ``t`` (incoming) and arc ``t+1`` (outgoing)
    and contributes ``e[in, out]`` to the factor of its color.
    """
    n = len(m.word)
    for idx in itertools.product(range(1, N + 1), repeat=n):
        factors = [[] for _ in range(p)]
        for t, color in enumerate(m.word):
            factors[color - 1].append((idx[t], idx[(t + 1) % n]))
        yield tuple(tuple(sorted(f)) for f in factors)


def expand_necklace(m: Necklace, N: int, p: int | None = None) -> SymTensorPoly:
    if N < 1:
        raise NecklaceError("N must be at least 1")
    p = max(m.word) if p is None else p
    out = SymTensorPoly(N, p)
    for mono in iter_necklace_expansion(m, N, p):
        v = out.terms.get(mono, 0) + 1
        out.terms[mono] = v
    return out


def all_necklaces(length: int, p: int) -> list[Necklace]:
    """Every p-colored necklace of the given length, sorted."""
    seen = {min_rotation(w) for w in itertools.product(range(1, p + 1), repeat=length)}
    return [Necklace(w) for w in sorted(seen)]
