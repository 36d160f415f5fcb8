"""Exact arithmetic in U(gl_N)^{(x)p}.

Generators are matrix units ``e[i,j]`` with ``1 <= i, j <= N``, ordered
lexicographically on ``(i, j)``.  A monomial is a tuple of per-factor words;
a normal-ordered word is nondecreasing.  Internally a generator is encoded as
the integer ``(i-1)*N + (j-1)``, which preserves the order.
"""

from __future__ import annotations

import itertools
import json
import random
import re
from fractions import Fraction
from typing import Iterable, Mapping

Word = tuple  # tuple of (i, j)


class TensorError(ValueError):
    pass


def _q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _acc(target: dict, key, c):
    v = target.get(key, 0) + c
    if v:
        target[key] = v
    else:
        target.pop(key, None)


# -- normal ordering on encoded words ----------------------------------------

class _Orderer:
    """Memoised PBW normal form of encoded words for one rank N.

    Rewrites the leftmost descent ``a b`` (a > b) as
    ``b a + [a, b]`` with ``[e_ij, e_kl] = d_jk e_il - d_li e_kj``.
    """

    _instances: dict[int, "_Orderer"] = {}

    def __init__(self, N: int):
        self.N = N
        self.cache: dict[tuple, dict] = {}

    @classmethod
    def get(cls, N: int) -> "_Orderer":
        inst = cls._instances.get(N)
        if inst is None:
            inst = cls._instances[N] = cls(N)
        return inst

    def nf(self, word: tuple) -> dict:
        cache = self.cache
        hit = cache.get(word)
        if hit is not None:
            return hit
        for pos in range(len(word) - 1):
            if word[pos] > word[pos + 1]:
                break
        else:
            res = {word: 1}
            cache[word] = res
            return res
        N = self.N
        a, b = word[pos], word[pos + 1]
        head, tail = word[:pos], word[pos + 2:]
        res = dict(self.nf(head + (b, a) + tail))
        i, j = divmod(a, N)
        k, l = divmod(b, N)
        if j == k:
            for m, c in self.nf(head + (i * N + l,) + tail).items():
                _acc(res, m, c)
        if l == i:
            for m, c in self.nf(head + (k * N + j,) + tail).items():
                _acc(res, m, -c)
        if len(cache) > 2_000_000:
            cache.clear()
        cache[word] = res
        return res


def _commutator(a: int, b: int, N: int):
    i, j = divmod(a, N)
    k, l = divmod(b, N)
    out = []
    if j == k:
        out.append((i * N + l, 1))
    if l == i:
        out.append((k * N + j, -1))
    return out


def _normal_order_worklist(word: tuple, N: int, strategy: str, rng: random.Random | None) -> dict:
    """Unmemoised rewriting; the adjacent inversion rewritten is chosen by
    ``strategy`` ('leftmost', 'rightmost' or 'random')."""
    todo: dict[tuple, int] = {word: 1}
    done: dict[tuple, int] = {}
    while todo:
        w, c = todo.popitem()
        inv = [k for k in range(len(w) - 1) if w[k] > w[k + 1]]
        if not inv:
            _acc(done, w, c)
            continue
        if strategy == "leftmost":
            pos = inv[0]
        elif strategy == "rightmost":
            pos = inv[-1]
        else:
            pos = rng.choice(inv)
        a, b = w[pos], w[pos + 1]
        _acc(todo, w[:pos] + (b, a) + w[pos + 2:], c)
        for g, s in _commutator(a, b, N):
            _acc(todo, w[:pos] + (g,) + w[pos + 2:], s * c)
    return done


def _encode(word: Iterable, N: int) -> tuple:
    out = []
    for g in word:
        i, j = g
        if not (1 <= i <= N and 1 <= j <= N):
            raise TensorError(f"generator e[{i},{j}] out of range for N={N}")
        out.append((i - 1) * N + (j - 1))
    return tuple(out)


def _decode(word: tuple, N: int) -> tuple:
    return tuple((g // N + 1, g % N + 1) for g in word)


# -- polynomials ---------------------------------------------------------------

class TensorEnvPoly:
    """Normal-ordered element of U(gl_N)^{(x)p} with exact rational coefficients.

    ``terms`` maps a tuple of ``p`` nondecreasing words (tuples of ``(i, j)``)
    to a nonzero coefficient.
    """

    __slots__ = ("N", "p", "terms")

    def __init__(self, N: int, p: int, terms: Mapping | None = None, _trusted=False):
        self.N, self.p = N, p
        if _trusted:
            self.terms = dict(terms or {})
        else:
            self.terms = {}
            for mono, c in (terms or {}).items():
                if len(mono) != p:
                    raise TensorError(f"monomial {mono!r} does not have {p} factors")
                for w in mono:
                    _encode(w, N)
                    if any(w[k] > w[k + 1] for k in range(len(w) - 1)):
                        raise TensorError(f"word {w!r} is not normal-ordered")
                if c:
                    _acc(self.terms, tuple(tuple(map(tuple, w)) for w in mono), _q(Fraction(c)))

    # construction
    @classmethod
    def one(cls, N: int, p: int) -> "TensorEnvPoly":
        return cls(N, p, {((),) * p: 1}, _trusted=True)

    @classmethod
    def zero(cls, N: int, p: int) -> "TensorEnvPoly":
        return cls(N, p, {}, _trusted=True)

    def _check(self, other):
        if not isinstance(other, TensorEnvPoly):
            raise TypeError("expected a TensorEnvPoly")
        if (self.N, self.p) != (other.N, other.p):
            raise TensorError(f"mismatched (N, p): {(self.N, self.p)} vs {(other.N, other.p)}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return TensorEnvPoly(self.N, self.p, out, _trusted=True)

    def __neg__(self):
        return TensorEnvPoly(self.N, self.p, {m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "TensorEnvPoly":
        if not s:
            return TensorEnvPoly.zero(self.N, self.p)
        return TensorEnvPoly(self.N, self.p, {m: _q(c * s) for m, c in self.terms.items()}, _trusted=True)

    def __rmul__(self, s):
        return self.scale(s)

    def __mul__(self, other):
        if not isinstance(other, TensorEnvPoly):
            return self.scale(other)
        self._check(other)
        N = self.N
        orderer = _Orderer.get(N)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                factors = [orderer.nf(_encode(a + b, N)) for a, b in zip(m1, m2)]
                for combo in itertools.product(*(f.items() for f in factors)):
                    c = c1 * c2
                    for _, cf in combo:
                        c *= cf
                    _acc(out, tuple(_decode(w, N) for w, _ in combo), c)
        return TensorEnvPoly(N, self.p, out, _trusted=True)

    def __eq__(self, other):
        if not isinstance(other, TensorEnvPoly):
            return NotImplemented
        return (self.N, self.p, self.terms) == (other.N, other.p, other.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"TensorEnvPoly(N={self.N}, p={self.p}, {len(self)} terms)"

    # formats
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def to_text(self) -> str:
        if not self.terms:
            return "0\n"
        lines = []
        for mono, c in self.sorted_terms():
            c = Fraction(c)
            factors = ["".join(f"e[{i},{j}]" for i, j in w) or "1" for w in mono]
            lines.append(f"{c.numerator}/{c.denominator} " + " (x) ".join(factors))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, N: int, p: int | None = None) -> "TensorEnvPoly":
        terms: dict = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line == "0":
                continue
            coeff, _, rest = line.partition(" ")
            factors = [f.strip() for f in rest.split("(x)")]
            words = []
            for f in factors:
                gens = [] if f == "1" else [(int(a), int(b)) for a, b in re.findall(r"e\[(\d+),(\d+)\]", f)]
                words.append(tuple(gens))
            if p is None:
                p = len(words)
            _acc(terms, tuple(words), Fraction(coeff))
        return normal_order(terms.items(), N, p if p is not None else 1)

    def to_json(self) -> str:
        rows = []
        for mono, c in self.sorted_terms():
            rows.append({"coeff": str(Fraction(c)), "factors": [[list(g) for g in w] for w in mono]})
        return json.dumps({"N": self.N, "p": self.p, "terms": rows}, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TensorEnvPoly":
        data = json.loads(text)
        terms = {}
        for row in data["terms"]:
            mono = tuple(tuple(tuple(g) for g in w) for w in row["factors"])
            terms[mono] = Fraction(row["coeff"])
        return cls(data["N"], data["p"], terms)


def normal_order(raw: Iterable, N: int, p: int, strategy: str = "memo", seed: int | None = None) -> TensorEnvPoly:
    """PBW normal form of ``sum(coeff * w_1 (x) ... (x) w_p)``.

    ``raw`` yields ``(monomial, coeff)`` pairs (or is a mapping), each monomial
    a tuple of ``p`` words of ``(i, j)`` pairs in any order.
    """
    if isinstance(raw, Mapping):
        raw = raw.items()
    rng = random.Random(seed) if strategy == "random" else None
    orderer = _Orderer.get(N)
    out: dict = {}
    for mono, coeff in raw:
        if len(mono) != p:
            raise TensorError(f"monomial {mono!r} does not have {p} factors")
        if not coeff:
            continue
        coeff = _q(Fraction(coeff))
        factors = []
        for w in mono:
            enc = _encode(w, N)
            factors.append(orderer.nf(enc) if strategy == "memo" else _normal_order_worklist(enc, N, strategy, rng))
        for combo in itertools.product(*(f.items() for f in factors)):
            c = coeff
            for _, cf in combo:
                c *= cf
            _acc(out, tuple(w for w, _ in combo), c)
    return TensorEnvPoly(N, p, {tuple(_decode(w, N) for w in m): c for m, c in out.items()}, _trusted=True)


def normal_order_encoded(grouped: Mapping, N: int) -> dict:
    """Normal form of ``sum_{head} head (x) sum_{w} c * w`` on encoded words.

    ``grouped`` maps a tuple of leading words to ``{last word: coeff}``.
    Returns encoded monomials.  Used by the weight-system engine to keep the
    expensive last-factor products grouped.
    """
    orderer = _Orderer.get(N)
    out: dict = {}
    for head, tails in grouped.items():
        inner: dict = {}
        for w, c in tails.items():
            for m, cm in orderer.nf(w).items():
                _acc(inner, m, c * cm)
        if not inner:
            continue
        head_nf = [orderer.nf(w).items() for w in head]
        for combo in itertools.product(*head_nf):
            ch = 1
            for _, cf in combo:
                ch *= cf
            hw = tuple(w for w, _ in combo)
            for m, c in inner.items():
                _acc(out, hw + (m,), ch * c)
    return out


def from_encoded(terms: Mapping, N: int, p: int) -> TensorEnvPoly:
    return TensorEnvPoly(N, p, {tuple(_decode(w, N) for w in m): _q(c) for m, c in terms.items() if c}, _trusted=True)


def tau_U(a: TensorEnvPoly) -> TensorEnvPoly:
    """Reverse every factor word and transpose every generator."""
    raw = ((tuple(tuple((j, i) for i, j in reversed(w)) for w in mono), c) for mono, c in a.terms.items())
    return normal_order(raw, a.N, a.p)


# -- commutative side ------------------------------------------------------------

class SymTensorPoly:
    """Element of S(gl_N)^{(x)p}: commutative per-factor monomials, stored sorted."""

    __slots__ = ("N", "p", "terms")

    def __init__(self, N: int, p: int, terms: Mapping | None = None):
        self.N, self.p = N, p
        self.terms: dict = {}
        for mono, c in (terms or {}).items():
            if len(mono) != p:
                raise TensorError(f"monomial {mono!r} does not have {p} factors")
            for w in mono:
                _encode(w, N)
            _acc(self.terms, tuple(tuple(sorted(map(tuple, w))) for w in mono), _q(Fraction(c)))

    def __add__(self, other):
        out = SymTensorPoly(self.N, self.p)
        out.terms = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out.terms, m, c)
        return out

    def scale(self, s):
        out = SymTensorPoly(self.N, self.p)
        if s:
            out.terms = {m: _q(c * s) for m, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, SymTensorPoly):
            return self.scale(other)
        if (self.N, self.p) != (other.N, other.p):
            raise TensorError("mismatched (N, p)")
        out = SymTensorPoly(self.N, self.p)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _acc(out.terms, tuple(tuple(sorted(a + b)) for a, b in zip(m1, m2)), c1 * c2)
        return out

    def __eq__(self, other):
        if not isinstance(other, SymTensorPoly):
            return NotImplemented
        return (self.N, self.p, self.terms) == (other.N, other.p, other.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SymTensorPoly(N={self.N}, p={self.p}, {len(self)} terms)"

    @classmethod
    def one(cls, N: int, p: int) -> "SymTensorPoly":
        return cls(N, p, {((),) * p: 1})


def _distinct_orderings(word: tuple):
    """All distinct rearrangements of a sorted word."""
    if not word:
        yield ()
        return
    seen = set()
    for k, g in enumerate(word):
        if g in seen:
            continue
        seen.add(g)
        for rest in _distinct_orderings(word[:k] + word[k + 1:]):
            yield (g,) + rest


def pi_symmetrize(c: SymTensorPoly | Mapping, N: int | None = None, p: int | None = None) -> TensorEnvPoly:
    """PBW symmetrisation: each commutative factor monomial becomes the
    average of its orderings."""
    if not isinstance(c, SymTensorPoly):
        c = SymTensorPoly(N, p, c)
    N, p = c.N, c.p
    orderer = _Orderer.get(N)
    cache: dict[tuple, dict] = {}

    def sym(word):
        hit = cache.get(word)
        if hit is None:
            enc = _encode(word, N)
            perms = list(_distinct_orderings(tuple(sorted(enc))))
            hit = {}
            for w in perms:
                for m, cm in orderer.nf(w).items():
                    _acc(hit, m, cm)
            k = Fraction(1, len(perms))
            hit = {m: _q(v * k) for m, v in hit.items() if v}
            cache[word] = hit
        return hit

    out: dict = {}
    for mono, coeff in c.terms.items():
        for combo in itertools.product(*(sym(w).items() for w in mono)):
            v = coeff
            for _, cf in combo:
                v *= cf
            _acc(out, tuple(w for w, _ in combo), v)
    return from_encoded(out, N, p)

