import random

import pytest

from linkweights.diagram import (
    CHORD,
    GENERALIZED,
    JACOBI,
    Diagram,
    DiagramError,
    LinComb,
    canonicalize,
    chord_diagram,
    chord_words,
    flip_vertices,
    has_isolated_chord,
    is_isomorphic,
    make_diagram,
    reverse_strings,
    tau_A,
    tau_B_apply,
)
from linkweights.dsl import parse_diagram

from helpers import random_attached, random_jacobi


def relabel(d: Diagram, rng) -> Diagram:
    """Same diagram with trivalent vertices permuted, slots rotated and
    Jacobi legs shuffled."""
    tri_perm = list(range(d.n_tri))
    rng.shuffle(tri_perm)
    rot = [rng.randrange(3) for _ in range(d.n_tri)]
    if d.kind == JACOBI:
        leg_perm = list(range(d.n_legs))
        rng.shuffle(leg_perm)
    else:
        leg_perm = list(range(d.n_legs))

    def new(h):
        if h < d.n_legs:
            return leg_perm[h]
        k, s = divmod(h - d.n_legs, 3)
        return d.n_legs + 3 * tri_perm[k] + (s + rot[k]) % 3

    partner = [0] * d.n_darts
    for h in range(d.n_darts):
        partner[new(h)] = new(d.partner[h])
    colors = ()
    if d.kind == JACOBI:
        colors = [0] * d.n_legs
        for leg in range(d.n_legs):
            colors[leg_perm[leg]] = d.colors[leg]
        colors = tuple(colors)
    strings = tuple(tuple(leg_perm[x] for x in s) for s in d.strings)
    return Diagram(d.kind, d.p, strings, colors, d.n_legs, d.n_tri, tuple(partner))


def test_chord_words_round_trip():
    d = chord_diagram([["a", "b", "a"], ["b"]])
    assert d.kind == CHORD and d.degree == 2
    assert chord_words(d) == ((0, 1, 0), (1,))
    assert chord_diagram(chord_words(d), 2) == d


def test_generalized_without_vertices_is_chord():
    d = make_diagram(GENERALIZED, 1, [["x", "y"]], edges=[("x", "y")])
    assert d.kind == CHORD


def test_bad_pairing_rejected():
    with pytest.raises(DiagramError):
        make_diagram(CHORD, 1, [["x", "y", "z"]], edges=[("x", "y")])
    with pytest.raises(DiagramError):
        chord_diagram([["a", "b"]])


@pytest.mark.parametrize("seed", range(40))
def test_canonical_form_ignores_labels(seed):
    rng = random.Random(seed)
    legs, tris = rng.choice([(2, 0), (2, 2), (3, 1), (3, 3), (4, 2), (4, 4), (5, 3), (6, 4), (1, 3)])
    d = random_jacobi(rng, legs, tris) if seed % 2 else random_attached(rng, legs, tris)
    e = relabel(d, rng)
    assert canonicalize(d) == canonicalize(e)
    assert is_isomorphic(d, e)


@pytest.mark.parametrize("seed", range(30))
def test_single_flip_costs_a_sign(seed):
    rng = random.Random(100 + seed)
    d = random_jacobi(rng, 4, 2) if seed % 2 else random_attached(rng, 4, 2)
    k = rng.randrange(d.n_tri)
    a, b = canonicalize(d), canonicalize(flip_vertices(d, [k]))
    assert a.sign == -b.sign
    assert a.diagram == b.diagram


def test_as_degenerate_diagram_has_sign_zero():
    # a tripod with all legs of one color is mapped to itself by a flip
    d = make_diagram(JACOBI, None, leg_colors={"a": 1, "b": 1, "c": 1}, tris=["t"],
                     edges=[("a", ("t", 0)), ("b", ("t", 1)), ("c", ("t", 2))])
    assert canonicalize(d).sign == 0
    assert not LinComb.of(d)


def test_canonical_form_distinguishes_cyclic_order():
    # legs colored 1,2,3 around a vertex: the two cyclic orders differ by a flip
    d = make_diagram(JACOBI, None, leg_colors={"a": 1, "b": 2, "c": 3}, tris=["t"],
                     edges=[("a", ("t", 0)), ("b", ("t", 1)), ("c", ("t", 2))])
    e = make_diagram(JACOBI, None, leg_colors={"a": 1, "b": 3, "c": 2}, tris=["t"],
                     edges=[("a", ("t", 0)), ("b", ("t", 1)), ("c", ("t", 2))])
    assert canonicalize(d).sign == -canonicalize(e).sign


@pytest.mark.parametrize("seed", range(20))
def test_tau_A_is_an_involution(seed):
    d = random_attached(random.Random(seed), 4, 2)
    assert tau_A(tau_A(d)) == d
    assert reverse_strings(reverse_strings(d)) == d
    assert flip_vertices(flip_vertices(d)) == d


def test_tau_A_of_generalized_diagram_carries_the_vertex_sign():
    # reversing the strings alone differs from the reflection by (-1)^t
    d = random_attached(random.Random(5), 3, 1)
    a = LinComb.of(tau_A(d))
    b = LinComb.of(reverse_strings(d))
    assert a == -b


def test_tau_B_twice_is_identity(fixtures):
    h = parse_diagram((fixtures / "heptapus.dgm").read_text())
    s1, d1 = tau_B_apply(h)
    s2, d2 = tau_B_apply(d1)
    assert s1 == -1 and s1 * s2 == 1 and d2 == h


@pytest.mark.parametrize(
    "words, expected",
    [
        ([["a", "a"], []], True),
        ([["a", "b", "b", "a"], []], True),     # b intersects nothing
        ([["a", "b", "a", "b"], []], False),
        ([["a", "b", "a"], ["b"]], False),
        ([["a", "b"], ["b", "a"]], False),
        ([["a", "c", "c"], ["a"]], True),
    ],
)
def test_isolated_chords(words, expected):
    assert has_isolated_chord(chord_diagram(words, 2)) is expected


def test_lincomb_arithmetic():
    a = chord_diagram([["a", "a"], []])
    b = chord_diagram([["a"], ["a"]])
    v = LinComb.of(a, 2) - LinComb.of(b)
    assert v[a] == 2 and v[b] == -1
    assert v - v == LinComb()
    assert (v * 0) == LinComb()
    assert len(v + LinComb.of(b)) == 1
