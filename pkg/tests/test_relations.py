import random

import pytest

from linkweights.diagram import JACOBI, LinComb, chord_diagram, flip_vertices, has_isolated_chord, make_diagram
from linkweights.dsl import parse_diagram, parse_lincomb
from linkweights.relations import (
    GuardExceeded,
    StructuralError,
    count_chord_diagrams,
    enumerate_chord_diagrams,
    internal_edges,
    local_relation,
    random_choice,
    relation_generators,
    relation_set_text,
    relation_set_triplets,
    stu_all_orders,
    stu_expand,
)
from linkweights.span import build_span
from linkweights.tensor import TensorEnvPoly
from linkweights.weights import phi, psi

from helpers import random_attached, random_jacobi


def test_enumeration_counts():
    assert [len(enumerate_chord_diagrams(n, 2)) for n in (1, 2, 3)] == [3, 15, 105]
    assert count_chord_diagrams(5, 2) == 10395
    assert len(enumerate_chord_diagrams(2, 1)) == 3
    assert len(enumerate_chord_diagrams(2, 3)) == 45


def test_enumeration_is_exhaustive_and_distinct():
    ds = enumerate_chord_diagrams(3, 2)
    assert len(set(ds)) == len(ds)
    # brute force: label words over 2 strings using each of 3 labels twice
    import itertools

    seen = set()
    for word in set(itertools.permutations("aabbcc")):
        for cut in range(7):
            d = chord_diagram([word[:cut], word[cut:]], 2)
            seen.add(d)
    assert seen == set(ds)


def test_guard():
    with pytest.raises(GuardExceeded):
        enumerate_chord_diagrams(6, 2)


def test_stu_example(fixtures):
    d = parse_diagram((fixtures / "example-sec2-stu.dgm").read_text())
    e = stu_expand(d)
    assert e == LinComb.of(parse_diagram("p=2; s1: A B A; s2: B")) - LinComb.of(parse_diagram("p=2; s1: A B B; s2: A"))


@pytest.mark.parametrize("seed", range(12))
def test_stu_preserves_phi(seed):
    rng = random.Random(seed)
    d = random_attached(rng, *rng.choice([(3, 1), (4, 2), (3, 3), (2, 2)]))
    e = stu_expand(d)
    assert all(x.kind == "chord" for x in e)
    for N in (2, 3):
        assert phi(e, N, p=d.p) == phi(d, N)


@pytest.mark.parametrize("seed", range(10))
def test_stu_confluence(seed):
    """Every elimination order gives the same element modulo 4T."""
    rng = random.Random(seed)
    d = random_attached(rng, *rng.choice([(3, 1), (4, 2), (3, 3), (2, 2), (5, 3)]))
    base = stu_expand(d)
    basis = build_span(d.degree, d.p)
    others = stu_all_orders(d)[:40] + [stu_expand(d, random_choice(s)) for s in range(3)]
    for other in others:
        assert not basis.residual(other - base)


def test_stu_needs_a_string():
    # a theta graph floating off the strings, plus a chord to make a diagram
    d = make_diagram("generalized", 1, [["a", "b"]], tris=["u", "v"],
                     edges=[("a", "b"), (("u", 0), ("v", 0)), (("u", 1), ("v", 2)), (("u", 2), ("v", 1))])
    with pytest.raises(StructuralError):
        stu_expand(d)


def test_prop1_expansions_have_no_isolated_chords(fixtures):
    for name in ("prop1-left.dgm", "prop1-right.dgm"):
        e = stu_expand(parse_diagram((fixtures / name).read_text()))
        assert not any(has_isolated_chord(x) for x in e), name


@pytest.mark.parametrize("n", [1, 2, 3])
def test_phi_vanishes_on_4T(n):
    rels = relation_generators("4T", n, 2).relations
    cache = {}
    for N in (2, 3):
        for r in rels:
            total = TensorEnvPoly.zero(N, 2)
            for d, c in r.items():
                if (d, N) not in cache:
                    cache[(d, N)] = phi(d, N)
                total = total + cache[(d, N)].scale(c)
            assert not total


def test_4T_relation_shape():
    for r in relation_generators("4T", 2, 1).relations + relation_generators("4T", 2, 2).relations:
        assert sum(r[d] for d in r) == 0
        assert r.degrees() == {2}


def test_1T_degree_one():
    rs = relation_generators("1T", 1, 2)
    got = {serial for serial in (next(iter(r)) for r in rs.relations)}
    assert got == {chord_diagram([["a", "a"], []], 2), chord_diagram([[], ["a", "a"]], 2)}


def test_relation_set_export():
    rs = relation_generators("4T", 2, 2)
    text = relation_set_text(rs)
    assert text.count("relation ") == len(rs)
    first = text.split("relation 2\n")[0].split("relation 1\n")[1]
    assert parse_lincomb(first) == rs.relations[0]
    trip = relation_set_triplets(rs, enumerate_chord_diagrams(2, 2)).splitlines()
    assert trip[0].startswith("# kind 4T degree 2 strings 2")
    assert len(trip) - 1 == sum(len(r) for r in rs.relations)


JACOBI_SHAPES = [(1, 1), (2, 2), (3, 1), (3, 3), (4, 2), (2, 4), (4, 4), (5, 3), (2, 6), (3, 5)]


@pytest.mark.parametrize("seed", range(30))
def test_psi_vanishes_on_AS_and_IHX(seed):
    rng = random.Random(seed)
    j = random_jacobi(rng, *JACOBI_SHAPES[seed % len(JACOBI_SHAPES)], colors=rng.choice([2, 3]))
    assert j.degree <= 4
    for k in range(j.n_tri):
        # evaluated on the diagrams themselves, without canonical signs
        assert not (psi(j, 3) + psi(flip_vertices(j, [k]), 3))
    for h in internal_edges(j):
        assert not psi(local_relation(j, h, "IHX"), 3)


def test_IHX_terms_are_distinct_shapes():
    legs = {"a": 1, "b": 2, "c": 3, "d": 4}
    h = make_diagram(JACOBI, None, leg_colors=legs, tris=["u", "v"],
                     edges=[(("u", 0), ("v", 0)), ("a", ("u", 1)), ("b", ("u", 2)), ("c", ("v", 1)), ("d", ("v", 2))])
    rel = local_relation(h, internal_edges(h)[0], "IHX")
    assert len(rel) == 3
    assert not psi(rel, 4)
