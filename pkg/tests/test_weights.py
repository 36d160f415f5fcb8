import random

import pytest

from linkweights.diagram import chord_diagram, flip_vertices, tau_A
from linkweights.dsl import parse_diagram
from linkweights.necklace import canonical_necklace
from linkweights.relations import enumerate_chord_diagrams
from linkweights.tensor import normal_order, pi_symmetrize, tau_U
from linkweights.weights import (
    boundary_walk,
    chi,
    format_index_expression,
    index_expression,
    phi,
    phi_count_raw,
    psi,
    psi_terms,
    raw_phi,
    resolve_vertices,
)

from helpers import random_attached, random_jacobi


def load(fixtures, name):
    return parse_diagram((fixtures / name).read_text())


def test_single_chord_is_casimir():
    # one chord on one string: sum_ij e_ij e_ji
    N = 3
    d = chord_diagram([["a", "a"]])
    raw = [((((i, j), (j, i)),), 1) for i in range(1, N + 1) for j in range(1, N + 1)]
    assert phi(d, N) == normal_order(raw, N, 1)


def test_chord_between_strings():
    N = 2
    d = chord_diagram([["a"], ["a"]])
    raw = [((((i, j),), ((j, i),)), 1) for i in range(1, N + 1) for j in range(1, N + 1)]
    assert phi(d, N) == normal_order(raw, N, 2)


def test_worked_example(fixtures):
    d = load(fixtures, "example-sec3.dgm")
    assert format_index_expression(index_expression(d)) == (
        "+ e_ij e_jk (x) e_li e_kl\n"
        "- e_ij e_kl (x) e_li e_jk\n"
        "- e_ij e_kl (x) e_jk e_li\n"
        "+ e_ij e_ki (x) e_jl e_lk\n"
    )


def test_resolution_count(fixtures):
    h = load(fixtures, "heptapus.dgm")
    rs = resolve_vertices(h)
    assert len(rs) == 2 ** h.n_tri == 128
    assert sum(r.sign for r in rs) == 0


def test_boundary_walk_visits_every_leg_once(fixtures):
    h = load(fixtures, "heptapus.dgm")
    for r in resolve_vertices(h)[:10]:
        bd = boundary_walk(r)
        beads = [x for c in bd.components for x in c.beads]
        assert sorted(beads) == list(range(h.n_legs))


def test_sec5_example_vanishes(fixtures):
    d = load(fixtures, "example-sec5.dgm")
    assert not psi(d)
    assert len(psi_terms(d)) == 2


def test_raw_phi_agrees(fixtures):
    d = load(fixtures, "example-sec3.dgm")
    for N in (2, 3):
        assert raw_phi(d, N) == phi(d, N)
    assert phi_count_raw(d, 2) == 4 * 2 ** 4


def test_jobs_do_not_change_the_result():
    d = random_attached(random.Random(3), 4, 4)
    assert phi(d, 2, jobs=2).to_text() == phi(d, 2, jobs=1).to_text()


@pytest.mark.parametrize("seed", range(8))
def test_phi_respects_AS(seed):
    d = random_attached(random.Random(seed), 4, 2)
    k = seed % d.n_tri
    assert phi(flip_vertices(d, [k]), 2) == -phi(d, 2)


@pytest.mark.parametrize("N", [2, 3])
def test_phi_commutes_with_reversal_on_chords(N):
    for n in (1, 2, 3):
        for d in enumerate_chord_diagrams(n, 2):
            assert phi(tau_A(d), N) == tau_U(phi(d, N))


@pytest.mark.parametrize("seed", range(10))
def test_phi_commutes_with_reversal_on_generalized(seed):
    rng = random.Random(seed)
    d = random_attached(rng, *rng.choice([(3, 1), (4, 2), (3, 3), (5, 3)]))
    for N in (2, 3):
        assert phi(tau_A(d), N) == tau_U(phi(d, N))


JACOBI_SHAPES = [(2, 0), (1, 1), (3, 1), (2, 2), (4, 2), (3, 3)]


@pytest.mark.parametrize("seed", range(12))
def test_phi_chi_equals_pi_psi(seed):
    rng = random.Random(seed)
    j = random_jacobi(rng, *rng.choice(JACOBI_SHAPES), colors=2)
    for N in (2, 3):
        assert phi(chi(j, 2), N, p=2) == pi_symmetrize(psi(j, 2).evaluate(N))


def test_psi_is_a_necklace_polynomial(fixtures):
    h = load(fixtures, "heptapus.dgm")
    q = psi(h, 2)
    assert canonical_necklace("1121222") in q.necklaces()
    assert all(len(m) for m in q.necklaces())
