"""Random diagram generators and small independent oracles shared by tests."""

import itertools
from fractions import Fraction

from linkweights.diagram import GENERALIZED, JACOBI, make_diagram


def random_jacobi(rng, n_legs, n_tri, colors=2, connected=True, tries=200):
    """Uniformly random pairing of darts; retried until connected if asked."""
    assert (n_legs + 3 * n_tri) % 2 == 0
    for _ in range(tries):
        darts = [("L", k) for k in range(n_legs)] + [(t, s) for t in range(n_tri) for s in range(3)]
        rng.shuffle(darts)
        edges = list(zip(darts[::2], darts[1::2]))
        if connected and not _connected(n_legs, n_tri, edges):
            continue
        legs = {("L", k): rng.randint(1, colors) for k in range(n_legs)}
        return make_diagram(JACOBI, None, leg_colors=legs, tris=list(range(n_tri)), edges=edges)
    raise RuntimeError("no connected sample found")


def _node(end):
    return end if end[0] == "L" else ("T", end[0])


def _connected(n_legs, n_tri, edges):
    nodes = {("L", k) for k in range(n_legs)} | {("T", t) for t in range(n_tri)}
    adj = {x: set() for x in nodes}
    for a, b in edges:
        adj[_node(a)].add(_node(b))
        adj[_node(b)].add(_node(a))
    start = next(iter(nodes))
    seen, todo = {start}, [start]
    while todo:
        for y in adj[todo.pop()]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen == nodes


def random_attached(rng, n_legs, n_tri, p=2):
    """A random generalized diagram: a connected uni-trivalent graph with its
    legs spread over p strings in random order; every component reaches a
    string because the graph is connected and has legs."""
    j = random_jacobi(rng, n_legs, n_tri, colors=p)
    legs = list(range(j.n_legs))
    rng.shuffle(legs)
    strings = [[] for _ in range(p)]
    for leg in legs:
        strings[j.colors[leg] - 1].append(("L", leg))

    def end(h):
        return ("L", h) if h < j.n_legs else divmod(h - j.n_legs, 3)

    edges = [(end(h), end(q)) for h, q in enumerate(j.partner) if h < q]
    return make_diagram(GENERALIZED, p, strings, tris=list(range(j.n_tri)), edges=edges)


def jacobi_shapes(max_degree):
    """(legs, trivalent vertices) pairs with at least one leg and degree <= max."""
    out = []
    for t in range(0, 2 * max_degree):
        for L in range(1, 2 * max_degree + 1):
            if (L + t) % 2 == 0 and (L + t) // 2 <= max_degree:
                out.append((L, t))
    return out


# -- matrix oracle for U(gl_N) ------------------------------------------------------

def matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def elementary(N, i, j):
    m = [[Fraction(0)] * N for _ in range(N)]
    m[i - 1][j - 1] = Fraction(1)
    return m


def adjoint_rep(N):
    """Matrices of ad(e_ij) on gl_N in the basis e_11, e_12, ..., e_NN."""
    basis = [(a, b) for a in range(1, N + 1) for b in range(1, N + 1)]
    idx = {g: k for k, g in enumerate(basis)}
    reps = {}
    for i, j in basis:
        m = [[Fraction(0)] * len(basis) for _ in basis]
        for (k, l) in basis:
            # [e_ij, e_kl] = d_jk e_il - d_li e_kj
            if j == k:
                m[idx[(i, l)]][idx[(k, l)]] += 1
            if l == i:
                m[idx[(k, j)]][idx[(k, l)]] -= 1
        reps[(i, j)] = m
    return reps


def word_matrix(word, rep, size):
    m = identity(size)
    for g in word:
        m = matmul(m, rep[g])
    return m


def poly_matrix(terms, rep, size):
    """Sum of coeff * product for a p=1 polynomial {((word,),): c}."""
    total = [[Fraction(0)] * size for _ in range(size)]
    for mono, c in terms.items():
        (w,) = mono
        m = word_matrix(w, rep, size)
        for i in range(size):
            for j in range(size):
                total[i][j] += c * m[i][j]
    return total


def all_pairs(N):
    return list(itertools.product(range(1, N + 1), repeat=2))
