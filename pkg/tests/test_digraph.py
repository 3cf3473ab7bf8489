import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betagraph.budget import Budget
from betagraph.corpus import all_small_digraphs
from betagraph.digraph import (
    Colouring,
    CoverFailure,
    Digraph,
    chromatic_number,
    colouring_from_symdiff_cover,
    composite_graph,
    distance,
    edge_graph,
    gamma_diameter,
    is_colouring,
    is_weakly_connected,
    kij_partition,
    loop_edges,
    max_out_degree,
    no_isolated,
    power,
    proper,
    pseudocomplete,
    pushout_graph,
    reach_set,
    relation_compose_check,
    successor_functions,
    symdiff_cover_from_colouring,
    weak_components,
)


@st.composite
def digraphs(draw, max_vertices=6, max_edges=10, min_vertices=0):
    n = draw(st.integers(min_vertices, max_vertices))
    if n == 0:
        return Digraph(0, ())
    v = st.integers(0, n - 1)
    edges = draw(st.lists(st.tuples(v, v), max_size=max_edges))
    return Digraph(n, tuple(edges))


def cycle(n):
    return Digraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def adjacency_matrix(g):
    m = np.zeros((g.vertex_count, g.vertex_count), dtype=np.int64)
    for u, v in g.edges:
        m[u, v] = 1
    return m


def union_find_components(g):
    parent = list(range(g.vertex_count))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in g.edges:
        parent[find(u)] = find(v)
    groups = {}
    for x in range(g.vertex_count):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def brute_chromatic(g):
    if any(u == v for u, v in g.edges):
        return None
    for k in range(1, g.vertex_count + 1):
        for col in itertools.product(range(k), repeat=g.vertex_count):
            if all(col[u] != col[v] for u, v in g.edges):
                return k
    return 0


# -- construction -----------------------------------------------------------

def test_rejects_out_of_range_edge():
    with pytest.raises(ValueError):
        Digraph(2, ((0, 2),))


def test_parallel_edges_get_distinct_ids():
    g = Digraph(2, ((0, 1), (0, 1)))
    assert g.edge_count == 2
    assert g.successors(0) == (1,)


def test_colouring_validates_range():
    with pytest.raises(ValueError):
        Colouring(Digraph(2, ()), (0, 2), 2)


# -- limits and colimits ----------------------------------------------------

@pytest.mark.parametrize(
    "g, expected",
    [
        (Digraph(1, ((0, 0),)), {0}),
        (Digraph(2, ((0, 1),)), set()),
        (Digraph(3, ((0, 1), (1, 2), (2, 2))), {2}),
    ],
)
def test_loop_edges(g, expected):
    assert loop_edges(g) == expected


def test_weak_components_examples():
    assert weak_components(Digraph(0, ())) == []
    assert not is_weakly_connected(Digraph(0, ()))
    assert weak_components(Digraph(3, ((0, 1), (1, 2)))) == [[0, 1, 2]]
    assert weak_components(Digraph(4, ((0, 1),))) == [[0, 1], [2], [3]]


def test_limits_exhaustive_small():
    for g in all_small_digraphs(3, 3):
        scan = {e for e, (u, v) in enumerate(g.edges) if u == v}
        assert loop_edges(g) == scan
        assert weak_components(g) == union_find_components(g)


@given(digraphs())
def test_weak_components_match_union_find(g):
    assert weak_components(g) == union_find_components(g)


def test_pushout_sizes():
    assert pushout_graph(Digraph(2, ())).size == 4
    assert pushout_graph(Digraph(2, ((0, 1),))).size == 3
    assert pushout_graph(Digraph(1, ((0, 0),))).size == 1


@given(digraphs())
def test_pushout_legs_respect_edges(g):
    p = pushout_graph(g)
    for u, v in g.edges:
        assert p.left[u] == p.right[v]
    assert set(p.left) | set(p.right) == set(range(p.size))


def test_edge_graph_examples():
    path = edge_graph(Digraph(3, ((0, 1), (1, 2))))
    assert path.vertex_count == 2 and path.edges == ((0, 1),)
    loop = edge_graph(Digraph(1, ((0, 0),)))
    assert loop.vertex_count == 1 and loop.edges == ((0, 0),)
    tri = edge_graph(cycle(3))
    assert sorted(tri.edges) == [(0, 1), (1, 2), (2, 0)]


@given(digraphs())
def test_edge_graph_is_composable_pairs(g):
    eg = edge_graph(g)
    expected = sorted(
        (e, f) for e in range(g.edge_count) for f in range(g.edge_count) if g.target(e) == g.source(f)
    )
    assert sorted(eg.edges) == expected


# -- predicates -------------------------------------------------------------

def test_pseudocomplete_examples():
    assert pseudocomplete(Digraph(1, ((0, 0),)))
    full = list(itertools.product(range(3), repeat=2))
    assert pseudocomplete(Digraph(3, tuple(full)))
    assert not pseudocomplete(Digraph(3, tuple(p for p in full if p != (1, 1))))


def test_proper_examples():
    assert not proper(Digraph(2, ((0, 1), (0, 1))))
    assert proper(Digraph(2, ((0, 1), (1, 0))))
    rng = random.Random(3)
    pairs = rng.sample(list(itertools.product(range(20), repeat=2)), 100)
    assert proper(Digraph(20, tuple(pairs)))


def test_no_isolated_examples():
    assert no_isolated(Digraph(2, ((0, 1),)))
    assert not no_isolated(Digraph(3, ((0, 1),)))
    assert not no_isolated(Digraph(2, ()))


# -- colourings -------------------------------------------------------------

def test_is_colouring_examples():
    tri = cycle(3)
    assert is_colouring(tri, Colouring(tri, (0, 1, 2), 3))
    loop = Digraph(2, ((0, 1), (1, 1)))
    assert not is_colouring(loop, Colouring(loop, (0, 1), 2))
    c5 = cycle(5)
    assert not is_colouring(c5, Colouring(c5, (0, 1, 0, 1, 0), 2))


def test_is_colouring_rejects_foreign_graph():
    with pytest.raises(ValueError):
        is_colouring(cycle(3), Colouring(Digraph(3, ()), (0, 0, 0), 1))


@given(digraphs(min_vertices=1), st.data())
def test_colouring_iff_composite_loop_free(g, data):
    k = data.draw(st.integers(1, 4))
    col = tuple(data.draw(st.integers(0, k - 1)) for _ in range(g.vertex_count))
    c = Colouring(g, col, k)
    assert is_colouring(g, c) == (not loop_edges(composite_graph(g, c)))


def test_chromatic_examples():
    assert chromatic_number(cycle(5)).value == 3
    assert chromatic_number(Digraph(2, ((1, 1),))).status == "no-colouring"
    assert chromatic_number(Digraph(4, ())).value == 1
    assert chromatic_number(Digraph(0, ())).value == 0


@settings(max_examples=150)
@given(digraphs(max_vertices=7, max_edges=12))
def test_chromatic_matches_brute_force(g):
    res = chromatic_number(g)
    expected = brute_chromatic(g)
    if expected is None:
        assert res.status == "no-colouring"
    else:
        assert res.exact and res.value == expected
        assert is_colouring(g, Colouring(g, res.colouring, max(res.upper, 1)))


def test_chromatic_interval_above_limit():
    g = cycle(21)
    res = chromatic_number(g, exact_limit=16)
    assert res.status in ("exact", "interval")
    assert res.lower <= 3 <= res.upper


def test_chromatic_budget_gives_unknown_not_wrong():
    rng = random.Random(5)
    edges = tuple((u, v) for u in range(14) for v in range(u + 1, 14) if rng.random() < 0.5)
    g = Digraph(14, edges)
    res = chromatic_number(g, budget=Budget(max_steps=1))
    assert res.status in ("unknown", "exact")
    exact = chromatic_number(g)
    assert res.lower <= exact.value <= res.upper


def test_symdiff_cover_examples():
    edge = Digraph(2, ((0, 1),))
    c = colouring_from_symdiff_cover(edge, [{0}])
    assert isinstance(c, Colouring) and c.colour_count == 2 and c.colour_of == (1, 0)
    assert colouring_from_symdiff_cover(Digraph(1, ((0, 0),)), [{0}]) == CoverFailure(0)
    c4 = cycle(4)
    c = colouring_from_symdiff_cover(c4, [{0, 1}, {1, 2}])
    assert isinstance(c, Colouring) and c.colour_count == 4 and is_colouring(c4, c)


def test_symdiff_from_colouring_examples():
    edge = Digraph(2, ((0, 1),))
    assert symdiff_cover_from_colouring(edge, Colouring(edge, (0, 1), 2)) == [frozenset({1})]
    c5 = cycle(5)
    sets = symdiff_cover_from_colouring(c5, Colouring(c5, (0, 1, 0, 1, 2), 3))
    assert len(sets) == 2
    assert isinstance(colouring_from_symdiff_cover(c5, sets), Colouring)
    empty = Digraph(3, ())
    assert symdiff_cover_from_colouring(empty, Colouring(empty, (0, 0, 0), 1)) == []
    with pytest.raises(ValueError):
        symdiff_cover_from_colouring(edge, Colouring(edge, (0, 0), 1))


@given(digraphs(min_vertices=1))
def test_symdiff_round_trip(g):
    res = chromatic_number(g)
    if res.status == "no-colouring":
        return
    c = Colouring(g, res.colouring, max(res.upper, 1))
    back = colouring_from_symdiff_cover(g, symdiff_cover_from_colouring(g, c))
    assert isinstance(back, Colouring) and is_colouring(g, back)
    assert back.colour_count <= 2 ** math.ceil(math.log2(max(c.colour_count, 1)))


def test_kij_examples():
    edge = Digraph(2, ((0, 1),))
    k = kij_partition(edge, Colouring(edge, (0, 1), 2))
    assert k[(0, 1)] == {0} and not k[(1, 0)] and not k[(0, 0)] and not k[(1, 1)]
    empty = Digraph(2, ())
    assert not any(kij_partition(empty, Colouring(empty, (0, 1), 2)).values())
    with pytest.raises(ValueError):
        kij_partition(edge, Colouring(edge, (0, 0), 1))


@given(digraphs(min_vertices=1))
def test_kij_partitions_edges(g):
    res = chromatic_number(g)
    if res.status == "no-colouring":
        return
    c = Colouring(g, res.colouring, max(res.upper, 1))
    cells = kij_partition(g, c)
    seen = []
    for (i, j), es in cells.items():
        assert i != j or not es
        seen.extend(es)
    assert sorted(seen) == list(range(g.edge_count))


# -- paths and distances ----------------------------------------------------

def test_power_examples():
    g = Digraph(3, ((0, 1), (1, 2)))
    assert power(g, 1).as_digraph().adjacency() == g.adjacency()
    assert power(g, 2).as_digraph().edges == ((0, 2),)
    c4 = power(cycle(4), 4).as_digraph()
    assert sorted(c4.edges) == [(i, i) for i in range(4)]
    zero = power(g, 0)
    assert zero.as_digraph().adjacency() == {(i, i) for i in range(3)}


@settings(max_examples=80)
@given(digraphs(max_vertices=6, max_edges=8), st.integers(0, 4))
def test_power_is_matrix_power(g, n):
    m = np.linalg.matrix_power(adjacency_matrix(g), n) > 0 if g.vertex_count else np.zeros((0, 0))
    expected = {(int(i), int(j)) for i, j in np.argwhere(m)}
    assert power(g, n).as_digraph().adjacency() == expected


def test_reach_set_examples():
    g = Digraph(3, ((0, 1), (1, 2)))
    assert reach_set(g, {0}, 2) == {2}
    assert reach_set(g, {2}, -1) == {1}
    assert reach_set(g, {1}, 0) == {1}


@given(digraphs(min_vertices=1), st.integers(-4, 4), st.data())
def test_reach_set_duality(g, n, data):
    x = data.draw(st.integers(0, g.vertex_count - 1))
    y = data.draw(st.integers(0, g.vertex_count - 1))
    assert (y in reach_set(g, {x}, n)) == (x in reach_set(g, {y}, -n))


def test_reach_set_random_is_iterated_step():
    rng = random.Random(8)
    g = Digraph(8, tuple((rng.randrange(8), rng.randrange(8)) for _ in range(14)))
    a = {0, 3}
    step = set(a)
    for _ in range(3):
        step = {v for u, v in g.edges if u in step}
    assert reach_set(g, a, 3) == step


def test_gamma_examples():
    assert gamma_diameter(cycle(3)) == 2
    assert gamma_diameter(Digraph(2, ((0, 1),))) == math.inf
    full = tuple(itertools.product(range(3), repeat=2))
    assert gamma_diameter(Digraph(3, full)) == 1
    assert gamma_diameter(Digraph(1, ((0, 0),))) == 0
    assert gamma_diameter(Digraph(1, ())) == 0
    assert gamma_diameter(Digraph(0, ())) == 0
    assert distance(cycle(3), 1, 1) == 0


def test_max_out_degree_examples():
    star = Digraph(4, ((0, 1), (0, 2), (0, 3)))
    assert max_out_degree(star) == 3
    assert max_out_degree(Digraph(2, ((0, 1), (0, 1)))) == 1
    assert max_out_degree(Digraph(3, ())) == 0
    assert successor_functions(Digraph(3, ())) == []


@given(digraphs(min_vertices=1))
def test_successor_functions_cover_edges(g):
    fs = successor_functions(g)
    assert len(fs) == max_out_degree(g)
    assert max_out_degree(g) == max(len({v for u, v in g.edges if u == x}) for x in range(g.vertex_count))
    for u, v in g.edges:
        assert any(f[u] == v for f in fs)


def test_relation_compose_examples():
    ident = Digraph(3, ((0, 0), (1, 1), (2, 2)))
    assert relation_compose_check(ident, ident, ident)
    assert relation_compose_check(Digraph(3, ((0, 1),)), Digraph(3, ((1, 2),)), Digraph(3, ((0, 2),)))
    with pytest.raises(ValueError):
        relation_compose_check(Digraph(2, ()), Digraph(3, ()), Digraph(3, ()))


@given(st.integers(1, 5), st.data())
def test_relation_compose_matrix_oracle(n, data):
    g = data.draw(digraphs(min_vertices=n, max_vertices=n))
    h = data.draw(digraphs(min_vertices=n, max_vertices=n))
    prod = (adjacency_matrix(g) @ adjacency_matrix(h)) > 0
    k = Digraph(n, tuple((int(i), int(j)) for i, j in np.argwhere(prod)))
    assert relation_compose_check(g, h, k)
