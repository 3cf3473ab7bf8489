import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betagraph.beta import (
    Generic,
    Obstruction,
    Point,
    algebra_adjacency_oracle,
    algebra_adjacency_witness,
    beta_loop_exists,
    beta_power_check,
    beta_proper_check,
    beta_pseudocomplete,
    beta_strongly_connected,
    compose_presentations,
    compthm_check,
    finitely_colourable,
    invariant_report,
    loop_theorem_check,
    presented_reach,
    type_adjacent,
    type_level_multi_edge,
    type_nodes,
    type_reach,
    ultnpath_check,
    ultnpath_sides,
    weakly_sparse_check,
)
from betagraph.corpus import compose_triple, k_omega, k_one_omega, random_blockgraph, random_presented_set
from betagraph.digraph import chromatic_number, is_colouring, reach_set
from betagraph.presentation import Block, BlockGraph, EdgeAtom, PresentedSet, Vertex, cofin, fin, truncate

W = Block("w", None)
CENTRE, LEAVES = Vertex("c", 0), Generic("l")


def seeded(seed, **kw):
    return random_blockgraph(random.Random(seed), **kw)


def one_block(atom_nodiag):
    w = cofin("w")
    return BlockGraph((W,), (EdgeAtom(w, w, atom_nodiag),))


def two_blocks(*pairs):
    blocks = (Block("b1", None), Block("b2", None), Block("b3", None))
    return BlockGraph(blocks, tuple(EdgeAtom(cofin(s), cofin(t)) for s, t in pairs))


# -- type adjacency -------------------------------------------------------------

def test_type_adjacency_k_omega():
    bg = k_omega()
    x = Point(Vertex("b", 0))
    assert type_adjacent(bg, Generic("b"), Generic("b"))
    assert not type_adjacent(bg, x, x)
    assert type_adjacent(bg, x, Point(Vertex("b", 1)))
    for t1, t2 in [(Generic("b"), Generic("b")), (x, x), (x, Generic("b"))]:
        assert type_adjacent(bg, t1, t2) == algebra_adjacency_oracle(bg, t1, t2)


def test_type_adjacency_k_one_omega():
    bg = k_one_omega()
    assert type_adjacent(bg, Point(CENTRE), LEAVES)
    assert not type_adjacent(bg, LEAVES, LEAVES)
    assert algebra_adjacency_oracle(bg, Point(CENTRE), LEAVES)
    assert not algebra_adjacency_oracle(bg, LEAVES, LEAVES)


def test_oracle_reduces_to_edge_lookup_on_finite_blocks():
    bg = BlockGraph((Block("a", 3),), (), ((Vertex("a", 0), Vertex("a", 2)),))
    for u in range(3):
        for v in range(3):
            t1, t2 = Point(Vertex("a", u)), Point(Vertex("a", v))
            assert algebra_adjacency_oracle(bg, t1, t2) == ((u, v) == (0, 2))


def test_oracle_finds_cofinite_witness():
    f = fin("w", 0, 1)
    bg = BlockGraph((W,), (EdgeAtom(f, cofin("w")),))
    assert not type_adjacent(bg, Generic("w"), Generic("w"))
    a, b = algebra_adjacency_witness(bg, Generic("w"), Generic("w"))
    assert a.is_cofinite_on("w") and (a & f).is_empty()


def test_type_adjacent_rejects_bad_types():
    with pytest.raises(ValueError):
        type_adjacent(k_one_omega(), Generic("c"), LEAVES)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_type_adjacency_matches_oracle(seed):
    bg = seeded(seed)
    for t1 in type_nodes(bg, reps=1):
        for t2 in type_nodes(bg, reps=1):
            assert type_adjacent(bg, t1, t2) == algebra_adjacency_oracle(bg, t1, t2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_oracle_invariant_under_refinement(seed, data):
    bg = seeded(seed)
    nodes = type_nodes(bg, reps=1)
    t1, t2 = data.draw(st.sampled_from(nodes)), data.draw(st.sampled_from(nodes))
    base = algebra_adjacency_oracle(bg, t1, t2)
    rng = random.Random(seed)
    refinements = [random_presented_set(rng, bg.blocks) for _ in range(10)]
    assert algebra_adjacency_oracle(bg, t1, t2, extra=refinements) == base


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_point_adjacency_is_graph_adjacency(seed):
    bg = seeded(seed)
    n = bg.guard() + 2
    g = truncate(bg, n)
    verts = bg.vertices_below(n)
    adj = g.adjacency()
    for i, u in enumerate(verts):
        for j, v in enumerate(verts):
            assert type_adjacent(bg, Point(u), Point(v)) == ((i, j) in adj)


# -- loops and colourings -----------------------------------------------------------

def test_loop_examples():
    assert beta_loop_exists(k_omega()) == Generic("b")
    assert beta_loop_exists(k_one_omega()) is None
    s5 = fin("w", 5, 7)
    bg = BlockGraph((W,), (EdgeAtom(s5, fin("w", 5, 9)),))
    assert beta_loop_exists(bg) == Point(Vertex("w", 5))


def test_colouring_examples():
    obs = finitely_colourable(k_omega())
    assert obs == Obstruction("clique", block="b")
    scheme = finitely_colourable(k_one_omega())
    assert scheme.colour_count == 2
    two = two_blocks(("b1", "b2"))
    scheme = finitely_colourable(two)
    assert scheme.colour_count == 2
    assert scheme.colour(Vertex("b1", 7)) != scheme.colour(Vertex("b2", 3))
    assert chromatic_number(truncate(two, 5)).value == 2


def test_k_omega_truncations_grow():
    assert [chromatic_number(truncate(k_omega(), n)).value for n in range(1, 9)] == list(range(1, 9))


def test_loop_theorem_named():
    for bg in (k_omega(), k_one_omega(), k_one_omega(True), one_block(False)):
        assert loop_theorem_check(bg).agree


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_loop_theorem_random(seed):
    bg = seeded(seed)
    check = loop_theorem_check(bg)
    assert check.agree
    if not isinstance(check.colouring, Obstruction):
        for n in range(bg.guard() + 1, bg.guard() + 6):
            c = check.colouring.on_truncation(bg, n)
            assert is_colouring(c.graph, c)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_loop_theorem_finite_collapses_to_digraph(seed):
    bg = seeded(seed, finite_only=True)
    g = truncate(bg, 0)
    assert loop_theorem_check(bg).agree
    assert (beta_loop_exists(bg) is None) == (chromatic_number(g).status != "no-colouring")


def test_negative_control_loop_decider_is_caught():
    check = loop_theorem_check(k_omega(), loop_decider=lambda bg: None)
    assert not check.agree


# -- reach and paths -------------------------------------------------------------

def test_presented_reach_examples():
    bg = k_one_omega()
    assert presented_reach(bg, fin("c", 0), 1) == cofin("l")
    x = fin("l", 3)
    assert presented_reach(bg, x, 0) == x


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(-3, 3))
def test_presented_reach_agrees_with_truncation(seed, steps):
    bg = seeded(seed)
    g0 = bg.guard()
    n = g0 + 6
    verts = bg.vertices_below(n)
    pos = {v: i for i, v in enumerate(verts)}
    g = truncate(bg, n)
    for x in bg.vertices_below(g0 + 1):
        got = presented_reach(bg, PresentedSet.point(x), steps)
        expected = reach_set(g, {pos[x]}, steps)
        for v in bg.vertices_below(g0 + 2):
            assert (v in got) == (pos[v] in expected)


def test_ultnpath_examples():
    bg = k_one_omega(bidirectional=True)
    assert ultnpath_sides(bg, CENTRE, LEAVES, 1) == (True, True)
    assert ultnpath_sides(bg, CENTRE, LEAVES, 2) == (False, False)
    assert ultnpath_sides(bg, CENTRE, Point(CENTRE), 2) == (True, True)
    pts, gens = type_reach(bg, CENTRE, 2)
    assert pts == fin("c", 0) and not gens


def test_ultnpath_finite_is_reach_set():
    bg = seeded(11, finite_only=True)
    g = truncate(bg, 0)
    verts = bg.vertices_below(0)
    for i, x in enumerate(verts):
        for j, y in enumerate(verts):
            for n in range(4):
                path, member = ultnpath_sides(bg, x, Point(y), n)
                assert path == member == (j in reach_set(g, {i}, n))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_ultnpath_random(seed):
    bg = seeded(seed)
    for x in bg.vertices_below(bg.guard()):
        for t in type_nodes(bg, reps=1):
            for n in range(4):
                assert ultnpath_check(bg, x, t, n)


# -- connectivity and pseudocompleteness ------------------------------------------------

def test_connectivity_examples():
    c = beta_strongly_connected(one_block(False))
    assert c.connected and (c.forward, c.backward) == (1, 1)
    c = beta_strongly_connected(k_one_omega())
    assert not c.connected and c.direction == "backward"
    bg = BlockGraph((Block("b1", None), Block("b2", None)),
                    (EdgeAtom(cofin("b1"), cofin("b2")), EdgeAtom(cofin("b2"), cofin("b1"))))
    c = beta_strongly_connected(bg)
    assert c.connected and (c.forward, c.backward) == (2, 2)
    assert not beta_strongly_connected(BlockGraph(())).connected


def test_pseudocomplete_examples():
    assert beta_pseudocomplete(one_block(False))
    assert not beta_pseudocomplete(one_block(True))
    a = fin("a", 0, 1)
    assert beta_pseudocomplete(BlockGraph((Block("a", 2),), (EdgeAtom(a, a),)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_pseudocomplete_levels_agree(seed):
    beta_pseudocomplete(seeded(seed))


# -- invariants -------------------------------------------------------------------

def test_invariants_named():
    rep = invariant_report(k_one_omega(True))
    assert (rep.chi.graph, rep.chi.beta) == (2, 2)
    assert rep.delta.status == "both infinite"
    rep = invariant_report(BlockGraph((Block("a", 3),), (EdgeAtom(fin("a", 0), fin("a", 1, 2)),)))
    assert all(p.graph == p.beta for p in rep.pairs())
    assert rep.delta.graph == 2


def test_bounded_degree_delta():
    w = cofin("w")
    bg = BlockGraph((W,), (EdgeAtom(w, fin("w", 0, 1), nodiag=True),))
    rep = invariant_report(bg)
    assert rep.delta.status == "equal" and rep.delta.graph == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_invariants_consistent(seed):
    assert invariant_report(seeded(seed)).consistent


# -- composition ---------------------------------------------------------------------

def test_compthm_examples():
    full = one_block(False)
    assert compthm_check(full, full, full).ok
    g, h, k = two_blocks(("b1", "b2")), two_blocks(("b2", "b3")), two_blocks(("b1", "b3"))
    r = compthm_check(g, h, k)
    assert r.hypothesis and r.conclusion
    r = compthm_check(g, h, g)
    assert not r.hypothesis and r.conclusion is None and r.ok
    with pytest.raises(ValueError):
        compthm_check(full, k_omega(), full)


def test_compose_presentations_is_exact_with_diagonal():
    kw = k_omega()
    sq = compose_presentations(kw, kw)
    for n in range(1, 6):
        t = truncate(sq, n).adjacency()
        expected = {(i, j) for i in range(n) for j in range(n)} if n >= 3 else None
        if expected is not None:
            assert t == expected
    star = BlockGraph((W,), (EdgeAtom(fin("w", 0), fin("w", 1), nodiag=True), EdgeAtom(fin("w", 1), fin("w", 0), nodiag=True)))
    assert truncate(compose_presentations(star, star), 3).adjacency() == {(0, 0), (1, 1)}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_compthm_random(seed):
    r = compthm_check(*compose_triple(random.Random(seed)))
    assert r.hypothesis and r.conclusion


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_beta_power(seed, n):
    r = beta_power_check(seeded(seed), n)
    assert r.hypothesis and r.conclusion


# -- properness and sparseness -------------------------------------------------------

def test_proper_examples():
    r = beta_proper_check(k_one_omega())
    assert r.g_proper and r.e_small and r.beta_proper_predicted
    r = beta_proper_check(k_omega())
    assert r.g_proper and not r.e_small and not r.beta_proper_predicted
    w = cofin("w")
    twice = BlockGraph((W,), (EdgeAtom(fin("w", 0), w), EdgeAtom(fin("w", 0), w)))
    assert not beta_proper_check(twice).g_proper
    assert type_level_multi_edge(twice) is not None


def test_sparse_examples():
    assert not weakly_sparse_check(k_omega())
    assert weakly_sparse_check(k_one_omega())
    f = BlockGraph((W,), (EdgeAtom(fin("w", 0, 1), cofin("w")), EdgeAtom(cofin("w"), fin("w", 2))))
    assert weakly_sparse_check(f)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_proper_prediction_matches_multi_edges(seed):
    bg = seeded(seed)
    assert beta_proper_check(bg).beta_proper_predicted == (type_level_multi_edge(bg) is None)
    weakly_sparse_check(bg)
