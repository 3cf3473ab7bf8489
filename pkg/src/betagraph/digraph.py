"""Finite categorical digraphs.

A digraph is a pair of parallel maps ``source, target : E -> V`` stored as a
list of ``(source, target)`` pairs indexed by edge id.  Loops and parallel
edges are allowed.  Everything here is a pure function of immutable values.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .budget import Budget, BudgetExceeded

INF = math.inf


@dataclass(frozen=True)
class Digraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        edges = tuple((int(s), int(t)) for s, t in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        for e, (s, t) in enumerate(edges):
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"edge {e} = ({s}, {t}) out of range for {self.vertex_count} vertices")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def source(self, e: int) -> int:
        return self.edges[e][0]

    def target(self, e: int) -> int:
        return self.edges[e][1]

    @cached_property
    def _succ(self) -> tuple[tuple[int, ...], ...]:
        out: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for s, t in self.edges:
            out[s].add(t)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def _pred(self) -> tuple[tuple[int, ...], ...]:
        out: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for s, t in self.edges:
            out[t].add(s)
        return tuple(tuple(sorted(x)) for x in out)

    def successors(self, x: int) -> tuple[int, ...]:
        """Distinct successor vertices of ``x`` in ascending order."""
        return self._succ[x]

    def predecessors(self, x: int) -> tuple[int, ...]:
        return self._pred[x]

    def adjacency(self) -> frozenset[tuple[int, int]]:
        """The adjacency relation rho as a set of ordered pairs."""
        return frozenset(self.edges)


@dataclass(frozen=True)
class Colouring:
    graph: Digraph
    colour_of: tuple[int, ...]
    colour_count: int

    def __post_init__(self):
        object.__setattr__(self, "colour_of", tuple(int(c) for c in self.colour_of))
        if self.colour_count < 1:
            raise ValueError("colour_count must be positive")
        if len(self.colour_of) != self.graph.vertex_count:
            raise ValueError("colour_of must assign a colour to every vertex")
        for v, c in enumerate(self.colour_of):
            if not 0 <= c < self.colour_count:
                raise ValueError(f"colour {c} of vertex {v} out of range")


@dataclass(frozen=True)
class PathGraph:
    """The graph G^n whose edges are the paths of length n in ``base``."""

    base: Digraph
    n: int
    paths: tuple[tuple[int, ...], ...]
    sources: tuple[int, ...]
    targets: tuple[int, ...]

    def as_digraph(self) -> Digraph:
        return Digraph(self.base.vertex_count, tuple(zip(self.sources, self.targets)))


@dataclass(frozen=True)
class Pushout:
    """Quotient of V + V by s(e) ~ t(e); ``left``/``right`` are the two induced maps."""

    size: int
    left: tuple[int, ...]
    right: tuple[int, ...]


@dataclass(frozen=True)
class ChromaticResult:
    """Outcome of :func:`chromatic_number`.

    ``status`` is one of ``"exact"``, ``"no-colouring"`` (the graph has a
    loop), ``"interval"`` (too large for exact search) or ``"unknown"``
    (the budget ran out; the bounds are still valid).
    """

    status: str
    lower: int | None = None
    upper: int | None = None
    colouring: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None


@dataclass(frozen=True)
class CoverFailure:
    """An edge that no set of a symmetric-difference cover separates."""

    edge: int


# -- limits and colimits ----------------------------------------------------

def loop_edges(g: Digraph) -> frozenset[int]:
    """Edges in the equalizer of source and target."""
    return frozenset(e for e, (s, t) in enumerate(g.edges) if s == t)


def is_loop_free(g: Digraph) -> bool:
    return not loop_edges(g)


def weak_components(g: Digraph) -> list[list[int]]:
    """The coequalizer of source and target, as a sorted list of blocks."""
    ds = DisjointSet(range(g.vertex_count))
    for s, t in g.edges:
        ds.merge(s, t)
    blocks = [sorted(b) for b in ds.subsets()]
    return sorted(blocks)


def is_weakly_connected(g: Digraph) -> bool:
    # the empty graph has colimit 0, not 1
    return g.vertex_count >= 1 and len(weak_components(g)) == 1


def pushout_graph(g: Digraph) -> Pushout:
    """Pushout of the span V <-s- E -t-> V."""
    n = g.vertex_count
    ds = DisjointSet(range(2 * n))
    for s, t in g.edges:
        ds.merge(s, n + t)
    labels: dict[int, int] = {}
    cls = []
    for x in range(2 * n):
        root = ds[x]
        if root not in labels:
            labels[root] = len(labels)
        cls.append(labels[root])
    return Pushout(len(labels), tuple(cls[:n]), tuple(cls[n:]))


def edge_graph(g: Digraph) -> Digraph:
    """Pullback of target against source: vertices are edges, one edge per composable pair."""
    starting: dict[int, list[int]] = {}
    for e, (s, _) in enumerate(g.edges):
        starting.setdefault(s, []).append(e)
    pairs = [(e, f) for e, (_, t) in enumerate(g.edges) for f in starting.get(t, ())]
    return Digraph(g.edge_count, pairs)


# -- mono / epi predicates --------------------------------------------------

def proper(g: Digraph) -> bool:
    """No multiple edges: s x t is mono."""
    return len(set(g.edges)) == g.edge_count


def pseudocomplete(g: Digraph) -> bool:
    """s x t is onto V x V, diagonal included."""
    return len(set(g.edges)) == g.vertex_count ** 2


def no_isolated(g: Digraph) -> bool:
    """The coproduct map s + t : E + E -> V is epi."""
    touched = {v for e in g.edges for v in e}
    return len(touched) == g.vertex_count


# -- colourings -------------------------------------------------------------

def is_colouring(g: Digraph, c: Colouring) -> bool:
    if c.graph != g:
        raise ValueError("colouring belongs to a different graph")
    col = c.colour_of
    return all(col[s] != col[t] for s, t in g.edges)


def composite_graph(g: Digraph, c: Colouring) -> Digraph:
    """The graph cG = <cs, ct : E -> C>."""
    col = c.colour_of
    return Digraph(c.colour_count, [(col[s], col[t]) for s, t in g.edges])


def _undirected(g: Digraph) -> list[int]:
    nbr = [0] * g.vertex_count
    for s, t in g.edges:
        if s != t:
            nbr[s] |= 1 << t
            nbr[t] |= 1 << s
    return nbr


def _greedy_clique(nbr: list[int]) -> int:
    best = 1 if nbr else 0
    for start in range(len(nbr)):
        size, cand = 1, nbr[start]
        while cand:
            v = max(_bits(cand), key=lambda u: (nbr[u] & cand).bit_count())
            size += 1
            cand &= nbr[v]
        best = max(best, size)
    return best


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _dsatur_greedy(nbr: list[int]) -> list[int]:
    n = len(nbr)
    col = [-1] * n
    for _ in range(n):
        v = max(
            (u for u in range(n) if col[u] < 0),
            key=lambda u: (len({col[w] for w in _bits(nbr[u]) if col[w] >= 0}), nbr[u].bit_count(), -u),
        )
        used = {col[w] for w in _bits(nbr[v])}
        c = 0
        while c in used:
            c += 1
        col[v] = c
    return col


def _k_colour(nbr: list[int], k: int, budget: Budget) -> list[int] | None:
    n = len(nbr)
    col = [-1] * n

    def pick() -> int:
        best, key = -1, None
        for u in range(n):
            if col[u] >= 0:
                continue
            sat = len({col[w] for w in _bits(nbr[u]) if col[w] >= 0})
            kk = (sat, nbr[u].bit_count())
            if key is None or kk > key:
                best, key = u, kk
        return best

    def rec(done: int, used: int) -> bool:
        if done == n:
            return True
        budget.tick()
        v = pick()
        forbidden = {col[w] for w in _bits(nbr[v])}
        for c in range(min(used + 1, k)):
            if c in forbidden:
                continue
            col[v] = c
            if rec(done + 1, max(used, c + 1)):
                return True
        col[v] = -1
        return False

    return list(col) if rec(0, 0) else None


def chromatic_number(g: Digraph, budget: Budget | None = None, exact_limit: int = 16) -> ChromaticResult:
    """Least number of colours admitting a colouring of ``g``.

    Exact branch and bound up to ``exact_limit`` vertices; above that, a
    clique lower bound and a greedy upper bound.
    """
    if loop_edges(g):
        return ChromaticResult("no-colouring")
    n = g.vertex_count
    if n == 0:
        return ChromaticResult("exact", 0, 0, ())
    nbr = _undirected(g)
    greedy = _dsatur_greedy(nbr)
    upper = max(greedy) + 1
    lower = _greedy_clique(nbr)
    if lower == upper:
        return ChromaticResult("exact", lower, upper, tuple(greedy))
    if n > exact_limit:
        return ChromaticResult("interval", lower, upper, tuple(greedy))
    budget = budget or Budget()
    best = tuple(greedy)
    try:
        for k in range(lower, upper):
            found = _k_colour(nbr, k, budget)
            if found is not None:
                return ChromaticResult("exact", k, k, tuple(found))
            lower = k + 1
    except BudgetExceeded:
        return ChromaticResult("unknown", lower, upper, best)
    return ChromaticResult("exact", upper, upper, best)


def colouring_from_symdiff_cover(g: Digraph, sets: Sequence[Iterable[int]]) -> Colouring | CoverFailure:
    """Power-set colouring c(x) = {i : x in A_i}, encoded as a bitmask.

    Succeeds iff every edge lies in some s^-1(A_i) xor t^-1(A_i); otherwise
    the first uncovered edge is returned.
    """
    members = [frozenset(a) for a in sets]
    for e, (s, t) in enumerate(g.edges):
        if not any((s in a) != (t in a) for a in members):
            return CoverFailure(e)
    colour = [sum(1 << i for i, a in enumerate(members) if x in a) for x in range(g.vertex_count)]
    return Colouring(g, tuple(colour), 1 << len(members))


def symdiff_cover_from_colouring(g: Digraph, c: Colouring) -> list[frozenset[int]]:
    """Binary-encode the colours: A_i is the set of vertices whose colour has bit i set."""
    if not is_colouring(g, c):
        raise ValueError("not a colouring")
    bits = (c.colour_count - 1).bit_length()
    return [frozenset(v for v, col in enumerate(c.colour_of) if col >> i & 1) for i in range(bits)]


def kij_partition(g: Digraph, c: Colouring) -> dict[tuple[int, int], frozenset[int]]:
    """Edges grouped by (source colour, target colour) over all of C x C."""
    if not is_colouring(g, c):
        raise ValueError("not a colouring: some K(i,i) would be nonempty")
    cells: dict[tuple[int, int], set[int]] = {
        (i, j): set() for i in range(c.colour_count) for j in range(c.colour_count)
    }
    for e, (s, t) in enumerate(g.edges):
        cells[c.colour_of[s], c.colour_of[t]].add(e)
    return {k: frozenset(v) for k, v in cells.items()}


# -- paths, reachability, invariants ----------------------------------------

def power(g: Digraph, n: int, max_paths: int = 200_000) -> PathGraph:
    """All paths of length ``n``; raises BudgetExceeded past ``max_paths``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out_edges: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for e, (s, _) in enumerate(g.edges):
        out_edges[s].append(e)
    layer: list[tuple[tuple[int, ...], int, int]] = [((), v, v) for v in range(g.vertex_count)]
    for _ in range(n):
        nxt = []
        for path, start, end in layer:
            for e in out_edges[end]:
                nxt.append((path + (e,), start, g.target(e)))
                if len(nxt) > max_paths:
                    raise BudgetExceeded(f"more than {max_paths} paths of length {n}")
        layer = nxt
    if n > 0:
        layer.sort()
    return PathGraph(
        g, n,
        tuple(p for p, _, _ in layer),
        tuple(s for _, s, _ in layer),
        tuple(t for _, _, t in layer),
    )


def reach_set(g: Digraph, a: Iterable[int], n: int) -> frozenset[int]:
    """A^(n): endpoints of length-|n| paths leaving A (n > 0) or entering A (n < 0)."""
    step = g.successors if n >= 0 else g.predecessors
    cur = set(a)
    for _ in range(abs(n)):
        cur = {y for x in cur for y in step(x)}
    return frozenset(cur)


def distances_from(g: Digraph, x: int) -> list[float]:
    dist: list[float] = [INF] * g.vertex_count
    dist[x] = 0
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if dist[v] == INF:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def distance(g: Digraph, x: int, y: int) -> float:
    """Least n with y in x^(n); 0 when x == y, inf when unreachable."""
    return distances_from(g, x)[y]


def gamma_diameter(g: Digraph) -> float:
    """Maximum directed distance over ordered pairs (0 for the empty graph)."""
    best: float = 0
    for x in range(g.vertex_count):
        best = max(best, max(distances_from(g, x)))
        if best == INF:
            break
    return best


def is_strongly_connected(g: Digraph) -> bool:
    return g.vertex_count >= 1 and gamma_diameter(g) < INF


def max_out_degree(g: Digraph) -> int:
    """Largest number of distinct successors of a vertex."""
    return max((len(g.successors(x)) for x in range(g.vertex_count)), default=0)


def successor_functions(g: Digraph) -> list[tuple[int, ...]]:
    """Delta total maps f_i with x rho y => f_i(x) = y for some i.

    f_i(x) is the i-th successor of x, or x itself when x has fewer.
    """
    d = max_out_degree(g)
    return [
        tuple(g.successors(x)[i] if i < len(g.successors(x)) else x for x in range(g.vertex_count))
        for i in range(d)
    ]


def compose_relations(r1: Iterable[tuple[int, int]], r2: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    """r1 then r2: {(x, z) : x r1 y and y r2 z for some y}."""
    by_first: dict[int, set[int]] = {}
    for y, z in r2:
        by_first.setdefault(y, set()).add(z)
    return frozenset((x, z) for x, y in r1 for z in by_first.get(y, ()))


def relation_compose_check(g: Digraph, h: Digraph, k: Digraph) -> bool:
    """Whether rho_g rho_h = rho_k."""
    if not g.vertex_count == h.vertex_count == k.vertex_count:
        raise ValueError("graphs must share a vertex set")
    return compose_relations(g.adjacency(), h.adjacency()) == k.adjacency()
