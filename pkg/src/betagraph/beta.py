"""Decision procedures for beta G over block presentations.

Points of beta V are handled through *types*: a :class:`Point` is a principal
ultrafilter, a :class:`Generic` stands for every non-principal ultrafilter
concentrating on one omega block.  Adjacency between types is uniform over
each class, which is what makes the questions below decidable.

Two facts are used throughout.  Indices at or past ``bg.guard()`` on an
omega block are *twins*: they belong to the same descriptors and no explicit
edge, so they are interchangeable.  Hence a truncation that keeps the named
indices plus a few twins per block (``reps``) sees every adjacency pattern of
the infinite graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .budget import BudgetExceeded
from .digraph import (
    Digraph,
    chromatic_number,
    compose_relations,
    gamma_diameter,
    is_colouring,
    Colouring,
    max_out_degree,
    relation_compose_check,
    successor_functions,
)
from .presentation import (
    EMPTY,
    BlockGraph,
    Cofin,
    EdgeAtom,
    Fin,
    Generic,
    Point,
    PresentedSet,
    UltraType,
    Vertex,
    type_contains,
    truncate,
)
from .small import block_relation_smallness

INF = math.inf

# twins kept per omega block when a finite stand-in must see every pattern
REPS = 3


class TheoremDisagreement(AssertionError):
    """Two routes that the theory says must agree did not."""


# -- successor algebra ------------------------------------------------------

def successors(bg: BlockGraph, s: PresentedSet) -> PresentedSet:
    """s^(1), computed inside the presented algebra."""
    out = EMPTY
    for a in bg.atoms:
        hit = s & a.src
        if hit.is_empty():
            continue
        single = hit.single_element() if a.nodiag else None
        out = out | (a.tgt - PresentedSet.point(single) if single is not None else a.tgt)
    for u, v in bg.edges:
        if u in s:
            out = out | PresentedSet.point(v)
    return out


def predecessors(bg: BlockGraph, s: PresentedSet) -> PresentedSet:
    """s^(-1)."""
    out = EMPTY
    for a in bg.atoms:
        hit = s & a.tgt
        if hit.is_empty():
            continue
        single = hit.single_element() if a.nodiag else None
        out = out | (a.src - PresentedSet.point(single) if single is not None else a.src)
    for u, v in bg.edges:
        if v in s:
            out = out | PresentedSet.point(u)
    return out


def presented_reach(bg: BlockGraph, s: PresentedSet, steps: int) -> PresentedSet:
    step = successors if steps >= 0 else predecessors
    for _ in range(abs(steps)):
        s = step(bg, s)
    return s


# -- type adjacency ---------------------------------------------------------

def type_adjacent(bg: BlockGraph, t1: UltraType, t2: UltraType) -> bool:
    """Whether some edge of beta G joins an ultrafilter of type t1 to one of type t2.

    The answer is the same for every pair of representatives.  Diagonal
    exclusion only matters between two principal types.
    """
    bg.check_type(t1)
    bg.check_type(t2)
    if isinstance(t1, Point) and isinstance(t2, Point):
        return bg.has_edge(t1.vertex, t2.vertex)
    if isinstance(t1, Point):
        return any(t1.vertex in a.src and a.tgt.is_cofinite_on(t2.block) for a in bg.atoms)
    if isinstance(t2, Point):
        return any(a.src.is_cofinite_on(t1.block) and t2.vertex in a.tgt for a in bg.atoms)
    return any(a.src.is_cofinite_on(t1.block) and a.tgt.is_cofinite_on(t2.block) for a in bg.atoms)


def type_nodes(bg: BlockGraph, reps: int = REPS, cutoff: int | None = None) -> list[UltraType]:
    """Principal types on named vertices and ``reps`` twins per block, then the generics."""
    n = bg.guard() + reps if cutoff is None else cutoff
    return [Point(v) for v in bg.vertices_below(n)] + [Generic(b) for b in bg.omega_blocks()]


def type_matrix(bg: BlockGraph, nodes: Sequence[UltraType]) -> np.ndarray:
    return np.array([[type_adjacent(bg, a, b) for b in nodes] for a in nodes], dtype=bool).reshape(
        len(nodes), len(nodes)
    )


def type_graph(bg: BlockGraph, nodes: Sequence[UltraType] | None = None) -> tuple[list[UltraType], Digraph]:
    nodes = list(type_nodes(bg) if nodes is None else nodes)
    m = type_matrix(bg, nodes)
    return nodes, Digraph(len(nodes), [tuple(p) for p in np.argwhere(m)])


# -- the brute-force oracle -------------------------------------------------

class SubAlgebra:
    """Finite Boolean algebra of vertex sets generated by the presentation.

    Generators: the block partition, every atom side, singletons of explicit
    edge endpoints and of ``points``, plus ``extra`` sets.  Its atoms
    (``cells``) group vertices by membership signature; each omega block has
    exactly one infinite cell.
    """

    def __init__(self, bg: BlockGraph, points: Sequence[Vertex] = (), extra: Sequence[PresentedSet] = ()):
        self.bg = bg
        gens = [side for a in bg.atoms for side in (a.src, a.tgt)]
        gens += [PresentedSet.point(v) for e in bg.edges for v in e]
        gens += [PresentedSet.point(v) for v in points]
        gens += list(extra)
        self.generators = gens
        cells: list[tuple[str, tuple[bool, ...]]] = []
        reps: list[list[Vertex]] = []
        members: list[list[int] | None] = []
        self.infinite_cell: dict[str, int] = {}
        self._cell_of: dict[Vertex, int] = {}
        for block in bg.blocks:
            b = block.id
            if block.size is not None:
                indices = range(block.size)
            else:
                indices = sorted({i for g in gens for i in g.named_indices(b)})
            groups: dict[tuple[bool, ...], list[int]] = {}
            for i in indices:
                v = Vertex(b, i)
                groups.setdefault(tuple(v in g for g in gens), []).append(i)
            generic_sig = None
            if block.size is None:
                generic_sig = tuple(g.is_cofinite_on(b) for g in gens)
                groups.setdefault(generic_sig, [])
            for sig, idx in groups.items():
                c = len(cells)
                cells.append((b, sig))
                for i in idx:
                    self._cell_of[Vertex(b, i)] = c
                if sig == generic_sig:
                    self.infinite_cell[b] = c
                    top = max(indices, default=-1) + 1
                    reps.append([Vertex(b, top), Vertex(b, top + 1)])
                    members.append(None)
                else:
                    reps.append([Vertex(b, i) for i in idx[:2]])
                    members.append(idx)
        self.cells = cells
        self.reps = reps
        self.members = members
        k = len(cells)
        self.succ = [0] * k
        for c in range(k):
            for d in range(k):
                if any(bg.has_edge(u, v) for u in reps[c] for v in reps[d]):
                    self.succ[c] |= 1 << d

    def __len__(self) -> int:
        return len(self.cells)

    def cell_of(self, v: Vertex) -> int:
        if v in self._cell_of:
            return self._cell_of[v]
        return self.infinite_cell[v.block]

    def required_cell(self, t: UltraType) -> int:
        """Sets of the algebra in type t are exactly those containing this cell."""
        return self.cell_of(t.vertex) if isinstance(t, Point) else self.infinite_cell[t.block]

    def as_set(self, mask: int) -> PresentedSet:
        out = EMPTY
        for c, (b, _) in enumerate(self.cells):
            if not mask >> c & 1:
                continue
            if self.members[c] is None:
                others = {
                    i for d, (bb, _) in enumerate(self.cells)
                    if bb == b and d != c for i in self.members[d]
                }
                out = out | PresentedSet.of({b: Cofin(frozenset(others))})
            else:
                out = out | PresentedSet.of({b: Fin(frozenset(self.members[c]))})
        return out

    def contains(self, t: UltraType, mask: int) -> bool:
        return bool(mask >> self.required_cell(t) & 1)


def algebra_adjacency_witness(
    bg: BlockGraph,
    t1: UltraType,
    t2: UltraType,
    extra: Sequence[PresentedSet] = (),
    max_cells: int = 20,
) -> tuple[PresentedSet, PresentedSet] | None:
    """Search the generated subalgebra for A in t1, B in t2 with no edge from A to B.

    Every A of the algebra belonging to t1 is enumerated.  For each, the
    best candidate B is the complement of the cells A reaches; a B of type t2
    avoiding A's successors exists iff that complement is of type t2, since
    type membership is upward closed.  Returns the first separating pair.
    """
    bg.check_type(t1)
    bg.check_type(t2)
    points = [t.vertex for t in (t1, t2) if isinstance(t, Point)]
    alg = SubAlgebra(bg, points, extra)
    k = len(alg)
    r1, r2 = alg.required_cell(t1), alg.required_cell(t2)
    others = [c for c in range(k) if c != r1]
    if len(others) > max_cells:
        raise BudgetExceeded(f"subalgebra has {k} cells, above the limit of {max_cells + 1}")
    masks = np.arange(1 << len(others), dtype=np.int64)
    reach = np.full(masks.shape, alg.succ[r1], dtype=np.int64)
    full = (1 << k) - 1
    a_sets = np.full(masks.shape, 1 << r1, dtype=np.int64)
    for j, c in enumerate(others):
        bit = (masks >> j) & 1
        reach |= bit * alg.succ[c]
        a_sets |= bit << c
    b_sets = full & ~reach
    separated = (b_sets >> r2) & 1
    hits = np.flatnonzero(separated)
    if hits.size == 0:
        return None
    i = int(hits[0])
    return alg.as_set(int(a_sets[i])), alg.as_set(int(b_sets[i]))


def algebra_adjacency_oracle(
    bg: BlockGraph,
    t1: UltraType,
    t2: UltraType,
    extra: Sequence[PresentedSet] = (),
    max_cells: int = 20,
) -> bool:
    """Adjacency criterion A rho B for all A in t1, B in t2, over the finite subalgebra.

    Independent of :func:`type_adjacent`: it never looks at descriptors,
    only at concrete edges between cell representatives.
    """
    return algebra_adjacency_witness(bg, t1, t2, extra, max_cells) is None


# -- loops and colourings ---------------------------------------------------

def beta_loop_exists(bg: BlockGraph) -> UltraType | None:
    """A type carrying a loop of beta G, or None when beta G is loop-free."""
    for u, v in bg.edges:
        if u == v:
            return Point(u)
    for a in bg.atoms:
        if not a.nodiag:
            common = a.src & a.tgt
            if not common.is_empty():
                return Point(common.min_element())
    order = {b.id: k for k, b in enumerate(bg.blocks)}
    for a in bg.atoms:
        both = a.src.cofinite_blocks() & a.tgt.cofinite_blocks()
        if both:
            return Generic(min(both, key=order.__getitem__))
    return None


@dataclass(frozen=True)
class ColourScheme:
    """Finite colouring of the whole presented graph.

    Named vertices get individual colours; every other vertex of an omega
    block takes the block's base colour.
    """

    colour_count: int
    named: tuple[tuple[Vertex, int], ...]
    base: tuple[tuple[str, int], ...]

    def colour(self, v: Vertex) -> int:
        for w, c in self.named:
            if w == v:
                return c
        return dict(self.base)[v.block]

    def on_truncation(self, bg: BlockGraph, n: int) -> Colouring:
        g = truncate(bg, n)
        named = dict(self.named)
        base = dict(self.base)
        col = [named[v] if v in named else base[v.block] for v in bg.vertices_below(n)]
        return Colouring(g, tuple(col), max(self.colour_count, 1))


@dataclass(frozen=True)
class Obstruction:
    """Why no finite colouring exists: a loop at a vertex, or an infinite clique in a block."""

    kind: str
    vertex: Vertex | None = None
    block: str | None = None

    def __str__(self) -> str:
        return f"loop({self.vertex})" if self.kind == "loop" else f"infinite-clique({self.block})"


def finitely_colourable(bg: BlockGraph, certify: int = 3) -> ColourScheme | Obstruction:
    """Colour the quotient of the presented graph by twin classes.

    The quotient has one class per named vertex and one per omega block (its
    unnamed twins).  A class adjacent to itself is an obstruction; otherwise
    any colouring of the finite quotient pulls back to the whole graph.  The
    scheme is re-checked on ``certify`` successive truncations.
    """
    g0 = bg.guard()
    named = [v for v in bg.vertices_below(g0) if bg.block_map[v.block].size is not None or v.index in bg.named(v.block)]
    rest = {b: (Vertex(b, g0), Vertex(b, g0 + 1)) for b in bg.omega_blocks()}
    for v in named:
        if bg.has_edge(v, v):
            return Obstruction("loop", vertex=v)
    for b, (r, r2) in rest.items():
        if bg.has_edge(r, r):
            return Obstruction("loop", vertex=r)
    for b, (r, r2) in rest.items():
        if bg.has_edge(r, r2):
            return Obstruction("clique", block=b)
    classes = named + [rest[b][0] for b in rest]
    pos = {v: i for i, v in enumerate(classes)}
    quotient = Digraph(
        len(classes),
        [(pos[u], pos[v]) for u in classes for v in classes if u != v and bg.has_edge(u, v)],
    )
    res = chromatic_number(quotient)
    col = res.colouring or ()
    scheme = ColourScheme(
        max(res.upper or 0, 1),
        tuple((v, col[pos[v]]) for v in named),
        tuple((b, col[pos[rest[b][0]]]) for b in rest),
    )
    for n in range(g0 + 1, g0 + 1 + certify):
        c = scheme.on_truncation(bg, n)
        if not is_colouring(c.graph, c):
            raise TheoremDisagreement(f"colour scheme fails on truncation {n}")
    return scheme


@dataclass(frozen=True)
class LoopTheoremCheck:
    agree: bool
    loop: UltraType | None
    colouring: ColourScheme | Obstruction


def loop_theorem_check(bg: BlockGraph, loop_decider=None) -> LoopTheoremCheck:
    """beta G has a loop  <=>  G is not finitely colourable, decided both ways independently."""
    loop = (loop_decider or beta_loop_exists)(bg)
    col = finitely_colourable(bg)
    return LoopTheoremCheck((loop is not None) == isinstance(col, Obstruction), loop, col)


# -- paths ------------------------------------------------------------------

def type_reach(bg: BlockGraph, x: Vertex, n: int) -> tuple[PresentedSet, frozenset[str]]:
    """Types at the end of length-n paths of beta G from [x]: principal ones as a set, plus generics."""
    pts, gens = PresentedSet.point(x), frozenset()
    for _ in range(n):
        new_pts = successors(bg, pts)
        new_gens: set[str] = set()
        for a in bg.atoms:
            if not (pts & a.src).is_empty():
                new_gens |= a.tgt.cofinite_blocks()
            if any(a.src.is_cofinite_on(b) for b in gens):
                new_pts = new_pts | a.tgt
                new_gens |= a.tgt.cofinite_blocks()
        pts, gens = new_pts, frozenset(new_gens)
    return pts, gens


def ultnpath_table(
    bg: BlockGraph, x: Vertex, n_max: int, targets: Sequence[UltraType] | None = None
) -> list[tuple[UltraType, int, bool, bool]]:
    """(t, n, a length-n path [x] ~> t exists in beta G, x^(n) belongs to t) for n <= n_max.

    The path side walks the finite type graph (``REPS`` twins per block
    suffice to route any path through distinct twins); the membership side
    iterates the successor operation on presented sets.
    """
    targets = list(type_nodes(bg, reps=1) if targets is None else targets)
    for t in targets:
        bg.check_type(t)
    far = [t.vertex.index + 1 for t in (*targets, Point(x)) if isinstance(t, Point)]
    nodes = type_nodes(bg, cutoff=max([bg.guard() + REPS, *far]))
    pos = {t: i for i, t in enumerate(nodes)}
    m = type_matrix(bg, nodes).astype(np.int64)
    row = np.zeros(len(nodes), dtype=np.int64)
    row[pos[Point(x)]] = 1
    layer = PresentedSet.point(x)
    out = []
    for n in range(n_max + 1):
        if n:
            row = ((row @ m) > 0).astype(np.int64)
            layer = successors(bg, layer)
        for t in targets:
            out.append((t, n, bool(row[pos[t]]), type_contains(t, layer)))
    return out


def ultnpath_sides(bg: BlockGraph, x: Vertex, t: UltraType, n: int) -> tuple[bool, bool]:
    """(a length-n path [x] ~> t exists, x^(n) belongs to t)."""
    _, _, path, member = ultnpath_table(bg, x, n, [t])[-1]
    return path, member


def ultnpath_check(bg: BlockGraph, x: Vertex, t: UltraType, n: int) -> bool:
    path, member = ultnpath_sides(bg, x, t, n)
    return path == member


# -- connectivity -----------------------------------------------------------

@dataclass(frozen=True)
class Connectivity:
    connected: bool
    base: Vertex | None
    forward: int | None = None   # m with V = union of x0^(i), i <= m
    backward: int | None = None  # n with V = union of x0^(-j), j <= n
    witness: PresentedSet | None = None
    direction: str | None = None


def _cover_depth(bg: BlockGraph, x0: Vertex, steps: int) -> tuple[int | None, PresentedSet]:
    full = bg.full()
    layer = union = PresentedSet.point(x0)
    i = 0
    while union != full:
        layer = presented_reach(bg, layer, steps)
        i += 1
        grown = union | layer
        if grown == union:
            return None, union
        union = grown
    return i, union


def beta_strongly_connected(bg: BlockGraph) -> Connectivity:
    """Strong connectivity of beta G, decided by iterating reach sets from a base vertex."""
    if not bg.blocks:
        return Connectivity(False, None)
    x0 = Vertex(bg.blocks[0].id, 0)
    m, fwd = _cover_depth(bg, x0, 1)
    if m is None:
        return Connectivity(False, x0, witness=fwd, direction="forward")
    n, bwd = _cover_depth(bg, x0, -1)
    if n is None:
        return Connectivity(False, x0, forward=m, witness=bwd, direction="backward")
    return Connectivity(True, x0, m, n)


def beta_pseudocomplete(bg: BlockGraph) -> bool:
    """Pseudocompleteness of G and of the type graph of beta G; they must agree."""
    nodes = type_nodes(bg)
    pts = [t.vertex for t in nodes if isinstance(t, Point)]
    g_level = all(bg.has_edge(u, v) for u in pts for v in pts)
    beta_level = bool(type_matrix(bg, nodes).all())
    if g_level != beta_level:
        raise TheoremDisagreement(f"pseudocomplete: G {g_level}, beta G {beta_level}")
    return g_level


# -- invariants -------------------------------------------------------------

@dataclass(frozen=True)
class InvariantPair:
    name: str
    graph: float
    beta: float

    @property
    def status(self) -> str:
        if self.graph == INF and self.beta == INF:
            return "both infinite"
        return "equal" if self.graph == self.beta else "differ"


@dataclass(frozen=True)
class InvariantReport:
    delta: InvariantPair
    gamma: InvariantPair
    chi: InvariantPair

    def pairs(self) -> tuple[InvariantPair, ...]:
        return (self.delta, self.gamma, self.chi)

    @property
    def consistent(self) -> bool:
        return all(p.status != "differ" for p in self.pairs())


def _delta(bg: BlockGraph) -> InvariantPair:
    g_inf = any(not a.is_empty() and a.tgt.cofinite_blocks() for a in bg.atoms)
    nodes = type_nodes(bg, reps=1)
    m = type_matrix(bg, nodes)
    gen_cols = [j for j, t in enumerate(nodes) if isinstance(t, Generic)]
    b_inf = bool(gen_cols) and bool(m[:, gen_cols].any())
    if g_inf or b_inf:
        return InvariantPair("delta", INF if g_inf else _finite_delta(bg), INF if b_inf else int(m.sum(1).max()))
    d_graph = _finite_delta(bg)
    d_beta = int(m.sum(1).max(initial=0))
    # beta f_i sends the generic of each block to the image of one of its twins
    n = bg.guard() + 1
    trunc = truncate(bg, n)
    verts = bg.vertices_below(n)
    fs = successor_functions(trunc)
    for j in gen_cols:
        b = nodes[j].block
        r = verts.index(Vertex(b, bg.guard()))
        succ_types = {nodes[k] for k in np.flatnonzero(m[j])}
        images = {Point(verts[f[r]]) for f in fs}
        if not succ_types <= images:
            raise TheoremDisagreement(f"successors of generic({b}) escape the f_i images")
    return InvariantPair("delta", d_graph, d_beta)


def _finite_delta(bg: BlockGraph) -> int:
    return max_out_degree(truncate(bg, bg.guard() + 1))


def _gamma(bg: BlockGraph) -> InvariantPair:
    conn = beta_strongly_connected(bg)
    if not bg.blocks:
        g_val = 0
    elif not conn.connected:
        g_val = INF
    else:
        g_val = gamma_diameter(truncate(bg, bg.guard() + REPS))
    _, tg = type_graph(bg)
    return InvariantPair("gamma", g_val, gamma_diameter(tg))


def _chi(bg: BlockGraph) -> InvariantPair:
    scheme = finitely_colourable(bg)
    if isinstance(scheme, Obstruction):
        g_val = INF
    else:
        g_val = chromatic_number(truncate(bg, bg.guard() + 1), exact_limit=48).upper
    _, tg = type_graph(bg, type_nodes(bg, reps=1))
    res = chromatic_number(tg, exact_limit=48)
    b_val = INF if res.status == "no-colouring" else res.upper
    return InvariantPair("chi", g_val, b_val)


def invariant_report(bg: BlockGraph) -> InvariantReport:
    """Max out-degree, gamma-diameter and chromatic number of G next to their type-level values."""
    return InvariantReport(_delta(bg), _gamma(bg), _chi(bg))


# -- composition ------------------------------------------------------------

def _edge_sources(bg: BlockGraph) -> list[tuple[PresentedSet, PresentedSet, bool]]:
    out = [(a.src, a.tgt, a.nodiag) for a in bg.atoms]
    out += [(PresentedSet.point(u), PresentedSet.point(v), False) for u, v in bg.edges]
    return out


def _same_blocks(*bgs: BlockGraph) -> None:
    first = bgs[0].blocks
    if any(b.blocks != first for b in bgs[1:]):
        raise ValueError("presentations must share the same blocks")


def compose_presentations(g: BlockGraph, h: BlockGraph) -> BlockGraph:
    """A presentation of rho_g rho_h, exact for any atoms.

    For rectangles S1 x T1 and S2 x T2 meeting in I = T1 & S2: if I is
    infinite the composite is S1 x T2; otherwise it is the union over b in I
    of the rectangles with b removed from the sides whose atom excluded
    the diagonal.
    """
    _same_blocks(g, h)
    atoms: list[EdgeAtom] = []
    seen: set[EdgeAtom] = set()
    for (s1, t1, nd1), (s2, t2, nd2) in product(_edge_sources(g), _edge_sources(h)):
        mid = t1 & s2
        if mid.is_empty():
            continue
        if not mid.is_finite():
            rects = [(s1, t2)]
        else:
            rects = []
            for b in mid.elements():
                p = PresentedSet.point(b)
                rects.append((s1 - p if nd1 else s1, t2 - p if nd2 else t2))
        for s, t in rects:
            atom = EdgeAtom(s, t)
            if not atom.is_empty() and atom not in seen:
                seen.add(atom)
                atoms.append(atom)
    return BlockGraph(g.blocks, tuple(atoms))


def power_presentation(bg: BlockGraph, n: int) -> BlockGraph:
    if n < 1:
        raise ValueError("power needs n >= 1")
    out = bg
    for _ in range(n - 1):
        out = compose_presentations(out, bg)
    return out


@dataclass(frozen=True)
class CompositionCheck:
    hypothesis: bool
    conclusion: bool | None  # None when the hypothesis failed and the check was skipped

    @property
    def ok(self) -> bool:
        return not self.hypothesis or bool(self.conclusion)


def _window(*bgs: BlockGraph) -> range:
    g = max(b.guard() for b in bgs)
    return range(g + REPS, g + REPS + 2)


def compthm_check(g: BlockGraph, h: BlockGraph, k: BlockGraph) -> CompositionCheck:
    """If rho_G rho_H = rho_K (checked on truncations) then the same holds at type level."""
    _same_blocks(g, h, k)
    window = _window(g, h, k)
    for n in window:
        if not relation_compose_check(truncate(g, n), truncate(h, n), truncate(k, n)):
            return CompositionCheck(False, None)
    nodes = type_nodes(g, cutoff=window[0])
    mg, mh, mk = (type_matrix(x, nodes).astype(np.int64) for x in (g, h, k))
    return CompositionCheck(True, bool(np.array_equal((mg @ mh) > 0, mk.astype(bool))))


def beta_power_check(bg: BlockGraph, n: int, power: BlockGraph | None = None) -> CompositionCheck:
    """rho_{beta(G^n)} = (rho_{beta G})^n, against a supplied or composed power presentation."""
    power = power_presentation(bg, n) if power is None else power
    _same_blocks(bg, power)
    window = _window(bg, power)
    for cut in window:
        base = truncate(bg, cut).adjacency()
        rel = base
        for _ in range(n - 1):
            rel = compose_relations(rel, base)
        if rel != truncate(power, cut).adjacency():
            return CompositionCheck(False, None)
    nodes = type_nodes(bg, cutoff=window[0])
    m = type_matrix(bg, nodes).astype(np.int64)
    acc = m.copy()
    for _ in range(n - 1):
        acc = ((acc @ m) > 0).astype(np.int64)
    return CompositionCheck(True, bool(np.array_equal(acc.astype(bool), type_matrix(power, nodes))))


# -- properness and sparseness ----------------------------------------------

@dataclass(frozen=True)
class ProperReport:
    g_proper: bool
    e_small: bool
    duplicate: tuple[Vertex, Vertex] | None = None
    small_witness: int | None = None

    @property
    def beta_proper_predicted(self) -> bool:
        return self.g_proper and self.e_small


def _distinct_pair(s: PresentedSet, t: PresentedSet, cut: int, nodiag: bool) -> tuple[Vertex, Vertex] | None:
    for x in s.sample(cut):
        for y in t.sample(cut):
            if not (nodiag and x == y):
                return x, y
    return None


def beta_proper_check(bg: BlockGraph) -> ProperReport:
    """beta G is proper iff G is proper and its edge relation is small."""
    cut = bg.guard() + 2
    dup = None
    seen: set[tuple[Vertex, Vertex]] = set()
    for e in bg.edges:
        if e in seen or any(a.contributes(*e) for a in bg.atoms):
            dup = e
            break
        seen.add(e)
    if dup is None:
        for i, a in enumerate(bg.atoms):
            for b in bg.atoms[i + 1:]:
                dup = _distinct_pair(a.src & b.src, a.tgt & b.tgt, cut, a.nodiag or b.nodiag)
                if dup:
                    break
            if dup:
                break
    small = block_relation_smallness(bg)
    return ProperReport(dup is None, small.small, dup, small.witness_atom)


def type_level_multi_edge(bg: BlockGraph, twins: int = 4) -> tuple[UltraType, UltraType] | None:
    """Two types joined by at least two edges of beta E, found from concrete edge counts.

    Either some pair of vertices already carries parallel edges, or some
    pair of blocks has all of its unnamed-by-unnamed pairs adjacent, so the
    edge set contains an infinite rectangle and ultrafilters on it are not
    determined by their endpoints.
    """
    g0 = bg.guard()
    verts = bg.vertices_below(g0 + REPS)
    for u in verts:
        for v in verts:
            if bg.multiplicity(u, v) > 1:
                return Point(u), Point(v)
    for b in bg.omega_blocks():
        for c in bg.omega_blocks():
            ub = [Vertex(b, g0 + i) for i in range(twins)]
            uc = [Vertex(c, g0 + i) for i in range(twins)]
            pairs = [(u, v) for u in ub for v in uc if u != v]
            if all(bg.has_edge(u, v) for u, v in pairs):
                return Generic(b), Generic(c)
    return None


def weakly_sparse_check(bg: BlockGraph) -> bool:
    """No infinite complete subgraph; asserts that small edge relations are weakly sparse."""
    clique = any(
        a.src.is_cofinite_on(b) and a.tgt.is_cofinite_on(b)
        for a in bg.atoms for b in bg.omega_blocks()
    )
    if block_relation_smallness(bg).small and clique:
        raise TheoremDisagreement("small edge relation with an infinite complete subgraph")
    return not clique
