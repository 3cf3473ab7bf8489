"""Small relations and relative rectangle covers.

A relation rho on X x Y is small when every Q subset of rho is cut out of rho
by finitely many rectangles: Q = rho & (A_1 x B_1 | ... | A_n x B_n).  For
finite relations this always holds, so the quantity of interest is the least
such n, computed here exactly on small grids and bracketed otherwise.

Terminology: a rectangle is *admissible* for (rho, Q) when its intersection
with rho stays inside Q; a *fooling set* is a set of Q-pairs no admissible
rectangle can hold two of.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

from .budget import Budget, BudgetExceeded
from .presentation import BlockGraph, Vertex, truncate

Rectangle = tuple[frozenset[int], frozenset[int]]


@dataclass(frozen=True)
class Relation:
    x_size: int
    y_size: int
    pairs: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        pairs = frozenset((int(x), int(y)) for x, y in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.x_size < 0 or self.y_size < 0:
            raise ValueError("sizes must be non-negative")
        for x, y in pairs:
            if not (0 <= x < self.x_size and 0 <= y < self.y_size):
                raise ValueError(f"pair ({x}, {y}) outside {self.x_size} x {self.y_size}")

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __le__(self, other: "Relation") -> bool:
        return self.pairs <= other.pairs

    def with_pairs(self, pairs: Iterable[tuple[int, int]]) -> "Relation":
        return Relation(self.x_size, self.y_size, frozenset(pairs))

    def padded(self, dx: int, dy: int) -> "Relation":
        return Relation(self.x_size + dx, self.y_size + dy, self.pairs)

    def opposite(self) -> "Relation":
        return Relation(self.y_size, self.x_size, frozenset((y, x) for x, y in self.pairs))

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


@dataclass(frozen=True)
class RectangleCover:
    rects: tuple[Rectangle, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "rects", tuple((frozenset(a), frozenset(b)) for a, b in self.rects)
        )

    def __len__(self) -> int:
        return len(self.rects)

    def __add__(self, other: "RectangleCover") -> "RectangleCover":
        return RectangleCover(self.rects + other.rects)

    def covered(self) -> set[tuple[int, int]]:
        return {(x, y) for a, b in self.rects for x in a for y in b}


@dataclass(frozen=True)
class CoverResult:
    """``status``: ``"exact"``, ``"interval"`` (beyond the exact cap) or ``"unknown"`` (budget)."""

    status: str
    lower: int
    upper: int
    cover: RectangleCover

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    @property
    def size(self) -> int | None:
        return self.upper if self.exact else None


# -- named relations --------------------------------------------------------

def full(m: int, k: int) -> Relation:
    return Relation(m, k, frozenset(product(range(m), range(k))))


def staircase(n: int) -> Relation:
    """The order relation <= on [n] x [n]."""
    return Relation(n, n, frozenset((i, j) for i in range(n) for j in range(i, n)))


def identity(n: int) -> Relation:
    return Relation(n, n, frozenset((i, i) for i in range(n)))


def function_graph(f: Sequence[int], y_size: int) -> Relation:
    return Relation(len(f), y_size, frozenset(enumerate(f)))


FAMILIES: dict[str, Callable[[int], Relation]] = {
    "staircase": staircase,
    "full": lambda n: full(n, n),
    "identity": identity,
}


def compose(r1: Relation, r2: Relation) -> Relation:
    """r1 on X x Y then r2 on Y x Z."""
    if r1.y_size != r2.x_size:
        raise ValueError("relations are not composable")
    by_first: dict[int, set[int]] = {}
    for y, z in r2.pairs:
        by_first.setdefault(y, set()).add(z)
    return Relation(r1.x_size, r2.y_size, frozenset((x, z) for x, y in r1.pairs for z in by_first.get(y, ())))


# -- covers -----------------------------------------------------------------

def _check_sub(rho: Relation, q: Relation) -> None:
    if (rho.x_size, rho.y_size) != (q.x_size, q.y_size):
        raise ValueError("Q and rho live on different grids")
    if not q <= rho:
        raise ValueError("Q is not a subrelation of rho")


def is_cover(rho: Relation, q: Relation, cover: RectangleCover) -> bool:
    """rho & union of the rectangles == Q."""
    _check_sub(rho, q)
    hit = {p for a, b in cover.rects for p in product(a, b) if p in rho.pairs}
    return hit == q.pairs


def admissible(rho: Relation, q: Relation, a: Iterable[int], b: Iterable[int]) -> bool:
    forbidden = rho.pairs - q.pairs
    return not any(p in forbidden for p in product(a, b))


def _allowed_rows(rho: Relation, q: Relation) -> list[int]:
    """Bitmask over Y of the columns each row may use without hitting rho - Q."""
    full_y = (1 << rho.y_size) - 1
    rows = [full_y] * rho.x_size
    for x, y in rho.pairs - q.pairs:
        rows[x] &= ~(1 << y)
    return rows


def _mask_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def maximal_rectangles(rho: Relation, q: Relation) -> list[Rectangle]:
    """All maximal admissible rectangles meeting Q, by closure over the smaller side."""
    _check_sub(rho, q)
    if rho.y_size < rho.x_size:
        return [(a, b) for b, a in maximal_rectangles(rho.opposite(), q.opposite())]
    rows = _allowed_rows(rho, q)
    out = []
    for amask in range(1, 1 << rho.x_size):
        bmask = (1 << rho.y_size) - 1
        for x in range(rho.x_size):
            if amask >> x & 1:
                bmask &= rows[x]
        if not bmask:
            continue
        closure = sum(1 << x for x in range(rho.x_size) if rows[x] & bmask == bmask)
        if closure != amask:
            continue
        a, b = _mask_set(amask), _mask_set(bmask)
        if any((x, y) in q.pairs for x in a for y in b):
            out.append((a, b))
    return sorted(out, key=lambda r: (sorted(r[0]), sorted(r[1])))


def _line_closures(rho: Relation, q: Relation) -> list[Rectangle]:
    """Maximal admissible rectangles through single rows and single columns."""
    rows = _allowed_rows(rho, q)
    cands = set()
    for x in range(rho.x_size):
        b = rows[x]
        a = sum(1 << r for r in range(rho.x_size) if rows[r] & b == b)
        cands.add((_mask_set(a), _mask_set(b)))
    cols = _allowed_rows(rho.opposite(), q.opposite())
    for y in range(rho.y_size):
        a = cols[y]
        b = sum(1 << c for c in range(rho.y_size) if cols[c] & a == a)
        cands.add((_mask_set(a), _mask_set(b)))
    return sorted((r for r in cands if r[0] and r[1]), key=lambda r: (sorted(r[0]), sorted(r[1])))


def _coverage(q_index: dict[tuple[int, int], int], rect: Rectangle) -> int:
    a, b = rect
    return sum(1 << q_index[p] for p in product(a, b) if p in q_index)


def greedy_cover(rho: Relation, q: Relation, candidates: list[Rectangle] | None = None) -> RectangleCover:
    """Repeatedly take the candidate covering most uncovered Q-pairs; ties go to the first in order."""
    _check_sub(rho, q)
    cands = _line_closures(rho, q) if candidates is None else candidates
    q_index = {p: i for i, p in enumerate(q.sorted_pairs())}
    masks = [_coverage(q_index, r) for r in cands]
    uncovered = (1 << len(q_index)) - 1
    chosen = []
    while uncovered:
        best = max(range(len(cands)), key=lambda i: ((masks[i] & uncovered).bit_count(), -i))
        if not masks[best] & uncovered:
            raise AssertionError("candidate rectangles do not cover Q")
        chosen.append(cands[best])
        uncovered &= ~masks[best]
    return RectangleCover(tuple(chosen))


def fooling_set(rho: Relation, q: Relation, max_starts: int = 256) -> list[tuple[int, int]]:
    """A large set of Q-pairs that pairwise cannot share an admissible rectangle.

    Pairs (x1, y1), (x2, y2) clash when (x1, y2) or (x2, y1) lies in rho - Q.
    Greedy clique search in the clash graph from several starting pairs.
    """
    _check_sub(rho, q)
    forbidden = rho.pairs - q.pairs
    pts = q.sorted_pairs()
    n = len(pts)
    clash = [0] * n
    for i, (x1, y1) in enumerate(pts):
        for j in range(i + 1, n):
            x2, y2 = pts[j]
            if (x1, y2) in forbidden or (x2, y1) in forbidden:
                clash[i] |= 1 << j
                clash[j] |= 1 << i
    order = sorted(range(n), key=lambda i: (-clash[i].bit_count(), i))
    best: list[int] = []
    for start in order[:max_starts]:
        clique = [start]
        cand = clash[start]
        while cand:
            v = max(
                (i for i in range(n) if cand >> i & 1),
                key=lambda i: ((clash[i] & cand).bit_count(), -i),
            )
            clique.append(v)
            cand &= clash[v]
        if len(clique) > len(best):
            best = clique
    return sorted(pts[i] for i in best)


def _exact_set_cover(universe: int, sets: list[int], incumbent: list[int], budget: Budget) -> list[int]:
    best = list(incumbent)
    by_elem: dict[int, list[int]] = {}
    for i, s in enumerate(sets):
        m = s
        while m:
            low = m & -m
            by_elem.setdefault(low.bit_length() - 1, []).append(i)
            m ^= low

    def rec(uncovered: int, chosen: list[int]) -> None:
        nonlocal best
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        budget.tick()
        widest = max((s & uncovered).bit_count() for s in sets)
        need = -(-uncovered.bit_count() // widest)
        if len(chosen) + need >= len(best):
            return
        elems = [e for e in by_elem if uncovered >> e & 1]
        e = min(elems, key=lambda el: (len(by_elem[el]), el))
        for i in sorted(by_elem[e], key=lambda i: (-(sets[i] & uncovered).bit_count(), i)):
            chosen.append(i)
            rec(uncovered & ~sets[i], chosen)
            chosen.pop()

    rec(universe, [])
    return best


def min_cover(
    rho: Relation,
    q: Relation,
    budget: Budget | None = None,
    exact_limit: int = 36,
    method: str = "auto",
) -> CoverResult:
    """Least number of rectangles cutting Q out of rho.

    ``method``: ``"auto"`` (exact when the grid has at most ``exact_limit``
    cells), ``"exact"`` (always try) or ``"greedy"`` (bounds only).
    The lower bound is a fooling set, the upper bound a greedy cover; when
    they meet the answer is exact whatever the method.
    """
    _check_sub(rho, q)
    if not q.pairs:
        return CoverResult("exact", 0, 0, RectangleCover())
    greedy = greedy_cover(rho, q)
    lower = len(fooling_set(rho, q))
    if lower == len(greedy):
        return CoverResult("exact", lower, lower, greedy)
    cells = rho.x_size * rho.y_size
    if method == "greedy" or (method == "auto" and cells > exact_limit):
        return CoverResult("interval", lower, len(greedy), greedy)
    rects = maximal_rectangles(rho, q)
    q_index = {p: i for i, p in enumerate(q.sorted_pairs())}
    masks = [_coverage(q_index, r) for r in rects]
    # the greedy rectangles are maximal too, so they are among rects
    incumbent = [rects.index(r) for r in greedy.rects]
    budget = budget or Budget()
    try:
        best = _exact_set_cover((1 << len(q_index)) - 1, masks, incumbent, budget)
    except BudgetExceeded:
        return CoverResult("unknown", lower, len(greedy), greedy)
    return CoverResult("exact", len(best), len(best), RectangleCover(tuple(rects[i] for i in best)))


def rectangle_cover_number(q: Relation, **kw) -> CoverResult:
    """Cover of Q by rectangles inside the full grid, i.e. Q written as a union of rectangles."""
    return min_cover(full(q.x_size, q.y_size), q, **kw)


def row_cover(q: Relation) -> RectangleCover:
    """{x_i} x D_i for every row x_i that Q uses."""
    rows: dict[int, set[int]] = {}
    for x, y in q.pairs:
        rows.setdefault(x, set()).add(y)
    return RectangleCover(tuple((frozenset({x}), frozenset(d)) for x, d in sorted(rows.items())))


def all_subrelations(rho: Relation) -> Iterable[Relation]:
    pts = rho.sorted_pairs()
    for mask in range(1 << len(pts)):
        yield rho.with_pairs(p for i, p in enumerate(pts) if mask >> i & 1)


def random_subrelation(rho: Relation, rng: random.Random, p: float = 0.5) -> Relation:
    return rho.with_pairs(x for x in rho.sorted_pairs() if rng.random() < p)


def worst_case_cover(rho: Relation, rng: random.Random | None = None, samples: int = 100, **kw) -> int:
    """Max of min_cover(rho, Q) over all Q (|rho| <= 12) or over random samples.

    The upper bound is used when a value is not certified exact.
    """
    if len(rho) <= 12:
        subs: Iterable[Relation] = all_subrelations(rho)
    else:
        rng = rng or random.Random(0)
        subs = (random_subrelation(rho, rng) for _ in range(samples))
    return max((min_cover(rho, q, **kw).upper for q in subs), default=0)


# -- the lemmas as checks ---------------------------------------------------

def ideal_laws_check(rng: random.Random, samples: int = 30, size: int = 4) -> dict[str, bool]:
    """Empty relation, subrelations and finite unions, on random finite samples."""
    ok = {"empty": True, "subrelation": True, "union": True}
    for _ in range(samples):
        rho = random_subrelation(full(size, size), rng, 0.6)
        ok["empty"] &= min_cover(rho, rho.with_pairs(())).upper == 0
        q1, q2 = random_subrelation(rho, rng), random_subrelation(rho, rng)
        c1, c2 = min_cover(rho, q1).cover, min_cover(rho, q2).cover
        ok["union"] &= is_cover(rho, q1.with_pairs(q1.pairs | q2.pairs), c1 + c2)
        sub = random_subrelation(q1, rng)
        singles = RectangleCover(tuple((frozenset({x}), frozenset({y})) for x, y in sub.sorted_pairs()))
        ok["subrelation"] &= is_cover(rho, sub, singles) and min_cover(rho, sub).upper <= len(sub)
    return ok


def absoluteness_check(rho: Relation, q: Relation, cover: RectangleCover, dx: int, dy: int) -> bool:
    """Embedding rho in a larger grid does not change whether the same rectangles cover Q."""
    return is_cover(rho, q, cover) == is_cover(rho.padded(dx, dy), q.padded(dx, dy), cover)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    lower: int
    upper: int
    exact: bool


def staircase_growth(n_max: int, exact_max: int = 6) -> list[GrowthRow]:
    """Cover number of <= on [n] x [n] as a union of rectangles.

    Exact for n <= exact_max.  For every n the diagonal pairs form a fooling
    set: a rectangle holding (i, i) and (j, j) with i < j would hold (j, i).
    """
    rows = []
    for n in range(1, n_max + 1):
        q = staircase(n)
        rho = full(n, n)
        res = min_cover(rho, q, method="exact" if n <= exact_max else "greedy")
        diagonal = RectangleCover(tuple((frozenset(range(i + 1)), frozenset(range(i, n))) for i in range(n)))
        assert is_cover(rho, q, diagonal)
        rows.append(GrowthRow(n, res.lower, min(res.upper, n), res.exact))
    return rows


@dataclass(frozen=True)
class CounterexampleRow:
    n: int
    left_worst: int       # n x 1 full relation, worst Q
    right_worst: int      # 1 x n full relation, worst Q
    composite_full: bool  # the composite is all of n x n
    composite_staircase: int
    exact: bool


def composition_counterexample(n: int) -> CounterexampleRow:
    """Two relations through a one-point middle whose composite is the full n x n grid."""
    left, right = full(n, 1), full(1, n)
    comp = compose(left, right)
    stair = min_cover(comp, staircase(n), method="exact" if n <= 6 else "greedy")
    return CounterexampleRow(
        n,
        worst_case_cover(left),
        worst_case_cover(right),
        comp == full(n, n),
        stair.upper if stair.exact else stair.lower,
        stair.exact,
    )


# -- block presentations ----------------------------------------------------

@dataclass(frozen=True)
class SmallnessVerdict:
    small: bool
    witness_atom: int | None = None


def block_relation_smallness(bg: BlockGraph) -> SmallnessVerdict:
    """Small iff no atom is infinite on both sides.

    An atom infinite on both sides contains an infinite rectangle, which
    carries a copy of <= on N x N.  Atoms with a finite side and explicit
    edges are small, and small relations are closed under finite unions.
    """
    for k, a in enumerate(bg.atoms):
        if a.src.cofinite_blocks() and a.tgt.cofinite_blocks():
            return SmallnessVerdict(False, k)
    return SmallnessVerdict(True)


def _finite_sides(bg: BlockGraph) -> tuple[set[Vertex], set[Vertex]]:
    """Finite sets F_src, F_tgt such that every edge starts in F_src or ends in F_tgt."""
    f_src: set[Vertex] = set()
    f_tgt: set[Vertex] = set()
    for a in bg.atoms:
        if a.src.is_finite():
            f_src.update(a.src.elements())
        elif a.tgt.is_finite():
            f_tgt.update(a.tgt.elements())
        else:
            raise ValueError("atom with two infinite sides")
    f_src.update(u for u, _ in bg.edges)
    return f_src, f_tgt


def smallness_cross_validation(bg: BlockGraph, n_max: int = 6, rng: random.Random | None = None) -> bool:
    """Check a smallness verdict against covers of truncations.

    Not small: <= restricted to the unnamed twins of the offending atom needs
    a growing number of rectangles.  Small: every sampled Q on truncations is
    covered by rows through F_src and columns through F_tgt, a bound that
    does not depend on the truncation.
    """
    verdict = block_relation_smallness(bg)
    g0 = bg.guard()
    if not verdict.small:
        a = bg.atoms[verdict.witness_atom]
        b = min(a.src.cofinite_blocks())
        c = min(a.tgt.cofinite_blocks())
        sizes = []
        for m in range(1, n_max + 1):
            us = [Vertex(b, g0 + i) for i in range(m)]
            vs = [Vertex(c, g0 + i) for i in range(m)]
            rho = Relation(m, m, frozenset(
                (i, j) for i, u in enumerate(us) for j, v in enumerate(vs) if bg.has_edge(u, v)
            ))
            q = rho.with_pairs(p for p in rho.pairs if p[0] <= p[1])
            sizes.append(min_cover(rho, q, method="exact").upper)
        return all(x <= y for x, y in zip(sizes, sizes[1:])) and sizes[-1] > sizes[0]
    rng = rng or random.Random(0)
    f_src, f_tgt = _finite_sides(bg)
    bound = len(f_src) + len(f_tgt)
    for n in range(1, n_max + 1):
        g = truncate(bg, n)
        verts = bg.vertices_below(n)
        rho = Relation(g.vertex_count, g.vertex_count, g.adjacency())
        for _ in range(5):
            q = random_subrelation(rho, rng)
            rows = {verts.index(v) for v in f_src if v in verts}
            cols = {verts.index(v) for v in f_tgt if v in verts}
            rects = [(frozenset({x}), frozenset(y for (xx, y) in q.pairs if xx == x)) for x in sorted(rows)]
            rects += [
                (frozenset(x for (x, yy) in q.pairs if yy == y and x not in rows), frozenset({y}))
                for y in sorted(cols)
            ]
            cover = RectangleCover(tuple(rects))
            if len(cover) > bound or not is_cover(rho, q, cover):
                return False
    return True
