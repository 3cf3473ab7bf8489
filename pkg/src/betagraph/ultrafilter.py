"""Ultrafilters over explicit finite universes.

Over a finite set every ultrafilter is principal, so an :class:`Ultrafilter`
is just its generating point.  The interesting content is the extensional
checks: the FIP reduction, the action of beta on maps, and the
naturality squares of the unit embedding for finite graphs.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .digraph import Digraph

# extensional checks enumerate all 2^size subsets; skip them above this
EXTENSIONAL_LIMIT = 12


@dataclass(frozen=True)
class SetFamily:
    size: int
    members: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        members = tuple(frozenset(m) for m in self.members)
        object.__setattr__(self, "members", members)
        for i, m in enumerate(members):
            if any(not 0 <= x < self.size for x in m):
                raise ValueError(f"member {i} is not a subset of the {self.size}-element universe")


@dataclass(frozen=True)
class Ultrafilter:
    """The principal ultrafilter [point] = {A : point in A}."""

    size: int
    point: int

    def __post_init__(self):
        if not 0 <= self.point < self.size:
            raise ValueError("point outside universe")

    def __contains__(self, subset) -> bool:
        return self.point in subset

    def members(self) -> Iterable[frozenset[int]]:
        """Every member set; 2^(size-1) of them."""
        rest = [x for x in range(self.size) if x != self.point]
        for r in range(len(rest) + 1):
            for extra in combinations(rest, r):
                yield frozenset((self.point, *extra))


@dataclass(frozen=True)
class FipResult:
    holds: bool
    intersection: frozenset[int] = frozenset()
    witness: tuple[int, ...] = ()  # member indices with empty intersection

    def __bool__(self) -> bool:
        return self.holds


def principal(size: int, x: int) -> Ultrafilter:
    """eta_X(x)."""
    return Ultrafilter(size, x)


def _intersection(family: SetFamily, idx: Iterable[int]) -> frozenset[int]:
    out = frozenset(range(family.size))
    for i in idx:
        out &= family.members[i]
    return out


def has_fip(family: SetFamily) -> FipResult:
    """Finite intersection property of a family over a finite universe.

    With finitely many members the only finite subfamily that matters is the
    whole family, so FIP is nonemptiness of the total intersection.  On
    failure the witness is a greedily minimised subfamily with empty
    intersection.
    """
    total = _intersection(family, range(len(family.members)))
    if total:
        return FipResult(True, total)
    chosen: list[int] = []
    acc = frozenset(range(family.size))
    for i, m in enumerate(family.members):
        chosen.append(i)
        acc &= m
        if not acc:
            break
    for i in list(chosen):
        trial = [j for j in chosen if j != i]
        if not _intersection(family, trial):
            chosen = trial
    return FipResult(False, frozenset(), tuple(chosen))


def has_fip_bruteforce(family: SetFamily) -> bool:
    """Definition-level check over every finite subfamily; exponential."""
    k = len(family.members)
    return all(_intersection(family, sub) for r in range(1, k + 1) for sub in combinations(range(k), r))


def extend_to_ultrafilter(family: SetFamily) -> Ultrafilter | FipResult:
    """Principal ultrafilter at the least common point, or the FIP refutation."""
    fip = has_fip(family)
    if not fip:
        return fip
    return Ultrafilter(family.size, min(fip.intersection))


def is_partition(size: int, blocks: Sequence[Iterable[int]]) -> bool:
    seen: set[int] = set()
    for b in blocks:
        b = set(b)
        if not b or b & seen:
            return False
        seen |= b
    return seen == set(range(size))


def partition_member(u: Ultrafilter, blocks: Sequence[Iterable[int]]) -> int:
    """Index of the unique block belonging to ``u``."""
    blocks = [frozenset(b) for b in blocks]
    if not is_partition(u.size, blocks):
        raise ValueError("not a partition of the universe")
    hits = [i for i, b in enumerate(blocks) if b in u]
    assert len(hits) == 1
    return hits[0]


def meets_every(w: Iterable[int], u: Ultrafilter) -> bool:
    """W in u, cross-checked against 'W meets every member of u' on small universes."""
    w = frozenset(w)
    answer = w in u
    if u.size <= EXTENSIONAL_LIMIT:
        assert answer == all(w & m for m in u.members())
    return answer


def beta_map(f: Sequence[int], codomain: int, u: Ultrafilter, check: bool | None = None) -> Ultrafilter:
    """Image of ``u`` under beta f, where f : X -> Y is given as a list.

    The result is principal at f(point).  When ``check`` (default: codomain
    small enough) every V subset of Y is tested against
    V in beta f(u)  <=>  f^-1 V in u.
    """
    if len(f) != u.size:
        raise ValueError("map domain does not match the ultrafilter's universe")
    image = Ultrafilter(codomain, f[u.point])
    if check is None:
        check = codomain <= EXTENSIONAL_LIMIT
    if check:
        for mask in range(1 << codomain):
            pre = frozenset(x for x in range(u.size) if mask >> f[x] & 1)
            assert (mask >> image.point & 1 == 1) == (pre in u)
    return image


def compose_maps(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    """g . f as a list."""
    return tuple(g[y] for y in f)


@dataclass(frozen=True)
class NaturalityReport:
    source_square: bool
    target_square: bool
    isomorphic: bool

    @property
    def ok(self) -> bool:
        return self.source_square and self.target_square and self.isomorphic


def beta_finite_graph(g: Digraph) -> tuple[Digraph, NaturalityReport]:
    """beta G for finite G, built from ultrafilters, with the eta squares checked.

    Vertices and edges of the result are the principal ultrafilters, numbered
    by their points; the edge maps are beta s and beta t.
    """
    V, E = g.vertex_count, g.edge_count
    s = [g.source(e) for e in range(E)]
    t = [g.target(e) for e in range(E)]
    beta_edges = []
    src_ok = tgt_ok = True
    for e in range(E):
        xi = principal(E, e)
        bs = beta_map(s, V, xi)
        bt = beta_map(t, V, xi)
        beta_edges.append((bs.point, bt.point))
        src_ok &= bs == principal(V, s[e])
        tgt_ok &= bt == principal(V, t[e])
    bg = Digraph(V, beta_edges)
    # eta is the identity on indices here, so isomorphism is edge-wise equality
    iso = bg.vertex_count == V and all(bg.edges[e] == g.edges[e] for e in range(E))
    return bg, NaturalityReport(src_ok, tgt_ok, iso)
