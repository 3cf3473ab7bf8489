"""Finitely presented, possibly infinite graphs.

The vertex set is a disjoint union of blocks, each finite or countably
infinite (omega).  Edges come from *atoms*, rectangles ``src x tgt`` of
presented sets (optionally minus the diagonal), and from a finite list of
explicit edges.  A presented set gives, per block, either a finite index set
or (omega blocks only) a cofinite one, so presented sets form a Boolean
algebra that is closed under the successor operation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Union

from .digraph import Digraph


class Vertex(NamedTuple):
    block: str
    index: int

    def __str__(self) -> str:
        return f"{self.block}:{self.index}"


@dataclass(frozen=True)
class Fin:
    indices: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Cofin:
    excluded: frozenset[int] = frozenset()


Descriptor = Union[Fin, Cofin]
EMPTY_DESC = Fin()


def _union(a: Descriptor, b: Descriptor) -> Descriptor:
    if isinstance(a, Fin) and isinstance(b, Fin):
        return Fin(a.indices | b.indices)
    if isinstance(a, Fin):
        return Cofin(b.excluded - a.indices)
    if isinstance(b, Fin):
        return Cofin(a.excluded - b.indices)
    return Cofin(a.excluded & b.excluded)


def _inter(a: Descriptor, b: Descriptor) -> Descriptor:
    if isinstance(a, Fin) and isinstance(b, Fin):
        return Fin(a.indices & b.indices)
    if isinstance(a, Fin):
        return Fin(a.indices - b.excluded)
    if isinstance(b, Fin):
        return Fin(b.indices - a.excluded)
    return Cofin(a.excluded | b.excluded)


def _diff(a: Descriptor, b: Descriptor) -> Descriptor:
    if isinstance(a, Fin) and isinstance(b, Fin):
        return Fin(a.indices - b.indices)
    if isinstance(a, Fin):
        return Fin(a.indices & b.excluded)
    if isinstance(b, Fin):
        return Cofin(a.excluded | b.indices)
    return Fin(b.excluded - a.excluded)


@dataclass(frozen=True)
class PresentedSet:
    """A set of vertices given blockwise; absent blocks contribute nothing.

    Build with :func:`fin`, :func:`cofin`, :meth:`point` and the ``| & -``
    operators.  Complements need the block sizes, see
    :meth:`BlockGraph.complement`.
    """

    parts: tuple[tuple[str, Descriptor], ...] = ()

    @classmethod
    def of(cls, mapping: dict[str, Descriptor]) -> "PresentedSet":
        keep = [(b, d) for b, d in mapping.items() if d != EMPTY_DESC]
        return cls(tuple(sorted(keep)))

    @classmethod
    def point(cls, v: Vertex) -> "PresentedSet":
        return cls(((v.block, Fin(frozenset({v.index}))),))

    @cached_property
    def _map(self) -> dict[str, Descriptor]:
        return dict(self.parts)

    def get(self, block: str) -> Descriptor:
        return self._map.get(block, EMPTY_DESC)

    def blocks(self) -> set[str]:
        return set(self._map)

    def _combine(self, other: "PresentedSet", op) -> "PresentedSet":
        keys = self.blocks() | other.blocks()
        return PresentedSet.of({b: op(self.get(b), other.get(b)) for b in keys})

    def __or__(self, other: "PresentedSet") -> "PresentedSet":
        return self._combine(other, _union)

    def __and__(self, other: "PresentedSet") -> "PresentedSet":
        return self._combine(other, _inter)

    def __sub__(self, other: "PresentedSet") -> "PresentedSet":
        return self._combine(other, _diff)

    def __contains__(self, v: Vertex) -> bool:
        d = self.get(v.block)
        if isinstance(d, Fin):
            return v.index in d.indices
        return v.index not in d.excluded

    def is_empty(self) -> bool:
        return not self.parts

    def is_cofinite_on(self, block: str) -> bool:
        return isinstance(self.get(block), Cofin)

    def cofinite_blocks(self) -> set[str]:
        return {b for b, d in self.parts if isinstance(d, Cofin)}

    def is_finite(self) -> bool:
        return not self.cofinite_blocks()

    def elements(self) -> list[Vertex]:
        if not self.is_finite():
            raise ValueError("set is infinite")
        return [Vertex(b, i) for b, d in self.parts for i in sorted(d.indices)]

    def single_element(self) -> Vertex | None:
        """The element if the set has exactly one, else None."""
        if len(self.parts) != 1 or not self.is_finite():
            return None
        b, d = self.parts[0]
        if len(d.indices) != 1:
            return None
        return Vertex(b, next(iter(d.indices)))

    def min_element(self) -> Vertex | None:
        for b, d in self.parts:
            if isinstance(d, Fin):
                return Vertex(b, min(d.indices))
            i = 0
            while i in d.excluded:
                i += 1
            return Vertex(b, i)
        return None

    def named_indices(self, block: str) -> frozenset[int]:
        d = self.get(block)
        return d.indices if isinstance(d, Fin) else d.excluded

    def sample(self, n: int) -> list[Vertex]:
        """Finite parts whole, cofinite parts cut below index n."""
        out = []
        for b, d in self.parts:
            if isinstance(d, Fin):
                out.extend(Vertex(b, i) for i in sorted(d.indices))
            else:
                out.extend(Vertex(b, i) for i in range(n) if i not in d.excluded)
        return out

    def __str__(self) -> str:
        if not self.parts:
            return "{}"
        chunks = []
        for b, d in self.parts:
            idx = ",".join(map(str, sorted(d.indices if isinstance(d, Fin) else d.excluded)))
            kind = "finite" if isinstance(d, Fin) else "cofinite"
            chunks.append(f"{kind}({b}; {idx})" if idx or kind == "finite" else f"cofinite({b})")
        return " + ".join(chunks)


EMPTY = PresentedSet()


def fin(block: str, *indices: int) -> PresentedSet:
    return PresentedSet.of({block: Fin(frozenset(indices))})


def cofin(block: str, *excluded: int) -> PresentedSet:
    return PresentedSet.of({block: Cofin(frozenset(excluded))})


@dataclass(frozen=True)
class Block:
    id: str
    size: int | None  # None means omega

    @property
    def infinite(self) -> bool:
        return self.size is None


@dataclass(frozen=True)
class EdgeAtom:
    src: PresentedSet
    tgt: PresentedSet
    nodiag: bool = False

    def contributes(self, u: Vertex, v: Vertex) -> bool:
        return u in self.src and v in self.tgt and not (self.nodiag and u == v)

    def is_empty(self) -> bool:
        if self.src.is_empty() or self.tgt.is_empty():
            return True
        if self.nodiag:
            single = self.src.single_element()
            return single is not None and single == self.tgt.single_element()
        return False


@dataclass(frozen=True)
class Point:
    """The principal ultrafilter at a concrete vertex."""

    vertex: Vertex

    def __str__(self) -> str:
        return f"point({self.vertex})"


@dataclass(frozen=True)
class Generic:
    """All non-principal ultrafilters concentrating on an omega block."""

    block: str

    def __str__(self) -> str:
        return f"generic({self.block})"


UltraType = Union[Point, Generic]


def type_contains(t: UltraType, s: PresentedSet) -> bool:
    """Whether the presented set belongs to (every ultrafilter of) the type."""
    if isinstance(t, Point):
        return t.vertex in s
    return s.is_cofinite_on(t.block)


@dataclass(frozen=True)
class BlockGraph:
    blocks: tuple[Block, ...]
    atoms: tuple[EdgeAtom, ...] = ()
    edges: tuple[tuple[Vertex, Vertex], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(
            self, "edges", tuple((Vertex(*u), Vertex(*v)) for u, v in self.edges)
        )
        ids = [b.id for b in self.blocks]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate block id")
        for k, a in enumerate(self.atoms):
            for side in (a.src, a.tgt):
                self._check_set(side, f"atom {k}")
        for u, v in self.edges:
            for w in (u, v):
                if not self.is_vertex(w):
                    raise ValueError(f"explicit edge endpoint {w} is not a vertex")

    def _check_set(self, s: PresentedSet, where: str) -> None:
        for b, d in s.parts:
            if b not in self.block_map:
                raise ValueError(f"{where}: unknown block {b!r}")
            size = self.block_map[b].size
            if isinstance(d, Cofin) and size is not None:
                raise ValueError(f"{where}: cofinite descriptor on finite block {b!r}")
            if size is not None and any(not 0 <= i < size for i in d.indices):
                raise ValueError(f"{where}: index out of range for block {b!r}")
            if any(i < 0 for i in s.named_indices(b)):
                raise ValueError(f"{where}: negative index")

    @cached_property
    def block_map(self) -> dict[str, Block]:
        return {b.id: b for b in self.blocks}

    def omega_blocks(self) -> list[str]:
        return [b.id for b in self.blocks if b.infinite]

    def is_vertex(self, v: Vertex) -> bool:
        b = self.block_map.get(v.block)
        return b is not None and v.index >= 0 and (b.size is None or v.index < b.size)

    def check_type(self, t: UltraType) -> None:
        if isinstance(t, Point):
            if not self.is_vertex(t.vertex):
                raise ValueError(f"{t.vertex} is not a vertex")
        elif t.block not in self.block_map or not self.block_map[t.block].infinite:
            raise ValueError(f"generic type needs an omega block, got {t.block!r}")

    def all_of(self, block: str) -> PresentedSet:
        size = self.block_map[block].size
        if size is None:
            return cofin(block)
        return PresentedSet.of({block: Fin(frozenset(range(size)))})

    def full(self) -> PresentedSet:
        out = EMPTY
        for b in self.blocks:
            out = out | self.all_of(b.id)
        return out

    def complement(self, s: PresentedSet) -> PresentedSet:
        return self.full() - s

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return self.multiplicity(u, v) > 0

    def multiplicity(self, u: Vertex, v: Vertex) -> int:
        """Number of edges u -> v (one per contributing atom or explicit edge)."""
        n = sum(1 for a in self.atoms if a.contributes(u, v))
        return n + sum(1 for e in self.edges if e == (u, v))

    @cached_property
    def _named(self) -> dict[str, frozenset[int]]:
        named: dict[str, set[int]] = {b.id: set() for b in self.blocks}
        for a in self.atoms:
            for side in (a.src, a.tgt):
                for b in side.blocks():
                    named[b] |= side.named_indices(b)
        for u, v in self.edges:
            named[u.block].add(u.index)
            named[v.block].add(v.index)
        return {b: frozenset(s) for b, s in named.items()}

    def named(self, block: str) -> frozenset[int]:
        """Indices of ``block`` mentioned anywhere in the presentation."""
        return self._named[block]

    def guard(self, extra: Iterable[Vertex] = ()) -> int:
        """One past the largest named index on an omega block.

        Indices at or beyond the guard are interchangeable: no descriptor or
        explicit edge tells them apart.
        """
        idx = [i for b in self.omega_blocks() for i in self.named(b)]
        idx += [v.index for v in extra if self.block_map[v.block].infinite]
        return max(idx, default=-1) + 1

    def vertices_below(self, n: int) -> list[Vertex]:
        """Finite blocks whole, omega blocks cut at index n, in block order."""
        out = []
        for b in self.blocks:
            top = b.size if b.size is not None else n
            out.extend(Vertex(b.id, i) for i in range(top))
        return out

    @property
    def is_finite(self) -> bool:
        return not self.omega_blocks()


def truncation_vertices(bg: BlockGraph, n: int) -> list[Vertex]:
    return bg.vertices_below(n)


def truncate(bg: BlockGraph, n: int) -> Digraph:
    """Finite induced subgraph on indices < n of every omega block.

    Vertex i of the result is ``truncation_vertices(bg, n)[i]``.  Each atom
    contributes its own copy of an edge, so overlapping atoms give parallel
    edges.
    """
    verts = bg.vertices_below(n)
    pos = {v: i for i, v in enumerate(verts)}
    edges = []
    for a in bg.atoms:
        srcs = [pos[v] for v in a.src.sample(n) if v in pos]
        tgts = [(v, pos[v]) for v in a.tgt.sample(n) if v in pos]
        for s in srcs:
            for v, t in tgts:
                if not (a.nodiag and s == t):
                    edges.append((s, t))
    for u, v in bg.edges:
        if u in pos and v in pos:
            edges.append((pos[u], pos[v]))
    return Digraph(len(verts), edges)
