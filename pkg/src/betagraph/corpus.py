"""Seeded random block graphs and the standard named examples."""
from __future__ import annotations

import random
from itertools import product

from .beta import compose_presentations
from .digraph import Digraph
from .presentation import Block, BlockGraph, Cofin, EdgeAtom, Fin, PresentedSet, Vertex

# largest index named by a random descriptor; keeps guard() <= 3
MAX_NAMED = 3


def k_omega() -> BlockGraph:
    """The complete graph on omega without loops."""
    b = PresentedSet.of({"b": Cofin()})
    return BlockGraph((Block("b", None),), (EdgeAtom(b, b, nodiag=True),))


def k_one_omega(bidirectional: bool = False) -> BlockGraph:
    """A single centre joined to every vertex of an omega block."""
    c = PresentedSet.of({"c": Fin(frozenset({0}))})
    leaves = PresentedSet.of({"l": Cofin()})
    atoms = [EdgeAtom(c, leaves)]
    if bidirectional:
        atoms.append(EdgeAtom(leaves, c))
    return BlockGraph((Block("c", 1), Block("l", None)), tuple(atoms))


def named_examples() -> dict[str, BlockGraph]:
    return {
        "k_omega": k_omega(),
        "k_one_omega": k_one_omega(),
        "k_one_omega_sym": k_one_omega(bidirectional=True),
    }


def _descriptor(rng: random.Random, block: Block) -> Fin | Cofin | None:
    roll = rng.random()
    if roll < 0.3:
        return None
    idx = frozenset(rng.sample(range(block.size or MAX_NAMED), rng.randint(0, 2) if block.size is None else rng.randint(1, block.size)))
    if block.size is not None:
        return Fin(frozenset(range(block.size))) if roll < 0.5 else Fin(idx)
    if roll < 0.5:
        return Cofin()
    return Fin(idx) if roll < 0.75 else Cofin(idx)


def random_presented_set(rng: random.Random, blocks: tuple[Block, ...]) -> PresentedSet:
    parts = {}
    for b in blocks:
        d = _descriptor(rng, b)
        if d is not None:
            parts[b.id] = d
    return PresentedSet.of(parts)


def _vertex(rng: random.Random, blocks: tuple[Block, ...]) -> Vertex:
    b = rng.choice(blocks)
    return Vertex(b.id, rng.randrange(b.size or MAX_NAMED))


def random_blockgraph(
    rng: random.Random,
    max_blocks: int = 3,
    max_atoms: int = 4,
    max_edges: int = 2,
    finite_only: bool = False,
    nodiag: bool = True,
) -> BlockGraph:
    count = rng.randint(1, max_blocks)
    blocks = tuple(
        Block(f"b{i}", rng.randint(1, 3) if finite_only or rng.random() < 0.4 else None)
        for i in range(count)
    )
    atoms = []
    for _ in range(rng.randint(0, max_atoms)):
        src, tgt = random_presented_set(rng, blocks), random_presented_set(rng, blocks)
        if src.is_empty() or tgt.is_empty():
            continue
        atoms.append(EdgeAtom(src, tgt, nodiag and rng.random() < 0.4))
    edges = tuple((_vertex(rng, blocks), _vertex(rng, blocks)) for _ in range(rng.randint(0, max_edges)))
    return BlockGraph(blocks, tuple(atoms), edges)


def corpus(seed: int = 0, count: int = 500, with_named: bool = True, **kw) -> list[tuple[str, BlockGraph]]:
    """Named examples first, then ``count`` seeded random presentations."""
    rng = random.Random(seed)
    out = list(named_examples().items()) if with_named else []
    out += [(f"random-{seed}-{i}", random_blockgraph(rng, **kw)) for i in range(count)]
    return out


def compose_triple(rng: random.Random, **kw) -> tuple[BlockGraph, BlockGraph, BlockGraph]:
    """(G, H, K) on shared blocks with rho_K = rho_G rho_H by construction."""
    g = random_blockgraph(rng, **kw)
    atoms = []
    for _ in range(rng.randint(0, kw.get("max_atoms", 4))):
        src, tgt = random_presented_set(rng, g.blocks), random_presented_set(rng, g.blocks)
        if not (src.is_empty() or tgt.is_empty()):
            atoms.append(EdgeAtom(src, tgt, rng.random() < 0.4))
    h = BlockGraph(g.blocks, tuple(atoms), ())
    return g, h, compose_presentations(g, h)


def random_digraph(rng: random.Random, max_vertices: int = 6, max_edges: int = 8) -> Digraph:
    n = rng.randint(1, max_vertices)
    return Digraph(n, tuple((rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, max_edges))))


def all_small_digraphs(max_vertices: int = 3, max_edges: int = 3):
    """Every digraph with at most the given numbers of vertices and edges, as edge sequences."""
    yield Digraph(0, ())
    for n in range(1, max_vertices + 1):
        pairs = list(product(range(n), repeat=2))
        for m in range(max_edges + 1):
            for edges in product(pairs, repeat=m):
                yield Digraph(n, edges)
