"""Plain-text formats for digraphs, colourings, set families, relations and block graphs.

Every format starts with a header line naming the kind; blank lines and
``#`` comments are ignored.  Parsers raise :class:`ParseError` carrying the
1-based line number of the offending line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .digraph import Colouring, Digraph
from .presentation import Block, BlockGraph, Cofin, EdgeAtom, Fin, PresentedSet, Vertex
from .small import Relation
from .ultrafilter import SetFamily


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


Parsed = Union[Digraph, SetFamily, Relation, BlockGraph]


@dataclass(frozen=True)
class _Line:
    number: int
    words: list[str]
    text: str


def _lines(text: str) -> list[_Line]:
    out = []
    for k, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append(_Line(k, body.split(), body))
    return out


def _ints(line: _Line, words: list[str], count: int | None = None) -> list[int]:
    if count is not None and len(words) != count:
        raise ParseError(f"expected {count} integers, got {len(words)}", line.number)
    try:
        vals = [int(w) for w in words]
    except ValueError:
        raise ParseError(f"not an integer in {' '.join(words)!r}", line.number) from None
    if any(v < 0 for v in vals):
        raise ParseError("negative value", line.number)
    return vals


def _header(lines: list[_Line], kind: str, arity: int) -> list[int]:
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0]
    if head.words[0] != kind:
        raise ParseError(f"expected header {kind!r}, got {head.words[0]!r}", head.number)
    return _ints(head, head.words[1:], arity)


def parse_digraph(text: str) -> Digraph:
    lines = _lines(text)
    (n,) = _header(lines, "digraph", 1)
    edges = []
    for line in lines[1:]:
        u, v = _ints(line, line.words, 2)
        if u >= n or v >= n:
            raise ParseError(f"vertex out of range 0..{n - 1}", line.number)
        edges.append((u, v))
    return Digraph(n, tuple(edges))


def parse_colouring(text: str, graph: Digraph) -> Colouring:
    lines = _lines(text)
    (k,) = _header(lines, "colouring", 1)
    col: dict[int, int] = {}
    for line in lines[1:]:
        v, c = _ints(line, line.words, 2)
        if v >= graph.vertex_count or v in col:
            raise ParseError(f"bad or repeated vertex {v}", line.number)
        if c >= k:
            raise ParseError(f"colour {c} out of range", line.number)
        col[v] = c
    if len(col) != graph.vertex_count:
        raise ParseError("colouring does not cover every vertex", lines[-1].number)
    return Colouring(graph, tuple(col[v] for v in range(graph.vertex_count)), k)


def parse_family(text: str) -> SetFamily:
    lines = _lines(text)
    (n,) = _header(lines, "universe", 1)
    members = []
    for line in lines[1:]:
        elems = _ints(line, line.words)
        if any(x >= n for x in elems):
            raise ParseError(f"element outside universe of size {n}", line.number)
        members.append(frozenset(elems))
    return SetFamily(n, tuple(members))


def parse_relation(text: str) -> Relation:
    lines = _lines(text)
    xs, ys = _header(lines, "relation", 2)
    pairs = set()
    for line in lines[1:]:
        x, y = _ints(line, line.words, 2)
        if x >= xs or y >= ys:
            raise ParseError("pair out of range", line.number)
        pairs.add((x, y))
    return Relation(xs, ys, frozenset(pairs))


_SPEC = re.compile(r"^(all|finite|cofinite)\(\s*([A-Za-z_][\w]*)\s*(?:;\s*([\d,\s]*))?\)$")


def _parse_spec(spec: str, blocks: dict[str, Block], line: _Line) -> PresentedSet:
    out = PresentedSet()
    for chunk in spec.split("+"):
        m = _SPEC.match(chunk.strip())
        if not m:
            raise ParseError(f"bad set spec {chunk.strip()!r}", line.number)
        kind, b, idx = m.groups()
        if b not in blocks:
            raise ParseError(f"unknown block {b!r}", line.number)
        if kind == "all" and idx is not None:
            raise ParseError("all() takes no indices", line.number)
        indices = frozenset(_ints(line, [w for w in re.split(r"[,\s]+", idx or "") if w]))
        size = blocks[b].size
        if size is not None and any(i >= size for i in indices):
            raise ParseError(f"index out of range for block {b!r} of size {size}", line.number)
        if kind == "all":
            desc = Cofin() if size is None else Fin(frozenset(range(size)))
        elif kind == "finite":
            desc = Fin(indices)
        else:
            if size is not None:
                raise ParseError(f"cofinite() on finite block {b!r}", line.number)
            desc = Cofin(indices)
        out = out | PresentedSet.of({b: desc})
    return out


def _parse_vertex(word: str, line: _Line) -> Vertex:
    b, sep, i = word.partition(":")
    if not sep or not b:
        raise ParseError(f"bad vertex {word!r}, expected block:index", line.number)
    (idx,) = _ints(line, [i], 1)
    return Vertex(b, idx)


def parse_blockgraph(text: str) -> BlockGraph:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty input", 1)
    blocks: dict[str, Block] = {}
    for line in lines:
        if line.words[0] != "block":
            continue
        w = line.words
        if len(w) == 3 and w[2] == "omega":
            size = None
        elif len(w) == 4 and w[2] == "finite":
            (size,) = _ints(line, w[3:], 1)
            if size < 1:
                raise ParseError("finite blocks need at least one vertex", line.number)
        else:
            raise ParseError("expected 'block <id> finite <n>' or 'block <id> omega'", line.number)
        if w[1] in blocks:
            raise ParseError(f"duplicate block {w[1]!r}", line.number)
        blocks[w[1]] = Block(w[1], size)
    atoms, edges = [], []
    for line in lines:
        kw = line.words[0]
        if kw == "block":
            continue
        if kw == "atom":
            body = line.text[len("atom"):].strip()
            nodiag = body.endswith("nodiag")
            if nodiag:
                body = body[: -len("nodiag")].strip()
            src, arrow, tgt = body.partition("->")
            if not arrow:
                raise ParseError("atom needs '->'", line.number)
            atoms.append(EdgeAtom(_parse_spec(src.strip(), blocks, line), _parse_spec(tgt.strip(), blocks, line), nodiag))
        elif kw == "edge":
            if len(line.words) != 3:
                raise ParseError("expected 'edge <block>:<i> <block>:<j>'", line.number)
            u, v = (_parse_vertex(w, line) for w in line.words[1:])
            for x in (u, v):
                blk = blocks.get(x.block)
                if blk is None or (blk.size is not None and x.index >= blk.size):
                    raise ParseError(f"no vertex {x}", line.number)
            edges.append((u, v))
        else:
            raise ParseError(f"unknown directive {kw!r}", line.number)
    try:
        return BlockGraph(tuple(blocks.values()), tuple(atoms), tuple(edges))
    except ValueError as exc:
        raise ParseError(str(exc), lines[0].number) from None


_PARSERS = {
    "digraph": parse_digraph,
    "universe": parse_family,
    "relation": parse_relation,
    "block": parse_blockgraph,
}


def parse_any(text: str) -> Parsed:
    """Dispatch on the first directive."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty input", 1)
    parser = _PARSERS.get(lines[0].words[0])
    if parser is None:
        raise ParseError(f"unknown header {lines[0].words[0]!r}", lines[0].number)
    return parser(text)


def load(path: str | Path) -> Parsed:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_any(text)


# -- writers ----------------------------------------------------------------

def format_digraph(g: Digraph) -> str:
    return "".join([f"digraph {g.vertex_count}\n"] + [f"{u} {v}\n" for u, v in g.edges])


def format_colouring(c: Colouring) -> str:
    return "".join([f"colouring {c.colour_count}\n"] + [f"{v} {k}\n" for v, k in enumerate(c.colour_of)])


def format_family(f: SetFamily) -> str:
    return "".join([f"universe {f.size}\n"] + [" ".join(map(str, sorted(m))) + "\n" for m in f.members])


def format_relation(r: Relation) -> str:
    return "".join([f"relation {r.x_size} {r.y_size}\n"] + [f"{x} {y}\n" for x, y in r.sorted_pairs()])


def format_blockgraph(bg: BlockGraph) -> str:
    out = []
    for b in bg.blocks:
        out.append(f"block {b.id} omega" if b.size is None else f"block {b.id} finite {b.size}")
    for a in bg.atoms:
        if a.src.is_empty() or a.tgt.is_empty():
            continue
        out.append(f"atom {a.src} -> {a.tgt}" + (" nodiag" if a.nodiag else ""))
    for u, v in bg.edges:
        out.append(f"edge {u} {v}")
    return "\n".join(out) + "\n"
