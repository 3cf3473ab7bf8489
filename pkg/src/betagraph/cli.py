"""``betagraph`` command line.

Reports are ``[section]`` headers followed by ``key = value`` lines, with
lowercase booleans and no timestamps, so output is byte-stable for a fixed
input, seed and flag set.  Exit codes: 0 success, 1 a theorem check
disagreed, 2 bad input.
"""
from __future__ import annotations

import argparse
import math
import random
import sys
from typing import Callable, Sequence

from . import beta, corpus, small
from .budget import Budget, BudgetExceeded
from .digraph import (
    Digraph,
    chromatic_number,
    gamma_diameter,
    is_loop_free,
    is_strongly_connected,
    is_weakly_connected,
    max_out_degree,
    no_isolated,
    proper,
    pseudocomplete,
    weak_components,
)
from .presentation import BlockGraph, truncate
from .small import Relation
from .textio import ParseError, load
from .ultrafilter import SetFamily, extend_to_ultrafilter, has_fip

DEFAULT_SEED = 42
DEFAULT_COUNT = 200


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        if value.is_integer():
            return str(int(value))
    if isinstance(value, (set, frozenset)):
        return "{" + ",".join(map(str, sorted(value))) + "}"
    return str(value)


class Report:
    """Ordered sections of unique ``key = value`` lines, plus optional free text."""

    def __init__(self):
        self._sections: list[tuple[str, list[str]]] = []
        self._keys: set[str] = set()

    def section(self, name: str) -> None:
        self._sections.append((name, []))

    def add(self, key: str, value) -> None:
        full = f"{self._sections[-1][0]}.{key}"
        if full in self._keys:
            raise ValueError(f"duplicate report key {full}")
        self._keys.add(full)
        self._sections[-1][1].append(f"{key} = {fmt(value)}")

    def text(self, line: str) -> None:
        self._sections[-1][1].append(f"# {line}")

    def render(self) -> str:
        out = []
        for name, lines in self._sections:
            out.append(f"[{name}]")
            out.extend(lines)
        return "\n".join(out) + "\n"


def _rect(r) -> str:
    a, b = r
    return f"{fmt(a)} x {fmt(b)}"


def _chromatic_value(res) -> str:
    if res.status == "no-colouring":
        return "inf"
    if res.exact:
        return str(res.upper)
    return f"{res.lower}..{res.upper}"


# -- reports ----------------------------------------------------------------

def digraph_report(rep: Report, g: Digraph) -> None:
    rep.section("digraph")
    rep.add("vertices", g.vertex_count)
    rep.add("edges", g.edge_count)
    rep.add("loop_free", is_loop_free(g))
    rep.add("proper", proper(g))
    rep.add("pseudocomplete", pseudocomplete(g))
    rep.add("no_isolated", no_isolated(g))
    rep.add("weak_components", len(weak_components(g)))
    rep.add("weakly_connected", is_weakly_connected(g))
    rep.add("strongly_connected", is_strongly_connected(g))
    rep.add("gamma_diameter", gamma_diameter(g))
    rep.add("max_out_degree", max_out_degree(g))
    res = chromatic_number(g, budget=Budget.from_env(), exact_limit=24)
    rep.add("chromatic", _chromatic_value(res))
    rep.add("chromatic.status", res.status)


def family_report(rep: Report, fam: SetFamily) -> None:
    rep.section("fip")
    rep.add("universe", fam.size)
    rep.add("members", len(fam.members))
    res = has_fip(fam)
    rep.add("fip", res.holds)
    if res.holds:
        rep.add("intersection", res.intersection)
        rep.add("ultrafilter", f"principal({extend_to_ultrafilter(fam).point})")
    else:
        rep.add("witness", " ".join(map(str, res.witness)))


def cover_report(rep: Report, rho: Relation, q: Relation, method: str, budget: Budget) -> None:
    res = small.min_cover(rho, q, budget=budget, method=method)
    rep.add("status", res.status)
    rep.add("lower", res.lower)
    rep.add("upper", res.upper)
    rep.add("min_cover", res.upper if res.exact else f"{res.lower}..{res.upper}")
    for i, r in enumerate(res.cover.rects):
        rep.add(f"rect.{i}", _rect(r))


def relation_report(rep: Report, r: Relation) -> None:
    rep.section("relation")
    rep.add("x_size", r.x_size)
    rep.add("y_size", r.y_size)
    rep.add("pairs", len(r))
    rep.add("function", len({x for x, _ in r.pairs}) == len(r) == r.x_size)
    rep.add("small", True)
    rep.text("min_cover: rectangles whose union is exactly the relation")
    cover_report(rep, small.full(r.x_size, r.y_size), r, "auto", Budget.from_env())


def beta_report(rep: Report, bg: BlockGraph, loop_decider: Callable | None = None) -> bool:
    """Fill ``rep``; False when two routes that must agree did not."""
    ok = True
    rep.section("presentation")
    rep.add("blocks", len(bg.blocks))
    rep.add("omega_blocks", " ".join(bg.omega_blocks()) or "none")
    rep.add("atoms", len(bg.atoms))
    rep.add("explicit_edges", len(bg.edges))
    rep.add("guard", bg.guard())

    rep.section("loops")
    check = beta.loop_theorem_check(bg, loop_decider)
    col = check.colouring
    colourable = not isinstance(col, beta.Obstruction)
    rep.add("beta_loop", check.loop)
    rep.add("finitely_colourable", colourable)
    rep.add("colours" if colourable else "obstruction", col.colour_count if colourable else col)
    rep.add("loop_theorem", "agree" if check.agree else "disagree")
    ok &= check.agree
    if colourable:
        rep.text(f"G has a {col.colour_count}-colouring, so beta G has no loop")
    else:
        rep.text(f"G is not finitely colourable ({col}), beta G has a loop at {check.loop}")

    rep.section("connectivity")
    conn = beta.beta_strongly_connected(bg)
    rep.add("strongly_connected", conn.connected)
    rep.add("forward_depth", conn.forward)
    rep.add("backward_depth", conn.backward)
    if not conn.connected and conn.witness is not None:
        rep.add("unreached", f"{conn.direction}: complement of {conn.witness}")
    try:
        rep.add("pseudocomplete", beta.beta_pseudocomplete(bg))
    except beta.TheoremDisagreement as exc:
        rep.add("pseudocomplete", f"disagree: {exc}")
        ok = False

    rep.section("properness")
    pr = beta.beta_proper_check(bg)
    rep.add("g_proper", pr.g_proper)
    rep.add("e_small", pr.e_small)
    rep.add("beta_proper", pr.beta_proper_predicted)
    if pr.duplicate:
        rep.add("duplicate_edge", f"{pr.duplicate[0]} {pr.duplicate[1]}")
    if pr.small_witness is not None:
        rep.add("small_witness_atom", pr.small_witness)
    multi = beta.type_level_multi_edge(bg)
    rep.add("type_multi_edge", "none" if multi is None else f"{multi[0]} {multi[1]}")
    rep.add("weakly_sparse", beta.weakly_sparse_check(bg))
    ok &= pr.beta_proper_predicted == (multi is None)

    rep.section("invariants")
    inv = beta.invariant_report(bg)
    for p in inv.pairs():
        rep.add(f"{p.name}.graph", p.graph)
        rep.add(f"{p.name}.beta", p.beta)
        rep.add(f"{p.name}.status", p.status)
    ok &= inv.consistent
    return ok


# -- subcommands ------------------------------------------------------------

def cmd_analyze(args, out, **hooks) -> int:
    obj = load(args.file)
    rep = Report()
    if isinstance(obj, Digraph):
        digraph_report(rep, obj)
    elif isinstance(obj, SetFamily):
        family_report(rep, obj)
    elif isinstance(obj, Relation):
        relation_report(rep, obj)
    else:
        ok = beta_report(rep, obj, hooks.get("loop_decider"))
        out.write(rep.render())
        return 0 if ok else 1
    out.write(rep.render())
    return 0


def cmd_beta_report(args, out, **hooks) -> int:
    obj = load(args.file)
    if not isinstance(obj, BlockGraph):
        raise ParseError("beta-report needs a block graph file")
    rep = Report()
    ok = beta_report(rep, obj, hooks.get("loop_decider"))
    out.write(rep.render())
    return 0 if ok else 1


def cmd_fip(args, out, **hooks) -> int:
    obj = load(args.file)
    if not isinstance(obj, SetFamily):
        raise ParseError("fip needs a 'universe' file")
    rep = Report()
    family_report(rep, obj)
    out.write(rep.render())
    return 0


def _relation(path: str) -> Relation:
    obj = load(path)
    if not isinstance(obj, Relation):
        raise ParseError(f"{path}: expected a 'relation' file")
    return obj


def cmd_cover(args, out, **hooks) -> int:
    first = _relation(args.file)
    if args.sub and args.sub != "self":
        rho, q = first, _relation(args.sub)
        if (q.x_size, q.y_size) != (rho.x_size, rho.y_size) or not q <= rho:
            raise ParseError(f"{args.sub}: not a subrelation of {args.file}")
        mode = "relative"
    else:
        rho, q = small.full(first.x_size, first.y_size), first
        mode = "absolute"
    budget = Budget(ms=args.budget) if args.budget is not None else Budget.from_env()
    rep = Report()
    rep.section("cover")
    rep.add("mode", mode)
    rep.add("rho_pairs", len(rho))
    rep.add("q_pairs", len(q))
    method = "exact" if args.exact else "greedy" if args.greedy else "auto"
    rep.add("method", method)
    cover_report(rep, rho, q, method, budget)
    out.write(rep.render())
    return 0


def cmd_compose(args, out, **hooks) -> int:
    r1, r2 = _relation(args.r1), _relation(args.r2)
    if r1.y_size != r2.x_size:
        raise ParseError(f"cannot compose {r1.x_size}x{r1.y_size} with {r2.x_size}x{r2.y_size}")
    comp = small.compose(r1, r2)
    rep = Report()
    rep.section("compose")
    rep.add("x_size", comp.x_size)
    rep.add("y_size", comp.y_size)
    rep.add("pairs", len(comp))
    rep.add("relation", " ".join(f"{x},{y}" for x, y in comp.sorted_pairs()) or "none")
    out.write(rep.render())
    return 0


def cmd_family(args, out, **hooks) -> int:
    rep = Report()
    rep.section(f"family {args.name}")
    rep.text("least rectangle cover per n, a growth measure of this tool")
    n_max = args.max_n
    if args.name == "staircase":
        for row in small.staircase_growth(n_max):
            rep.add(f"cover.{row.n}", row.upper if row.exact else f"{row.lower}..{row.upper}")
            rep.add(f"fooling.{row.n}", row.lower)
    elif args.name in ("full", "identity"):
        rep.add("seed", args.seed)
        rng = random.Random(args.seed)
        for n in range(1, n_max + 1):
            rho = small.FAMILIES[args.name](n)
            worst = small.worst_case_cover(rho, rng=rng, samples=50)
            rows = max(
                len(small.row_cover(q))
                for q in (small.random_subrelation(rho, rng) for _ in range(50))
            )
            rep.add(f"worst_cover.{n}", worst)
            rep.add(f"row_cover.{n}", rows)
    elif args.name == "compose-counterexample":
        for n in range(1, n_max + 1):
            row = small.composition_counterexample(n)
            rep.add(f"left_factor.{n}", row.left_worst)
            rep.add(f"right_factor.{n}", row.right_worst)
            rep.add(f"composite_full.{n}", row.composite_full)
            rep.add(f"composite_staircase.{n}", row.composite_staircase if row.exact else f">={row.composite_staircase}")
    out.write(rep.render())
    return 0


def _run_case(bg: BlockGraph, rng: random.Random, loop_decider, sizes: dict) -> list[tuple[str, bool | None, str]]:
    """(check, agreed or None when skipped, witness text)."""
    results = []

    def attempt(name: str, fn) -> None:
        try:
            ok, witness = fn()
        except BudgetExceeded:
            results.append((name, None, "budget"))
        except beta.TheoremDisagreement as exc:
            results.append((name, False, str(exc)))
        else:
            results.append((name, ok, witness))

    def loop():
        c = beta.loop_theorem_check(bg, loop_decider)
        return c.agree, f"beta_loop={fmt(c.loop)} colouring={c.colouring}"

    def compthm():
        g, h, k = corpus.compose_triple(rng, **sizes)
        c = beta.compthm_check(g, h, k)
        return c.ok and c.hypothesis, f"hypothesis={fmt(c.hypothesis)} conclusion={fmt(c.conclusion)}"

    def proper_():
        p = beta.beta_proper_check(bg)
        m = beta.type_level_multi_edge(bg)
        return p.beta_proper_predicted == (m is None), f"predicted={fmt(p.beta_proper_predicted)} multi={m}"

    def connectivity():
        c = beta.beta_strongly_connected(bg)
        g0 = bg.guard()
        trunc = [is_strongly_connected(truncate(bg, n)) for n in range(g0 + 2, g0 + 5)]
        return c.connected == all(trunc) and len(set(trunc)) == 1, f"beta={fmt(c.connected)} truncations={trunc}"

    def invariants():
        inv = beta.invariant_report(bg)
        return inv.consistent, " ".join(f"{p.name}={fmt(p.graph)}/{fmt(p.beta)}" for p in inv.pairs())

    for name, fn in (("loop", loop), ("compthm", compthm), ("proper", proper_),
                     ("connectivity", connectivity), ("invariants", invariants)):
        attempt(name, fn)
    return results


def cmd_check_theorems(args, out, **hooks) -> int:
    sizes = dict(finite_only=args.finite_only, max_blocks=args.max_blocks, max_atoms=args.max_atoms)
    cases = corpus.corpus(args.seed, args.count, with_named=not args.finite_only, **sizes)
    rng = random.Random(args.seed)
    rep = Report()
    rep.section("check-theorems")
    rep.add("seed", args.seed)
    rep.add("count", args.count)
    rep.add("named", len(cases) - args.count)
    tallies: dict[str, list[int]] = {}
    failures = []
    skipped = []
    for name, bg in cases:
        for check, ok, witness in _run_case(bg, rng, hooks.get("loop_decider"), sizes):
            t = tallies.setdefault(check, [0, 0, 0])
            t[0 if ok else 2 if ok is None else 1] += 1
            if ok is False:
                failures.append((name, check, witness))
            elif ok is None:
                skipped.append((name, check))
    for check, (agree, disagree, skip) in tallies.items():
        rep.add(f"{check}.agree", agree)
        rep.add(f"{check}.disagree", disagree)
        rep.add(f"{check}.skipped", skip)
    rep.add("disagreements", len(failures))
    if skipped:
        rep.section("skipped")
        for name, check in skipped:
            rep.add(f"{name}.{check}", "budget")
    if failures:
        rep.section("disagreements")
        for name, check, witness in failures:
            rep.add(f"{name}.{check}", witness)
    out.write(rep.render())
    return 1 if failures else 0


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="betagraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("analyze", cmd_analyze, "report on a digraph, universe, relation or block graph file"),
        ("beta-report", cmd_beta_report, "structure of beta G for a block graph file"),
        ("fip", cmd_fip, "finite intersection property of a set family file"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file")
        s.set_defaults(func=fn)

    s = sub.add_parser("cover", help="least rectangle cover of a relation")
    s.add_argument("file", help="rho; without --sub, the relation to write as a union of rectangles")
    s.add_argument("--sub", help="Q, a subrelation of rho to cut out of it; 'self' is the same as omitting it")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="exact search regardless of size")
    g.add_argument("--greedy", action="store_true", help="bounds only")
    s.add_argument("--budget", type=float, metavar="MS", help="time budget in ms (default $BETAGRAPH_BUDGET_MS)")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("compose", help="relational composite of two relation files")
    s.add_argument("r1")
    s.add_argument("r2")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("family", help="cover growth over a named relation family")
    s.add_argument("name", choices=["staircase", "full", "identity", "compose-counterexample"])
    s.add_argument("--max-n", type=int, default=6)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("check-theorems", help="cross-check the decision procedures on a seeded corpus")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--count", type=int, default=DEFAULT_COUNT)
    s.add_argument("--max-blocks", type=int, default=3)
    s.add_argument("--max-atoms", type=int, default=4)
    s.add_argument("--finite-only", action="store_true", help="only finite blocks, where beta G = G")
    s.set_defaults(func=cmd_check_theorems)
    return p


def main(argv: Sequence[str] | None = None, out=None, loop_decider: Callable | None = None) -> int:
    """Run the CLI; ``loop_decider`` replaces the loop decision (for negative-control tests)."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out, loop_decider=loop_decider)
    except ParseError as exc:
        print(f"betagraph: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
