"""Loops in the ultrafilter extension versus finite colourings.

K_omega has no loops yet its extension does: the generic type on the block
is adjacent to itself, and the truncations need ever more colours.  The star
K_(1,omega) stays loop-free and two colours suffice at every size.
"""
from pathlib import Path

from betagraph.beta import beta_loop_exists, finitely_colourable, invariant_report
from betagraph.digraph import chromatic_number
from betagraph.presentation import truncate
from betagraph.textio import load

DATA = Path(__file__).parent / "data"

for name in ("k_omega.txt", "k_one_omega.txt"):
    bg = load(DATA / name)
    print(f"== {name}")
    print("  loop type in beta G:", beta_loop_exists(bg))
    print("  finite colouring:   ", finitely_colourable(bg))
    chis = [chromatic_number(truncate(bg, n)).value for n in range(1, 9)]
    print("  chi of truncations 1..8:", chis)
    for pair in invariant_report(bg).pairs():
        print(f"  {pair.name}: G={pair.graph} beta G={pair.beta} ({pair.status})")
