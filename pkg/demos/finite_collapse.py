"""On finite graphs the extension changes nothing.

Every ultrafilter on a finite set is principal, so beta G is G again with the
unit maps as an isomorphism.  A family either meets in a common point, which
names its ultrafilter, or some of its members already have empty intersection.
"""
from pathlib import Path

from betagraph.textio import load
from betagraph.ultrafilter import beta_finite_graph, extend_to_ultrafilter

DATA = Path(__file__).parent / "data"

g = load(DATA / "cycle5.txt")
bg, rep = beta_finite_graph(g)
print("5-cycle edges:     ", g.edges)
print("beta 5-cycle edges:", bg.edges)
print("squares commute:", rep.source_square and rep.target_square, " isomorphic:", rep.isomorphic)

for name in ("family.txt", "family_nofip.txt"):
    print(f"{name}: {extend_to_ultrafilter(load(DATA / name))}")
