"""The order relation on [n] is not a bounded union of rectangles.

Covering the staircase with rectangles that stay inside it takes exactly n
pieces, and the diagonal is a fooling set certifying the lower bound.  The
same staircase arises as a composite of two relations whose own covers
never need more than one rectangle.
"""
from betagraph.small import composition_counterexample, staircase_growth

print(" n  lower  upper  exact")
for row in staircase_growth(10):
    print(f"{row.n:2d}  {row.lower:5d}  {row.upper:5d}  {row.exact}")

print()
print(" n  left  right  composite")
for n in range(1, 7):
    row = composition_counterexample(n)
    print(f"{n:2d}  {row.left_worst:4d}  {row.right_worst:5d}  {row.composite_staircase:9d}")
