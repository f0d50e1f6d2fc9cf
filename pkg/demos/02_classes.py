"""
How proved facts fold into classes
==================================

The pool stores facts as equivalence classes: identical points, lines with
three or more points, circles with four or more, directions and equal
lengths.  Merging two points can merge lines and circles too.
"""

from geodiscover import Pool, build, point
from geodiscover.construction import Free

coords = [("A", 0, 0), ("B", 1, 0), ("C", 2, 0), ("X", 3, 0), ("D", 3, 0), ("Y", 0, 1), ("Z", 2, 1)]
pool = Pool(build([point(n, Free(x, y)) for n, x, y in coords]))

pool.add_collinear("A", "B", "C")
pool.add_collinear("B", "C", "X")
print(pool.summary()["lines"])          # two points in common, so one line

# D coincides with X; classes are listed by their earliest point, so lines still show X
pool.merge_points("X", "D")
print(pool.summary()["points"])
print(pool.summary()["lines"])

# parallel lines share a direction class
pool.add_parallel(pool.line_through("Y", "Z"), pool.line_through("A", "B"))
print(pool.summary()["directions"])

# facts already implied by the classes are never proposed again
print(sum(1 for _ in pool.candidate_statements(["collinear"])), "collinear candidates left")
print("invariant violations:", pool.check_invariants())
