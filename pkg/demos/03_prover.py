"""
Asking the algebraic prover directly
====================================

A construction becomes polynomial equations over the point coordinates.  A
statement is decided for generic positions of the free points: it may fail
on degenerate configurations and still count as true.
"""

from importlib.resources import files

from geodiscover import collinear, decide, identical, parse, translate
from geodiscover.poly import Deadline

c = parse((files("geodiscover") / "fixtures" / "euler.gd").read_text())
system = translate(c)
print(len(system.hypotheses), "hypothesis polynomials")

for statement in (identical("G", "H"), collinear("G", "J", "P"), collinear("A", "G", "P")):
    v = decide(statement, system, Deadline(5000))
    print(f"{statement.kind}{statement.points}: {v.kind.value} (stage {v.stage}, {v.elapsed * 1000:.0f} ms)")

# stage 1 alone proves only statements true without any nondegeneracy assumption
v = decide(identical("G", "H"), system, Deadline(5000), stages=(1,))
print("strict only:", v.kind.value)

# a tiny budget returns Timeout promptly instead of blocking
v = decide(collinear("G", "J", "P"), system, Deadline(1))
print("1 ms budget:", v.kind.value, f"{v.elapsed * 1000:.1f} ms")
