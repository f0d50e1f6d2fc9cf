"""
Discovering facts about a triangle midline
==========================================

Build a small construction from text, ask what is true about one point,
and draw the figure with related objects in the same colour.
"""

from pathlib import Path

from geodiscover import discover, instantiate, parse, render_svg, render_text

program = """
point A = free(0, 0)
point B = free(4, 0)
point C = free(1.5, 3)
point D = midpoint(B, C)
point E = midpoint(A, C)
discover D
"""
c = parse(program)

# every candidate statement is tried numerically, then proved or rejected
report = discover(c, "D")
print(render_text(report))

# the collinearity of B, C, D holds by definition of D, so it is hidden unless asked for
print(render_text(report, show_trivial=True))

# what the prover was asked, and how it answered
for rec in report.checks:
    print(f"{rec.phase:10} {rec.statement.kind}{rec.statement.points} -> {rec.outcome}")

out = Path("midline.svg")
out.write_text(render_svg(c, instantiate(c), report))
print("figure written to", out)
