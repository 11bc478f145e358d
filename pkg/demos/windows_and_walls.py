"""Baric truncation, local cohomology windows, duality and wall crossing.

Run: python3 demos/windows_and_walls.py
"""

from thetastrat.baric import (
    gamma_window,
    local_cohomology_series,
    pushforward,
    semiorthogonality_certificate,
    serre_window_data,
    wall_crossing_report,
)
from thetastrat.charkit import to_text
from thetastrat.gradedalg import unit_complex
from thetastrat.stack import StackModel
from thetastrat.strat import git_stratify

xy = StackModel(1, [("x", (1,)), ("y", (-1,))], [("u", (0,), "x*y")], (1,))
s = git_stratify(xy)[0]
unit = unit_complex(xy.base)

# Koszul system colimit against the closed form, for a few window positions.
for w in (-3, -1, 0):
    g = gamma_window(unit, xy, s, w)
    closed = local_cohomology_series(xy, s, unit, w)
    print(f"w={w}: G_geq = {to_text(g.G_geq)}  (stable at n={g.stabilized_at}, closed form agrees: {g.G_geq == closed})")

# Hom from a higher-weight pushforward into a lower one vanishes.
at = lambda level: pushforward(xy, s, (-level,))  # noqa: E731
print("Hom(w=0, w=-1):", semiorthogonality_certificate(at(0), at(-1))["status"])
print("Hom(w=0, w=0): ", semiorthogonality_certificate(at(0), at(0))["status"])

sw = serre_window_data(xy, s)
print("a =", sw.a, " flip(0) =", sw.flip(0), " flip(flip(0)) =", sw.flip(sw.flip(0)))

for weights in ((1, -1), (1, -2), (2, -1)):
    m = StackModel(1, [("x", (weights[0],)), ("y", (weights[1],))], [], (0,))
    r = wall_crossing_report(m, (1,))
    print(weights, "c =", r["c"], r["case"], " window sizes", r["window_plus"], r["window_minus"])
