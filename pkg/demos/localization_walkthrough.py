"""Checking the localization identity term by term on small models.

Run: python3 demos/localization_walkthrough.py
"""

from thetastrat.gradedalg import FreeComplex, unit_complex
from thetastrat.kloc import e_class, verify_localization
from thetastrat.stack import StackModel
from thetastrat.strat import git_stratify
from thetastrat.charkit import euler_specialize, to_text

# %% The affine line with the origin unstable.
# G_m acts on A^1 with weight 1; linearization +1 makes the origin the only unstable point.
line = StackModel(1, [("x", (1,))], [], (1,))
s = git_stratify(line)[0]
print("stratum cocharacter:", s.lam.components, " mu^2 =", s.mu_squared)

# The E-class lives in levels <= -1, so the origin contributes nothing to the invariants.
E = e_class(line, s, cutoff=-5)
print("E-class (Euler specialized):", to_text(euler_specialize(E.series)))

report = verify_localization(line, unit_complex(line.base))
print("identity:", report.identity, " verified:", report.verified)

# %% Same line, opposite linearization: everything is unstable.
line_neg = line.with_linearization((-1,))
print("identity:", verify_localization(line_neg, unit_complex(line_neg.base)).identity)

# %% A derived example: x*y = 0 presented with one odd generator.
xy = StackModel(1, [("x", (1,)), ("y", (-1,))], [("u", (0,), "x*y")], (1,))
r = verify_localization(xy, unit_complex(xy.base))
print("xy model:", r.identity)
for c in r.corrections:
    print("  stratum", c["lambda"], "method", c["term"].method)

# %% Twisting the sheaf moves weight between the two sides.
for v in range(-2, 3):
    F = FreeComplex(line.base, [("e", 0, (v,))])
    print(f"O<{v:+d}>:", verify_localization(line, F).identity)

# %% Two strata in rank 2.
plane = StackModel(2, [("x", (1, 0)), ("y", (0, 1))], [], (-1, 1))
for t in git_stratify(plane):
    print("stratum", t.lam.components, "mu^2", t.mu_squared, "killed", t.killed)
print("identity:", verify_localization(plane, unit_complex(plane.base)).identity)
