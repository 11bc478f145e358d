"""Stratum presentations for the family x*y-type relations of varying weight.

Run: python3 demos/stratification_tour.py
"""

from thetastrat.charkit import Cocharacter, to_text
from thetastrat.stack import StackModel
from thetastrat.strat import git_stratify, relative_cotangent, stratum_from_cocharacter, validate_stratification


def model(a):
    du = "x*y" if a == 0 else (f"x^{a}" if a > 0 else f"y^{-a}")
    return StackModel(1, [("x", (1,)), ("y", (-1,))], [("u", (a,), du)], (1,))


for a in (2, 0, -2):
    s = stratum_from_cocharacter(model(a), Cocharacter((-1,)))
    print(f"relation weight {a:+d}")
    print("  A:", s.A)
    print("  B:", s.B)
    print("  flags:", s.flags)
    print("  relative cotangent:", to_text(relative_cotangent(s, model(a))))

# Supports, optimal destabilizers and the ordering check on a rank-2 example.
m = StackModel(2, [("x", (1, 0)), ("y", (0, 1)), ("z", (-1, -1))], [], (1, 2))
strata = git_stratify(m)
for s in strata:
    print(s.lam.components, "mu^2 =", s.mu_squared, "supports:", s.supports)
print("violations:", validate_stratification(m, strata))
