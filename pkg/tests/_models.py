"""Random models, complexes and brute-force oracles shared by the tests."""

import itertools
import random
from fractions import Fraction

from thetastrat.charkit import BigradedCharacter, Cocharacter
from thetastrat.gradedalg import FreeComplex, complex_tensor, complex_twist, direct_sum
from thetastrat.stack import StackModel


def _monomials_of_weight(weights, target, max_deg):
    """Exponent vectors ``alpha`` with ``sum alpha_i weights_i == target`` and ``|alpha| <= max_deg``."""
    n = len(weights)
    out = []
    for total in range(max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            a = [0] * n
            for i in combo:
                a[i] += 1
            w = tuple(sum(a[i] * weights[i][k] for i in range(n)) for k in range(len(target)))
            if w == tuple(target):
                out.append(tuple(a))
    return out


def _poly_text(names, alpha, coeff):
    parts = [f"{names[i]}^{a}" if a > 1 else names[i] for i, a in enumerate(alpha) if a]
    return f"{coeff}*" + "*".join(parts) if parts else str(coeff)


def random_relation(rng, names, action_weights, target, max_deg=3, max_terms=2):
    """A random homogeneous polynomial of action weight ``target`` (``"0"`` if none exists)."""
    monos = [a for a in _monomials_of_weight(action_weights, target, max_deg) if sum(a) > 0]
    if not monos:
        return "0"
    picks = rng.sample(monos, min(len(monos), rng.randint(1, max_terms)))
    return " + ".join(_poly_text(names, a, rng.choice([1, 2, -1, 3])) for a in picks)


def random_model(rng, rank=1, n_coords=(1, 4), n_rel=(0, 2), weight_range=(-3, 3), sign=None, ell=None):
    """A random valid model; ``sign=+1`` forces positive action weights (rank 1)."""
    n = rng.randint(*n_coords)
    coords = []
    for i in range(n):
        while True:
            if sign is not None:
                w = tuple(sign * rng.randint(1, 3) for _ in range(rank))
            else:
                w = tuple(rng.randint(*weight_range) for _ in range(rank))
            if any(w):
                break
        coords.append((f"x{i}", w))
    names = [c[0] for c in coords]
    weights = [c[1] for c in coords]
    rels = []
    for j in range(rng.randint(*n_rel)):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        # aim at the weight of a product of coordinates so a relation exists
        target = tuple(weights[a][k] + (weights[b][k] if rng.random() < 0.7 else 0) for k in range(rank))
        rels.append((f"u{j}", target, random_relation(rng, names, weights, target)))
    if ell is None:
        ell = tuple(rng.randint(-2, 2) for _ in range(rank))
    return StackModel(rank, coords, rels, ell)


def random_twisted_unit(rng, m, spread=3):
    w = tuple(rng.randint(-spread, spread) for _ in range(m.rank))
    return FreeComplex(m.base, [("e", 0, w)])


def koszul_on(base, h, weight, name="k"):
    """Two-term Koszul complex ``f -> h e`` with ``e`` at ``weight``."""
    hw = h.weight
    f_wt = tuple(a + b for a, b in zip(weight, hw))
    return FreeComplex(base, [(f"{name}0", 0, weight), (f"{name}1", 1, f_wt)], {(0, 1): h})


def random_homogeneous(rng, base, max_deg=2, level_filter=None):
    """A random nonzero homogeneous even element of ``base`` (monomial sums of equal weight), or None."""
    if base.n_even == 0:
        return None
    weights = [g.weight for g in base.even]
    alpha = [0] * base.n_even
    for _ in range(rng.randint(1, max_deg)):
        alpha[rng.randrange(base.n_even)] += 1
    target = base.mono_weight(tuple(alpha), ())
    monos = _monomials_of_weight(weights, target, sum(alpha))
    picks = rng.sample(monos, min(len(monos), rng.randint(1, 2)))
    text = " + ".join(_poly_text([g.name for g in base.even], a, rng.choice([1, -1, 2])) for a in picks)
    el = base.element(text)
    return el if el else None


def closed_odd_elements(base):
    """Degree-1 cycles ``u_i f_j - u_j f_i`` and ``u`` with ``du = 0``."""
    out = []
    for j, g in enumerate(base.odd):
        if not base.du(j):
            out.append(base.var(g.name))
    for i, j in itertools.combinations(range(base.n_odd), 2):
        z = base.var(base.odd[i].name) * base.du(j) - base.var(base.odd[j].name) * base.du(i)
        if z and z.is_homogeneous():
            out.append(z)
    return out


def random_complex(rng, base, depth=2):
    """Random semifree complex: Koszul pieces, odd-entry pieces, tensors, sums and twists."""
    r = base.rank
    kind = rng.choice(["koszul", "odd", "sum", "tensor", "twist", "unit"]) if depth > 0 else rng.choice(["koszul", "odd", "unit"])
    wt = tuple(rng.randint(-2, 2) for _ in range(r))
    if kind == "koszul":
        h = random_homogeneous(rng, base)
        if h is not None:
            return koszul_on(base, h, wt)
        kind = "unit"
    if kind == "odd":
        zs = closed_odd_elements(base)
        if zs:
            z = rng.choice(zs)
            zw = z.weight
            return FreeComplex(base, [("a", 0, wt), ("b", 2, tuple(x + y for x, y in zip(wt, zw)))], {(0, 1): z})
        kind = "unit"
    if kind == "unit":
        return FreeComplex(base, [("e", rng.randint(-1, 1), wt)])
    if kind == "sum":
        return direct_sum(random_complex(rng, base, depth - 1), random_complex(rng, base, depth - 1))
    if kind == "tensor":
        return complex_tensor(random_complex(rng, base, depth - 1), random_complex(rng, base, 0))
    return complex_twist(random_complex(rng, base, depth - 1), wt)


def brute_invariant_euler(base, F, max_deg):
    """Euler characteristic of weight-0 chains by direct monomial enumeration (needs finiteness)."""
    weights = [g.weight for g in base.even]
    total = 0
    for r_ in range(base.n_odd + 1):
        for U in itertools.combinations(range(base.n_odd), r_):
            for g in F.gens:
                target = tuple(-(g.weight[k] + sum(base.odd[j].weight[k] for j in U)) for k in range(base.rank))
                n = len(_monomials_of_weight(weights, target, max_deg)) if weights else int(not any(target))
                total += (-1) ** (r_ + g.degree) * n
    return total


def brute_algebra_character(base, lam: Cocharacter, cutoff):
    """Euler-specialized character of a CDGA whose even generators all have negative level, by enumeration."""
    weights = [g.weight for g in base.even]
    levels = [lam.pair(w) for w in weights]
    assert all(l <= -1 for l in levels)
    terms = {}
    max_deg = -cutoff
    for total in range(max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(len(weights)), total):
            w = tuple(sum(weights[i][k] for i in combo) for k in range(base.rank))
            for r_ in range(base.n_odd + 1):
                for U in itertools.combinations(range(base.n_odd), r_):
                    ww = tuple(w[k] + sum(base.odd[j].weight[k] for j in U) for k in range(base.rank))
                    if lam.pair(ww) < cutoff:
                        continue
                    key = (ww, 0)
                    terms[key] = terms.get(key, 0) + (-1) ** r_
    return BigradedCharacter(base.rank, terms)


def seeds(n, offset=0):
    return [random.Random(1000 + offset + i) for i in range(n)]
