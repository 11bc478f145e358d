"""Baric truncation, Koszul systems and window data along a single stratum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .charkit import BigradedCharacter, Cocharacter, char_det_and_rank, euler_specialize, neg_weight, scale_weight, to_text, zero_weight
from .errors import ModelError, NonStabilization, OracleInapplicable
from .gradedalg import (
    FreeComplex,
    complex_dual,
    complex_hom,
    complex_tensor,
    generator_character,
    subcomplex,
    weight0_truncated_homology,
)
from .stack import StackModel, cotangent_character
from .strat import ThetaStratum, stratum_from_cocharacter


def gen_level(F: FreeComplex, lam: Cocharacter, k: int) -> int:
    return lam.pair(F.gens[k].weight)


def baric_truncate(F: FreeComplex, lam: Cocharacter, w: int) -> tuple[FreeComplex, FreeComplex]:
    """Split ``F`` into the subcomplex on generators of ``lam``-level ``>= w`` and the quotient.

    Every differential entry must have non-positive level; that is what makes
    the high-level generators span a subcomplex.
    """
    bad = []
    for (k, l), e in F.D.items():
        for wt in e.weights():
            if lam.pair(wt) > 0:
                bad.append(f"entry {F.gens[k].name} <- {F.gens[l].name} ({e.to_text()}) has level {lam.pair(wt)} > 0")
                break
    if bad:
        raise ModelError("differential is not of non-positive weight", bad)
    hi = [k for k in range(F.size) if gen_level(F, lam, k) >= w]
    lo = [k for k in range(F.size) if gen_level(F, lam, k) < w]
    for (k, l) in F.D:
        assert not (l in hi and k in lo), "high generator maps to a low one"
    return subcomplex(F, hi, check=False), subcomplex(F, lo, check=False)


# -- Koszul systems ------------------------------------------------------------------

@dataclass
class KoszulSystemLevel:
    n: int
    complex: FreeComplex
    transition: dict  # generator index -> (index at level n+1, coefficient element)
    augmentation: int  # index of the generator sent to 1


def _killed_even(m: StackModel, s: ThetaStratum):
    return [g for g in m.base.even if g.name in s.killed]


def koszul_system(m: StackModel, s: ThetaStratum, n: int) -> KoszulSystemLevel:
    """Level ``n`` of the Koszul system on the killed coordinates: ``e0 -> x^n f`` per coordinate, tensored."""
    if n < 1:
        raise ValueError("Koszul level must be positive")
    xs = _killed_even(m, s)
    if not xs:
        raise OracleInapplicable(f"stratum {s.lam} kills no coordinate; local cohomology is the identity")
    base = m.base
    K = None
    for g in xs:
        one = FreeComplex(
            base,
            [(f"e0_{g.name}", 0, zero_weight(m.rank)), (f"f_{g.name}", -1, scale_weight(-n, g.weight))],
            {(1, 0): base.element(f"{g.name}^{n}")},
        )
        K = one if K is None else complex_tensor(K, one)
    # generator index encodes which factors are f's, in binary (most significant first)
    trans = {}
    for idx in range(K.size):
        bits = [(idx >> (len(xs) - 1 - i)) & 1 for i in range(len(xs))]
        coeff = "*".join(g.name for g, b in zip(xs, bits) if b) or "1"
        trans[idx] = (idx, base.element(coeff))
    return KoszulSystemLevel(n, K, trans, 0)


def koszul_transition_is_chain_map(m: StackModel, s: ThetaStratum, n: int) -> bool:
    """Check ``d phi = phi d`` for the transition from level ``n`` to ``n + 1``."""
    a, b = koszul_system(m, s, n), koszul_system(m, s, n + 1)
    K, L = a.complex, b.complex
    for l in range(K.size):
        j, c = a.transition[l]
        lhs = L.d_of_combination({j: c})
        rhs_terms = {}
        for (k, ll), e in K.D.items():
            if ll == l:
                jk, ck = a.transition[k]
                rhs_terms[jk] = rhs_terms.get(jk, m.base.zero()) + e * ck
        keys = set(lhs) | set(rhs_terms)
        if any(lhs.get(k, m.base.zero()) != rhs_terms.get(k, m.base.zero()) for k in keys):
            return False
    return True


# -- exact division of characters ---------------------------------------------------

def divide_by_one_minus(P: BigradedCharacter, w, lam: Cocharacter) -> BigradedCharacter:
    """Finite ``Q`` with ``Q * (1 - t^w) = P``; requires ``<lam, w> >= 1`` and exact divisibility."""
    lw = lam.pair(w)
    if lw < 1:
        raise ValueError("division needs a positive-level weight")
    one_minus = BigradedCharacter(P.rank, {(zero_weight(P.rank), 0): 1, (tuple(w), 0): -1})
    R = euler_specialize(P)
    Q = BigradedCharacter.zero(P.rank)
    top = R.max_level(lam) if R else 0
    while R:
        low = R.min_level(lam)
        if low > top:
            raise ValueError("character is not divisible")
        part = R.restrict_levels(lam, lambda k: k == low)
        Q = Q + part
        R = R - part * one_minus
    return Q


@dataclass
class GammaWindow:
    G_geq: BigradedCharacter
    G_lt: BigradedCharacter
    stabilized_at: int
    colimit_series: BigradedCharacter
    limit_series: BigradedCharacter

    def to_json(self) -> dict:
        return {"G_geq": to_text(self.G_geq), "G_lt": to_text(self.G_lt), "stabilized_at": self.stabilized_at}


def _stratum_classes(m, s, gen_k: BigradedCharacter, F: FreeComplex) -> BigradedCharacter:
    """Coefficients of ``K ⊗ F`` in the basis of twisted structure sheaves of the stratum."""
    lam = s.lam
    Q = euler_specialize(gen_k)
    for g in _killed_even(m, s):
        Q = divide_by_one_minus(Q, g.weight, lam)
    for g in m.base.odd:
        if g.name in s.killed:
            Q = Q * BigradedCharacter(m.rank, {(zero_weight(m.rank), 0): 1, (g.weight, 0): -1})
    return Q * euler_specialize(generator_character(F))


def default_max_level(m: StackModel, s: ThetaStratum, F: FreeComplex, w: int) -> int:
    lam = s.lam
    gc = generator_character(F)
    hi, lo = gc.max_level(lam), gc.min_level(lam)
    if hi is None:
        return 2
    step = min(lam.pair(g.weight) for g in _killed_even(m, s))
    # killed odd generators of positive level push the truncation error upward
    lift = sum(max(0, lam.pair(g.weight)) for g in m.base.odd if g.name in s.killed)
    spread = max(hi + lift - w, w - lo, 0)
    return 2 + math.ceil(spread / step)


def gamma_window(F: FreeComplex, m: StackModel, s: ThetaStratum, w: int, max_n: int | None = None) -> GammaWindow:
    """Characters of the local-cohomology truncations of ``F`` at ``w``, taken where the system stabilizes."""
    lam = s.lam
    xs = _killed_even(m, s)
    if not xs:
        raise OracleInapplicable(f"stratum {s.lam} kills no coordinate")
    if not F.gens:
        z = BigradedCharacter.zero(m.rank)
        return GammaWindow(z, z, 1, z, z)
    if max_n is None:
        max_n = default_max_level(m, s, F, w)
    prev = None
    for n in range(1, max_n + 2):
        K = koszul_system(m, s, n).complex
        col = _stratum_classes(m, s, generator_character(K), F)
        lim = _stratum_classes(m, s, generator_character(complex_dual(K, check=False)), F)
        cur = (col.restrict_levels(lam, lambda k: k >= w), lim.restrict_levels(lam, lambda k: k < w))
        if prev is not None and cur == prev[0]:
            return GammaWindow(cur[0], cur[1], n - 1, prev[1], prev[2])
        prev = (cur, col, lim)
    raise NonStabilization(f"Koszul system did not stabilize by level {max_n}")


def local_cohomology_series(m: StackModel, s: ThetaStratum, F: FreeComplex, cutoff: int) -> BigradedCharacter:
    """The same classes from the closed form ``-sum_{j>=1} t^{-j w_x}`` per killed coordinate, through ``cutoff``."""
    lam = s.lam
    out = euler_specialize(generator_character(F))
    # odd factors first: their positive levels decide how far each geometric sum must reach
    for g in m.base.odd:
        if g.name in s.killed:
            out = out * BigradedCharacter(m.rank, {(zero_weight(m.rank), 0): 1, (g.weight, 0): -1})
    if not out:
        return out
    top = out.max_level(lam)
    for g in _killed_even(m, s):
        step = lam.pair(g.weight)
        fac = BigradedCharacter(m.rank, {(scale_weight(-j, g.weight), 0): -1 for j in range(1, (top - cutoff) // step + 2)})
        out = out * fac
    return out.restrict_levels(lam, lambda k: k >= cutoff)


# -- Serre duality windows -------------------------------------------------------------

@dataclass
class SerreWindow:
    a: int
    flip: Callable[[int], int] = field(repr=False)


def serre_window_data(m: StackModel, s: ThetaStratum) -> SerreWindow:
    """``a`` = ``lam``-weight of the stratum's dualizing sheaf at a fixed point; ``flip(w) = a + 1 - w``."""
    a = sum((-1) ** g.degree * s.lam.pair(g.weight) for g in s.A.generators())
    return SerreWindow(a, lambda w: a + 1 - w)


def omega_level(m: StackModel, lam: Cocharacter) -> int:
    return lam.pair(cotangent_character(m).omega_weight)


def in_geq(m: StackModel, s: ThetaStratum, F: FreeComplex, w: int) -> bool:
    """Restriction to the fixed component is generated in levels ``>= w``."""
    FZ = F.with_base(s.B, check=False)
    return all(s.lam.pair(g.weight) >= w for g in FZ.gens)


def in_lt(m: StackModel, s: ThetaStratum, G: FreeComplex, w: int) -> bool:
    """Membership in the ``< w`` side via duality: the dual twisted by the canonical class lies in ``>= a + 1 - w``."""
    a = serre_window_data(m, s).a
    om = omega_level(m, s.lam)
    return all(-s.lam.pair(g.weight) + om >= a + 1 - w for g in G.gens)


# -- wall crossing -----------------------------------------------------------------------

def wall_crossing_report(m: StackModel, lam_plus) -> dict:
    lam_plus = lam_plus if isinstance(lam_plus, Cocharacter) else Cocharacter(lam_plus)
    lam_minus = lam_plus.inverse()
    violations = [
        f"odd generator {g.name} has level {lam_plus.pair(g.weight)} != 0"
        for g in m.base.odd
        if lam_plus.pair(g.weight) != 0
    ]
    out = {"lambda_plus": list(lam_plus.components), "hypothesis_ok": not violations, "violations": violations}
    if violations:
        return out
    c = omega_level(m, lam_plus)
    a_plus = serre_window_data(m, stratum_from_cocharacter(m, lam_plus)).a
    a_minus = serre_window_data(m, stratum_from_cocharacter(m, lam_minus)).a
    case = "equivalence" if c == 0 else ("embed_plus_into_minus" if c > 0 else "embed_minus_into_plus")
    out.update(
        {
            "c": c,
            "case": case,
            "a_plus": a_plus,
            "a_minus": a_minus,
            "window_plus": -a_plus,
            "window_minus": -a_minus,
            "window_difference": a_plus - a_minus,
        }
    )
    return out


# -- semiorthogonality ---------------------------------------------------------------------

def pushforward(m: StackModel, s: ThetaStratum, weight) -> FreeComplex:
    """Koszul resolution of the stratum's structure sheaf twisted by ``weight``."""
    xs = _killed_even(m, s)
    if any(g.name in s.killed for g in m.base.odd):
        raise OracleInapplicable("pushforward resolution needs every killed generator to be even")
    base = m.base
    K = FreeComplex(base, [("e", 0, tuple(weight))])
    for g in xs:
        one = FreeComplex(base, [(f"1_{g.name}", 0, zero_weight(m.rank)), (f"k_{g.name}", 1, g.weight)],
                          {(0, 1): base.element(g.name)})
        K = complex_tensor(K, one)
    return K


def semiorthogonality_certificate(F: FreeComplex, G: FreeComplex, degree_bound: int = 8) -> dict:
    """Weight-zero homology of ``Hom(F, G)``: certified when it vanishes and the truncation is stable."""
    if not F.gens or not G.gens:
        return {"status": "certified", "dims": [], "stabilized": True, "degree_bound": degree_bound}
    h = weight0_truncated_homology(complex_hom(F, G), degree_bound)
    if not h.stabilized:
        status = "inconclusive"
    elif any(h.dims):
        status = "failed"
    else:
        status = "certified"
    return {"status": status, **h.to_json()}
