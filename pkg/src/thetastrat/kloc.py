"""Virtual non-abelian localization: E-classes, Euler characteristic backends, verification.

Three independent ways to get invariant Euler characteristics:

* ``chi_series``: coefficient of ``t^0`` in the character of the chains, made
  finite by grading along a cocharacter that is negative on every coordinate.
* ``chi_chains``: homology of the weight-zero chains, truncated in polynomial degree.
* ``chi_semistable``: chain homology over an inverted-coordinate chart of ``X^ss``.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np
from scipy.optimize import linprog

from .charkit import (
    BigradedCharacter,
    Cocharacter,
    TruncatedSeries,
    as_weight,
    char_det_and_rank,
    char_mul,
    coefficient_at,
    neg_weight,
    sym_series,
    to_text,
    zero_weight,
)
from .errors import InsufficientTruncation, NonStabilization, OracleInapplicable
from .gradedalg import FreeComplex, KoszulCdga, complex_twist, direct_sum, generator_character, weight0_truncated_homology
from .stack import StackModel
from .strat import ThetaStratum, classify_supports, git_stratify

DEFAULT_DEGREE_BOUND = 8
THREADS_ENV = "THETASTRAT_THREADS"


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class EClass:
    lam: Cocharacter
    series: TruncatedSeries
    det_weight: tuple
    rank_shift: int

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam.components),
            "cutoff": self.series.cutoff,
            "series": to_text(self.series),
            "det_weight": list(self.det_weight),
            "rank_shift": self.rank_shift,
        }


def e_class(m: StackModel, s: ThetaStratum, cutoff: int) -> EClass:
    """``Sym(L^- + (L^+)^v) * det(L^+)^v [-rank L^+]`` as a series in ``s.lam``, exact at levels ``>= cutoff``."""
    if cutoff > 0:
        raise ValueError("cutoff must be <= 0")
    lam = s.lam
    gens = s.lminus.generators() + [(neg_weight(w), -d) for (w, d) in s.lplus.generators()]
    det, rk = char_det_and_rank(s.lplus)
    sym = sym_series(gens, lam, cutoff + lam.pair(det))
    series = sym.twist(neg_weight(det)).shift(-rk)
    return EClass(lam, series, det, rk)


# -- series backend ----------------------------------------------------------

def find_negative_cocharacter(weights, box: int = 3) -> tuple[int, ...] | None:
    """An integer ``eta`` with ``<eta, w> <= -1`` for every ``w``, or ``None``."""
    weights = [as_weight(w) for w in weights]
    if not weights:
        return None
    r = len(weights[0])

    def ok(eta):
        return all(sum(a * b for a, b in zip(eta, w)) <= -1 for w in weights)

    rng = range(-box, box + 1)
    cands = sorted(itertools.product(rng, repeat=r), key=lambda e: (sum(map(abs, e)), e))
    for eta in cands:
        if ok(eta):
            return tuple(eta)
    A = np.array(weights, dtype=float)
    res = linprog(np.zeros(r), A_ub=A, b_ub=-2 * np.ones(len(weights)), bounds=[(None, None)] * r, method="highs")
    if not res.success:
        return None
    fr = [Fraction(float(x)).limit_denominator(1000) for x in res.x]
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
    eta = tuple(int(f * den) for f in fr)
    return eta if ok(eta) else None


def odd_part(base: KoszulCdga) -> BigradedCharacter:
    out = BigradedCharacter.one(base.rank)
    for g in base.odd:
        out = out * BigradedCharacter(base.rank, {(zero_weight(base.rank), 0): 1, (g.weight, 1): 1})
    return out


def chi_series(m: StackModel, F: FreeComplex) -> int:
    base = F.base
    evens = [g.weight for g in base.even]
    if evens:
        eta = find_negative_cocharacter(evens)
        if eta is None:
            raise OracleInapplicable("series oracle inapplicable: no cocharacter is negative on every coordinate")
        eta = Cocharacter(eta)
    else:
        eta = Cocharacter((1,) + (0,) * (base.rank - 1))
    finite = odd_part(base) * generator_character(F)
    if not finite:
        return 0
    top = finite.max_level(eta)
    sym = sym_series([(w, 0) for w in evens], eta, -top)
    return coefficient_at(char_mul(sym, finite), zero_weight(base.rank))


def chi_chains(m: StackModel, F: FreeComplex, degree_bound: int = DEFAULT_DEGREE_BOUND) -> tuple[int, bool]:
    h = weight0_truncated_homology(F, degree_bound)
    return h.euler, h.stabilized


# -- charts ------------------------------------------------------------------

def _single_coordinate_chart(good_supports, universe) -> int | None:
    """Index ``i`` with ``good <=> i in support`` over all subsets of ``universe``, if any."""
    for i in universe:
        if all((i in S) == good for S, good in good_supports.items()):
            return i
    return None


def localize(base: KoszulCdga, name: str) -> KoszulCdga:
    """Adjoin an inverse of the even generator ``name`` (``x'`` with ``dv = x x' - 1``)."""
    w = base.even[base.even_index[name]].weight
    inv = f"{name}_inv"
    ext = base.with_generators(even=[(inv, neg_weight(w))])
    return ext.with_generators(odd=[(f"{name}_unit", zero_weight(base.rank), f"{name}*{inv} - 1")])


@dataclass
class Chart:
    base: KoszulCdga | None
    method: str


def semistable_chart(m: StackModel, table=None) -> Chart:
    table = table if table is not None else classify_supports(m)
    full = tuple(range(m.n_coords))
    if table[full] is not None:
        return Chart(None, "empty")
    if all(d is None for d in table.values()):
        return Chart(m.base, "whole")
    i = _single_coordinate_chart({S: d is None for S, d in table.items()}, full)
    if i is None:
        return Chart(None, "unavailable")
    name = m.coordinates[i].name
    return Chart(localize(m.base, name), f"inverted:{name}")


def fixed_chart(m: StackModel, s: ThetaStratum, table=None) -> Chart:
    """Presentation of the fixed component of the stratum: ``B`` or ``B`` with one coordinate inverted."""
    table = table if table is not None else classify_supports(m)
    level0 = [i for i, c in enumerate(m.coordinates) if s.levels[c.name] == 0]
    good = {}
    for k in range(len(level0) + 1):
        for S in itertools.combinations(level0, k):
            d = table[S]
            good[S] = d is not None and d.lam == s.lam
    if all(good.values()):
        return Chart(s.B, "fixed-locus")
    i = _single_coordinate_chart(good, level0)
    if i is None:
        return Chart(None, "unavailable")
    name = m.coordinates[i].name
    return Chart(localize(s.B, name), f"fixed-locus-inverted:{name}")


# -- terms of the formula --------------------------------------------------------

@dataclass
class Term:
    value: int | None
    method: str
    stabilized: bool = True

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "stabilized": self.stabilized}


def _chi_fixed_term(m, s, F, cutoff=None, degree_bound=DEFAULT_DEGREE_BOUND, table=None) -> Term:
    chart = fixed_chart(m, s, table)
    if chart.base is None:
        return Term(None, chart.method, False)
    FZ = F.with_base(chart.base)
    gchar = generator_character(FZ)
    if not gchar:
        return Term(0, chart.method, True)
    lam = s.lam
    need = -gchar.max_level(lam)
    if cutoff is None:
        cutoff = min(0, need)
    E = e_class(m, s, cutoff)
    if chart.base.n_even == 0:
        P = odd_part(chart.base) * gchar
        value = coefficient_at(char_mul(E.series, P), zero_weight(m.rank))
        return Term(value, chart.method + "/series", True)
    # chain fallback: E is a sum of twists with zero differential
    if cutoff > need:
        raise InsufficientTruncation(f"cutoff {cutoff} above required level {need}")
    wanted = {-lv for lv in gchar.levels(lam)}
    total, stable = 0, True
    cache = {}
    for (w, d), c in E.series.items():
        if lam.pair(w) not in wanted:
            continue
        if w not in cache:
            h = weight0_truncated_homology(complex_twist(FZ, w), degree_bound)
            cache[w] = h
        h = cache[w]
        stable = stable and h.stabilized
        total += c * (-1) ** (d % 2) * h.euler
    return Term(total, chart.method + "/chains", stable)


def chi_fixed(m: StackModel, s: ThetaStratum, F: FreeComplex, cutoff: int | None = None,
              degree_bound: int = DEFAULT_DEGREE_BOUND) -> int:
    t = _chi_fixed_term(m, s, F, cutoff, degree_bound)
    if t.value is None:
        raise OracleInapplicable(f"no chart for the fixed locus of stratum {s.lam}")
    if not t.stabilized:
        raise NonStabilization(f"fixed-locus homology did not stabilize at degree bound {degree_bound}")
    return t.value


def _chi_semistable_term(m, F, degree_bound=DEFAULT_DEGREE_BOUND, table=None) -> Term:
    chart = semistable_chart(m, table)
    if chart.method == "empty":
        return Term(0, "empty", True)
    if chart.base is None:
        return Term(None, chart.method, False)
    h = weight0_truncated_homology(F.with_base(chart.base), degree_bound)
    return Term(h.euler, chart.method + "/chains", h.stabilized)


def chi_semistable(m: StackModel, strata, F: FreeComplex, degree_bound: int = DEFAULT_DEGREE_BOUND) -> int | None:
    """Euler characteristic on the semistable locus, or ``None`` when no chart is available."""
    t = _chi_semistable_term(m, F, degree_bound)
    if t.value is None or not t.stabilized:
        return None
    return t.value


def _lhs_term(m, F, degree_bound) -> Term:
    try:
        return Term(chi_series(m, F), "series", True)
    except OracleInapplicable:
        pass
    v, stable = chi_chains(m, F, degree_bound)
    return Term(v, "chains", stable)


@dataclass
class LocalizationReport:
    lhs: Term
    ss_term: Term
    corrections: list = field(default_factory=list)
    verified: bool | None = None

    @property
    def identity(self) -> str:
        def fmt(t):
            return "?" if t.value is None else str(t.value)

        rhs = " + ".join([fmt(self.ss_term)] + [fmt(c["term"]) for c in self.corrections])
        return f"{fmt(self.lhs)} = {rhs}"

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs.to_json(),
            "ss_term": self.ss_term.to_json(),
            "corrections": [
                {"lambda": c["lambda"], "mu_squared": c["mu_squared"], **c["term"].to_json()} for c in self.corrections
            ],
            "identity": self.identity,
            "verified": self.verified,
        }


def verify_localization(m: StackModel, F: FreeComplex, degree_bound: int = DEFAULT_DEGREE_BOUND,
                        cutoff: int | None = None, strata=None) -> LocalizationReport:
    table = classify_supports(m)
    strata = strata if strata is not None else git_stratify(m)
    lhs = _lhs_term(m, F, degree_bound)
    ss = _chi_semistable_term(m, F, degree_bound, table)
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        terms = list(pool.map(lambda s: _chi_fixed_term(m, s, F, cutoff, degree_bound, table), strata))
    corr = [
        {"lambda": list(s.lam.components), "mu_squared": f"{s.mu_squared.numerator}/{s.mu_squared.denominator}", "term": t}
        for s, t in zip(strata, terms)
    ]
    terms = [lhs, ss] + [c["term"] for c in corr]
    if any(t.value is None or not t.stabilized for t in terms):
        verified = None
    else:
        verified = lhs.value == ss.value + sum(c["term"].value for c in corr)
    return LocalizationReport(lhs, ss, corr, verified)


def localize_terms(m: StackModel, F: FreeComplex, cutoff: int | None = None,
                   degree_bound: int = DEFAULT_DEGREE_BOUND) -> dict:
    """Per-stratum E-classes and corrections, without the left-hand side."""
    table = classify_supports(m)
    out = []
    for s in git_stratify(m):
        t = _chi_fixed_term(m, s, F, cutoff, degree_bound, table)
        lv = generator_character(F).max_level(s.lam)
        cut = cutoff if cutoff is not None else min(0, -(lv if lv is not None else 0))
        out.append({"lambda": list(s.lam.components), "e_class": e_class(m, s, cut).to_json(), **t.to_json()})
    ss = _chi_semistable_term(m, F, degree_bound, table)
    return {"strata": out, "ss_term": ss.to_json()}


def sheaf_sum(F: FreeComplex, G: FreeComplex) -> FreeComplex:
    return direct_sum(F, G)
