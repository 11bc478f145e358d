"""Kempf-Ness strata for linear torus actions and their derived presentations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from . import _linalg
from .charkit import BigradedCharacter, Cocharacter, Weight, to_text
from .errors import ModelError, NonUniqueDestabilizer, SupportLimitExceeded
from .gradedalg import KoszulCdga
from .stack import StackModel, cotangent_character

MAX_SUPPORT_COORDS = 12


@dataclass(frozen=True)
class Destabilizer:
    lam: Cocharacter
    mu_squared: Fraction

    @property
    def mu(self) -> float:
        return math.sqrt(self.mu_squared)


def _primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(math.gcd, ints, 0)
    return tuple(i // g for i in ints)


def optimal_destabilizer(m: StackModel, support: Iterable[int]) -> Destabilizer | None:
    """Most destabilizing primitive ``lam`` for a point with the given coordinate support.

    Returns ``None`` when the point is semistable.  The maximizer of
    ``-<ell, lam>/|lam|`` over the cone ``{<lam, a_i> >= 0}`` is the direction of
    the nearest point of that cone to ``-ell``; it is found exactly by projecting
    onto the span of every face and keeping the longest feasible projection.
    """
    support = sorted(set(support))
    r = m.rank
    rows = [list(map(Fraction, m.coordinates[i].action_weight)) for i in support]
    v = [Fraction(-c) for c in m.linearization]
    best: list[Fraction] | None = None
    best_n = Fraction(-1)
    seen = set()
    for k in range(len(rows) + 1):
        for J in itertools.combinations(range(len(rows)), k):
            A = [rows[j] for j in J]
            basis = _linalg.nullspace(A, r) if A else [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
            key = tuple(tuple(b) for b in basis)
            if key in seen:
                continue
            seen.add(key)
            # orthonormality is not needed; independence is, which nullspace gives
            p = _linalg.project_onto_span(basis, v)
            if any(_linalg.dot(a, p) < 0 for a in rows):
                continue
            n = _linalg.dot(p, p)
            if n > best_n:
                best, best_n = p, n
            elif n == best_n and best is not None and p != best:
                raise NonUniqueDestabilizer(f"support {support}: projections {best} and {p} tie")
    if best is None or best_n == 0:
        return None
    return Destabilizer(Cocharacter(_primitive(best)), best_n)


def is_semistable(m: StackModel, support: Iterable[int]) -> bool:
    return optimal_destabilizer(m, support) is None


@dataclass
class ThetaStratum:
    lam: Cocharacter
    mu_squared: Fraction
    killed: list
    kept: list
    A: KoszulCdga
    B: KoszulCdga
    lplus: BigradedCharacter
    lminus: BigradedCharacter
    levels: dict
    even_names: frozenset = frozenset()
    supports: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    @property
    def mu(self) -> float:
        return math.sqrt(self.mu_squared)

    def killed_even(self) -> list[str]:
        return [n for n in self.killed if n in self.even_names]

    def killed_odd(self) -> list[str]:
        return [n for n in self.killed if n not in self.even_names]

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam.components),
            "mu_squared": _frac_text(self.mu_squared),
            "mu": _mu_text(self.mu_squared),
            "killed": list(self.killed),
            "kept": list(self.kept),
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "lplus": to_text(self.lplus),
            "lminus": to_text(self.lminus),
            "flags": dict(sorted(self.flags.items())),
            "supports": [list(s) for s in self.supports],
        }


def _frac_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _mu_text(mu_sq: Fraction) -> str:
    n, d = mu_sq.numerator, mu_sq.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return f"{rn}/{rd}"
    return f"sqrt({n}/{d})"


def stratum_from_cocharacter(m: StackModel, lam: Cocharacter, mu_squared: Fraction | None = None) -> ThetaStratum:
    """Derived presentation of the attracting locus of ``lam``.

    Generators of positive ``lam``-level are killed; killed even variables
    become 0 in the surviving differentials.  ``B`` keeps only level-0
    generators.
    """
    if lam.rank != m.rank:
        raise ModelError(f"cocharacter {lam} does not have rank {m.rank}")
    base = m.base
    levels = {g.name: lam.pair(g.weight) for g in base.generators()}
    killed = [g.name for g in base.generators() if levels[g.name] >= 1]
    kept = [g.name for g in base.generators() if levels[g.name] <= 0]

    def sub(keep):
        even = [(g.name, g.weight) for g in base.even if g.name in keep]
        tmp = KoszulCdga(base.rank, even)
        odd = []
        for j, g in enumerate(base.odd):
            if g.name not in keep:
                continue
            f = base.du(j)
            assert not any(u for (_a, u) in f.terms), "differential mentions an odd variable"
            odd.append((g.name, g.weight, f.transfer(tmp)))
        return KoszulCdga(base.rank, even, odd)

    A = sub(set(kept))
    B = sub({n for n in kept if levels[n] == 0})
    cot = cotangent_character(m).full
    lplus = cot.restrict_levels(lam, lambda k: k >= 1)
    lminus = cot.restrict_levels(lam, lambda k: k <= -1)
    mu_sq = mu_squared if mu_squared is not None else Fraction(0)
    even_names = frozenset(g.name for g in base.even)
    s = ThetaStratum(lam, mu_sq, killed, kept, A, B, lplus, lminus, levels, even_names)
    s.flags = classify(s)
    return s


def classify(s: ThetaStratum) -> dict:
    even = s.even_names
    regular = all(n in even for n in s.killed)
    affine = all(n in even for n in s.kept if s.levels[n] != 0)
    window_ok = not any(d == 1 for (_w, d) in s.lminus.terms)
    return {"regular_embedding": regular, "affine_bundle_over_Z": affine, "quasi_smooth_window_ok": window_ok}


def relative_cotangent(s: ThetaStratum, m: StackModel) -> BigradedCharacter:
    """Character of the conormal data of the stratum: killed generators shifted up by one degree."""
    return BigradedCharacter(m.rank, [((g.weight, g.degree + 1), 1) for g in m.base.generators() if g.name in s.killed])


def stratum_cotangent(s: ThetaStratum) -> BigradedCharacter:
    """Character of the stratum's cotangent complex at a fixed point (kept generators plus torus)."""
    r = s.A.rank
    terms = [((g.weight, g.degree), 1) for g in s.A.generators()]
    terms += [(((0,) * r, -1), 1)] * r
    return BigradedCharacter(r, terms)


def _all_supports(n: int, limit: int):
    if n > limit:
        raise SupportLimitExceeded(f"{n} coordinates exceeds the support enumeration limit {limit}")
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def classify_supports(m: StackModel, limit: int = MAX_SUPPORT_COORDS) -> dict:
    return {S: optimal_destabilizer(m, S) for S in _all_supports(m.n_coords, limit)}


def git_stratify(m: StackModel, limit: int = MAX_SUPPORT_COORDS) -> list[ThetaStratum]:
    """Strata indexed by distinct optimal destabilizers, in order of decreasing instability."""
    by_lam: dict = {}
    for S, dest in classify_supports(m, limit).items():
        if dest is None:
            continue
        entry = by_lam.setdefault(dest.lam, [dest.mu_squared, []])
        entry[1].append(S)
    out = []
    for lam, (mu_sq, sups) in sorted(by_lam.items(), key=lambda kv: (-kv[1][0], kv[0].components)):
        s = stratum_from_cocharacter(m, lam, mu_sq)
        s.supports = sorted(sups, key=lambda t: (len(t), t))
        out.append(s)
    return out


def validate_stratification(m: StackModel, strata: Sequence[ThetaStratum], limit: int = MAX_SUPPORT_COORDS) -> list[str]:
    """Combinatorial check of the stratification axioms on coordinate supports; empty list means ok."""
    violations = []
    for a, b in zip(strata, strata[1:]):
        if a.mu_squared < b.mu_squared:
            violations.append(f"order: stratum {a.lam} (mu^2={a.mu_squared}) precedes {b.lam} (mu^2={b.mu_squared})")
    owner = {}
    for idx, s in enumerate(strata):
        for S in s.supports:
            if S in owner:
                violations.append(f"support {list(S)} lies in strata {strata[owner[S]].lam} and {s.lam}")
            owner[S] = idx
    table = classify_supports(m, limit)
    for S, dest in table.items():
        if dest is None:
            if S in owner:
                violations.append(f"support {list(S)} is semistable but assigned to stratum {strata[owner[S]].lam}")
            continue
        if S not in owner:
            violations.append(f"unstable support {list(S)} (lambda {dest.lam}) is not covered")
        elif strata[owner[S]].lam != dest.lam:
            violations.append(f"support {list(S)}: optimal lambda {dest.lam} but assigned to {strata[owner[S]].lam}")
    for idx, s in enumerate(strata):
        for S in s.supports:
            for k in range(len(S)):
                for T in itertools.combinations(S, k):
                    if T not in owner:
                        violations.append(f"closure: support {list(T)} below {list(S)} in {s.lam} is not unstable")
                    elif strata[owner[T]].mu_squared < s.mu_squared:
                        violations.append(
                            f"closure: support {list(T)} below {list(S)} lies in lower stratum {strata[owner[T]].lam}"
                        )
    return violations
