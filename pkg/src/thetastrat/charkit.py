"""Characters of torus representations, bigraded by lattice weight and homological degree.

A character is a finitely supported map ``(weight, degree) -> int``.  We write
``t^w`` for the lattice part and ``q^d`` for the homological degree.  All
weights are representation weights (weights of functions / sections).

``TruncatedSeries`` stores the part of an infinite character lying at
``<lam, w> >= cutoff`` for a reference cocharacter ``lam``; this is how Sym of
a graded vector space of negative ``lam``-weights is represented exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .errors import (
    CocharacterMismatch,
    InsufficientTruncation,
    NonConvergentSym,
    RankMismatch,
)

Weight = Tuple[int, ...]
Key = Tuple[Weight, int]


def as_weight(w: Iterable[int]) -> Weight:
    return tuple(int(x) for x in w)


def add_weights(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def neg_weight(a: Weight) -> Weight:
    return tuple(-x for x in a)


def scale_weight(k: int, a: Weight) -> Weight:
    return tuple(k * x for x in a)


def zero_weight(rank: int) -> Weight:
    return (0,) * rank


@dataclass(frozen=True)
class Cocharacter:
    """A one-parameter subgroup, stored primitively (gcd of entries is 1)."""

    components: Weight

    def __post_init__(self):
        comps = as_weight(self.components)
        g = reduce(math.gcd, comps, 0)
        if g == 0:
            raise ValueError("cocharacter must be nonzero")
        object.__setattr__(self, "components", tuple(c // g for c in comps))

    @property
    def rank(self) -> int:
        return len(self.components)

    def pair(self, w: Sequence[int]) -> int:
        if len(w) != len(self.components):
            raise RankMismatch(f"weight {tuple(w)} has rank {len(w)}, cocharacter has rank {self.rank}")
        return sum(a * b for a, b in zip(self.components, w))

    def inverse(self) -> "Cocharacter":
        return Cocharacter(neg_weight(self.components))

    def __str__(self):
        return "(" + ",".join(map(str, self.components)) + ")"


def _check_key(key: Key, rank: int) -> Key:
    w, d = key
    w = as_weight(w)
    if len(w) != rank:
        raise RankMismatch(f"weight {w} does not have rank {rank}")
    return (w, int(d))


class BigradedCharacter:
    """Finite integer combination of ``t^w q^d``.  Immutable."""

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Mapping[Key, int] | Iterable[Tuple[Key, int]] = ()):
        self.rank = rank
        acc: Dict[Key, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            key = _check_key(key, rank)
            acc[key] = acc.get(key, 0) + int(c)
        self._terms = {k: v for k, v in acc.items() if v}

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "BigradedCharacter":
        return cls(rank)

    @classmethod
    def one(cls, rank: int) -> "BigradedCharacter":
        return cls(rank, {(zero_weight(rank), 0): 1})

    @classmethod
    def monomial(cls, weight: Sequence[int], degree: int = 0, coeff: int = 1) -> "BigradedCharacter":
        w = as_weight(weight)
        return cls(len(w), {(w, degree): coeff})

    @classmethod
    def from_generators(cls, rank: int, gens: Iterable[Tuple[Sequence[int], int]]) -> "BigradedCharacter":
        return cls(rank, [((as_weight(w), d), 1) for w, d in gens])

    # access -----------------------------------------------------------
    @property
    def terms(self) -> Dict[Key, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Key, int]]:
        return iter(sorted(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        if not isinstance(other, BigradedCharacter):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        return hash((self.rank, frozenset(self._terms.items())))

    def __repr__(self):
        return f"BigradedCharacter({to_text(self)})"

    def generators(self) -> list[Tuple[Weight, int]]:
        """Expand a character with non-negative coefficients into a generator list."""
        out = []
        for (w, d), c in self.items():
            if c < 0:
                raise ValueError("character has negative coefficients; not a generator list")
            out.extend([(w, d)] * c)
        return out

    def levels(self, lam: Cocharacter) -> list[int]:
        return sorted({lam.pair(w) for (w, _d) in self._terms})

    def max_level(self, lam: Cocharacter) -> int | None:
        lv = self.levels(lam)
        return lv[-1] if lv else None

    def min_level(self, lam: Cocharacter) -> int | None:
        lv = self.levels(lam)
        return lv[0] if lv else None

    # arithmetic -------------------------------------------------------
    def _rank_check(self, other: "BigradedCharacter"):
        if self.rank != other.rank:
            raise RankMismatch(f"torus ranks differ: {self.rank} vs {other.rank}")

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        self._rank_check(other)
        return BigradedCharacter(self.rank, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self):
        return BigradedCharacter(self.rank, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BigradedCharacter(self.rank, {k: other * v for k, v in self._terms.items()})
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        self._rank_check(other)
        acc: Dict[Key, int] = {}
        for (w1, d1), c1 in self._terms.items():
            for (w2, d2), c2 in other._terms.items():
                k = (add_weights(w1, w2), d1 + d2)
                acc[k] = acc.get(k, 0) + c1 * c2
        return BigradedCharacter(self.rank, acc)

    __rmul__ = __mul__

    def shift(self, d: int) -> "BigradedCharacter":
        """Homological shift ``F[d]``: multiply by ``q^d``."""
        return BigradedCharacter(self.rank, {(w, deg + d): c for (w, deg), c in self._terms.items()})

    def twist(self, weight: Sequence[int]) -> "BigradedCharacter":
        wt = as_weight(weight)
        return BigradedCharacter(self.rank, {(add_weights(w, wt), d): c for (w, d), c in self._terms.items()})

    def dual(self) -> "BigradedCharacter":
        return BigradedCharacter(self.rank, {(neg_weight(w), -d): c for (w, d), c in self._terms.items()})

    def euler(self) -> "BigradedCharacter":
        return euler_specialize(self)

    def coefficient_at(self, w: Sequence[int]) -> int:
        return coefficient_at(self, w)

    def restrict_levels(self, lam: Cocharacter, pred) -> "BigradedCharacter":
        return BigradedCharacter(self.rank, {k: c for k, c in self._terms.items() if pred(lam.pair(k[0]))})


class TruncatedSeries:
    """The part of a (possibly infinite) character at ``lam``-levels ``>= cutoff``.

    ``truncated`` is False when the stored terms are the whole character, in
    which case the cutoff carries no information and products treat the
    operand as exact.
    """

    __slots__ = ("lam", "cutoff", "rank", "_terms", "truncated")

    def __init__(self, lam: Cocharacter, cutoff: int, terms: Mapping[Key, int] | Iterable = (), truncated: bool = True):
        self.lam = lam
        self.rank = lam.rank
        self.cutoff = int(cutoff)
        self.truncated = bool(truncated)
        acc: Dict[Key, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            key = _check_key(key, self.rank)
            if self.truncated and lam.pair(key[0]) < self.cutoff:
                continue
            acc[key] = acc.get(key, 0) + int(c)
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def exact(cls, lam: Cocharacter, char: BigradedCharacter) -> "TruncatedSeries":
        if char.rank != lam.rank:
            raise RankMismatch(f"torus ranks differ: {char.rank} vs {lam.rank}")
        lo = char.min_level(lam)
        return cls(lam, lo if lo is not None else 0, char.terms, truncated=False)

    @property
    def terms(self) -> Dict[Key, int]:
        return dict(self._terms)

    def items(self):
        return iter(sorted(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        flag = f"cutoff={self.cutoff}" if self.truncated else "exact"
        return f"TruncatedSeries(lam={self.lam}, {flag}, {to_text(self)})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.lam != other.lam or self.truncated != other.truncated:
            return False
        if self.truncated and self.cutoff != other.cutoff:
            return False
        return self._terms == other._terms

    def __hash__(self):
        return hash((self.lam, self.truncated, self.cutoff if self.truncated else None, frozenset(self._terms.items())))

    def effective_cutoff(self) -> float:
        return self.cutoff if self.truncated else -math.inf

    def top_level(self) -> float:
        """Largest level where the full character can be nonzero."""
        if self._terms:
            return max(self.lam.pair(w) for (w, _d) in self._terms)
        return self.cutoff - 1 if self.truncated else -math.inf

    def as_character(self) -> BigradedCharacter:
        """The stored terms as a finite character (forgets truncation)."""
        return BigradedCharacter(self.rank, self._terms)

    def agrees_with(self, other: "TruncatedSeries", cutoff: int | None = None) -> bool:
        """Equality on the common range of validity (or at levels ``>= cutoff``)."""
        _same_lam(self, other)
        lo = max(self.effective_cutoff(), other.effective_cutoff())
        if cutoff is not None:
            if cutoff < lo:
                raise InsufficientTruncation(f"comparison at level {cutoff} below common cutoff {lo}")
            lo = cutoff
        a = {k: v for k, v in self._terms.items() if self.lam.pair(k[0]) >= lo}
        b = {k: v for k, v in other._terms.items() if self.lam.pair(k[0]) >= lo}
        return a == b

    def recut(self, cutoff: int) -> "TruncatedSeries":
        """Drop terms below ``cutoff`` (never lowers the cutoff)."""
        if self.truncated and cutoff < self.cutoff:
            raise InsufficientTruncation(f"cannot lower cutoff from {self.cutoff} to {cutoff}")
        dropped = any(self.lam.pair(w) < cutoff for (w, _d) in self._terms)
        return TruncatedSeries(self.lam, cutoff, self._terms, truncated=self.truncated or dropped)

    def __add__(self, other):
        return char_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.lam, self.cutoff, {k: -v for k, v in self._terms.items()}, self.truncated)

    def __sub__(self, other):
        return char_add(self, negate(other))

    def __mul__(self, other):
        return char_mul(self, other)

    __rmul__ = __mul__

    def shift(self, d: int) -> "TruncatedSeries":
        return TruncatedSeries(self.lam, self.cutoff, {(w, deg + d): c for (w, deg), c in self._terms.items()}, self.truncated)

    def twist(self, weight: Sequence[int]) -> "TruncatedSeries":
        wt = as_weight(weight)
        return TruncatedSeries(
            self.lam,
            self.cutoff + self.lam.pair(wt),
            {(add_weights(w, wt), d): c for (w, d), c in self._terms.items()},
            self.truncated,
        )

    def euler(self) -> "TruncatedSeries":
        return euler_specialize(self)

    def coefficient_at(self, w: Sequence[int]) -> int:
        return coefficient_at(self, w)


Character = Union[BigradedCharacter, TruncatedSeries]


def _same_lam(a: TruncatedSeries, b: TruncatedSeries):
    if a.rank != b.rank:
        raise RankMismatch(f"torus ranks differ: {a.rank} vs {b.rank}")
    if a.lam != b.lam:
        raise CocharacterMismatch(f"reference cocharacters differ: {a.lam} vs {b.lam}")


def _promote(a: Character, b: Character) -> tuple[Character, Character]:
    if isinstance(a, BigradedCharacter) and isinstance(b, TruncatedSeries):
        if a.rank != b.rank:
            raise RankMismatch(f"torus ranks differ: {a.rank} vs {b.rank}")
        a = TruncatedSeries.exact(b.lam, a)
    elif isinstance(b, BigradedCharacter) and isinstance(a, TruncatedSeries):
        if a.rank != b.rank:
            raise RankMismatch(f"torus ranks differ: {a.rank} vs {b.rank}")
        b = TruncatedSeries.exact(a.lam, b)
    return a, b


def negate(a: Character) -> Character:
    return -a


def char_add(a: Character, b: Character) -> Character:
    a, b = _promote(a, b)
    if isinstance(a, BigradedCharacter):
        return a + b
    _same_lam(a, b)
    cut = max(a.effective_cutoff(), b.effective_cutoff())
    truncated = a.truncated or b.truncated
    terms = list(a.terms.items()) + list(b.terms.items())
    if not truncated:
        out = BigradedCharacter(a.rank, terms)
        return TruncatedSeries.exact(a.lam, out)
    return TruncatedSeries(a.lam, int(cut), terms, truncated=True)


def char_mul(a: Character, b: Character) -> Character:
    a, b = _promote(a, b)
    if isinstance(a, BigradedCharacter):
        return a * b
    _same_lam(a, b)
    lam = a.lam
    if not a.truncated and not b.truncated:
        return TruncatedSeries.exact(lam, a.as_character() * b.as_character())
    # Product is exact at levels k >= cutoff_a + top_b and k >= cutoff_b + top_a.
    bounds = [a.effective_cutoff() + b.top_level(), b.effective_cutoff() + a.top_level()]
    cut = max(bounds)
    if cut == -math.inf:
        # one side is exactly zero
        return TruncatedSeries.exact(lam, BigradedCharacter.zero(lam.rank))
    if cut == math.inf:
        cut = max(a.cutoff, b.cutoff)
    cut = int(cut)
    acc: Dict[Key, int] = {}
    for (w1, d1), c1 in a.terms.items():
        l1 = lam.pair(w1)
        for (w2, d2), c2 in b.terms.items():
            if l1 + lam.pair(w2) < cut:
                continue
            k = (add_weights(w1, w2), d1 + d2)
            acc[k] = acc.get(k, 0) + c1 * c2
    return TruncatedSeries(lam, cut, acc, truncated=True)


def euler_specialize(c: Character) -> Character:
    """Collapse degrees: coefficient at ``w`` becomes ``sum_d (-1)^d coeff(w, d)``."""
    acc: Dict[Key, int] = {}
    for (w, d), v in c.terms.items():
        k = (w, 0)
        acc[k] = acc.get(k, 0) + (-v if d % 2 else v)
    if isinstance(c, TruncatedSeries):
        return TruncatedSeries(c.lam, c.cutoff, acc, c.truncated)
    # keep explicit zeros out, but a fully cancelled weight stays visible as 0 via coefficient_at
    return BigradedCharacter(c.rank, acc)


def coefficient_at(c: Character, w: Sequence[int]) -> int:
    """Euler-specialized coefficient of ``t^w``.

    Raises ``InsufficientTruncation`` when ``w`` lies below the cutoff of a
    truncated series; never returns a fabricated 0 there.
    """
    w = as_weight(w)
    if len(w) != c.rank:
        raise RankMismatch(f"weight {w} does not have rank {c.rank}")
    if isinstance(c, TruncatedSeries) and c.truncated and c.lam.pair(w) < c.cutoff:
        raise InsufficientTruncation(
            f"coefficient at level {c.lam.pair(w)} requested; series is only known at levels >= {c.cutoff}"
        )
    return sum((-v if d % 2 else v) for (ww, d), v in c.terms.items() if ww == w)


def sym_series(gens: Iterable[Tuple[Sequence[int], int]], lam: Cocharacter, cutoff: int) -> TruncatedSeries:
    """Character of the free graded-commutative algebra on ``gens``, through ``cutoff``.

    Even-degree generators give geometric factors, odd-degree ones give
    two-term exterior factors.  Every generator must sit at ``lam``-level <= -1.
    """
    gens = [(as_weight(w), int(d)) for w, d in gens]
    rank = lam.rank
    for w, d in gens:
        if len(w) != rank:
            raise RankMismatch(f"generator weight {w} does not have rank {rank}")
        if lam.pair(w) >= 0:
            raise NonConvergentSym(f"generator {w} (degree {d}) has level {lam.pair(w)} >= 0 under {lam}")
    terms: Dict[Key, int] = {(zero_weight(rank), 0): 1}
    dropped = 0 < cutoff
    if dropped:
        terms = {}
    truncated = dropped
    for w, d in gens:
        lv = lam.pair(w)
        new: Dict[Key, int] = {}
        if d % 2:
            for (tw, td), c in terms.items():
                new[(tw, td)] = new.get((tw, td), 0) + c
                if lam.pair(tw) + lv >= cutoff:
                    k = (add_weights(tw, w), td + d)
                    new[k] = new.get(k, 0) + c
                else:
                    truncated = True
        else:
            truncated = True
            for (tw, td), c in terms.items():
                level = lam.pair(tw)
                k = 0
                while level + k * lv >= cutoff:
                    key = (add_weights(tw, scale_weight(k, w)), td + k * d)
                    new[key] = new.get(key, 0) + c
                    k += 1
        terms = {k: v for k, v in new.items() if v}
    return TruncatedSeries(lam, cutoff, terms, truncated=truncated)


def det_and_rank(gens: Iterable[Tuple[Sequence[int], int]], rank: int | None = None) -> tuple[Weight, int]:
    """Virtual determinant weight and rank of a perfect class given by generators."""
    gens = [(as_weight(w), int(d)) for w, d in gens]
    if rank is None:
        if not gens:
            raise ValueError("rank required for an empty generator list")
        rank = len(gens[0][0])
    det = zero_weight(rank)
    rk = 0
    for w, d in gens:
        if len(w) != rank:
            raise RankMismatch(f"generator weight {w} does not have rank {rank}")
        sign = -1 if d % 2 else 1
        det = add_weights(det, scale_weight(sign, w))
        rk += sign
    return det, rk


def char_det_and_rank(c: BigradedCharacter) -> tuple[Weight, int]:
    """``det_and_rank`` of a character, allowing signed coefficients."""
    det = zero_weight(c.rank)
    rk = 0
    for (w, d), v in c.items():
        sign = -v if d % 2 else v
        det = add_weights(det, scale_weight(sign, w))
        rk += sign
    return det, rk


# -- canonical text form ------------------------------------------------

def _fmt_term(w: Weight, d: int, c: int) -> str:
    return f"{c} * t^({','.join(map(str, w))}) * q^{d}"


def to_text(c: Character) -> str:
    """Canonical serialization: sorted ``coeff * t^(w1,...,wr) * q^d`` joined by ``+``."""
    parts = [_fmt_term(w, d, v) for (w, d), v in sorted(c.terms.items())]
    return " + ".join(parts) if parts else "0"


_TERM = re.compile(r"^\s*(-?\d+)\s*\*\s*t\^\(([-\d,\s]*)\)\s*\*\s*q\^(-?\d+)\s*$")


def from_text(text: str, rank: int) -> BigradedCharacter:
    text = text.strip()
    if text == "0":
        return BigradedCharacter.zero(rank)
    terms = []
    for part in text.split(" + "):
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"cannot parse character term {part!r}")
        coeff, ws, d = m.groups()
        w = tuple(int(x) for x in ws.split(",")) if ws.strip() else ()
        terms.append(((w, int(d)), int(coeff)))
    return BigradedCharacter(rank, terms)


def char_to_json(c: Character) -> dict:
    out = {"text": to_text(c)}
    if isinstance(c, TruncatedSeries):
        out["cocharacter"] = list(c.lam.components)
        out["cutoff"] = c.cutoff if c.truncated else None
    return out
