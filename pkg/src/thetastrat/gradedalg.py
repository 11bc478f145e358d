"""Weighted Koszul CDGAs ``k[x_i ; u_j | du_j = f_j]`` and semifree complexes over them.

Elements are stored as ``{(alpha, U): coeff}`` where ``alpha`` is an exponent
vector over the even variables and ``U`` a strictly increasing tuple of odd
variable indices.  Complexes use the convention ``d(e_l) = sum_k D[k, l] e_k``
and ``d(a e) = d(a) e + (-1)^|a| a d(e)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from . import _linalg
from .charkit import BigradedCharacter, Weight, add_weights, as_weight, neg_weight, zero_weight
from .errors import ModelError, RankMismatch

Mono = Tuple[Tuple[int, ...], Tuple[int, ...]]
Terms = Dict[Mono, Fraction]


# -- raw term arithmetic ---------------------------------------------------

def _merge_sign(u: Tuple[int, ...], v: Tuple[int, ...]) -> int:
    """Sign of sorting the concatenation ``u + v``; 0 if they share an index."""
    if set(u) & set(v):
        return 0
    inv = sum(1 for i in u for j in v if i > j)
    return -1 if inv % 2 else 1


def _sort_sign(seq: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sign of the permutation sorting ``seq`` (0 on repeats) and the sorted tuple."""
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def _clean(terms: Mapping[Mono, Fraction]) -> Terms:
    return {k: v for k, v in terms.items() if v != 0}


def _add(a: Terms, b: Terms, scale=1) -> Terms:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + scale * v
    return _clean(out)


def _mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for (al, u), c1 in a.items():
        for (be, v), c2 in b.items():
            s = _merge_sign(u, v)
            if not s:
                continue
            k = (tuple(x + y for x, y in zip(al, be)), tuple(sorted(u + v)))
            out[k] = out.get(k, 0) + s * c1 * c2
    return _clean(out)


# -- polynomial parser -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9']*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", num))
        elif name is not None:
            toks.append(("name", name))
        else:
            if op not in "+-*^()":
                raise ModelError(f"unexpected character {op!r} in polynomial {text!r}")
            toks.append(("op", op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text, even_names, odd_names):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.even = {n: i for i, n in enumerate(even_names)}
        self.odd = {n: i for i, n in enumerate(odd_names)}
        self.ne = len(even_names)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg):
        raise ModelError(f"cannot parse polynomial {self.text!r}: {msg}")

    def const(self, c) -> Terms:
        return _clean({((0,) * self.ne, ()): Fraction(c)})

    def parse(self) -> Terms:
        if not self.toks:
            self.fail("empty expression")
        out = self.expr()
        if self.i != len(self.toks):
            self.fail(f"trailing token {self.peek()[1]!r}")
        return out

    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            acc = _add(acc, self.term(), 1 if op == "+" else -1)
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            acc = _mul(acc, self.unary())
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return _add({}, self.unary(), -1)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or "/" in val:
                self.fail("exponent must be a non-negative integer")
            out = self.const(1)
            for _ in range(int(val)):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.const(Fraction(val))
        if kind == "name":
            if val in self.even:
                a = [0] * self.ne
                a[self.even[val]] = 1
                return {(tuple(a), ()): Fraction(1)}
            if val in self.odd:
                return {((0,) * self.ne, (self.odd[val],)): Fraction(1)}
            self.fail(f"unknown variable {val!r}")
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return inner
        self.fail(f"unexpected token {val!r}")


def parse_terms(text: str, even_names: Sequence[str], odd_names: Sequence[str] = ()) -> Terms:
    """Parse ``+ - * ^`` expressions with rational literals ``p/q`` into raw terms."""
    return _Parser(str(text), list(even_names), list(odd_names)).parse()


# -- CDGA ------------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    weight: Weight


class KoszulCdga:
    """Free graded-commutative algebra on even ``x_i`` and degree-1 odd ``u_j`` with ``du_j = f_j``.

    Weights are representation weights.  ``du`` entries may be given as
    polynomial strings in the even names or as ``{alpha: coeff}`` maps.
    """

    def __init__(self, rank: int, even: Iterable[tuple], odd: Iterable[tuple] = ()):
        self.rank = int(rank)
        self.even = [Generator(str(n), 0, as_weight(w)) for n, w in even]
        odd = list(odd)
        self.odd = [Generator(str(o[0]), 1, as_weight(o[1])) for o in odd]
        names = [g.name for g in self.even + self.odd]
        if len(set(names)) != len(names):
            raise ModelError("duplicate generator names", [n for n in names if names.count(n) > 1])
        for g in self.even + self.odd:
            if len(g.weight) != self.rank:
                raise RankMismatch(f"generator {g.name}: weight {g.weight} does not have rank {self.rank}")
        self.even_index = {g.name: i for i, g in enumerate(self.even)}
        self.odd_index = {g.name: i for i, g in enumerate(self.odd)}
        ne = len(self.even)
        self._du: list[Terms] = []
        for o in odd:
            f = o[2] if len(o) > 2 else 0
            if isinstance(f, CdgaElement):
                terms = f.terms
            elif isinstance(f, str):
                terms = parse_terms(f, [g.name for g in self.even])
            elif isinstance(f, Mapping):
                terms = _clean({(as_weight(a), ()): Fraction(c) for a, c in f.items()})
            elif f == 0 or f is None:
                terms = {}
            else:
                terms = _clean({((0,) * ne, ()): Fraction(f)})
            if any(u for (_a, u) in terms):
                raise ModelError(f"differential of {o[0]} must not involve odd variables")
            self._du.append(terms)
        problems = self.diagnostics()
        if problems:
            raise ModelError("inhomogeneous differential", problems)

    # structure --------------------------------------------------------
    @property
    def n_even(self):
        return len(self.even)

    @property
    def n_odd(self):
        return len(self.odd)

    def generators(self) -> list[Generator]:
        return self.even + self.odd

    def names(self) -> list[str]:
        return [g.name for g in self.generators()]

    def mono_weight(self, alpha, u) -> Weight:
        w = zero_weight(self.rank)
        for i, a in enumerate(alpha):
            if a:
                w = add_weights(w, tuple(a * c for c in self.even[i].weight))
        for j in u:
            w = add_weights(w, self.odd[j].weight)
        return w

    def diagnostics(self) -> list[str]:
        out = []
        for j, f in enumerate(self._du):
            for (a, _u) in f:
                if self.mono_weight(a, ()) != self.odd[j].weight:
                    out.append(
                        f"relation {self.odd[j].name}: term {_mono_text(self, a, ())} has weight "
                        f"{self.mono_weight(a, ())}, expected {self.odd[j].weight}"
                    )
                    break
        return out

    def du(self, name_or_index) -> "CdgaElement":
        j = self.odd_index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return CdgaElement(self, self._du[j])

    def character_generators(self) -> list[tuple[Weight, int]]:
        return [(g.weight, g.degree) for g in self.generators()]

    # elements ---------------------------------------------------------
    def zero(self) -> "CdgaElement":
        return CdgaElement(self, {})

    def one(self) -> "CdgaElement":
        return self.scalar(1)

    def scalar(self, c) -> "CdgaElement":
        return CdgaElement(self, _clean({((0,) * self.n_even, ()): Fraction(c)}))

    def var(self, name: str) -> "CdgaElement":
        return self.element(name)

    def element(self, text) -> "CdgaElement":
        if isinstance(text, CdgaElement):
            return text.transfer(self)
        if isinstance(text, (int, Fraction)):
            return self.scalar(text)
        return CdgaElement(self, parse_terms(text, [g.name for g in self.even], [g.name for g in self.odd]))

    def d_terms(self, terms: Terms) -> Terms:
        out: Terms = {}
        for (alpha, u), c in terms.items():
            for p, j in enumerate(u):
                rest = u[:p] + u[p + 1:]
                sign = -1 if p % 2 else 1
                for (beta, _), fc in self._du[j].items():
                    k = (tuple(a + b for a, b in zip(alpha, beta)), rest)
                    out[k] = out.get(k, 0) + sign * c * fc
        return _clean(out)

    def check_d_squared(self) -> bool:
        # du_j lies in the even part, so d(du_j) = 0 always; asserted anyway.
        return all(not self.d_terms(f) for f in self._du)

    def with_generators(self, even=(), odd=()) -> "KoszulCdga":
        """A new CDGA with extra generators appended; new ``odd`` entries are ``(name, weight, du)``."""
        all_even = [(g.name, g.weight) for g in self.even] + [(n, as_weight(w)) for n, w in even]
        pad = len(all_even) - self.n_even
        old_odd = [
            (g.name, g.weight, {a + (0,) * pad: c for (a, _u), c in self._du[j].items()})
            for j, g in enumerate(self.odd)
        ]
        return KoszulCdga(self.rank, all_even, old_odd + list(odd))

    def to_json(self) -> dict:
        return {
            "even": [{"name": g.name, "rep_weight": list(g.weight)} for g in self.even],
            "odd": [
                {"name": g.name, "rep_weight": list(g.weight), "du": CdgaElement(self, self._du[j]).to_text()}
                for j, g in enumerate(self.odd)
            ],
        }

    def __repr__(self):
        gens = ", ".join(g.name for g in self.even)
        odd = ", ".join(f"{g.name}: d{g.name}={self.du(j).to_text()}" for j, g in enumerate(self.odd))
        return f"KoszulCdga(k[{gens}{'; ' + odd if odd else ''}])"

    def same_as(self, other: "KoszulCdga") -> bool:
        return self.to_json() == other.to_json() and self.rank == other.rank


def _mono_text(cdga: KoszulCdga, alpha, u) -> str:
    parts = []
    for i, a in enumerate(alpha):
        if a == 1:
            parts.append(cdga.even[i].name)
        elif a > 1:
            parts.append(f"{cdga.even[i].name}^{a}")
    parts.extend(cdga.odd[j].name for j in u)
    return "*".join(parts)


class CdgaElement:
    """An element of a ``KoszulCdga``."""

    __slots__ = ("cdga", "terms")

    def __init__(self, cdga: KoszulCdga, terms: Mapping[Mono, Fraction]):
        self.cdga = cdga
        self.terms = _clean({k: Fraction(v) for k, v in terms.items()})

    def _coerce(self, other) -> "CdgaElement":
        if isinstance(other, CdgaElement):
            if other.cdga is not self.cdga:
                raise ModelError("elements belong to different CDGAs")
            return other
        return self.cdga.scalar(other)

    def __add__(self, other):
        return CdgaElement(self.cdga, _add(self.terms, self._coerce(other).terms))

    __radd__ = __add__

    def __sub__(self, other):
        return CdgaElement(self.cdga, _add(self.terms, self._coerce(other).terms, -1))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CdgaElement(self.cdga, {k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        return CdgaElement(self.cdga, _mul(self.terms, self._coerce(other).terms))

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.cdga.scalar(other)
        if not isinstance(other, CdgaElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"CdgaElement({self.to_text()})"

    def d(self) -> "CdgaElement":
        return CdgaElement(self.cdga, self.cdga.d_terms(self.terms))

    def degrees(self) -> set[int]:
        return {len(u) for (_a, u) in self.terms}

    def weights(self) -> set[Weight]:
        return {self.cdga.mono_weight(a, u) for (a, u) in self.terms}

    def is_homogeneous(self) -> bool:
        return len({(len(u), self.cdga.mono_weight(a, u)) for (a, u) in self.terms}) <= 1

    @property
    def degree(self) -> int | None:
        ds = self.degrees()
        if len(ds) > 1:
            raise ModelError(f"element {self.to_text()} is not homogeneous in degree")
        return ds.pop() if ds else None

    @property
    def weight(self) -> Weight | None:
        ws = self.weights()
        if len(ws) > 1:
            raise ModelError(f"element {self.to_text()} is not weight-homogeneous")
        return ws.pop() if ws else None

    def poly_degree(self) -> int:
        return max((sum(a) for (a, _u) in self.terms), default=0)

    def transfer(self, target: KoszulCdga) -> "CdgaElement":
        """Map to ``target`` by generator name; generators absent from ``target`` go to 0."""
        src = self.cdga
        emap = {i: target.even_index.get(g.name) for i, g in enumerate(src.even)}
        omap = {j: target.odd_index.get(g.name) for j, g in enumerate(src.odd)}
        out: Terms = {}
        for (alpha, u), c in self.terms.items():
            if any(a and emap[i] is None for i, a in enumerate(alpha)):
                continue
            if any(omap[j] is None for j in u):
                continue
            beta = [0] * target.n_even
            for i, a in enumerate(alpha):
                if a:
                    beta[emap[i]] = a
            sign, v = _sort_sign([omap[j] for j in u])
            k = (tuple(beta), v)
            out[k] = out.get(k, 0) + sign * c
        return CdgaElement(target, out)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (alpha, u), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][1]), -sum(kv[0][0]), kv[0])):
            mono = _mono_text(self.cdga, alpha, u)
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            parts.append(s)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


MultiPoly = CdgaElement  # polynomials are the elements with no odd factors


def cdga_mul(a: CdgaElement, b: CdgaElement) -> CdgaElement:
    return a * b


def cdga_apply_d(a: CdgaElement, b: CdgaElement | None = None) -> CdgaElement:
    """``d(a)``, or ``d(a*b)`` when ``b`` is given."""
    return (a * b).d() if b is not None else a.d()


# -- semifree complexes ------------------------------------------------------

@dataclass(frozen=True)
class ModuleGen:
    name: str
    degree: int
    weight: Weight


class FreeComplex:
    """Semifree complex ``base ⊗ span(e_k)`` with ``d(e_l) = sum_k D[(k, l)] e_k``.

    The constructor checks weight homogeneity, degrees and ``d^2 = 0``.
    """

    def __init__(self, base: KoszulCdga, gens: Iterable, differential: Mapping | None = None, check: bool = True):
        self.base = base
        gl = []
        for g in gens:
            if isinstance(g, ModuleGen):
                gl.append(g)
            else:
                name, deg, wt = g
                gl.append(ModuleGen(str(name), int(deg), as_weight(wt)))
        self.gens = gl
        for g in self.gens:
            if len(g.weight) != base.rank:
                raise RankMismatch(f"module generator {g.name}: weight {g.weight} does not have rank {base.rank}")
        D = {}
        for (k, l), e in (differential or {}).items():
            e = base.element(e) if not isinstance(e, CdgaElement) or e.cdga is not base else e
            if e:
                D[(int(k), int(l))] = e
        self.D = D
        if check:
            problems = self.diagnostics()
            if problems:
                raise ModelError("invalid complex", problems)

    @property
    def size(self):
        return len(self.gens)

    def entry(self, k, l) -> CdgaElement:
        return self.D.get((k, l), self.base.zero())

    def diagnostics(self) -> list[str]:
        out = []
        n = self.size
        for (k, l), e in self.D.items():
            if not (0 <= k < n and 0 <= l < n):
                out.append(f"differential entry ({k},{l}) out of range")
                continue
            gk, gl = self.gens[k], self.gens[l]
            want_deg = gl.degree - gk.degree - 1
            want_wt = tuple(a - b for a, b in zip(gl.weight, gk.weight))
            for (a, u) in e.terms:
                if len(u) != want_deg or self.base.mono_weight(a, u) != want_wt:
                    out.append(
                        f"entry {gk.name} <- {gl.name} ({e.to_text()}): expected degree {want_deg}, weight {want_wt}"
                    )
                    break
        if out:
            return out
        for l in range(n):
            dd = self.d_of_combination({l: self.base.one()})
            dd = self.d_of_combination(dd)
            for m, v in dd.items():
                if v:
                    out.append(f"d^2 != 0 on generator {self.gens[l].name} (component {self.gens[m].name}: {v.to_text()})")
        return out

    def d_of_combination(self, comb: Mapping[int, CdgaElement]) -> Dict[int, CdgaElement]:
        """Apply d to ``sum_l a_l e_l``."""
        out: Dict[int, Terms] = {}
        for l, a in comb.items():
            if not a:
                continue
            t = self.base.d_terms(a.terms)
            if t:
                out[l] = _add(out.get(l, {}), t)
            for (k, ll), e in self.D.items():
                if ll != l:
                    continue
                signed: Terms = {}
                for (al, u), c in a.terms.items():
                    part = _mul({(al, u): c}, e.terms)
                    s = -1 if len(u) % 2 else 1
                    for key, v in part.items():
                        signed[key] = signed.get(key, 0) + s * v
                out[k] = _add(out.get(k, {}), _clean(signed))
        return {k: CdgaElement(self.base, v) for k, v in out.items() if v}

    def generator_character(self) -> BigradedCharacter:
        return generator_character(self)

    def with_base(self, target: KoszulCdga, check: bool = True) -> "FreeComplex":
        """Base change along the name-matching map (absent generators go to 0)."""
        D = {kl: e.transfer(target) for kl, e in self.D.items()}
        return FreeComplex(target, self.gens, D, check=check)

    def to_json(self) -> dict:
        return {
            "generators": [{"name": g.name, "degree": g.degree, "rep_weight": list(g.weight)} for g in self.gens],
            "differential": [
                {"from": self.gens[l].name, "to": self.gens[k].name, "entry": e.to_text()}
                for (k, l), e in sorted(self.D.items())
            ],
        }

    def __repr__(self):
        return f"FreeComplex({[(g.name, g.degree, g.weight) for g in self.gens]}, {len(self.D)} entries)"


def generator_character(F: FreeComplex) -> BigradedCharacter:
    return BigradedCharacter(F.base.rank, [((g.weight, g.degree), 1) for g in F.gens])


def unit_complex(base: KoszulCdga, weight: Sequence[int] | None = None, degree: int = 0, name: str = "1") -> FreeComplex:
    w = as_weight(weight) if weight is not None else zero_weight(base.rank)
    return FreeComplex(base, [(name, degree, w)])


def zero_complex(base: KoszulCdga) -> FreeComplex:
    return FreeComplex(base, [])


def complex_shift(F: FreeComplex, n: int) -> FreeComplex:
    sign = -1 if n % 2 else 1
    gens = [ModuleGen(g.name, g.degree + n, g.weight) for g in F.gens]
    return FreeComplex(F.base, gens, {kl: e * sign for kl, e in F.D.items()}, check=False)


def complex_twist(F: FreeComplex, weight: Sequence[int]) -> FreeComplex:
    w = as_weight(weight)
    gens = [ModuleGen(g.name, g.degree, add_weights(g.weight, w)) for g in F.gens]
    return FreeComplex(F.base, gens, F.D, check=False)


def direct_sum(*parts: FreeComplex) -> FreeComplex:
    if not parts:
        raise ValueError("direct_sum needs at least one summand")
    base = parts[0].base
    gens, D, off = [], {}, 0
    for i, P in enumerate(parts):
        if P.base is not base:
            raise ModelError("summands over different CDGAs")
        gens.extend(ModuleGen(f"{g.name}#{i}" if len(parts) > 1 else g.name, g.degree, g.weight) for g in P.gens)
        D.update({(k + off, l + off): e for (k, l), e in P.D.items()})
        off += P.size
    return FreeComplex(base, gens, D, check=False)


def complex_tensor(F: FreeComplex, G: FreeComplex, check: bool = True) -> FreeComplex:
    """``F ⊗_A G`` on generators ``e_k ⊗ f_n`` (index ``k * |G| + n``)."""
    if F.base is not G.base:
        raise ModelError("tensor factors over different CDGAs")
    base = F.base
    m = G.size
    gens = [
        ModuleGen(f"{e.name}*{f.name}", e.degree + f.degree, add_weights(e.weight, f.weight))
        for e in F.gens
        for f in G.gens
    ]
    D: Dict[Tuple[int, int], CdgaElement] = {}
    for (l, k), e in F.D.items():
        for n in range(m):
            D[(l * m + n, k * m + n)] = e
    for (p, n), g in G.D.items():
        for k, ek in enumerate(F.gens):
            sign = -1 if (ek.degree * (1 + g.degree)) % 2 else 1
            key = (k * m + p, k * m + n)
            D[key] = D.get(key, base.zero()) + g * sign
    return FreeComplex(base, gens, D, check=check)


def complex_dual(F: FreeComplex, check: bool = True) -> FreeComplex:
    """``Hom_A(F, A)`` on dual generators ``e_k^v`` of degree ``-|e_k|`` and weight ``-wt(e_k)``."""
    gens = [ModuleGen(f"{g.name}^v", -g.degree, neg_weight(g.weight)) for g in F.gens]
    D = {}
    for (k, l), e in F.D.items():
        dk = F.gens[k].degree
        de = e.degree or 0
        sign = -1 if (dk * (1 + de)) % 2 == 0 else 1
        D[(l, k)] = e * sign
    return FreeComplex(F.base, gens, D, check=check)


def complex_hom(F: FreeComplex, G: FreeComplex, check: bool = True) -> FreeComplex:
    return complex_tensor(complex_dual(F, check=check), G, check=check)


def subcomplex(F: FreeComplex, keep: Sequence[int], check: bool = True) -> FreeComplex:
    """Restrict to the generators ``keep`` (entries between kept generators only)."""
    idx = {old: new for new, old in enumerate(keep)}
    D = {(idx[k], idx[l]): e for (k, l), e in F.D.items() if k in idx and l in idx}
    return FreeComplex(F.base, [F.gens[i] for i in keep], D, check=check)


# -- weight-zero truncated homology -----------------------------------------

@dataclass
class HomologyResult:
    dims: list
    stabilized: bool
    min_degree: int
    degree_bound: int

    @property
    def euler(self) -> int:
        return sum((-d if (self.min_degree + i) % 2 else d) for i, d in enumerate(self.dims))

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "min_degree": self.min_degree,
            "degree_bound": self.degree_bound,
            "stabilized": self.stabilized,
            "euler": self.euler,
        }


def _exponents_by_weight(cdga: KoszulCdga, bound: int) -> Dict[Weight, list]:
    """All even-variable exponent vectors of total degree ``<= bound``, grouped by weight."""
    n = cdga.n_even
    out: Dict[Weight, list] = {}
    for total in range(bound + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            a = [0] * n
            for i in combo:
                a[i] += 1
            a = tuple(a)
            out.setdefault(cdga.mono_weight(a, ()), []).append(a)
    if n == 0:
        out = {zero_weight(cdga.rank): [()]}
    return out


def _chain_basis(F: FreeComplex, bound: int):
    cdga = F.base
    by_wt = _exponents_by_weight(cdga, bound)
    basis: Dict[int, list] = {}
    for r in range(cdga.n_odd + 1):
        for u in itertools.combinations(range(cdga.n_odd), r):
            wu = cdga.mono_weight((0,) * cdga.n_even, u)
            for k, g in enumerate(F.gens):
                need = neg_weight(add_weights(wu, g.weight))
                for a in by_wt.get(need, []):
                    basis.setdefault(r + g.degree, []).append((a, u, k))
    return basis


def _chain_d(F: FreeComplex, chain):
    """``d(x^a u_U e_k)`` as a dict ``(a, U, m) -> coeff``."""
    a, u, k = chain
    cdga = F.base
    out: Dict[tuple, Fraction] = {}
    for (b, v), c in cdga.d_terms({(a, u): Fraction(1)}).items():
        out[(b, v, k)] = out.get((b, v, k), 0) + c
    s = -1 if len(u) % 2 else 1
    for (m, l), e in F.D.items():
        if l != k:
            continue
        for (b, v), c in _mul({(a, u): Fraction(1)}, e.terms).items():
            out[(b, v, m)] = out.get((b, v, m), 0) + s * c
    return {key: v for key, v in out.items() if v}


def _homology_at_bound(F: FreeComplex, bound: int, lo: int, hi: int, images) -> list[int]:
    basis = _chain_basis(F, bound)
    z, dsub = {}, {}
    for deg in range(lo, hi + 2):
        chains = [c for c in basis.get(deg, [])]
        col: Dict[tuple, int] = {}
        full_rows, high_rows = [], []
        for c in chains:
            img = images(c)
            row = {}
            hrow = {}
            for key, v in img.items():
                j = col.setdefault(key, len(col))
                row[j] = v
                if sum(key[0]) > bound:
                    hrow[j] = v
            full_rows.append(row)
            high_rows.append(hrow)
        z[deg] = len(chains) - _linalg.rank(full_rows)
        dsub[deg] = len(chains) - _linalg.rank(high_rows)
    return [z[k] - dsub[k + 1] + z[k + 1] for k in range(lo, hi + 1)]


def weight0_truncated_homology(F: FreeComplex, degree_bound: int) -> HomologyResult:
    """Homology dimensions of the weight-0 chains of ``F`` with even-variable degree ``<= degree_bound``.

    Works on the subcomplex of truncated chains whose boundary is still
    truncated (d never lowers polynomial degree).  ``stabilized`` requires the
    answer at bounds ``N-2``, ``N-1`` and ``N`` to agree.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be non-negative")
    if not F.gens:
        return HomologyResult([], True, 0, degree_bound)
    lo = min(g.degree for g in F.gens)
    hi = max(g.degree for g in F.gens) + F.base.n_odd
    cache: dict = {}

    def images(c):
        r = cache.get(c)
        if r is None:
            r = cache[c] = _chain_d(F, c)
        return r

    results = [
        _homology_at_bound(F, b, lo, hi, images) for b in range(max(degree_bound - 2, 0), degree_bound + 1)
    ]
    stable = len(results) == 3 and results[0] == results[1] == results[2]
    return HomologyResult(results[-1], stable, lo, degree_bound)
