import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _models import brute_algebra_character, random_complex, random_model
from thetastrat.baric import (
    baric_truncate,
    default_max_level,
    gamma_window,
    in_geq,
    in_lt,
    koszul_system,
    koszul_transition_is_chain_map,
    local_cohomology_series,
    pushforward,
    semiorthogonality_certificate,
    serre_window_data,
    wall_crossing_report,
)
from thetastrat.charkit import BigradedCharacter, Cocharacter, euler_specialize
from thetastrat.errors import ModelError
from thetastrat.gradedalg import FreeComplex, KoszulCdga, generator_character, unit_complex, zero_complex
from thetastrat.stack import StackModel
from thetastrat.strat import git_stratify, stratum_from_cocharacter

A1 = StackModel(1, [("x", (1,))], [], (1,))
XY = StackModel(1, [("x", (1,)), ("y", (-1,))], [("u", (0,), "x*y")], (1,))
L1 = Cocharacter((1,))


def ch(d):
    return BigradedCharacter(1, {((w,), deg): c for (w, deg), c in d.items()})


def test_truncate_split_complex():
    A = KoszulCdga(1, [("y", (-1,))])
    F = FreeComplex(A, [("a", 0, (0,)), ("b", 0, (-2,))])
    hi, lo = baric_truncate(F, L1, -1)
    assert [g.name for g in hi.gens] == ["a"] and [g.name for g in lo.gens] == ["b"]


def test_truncate_keeps_subcomplex():
    A = KoszulCdga(1, [("y", (-1,))])
    F = FreeComplex(A, [("e0", 0, (0,)), ("e1", 1, (-1,))], {(0, 1): "y"})
    hi, lo = baric_truncate(F, L1, 0)
    assert [g.name for g in hi.gens] == ["e0"] and not hi.D
    assert [g.name for g in lo.gens] == ["e1"] and not lo.D


def test_truncate_below_everything():
    A = KoszulCdga(1, [("y", (-1,))])
    F = FreeComplex(A, [("e0", 0, (0,)), ("e1", 1, (-1,))], {(0, 1): "y"})
    hi, lo = baric_truncate(F, L1, -5)
    assert hi.size == 2 and lo.size == 0


def test_truncate_rejects_positive_entry():
    A = KoszulCdga(1, [("x", (1,))])
    F = FreeComplex(A, [("e0", 0, (0,)), ("e1", 1, (1,))], {(0, 1): "x"})
    with pytest.raises(ModelError, match="level 1"):
        baric_truncate(F, L1, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(-3, 3))
def test_truncation_exhaustive_and_idempotent(seed, w):
    rng = random.Random(seed)
    m = random_model(rng, rank=rng.choice([1, 2]), n_rel=(0, 2))
    strata = git_stratify(m)
    if not strata:
        return
    s = rng.choice(strata)
    F = random_complex(rng, s.A)
    hi, lo = baric_truncate(F, s.lam, w)
    assert generator_character(hi) + generator_character(lo) == generator_character(F)
    assert hi.diagnostics() == [] and lo.diagnostics() == []
    hh, hl = baric_truncate(hi, s.lam, w)
    assert hh.size == hi.size and hl.size == 0
    lh, ll = baric_truncate(lo, s.lam, w)
    assert lh.size == 0 and ll.size == lo.size


def test_koszul_level_one():
    s = git_stratify(A1)[0]
    K = koszul_system(A1, s, 1).complex
    assert [(g.degree, g.weight) for g in K.gens] == [(0, (0,)), (-1, (1,))]
    assert K.D[(1, 0)] == A1.base.element("x")
    K3 = koszul_system(A1, s, 3).complex
    assert K3.gens[1].weight == (3,) and K3.D[(1, 0)] == A1.base.element("x^3")


def test_koszul_two_coordinates_is_tensor():
    m = StackModel(1, [("x", (1,)), ("z", (2,))], [], (1,))
    s = git_stratify(m)[0]
    K = koszul_system(m, s, 2).complex
    assert K.size == 4 and K.diagnostics() == []
    assert all(koszul_transition_is_chain_map(m, s, n) for n in (1, 2, 3))


def test_local_cohomology_of_the_origin():
    # k[x] minus k[x, 1/x] leaves -(x^-1 + x^-2 + ...), x of representation weight -1
    s = git_stratify(A1)[0]
    assert local_cohomology_series(A1, s, unit_complex(A1.base), -4) == ch({(k, 0): -1 for k in range(1, 5)})


def test_gamma_window_zero():
    s = git_stratify(A1)[0]
    g = gamma_window(zero_complex(A1.base), A1, s, 0)
    assert (g.G_geq, g.G_lt, g.stabilized_at) == (BigradedCharacter.zero(1), BigradedCharacter.zero(1), 1)


def test_gamma_window_of_koszul_complex():
    # K_1 is already supported on the stratum: its class is -t times the stratum's structure sheaf
    s = git_stratify(A1)[0]
    K = koszul_system(A1, s, 1).complex
    g = gamma_window(K, A1, s, -10)
    assert g.G_geq == ch({(1, 0): -1})


def test_gamma_window_xy():
    s = git_stratify(XY)[0]
    g = gamma_window(unit_complex(XY.base), XY, s, -2)
    assert g.G_geq == ch({(1, 0): -1, (2, 0): -1})
    assert g.stabilized_at <= default_max_level(XY, s, unit_complex(XY.base), -2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(-4, 2))
def test_gamma_window_matches_closed_form(seed, w):
    rng = random.Random(seed)
    m = random_model(rng, rank=rng.choice([1, 2]), n_rel=(0, 2))
    F = random_complex(rng, m.base, depth=1)
    for s in git_stratify(m):
        if not any(g.name in s.killed for g in m.base.even):
            continue
        g = gamma_window(F, m, s, w)
        assert g.G_geq == local_cohomology_series(m, s, F, w)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_stratum_algebra_factorizes(seed):
    # A = B (x) Sym(L^-) as characters whenever B has no even generators
    from thetastrat.charkit import sym_series
    from thetastrat.kloc import odd_part

    rng = random.Random(seed)
    m = random_model(rng, rank=rng.choice([1, 2]), n_rel=(0, 2))
    for s in git_stratify(m):
        if s.B.even:
            continue
        lhs = brute_algebra_character(s.A, s.lam, -10)
        gens = s.lminus.generators()
        sym = sym_series(gens, s.lam, -10).as_character() if gens else BigradedCharacter.one(m.rank)
        rhs = (euler_specialize(odd_part(s.B)) * euler_specialize(sym)).restrict_levels(s.lam, lambda k: k >= -10)
        assert lhs == rhs


def test_serre_examples():
    assert serre_window_data(XY, git_stratify(XY)[0]).a == -1
    assert serre_window_data(A1, git_stratify(A1)[0]).a == 0
    XYZ = StackModel(1, [("x", (1,)), ("y", (-1,)), ("z", (-3,))], [("u", (0,), "x*y")], (1,))
    assert serre_window_data(XYZ, stratum_from_cocharacter(XYZ, Cocharacter((-1,)))).a == -4


@given(st.integers(-50, 50))
def test_flip_is_involution(w):
    sw = serre_window_data(XY, git_stratify(XY)[0])
    assert sw.flip(sw.flip(w)) == w


def test_wall_crossing_examples():
    r = wall_crossing_report(StackModel(1, [("x", (1,)), ("y", (-1,))], [], (0,)), (1,))
    assert r["c"] == 0 and r["case"] == "equivalence"
    r = wall_crossing_report(StackModel(1, [("x", (1,)), ("y", (-2,))], [], (0,)), (1,))
    assert r["c"] == 1 and r["case"] == "embed_plus_into_minus" and r["window_difference"] == 1
    r = wall_crossing_report(StackModel(1, [("x", (1,)), ("y", (-1,))], [("u", (1,), "x^2*y")], (0,)), (1,))
    assert r["hypothesis_ok"] is False and "case" not in r


def test_certificates_xy():
    s = git_stratify(XY)[0]
    at = lambda level: pushforward(XY, s, (-level,))  # noqa: E731  (lambda = -1)
    assert semiorthogonality_certificate(at(0), at(-1))["status"] == "certified"
    assert semiorthogonality_certificate(at(0), at(0))["status"] == "failed"
    assert semiorthogonality_certificate(zero_complex(XY.base), at(0))["status"] == "certified"
    assert in_geq(XY, s, at(0), 0) and not in_geq(XY, s, at(-1), 0)


def test_lt_membership_by_duality():
    s = git_stratify(A1)[0]
    unit = unit_complex(A1.base)
    tw = lambda v: FreeComplex(A1.base, [("e", 0, (v,))])  # noqa: E731
    # the origin of A^1: the unit restricts to level 0 and its !-restriction to level -1
    assert in_geq(A1, s, unit, 0) and in_lt(A1, s, unit, 0)
    assert in_geq(A1, s, tw(-1), 0) and not in_lt(A1, s, tw(-1), 0)
    assert in_lt(A1, s, tw(1), 0) and not in_geq(A1, s, tw(1), 0)
