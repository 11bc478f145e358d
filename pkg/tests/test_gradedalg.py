import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _models import brute_invariant_euler, random_complex, random_model
from thetastrat.charkit import BigradedCharacter
from thetastrat.errors import ModelError
from thetastrat.gradedalg import (
    FreeComplex,
    KoszulCdga,
    cdga_apply_d,
    cdga_mul,
    complex_dual,
    complex_hom,
    complex_shift,
    complex_tensor,
    complex_twist,
    generator_character,
    parse_terms,
    unit_complex,
    weight0_truncated_homology,
    zero_complex,
)


@pytest.fixture
def xy():
    return KoszulCdga(1, [("x", (-1,)), ("y", (1,))], [("u", (0,), "x*y")])


def test_odd_square_vanishes(xy):
    u = xy.var("u")
    assert not cdga_mul(u, u)


def test_d_of_u(xy):
    assert cdga_apply_d(xy.var("u")) == xy.element("x*y")


def test_leibniz_with_closed_even(xy):
    x = xy.var("x")
    assert cdga_apply_d(x, xy.var("u")) == x * xy.element("x*y")


def test_odd_variables_anticommute():
    A = KoszulCdga(1, [], [("u", (1,), "0"), ("v", (2,), "0")])
    u, v = A.var("u"), A.var("v")
    assert u * v == -(v * u)
    assert A.element("u*v + v*u") == A.zero()


def test_parser():
    t = parse_terms("3/2*x^2*y - (x - y)*x + 2", ["x", "y"])
    assert t == {((2, 1), ()): 1.5, ((2, 0), ()): -1, ((1, 1), ()): 1, ((0, 0), ()): 2}
    with pytest.raises(ModelError):
        parse_terms("x + z", ["x"])
    with pytest.raises(ModelError):
        parse_terms("x^", ["x"])


def test_inhomogeneous_relation_rejected():
    with pytest.raises(ModelError):
        KoszulCdga(1, [("x", (-1,)), ("y", (1,))], [("u", (0,), "x + y")])


def test_tensor_unit(xy):
    K = FreeComplex(xy, [("e", 0, (0,)), ("f", 1, (-1,))], {(0, 1): "x"})
    T = complex_tensor(K, unit_complex(xy))
    assert generator_character(T) == generator_character(K)
    assert T.D == K.D


def test_double_dual_generators(xy):
    K = FreeComplex(xy, [("e", 0, (0,)), ("f", 1, (-1,))], {(0, 1): "x"})
    DD = complex_dual(complex_dual(K))
    assert [(g.degree, g.weight) for g in DD.gens] == [(g.degree, g.weight) for g in K.gens]


def test_generator_character_examples(xy):
    assert generator_character(unit_complex(xy)) == BigradedCharacter.one(1)
    w = 1
    K = FreeComplex(xy, [("e", 0, (0,)), ("f", 1, (-w,))], {(0, 1): "x"})
    assert generator_character(K) == BigradedCharacter(1, {((-w,), 1): 1, ((0,), 0): 1})
    assert generator_character(complex_shift(K, 1)) == generator_character(K).shift(1)


def test_homology_examples(xy):
    h = weight0_truncated_homology(unit_complex(xy), 6)
    assert h.dims == [1, 0] and h.stabilized
    kx = KoszulCdga(1, [("x", (-1,))])
    h = weight0_truncated_homology(unit_complex(kx), 6)
    assert h.dims == [1] and h.stabilized
    assert weight0_truncated_homology(zero_complex(kx), 6).dims == []


def test_d_squared_checked(xy):
    with pytest.raises(ModelError):
        FreeComplex(xy, [("e", 0, (0,)), ("g", 2, (0,))], {(0, 1): "u"})


def _random_pair(seed):
    rng = random.Random(seed)
    m = random_model(rng, rank=rng.choice([1, 2]), n_rel=(0, 2))
    return m, random_complex(rng, m.base), random_complex(rng, m.base)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_constructions_satisfy_d_squared(seed):
    m, F, G = _random_pair(seed)
    for X in (complex_tensor(F, G, check=False), complex_dual(F, check=False), complex_hom(F, G, check=False)):
        assert X.diagnostics() == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_hom_character(seed):
    m, F, G = _random_pair(seed)
    assert generator_character(complex_hom(F, G)) == generator_character(F).dual() * generator_character(G)
    assert generator_character(complex_tensor(F, G)) == generator_character(F) * generator_character(G)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_homology_euler_matches_chain_count(seed):
    # positive action weights on a rank-1 torus: weight spaces of chains are finite
    rng = random.Random(seed)
    m = random_model(rng, rank=1, n_coords=(1, 3), n_rel=(0, 2), sign=1, ell=(-1,))
    F = complex_twist(random_complex(rng, m.base, depth=1), (rng.randint(0, 4),))
    bound = 12
    h = weight0_truncated_homology(F, bound)
    assert h.stabilized
    assert h.euler == brute_invariant_euler(m.base, F, bound)
