import itertools
import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from _models import random_model
from thetastrat.charkit import BigradedCharacter, Cocharacter
from thetastrat.stack import StackModel, cotangent_character
from thetastrat.strat import (
    git_stratify,
    optimal_destabilizer,
    relative_cotangent,
    stratum_cotangent,
    stratum_from_cocharacter,
    validate_stratification,
)

A1 = lambda ell: StackModel(1, [("x", (1,))], [], (ell,))  # noqa: E731
XY = StackModel(1, [("x", (1,)), ("y", (-1,))], [("u", (0,), "x*y")], (1,))


def example(a):
    du = "x*y" if a == 0 else ("x^%d" % a if a > 0 else "y^%d" % -a)
    return StackModel(1, [("x", (1,)), ("y", (-1,))], [("u", (a,), du)], (1,))


def test_destabilizer_examples():
    assert optimal_destabilizer(A1(1), [0]) is None
    d = optimal_destabilizer(A1(1), [])
    assert d.lam == Cocharacter((-1,)) and d.mu_squared == 1
    d = optimal_destabilizer(XY, [1])
    assert d.lam == Cocharacter((-1,)) and d.mu_squared == 1


def test_stratify_examples():
    s = git_stratify(A1(1))
    assert [t.lam.components for t in s] == [(-1,)] and s[0].supports == [()]
    s = git_stratify(A1(-1))
    assert [t.lam.components for t in s] == [(1,)] and s[0].supports == [(), (0,)]
    m = StackModel(1, [("x", (1,)), ("y", (-1,))], [], (1,))
    s = git_stratify(m)
    assert [t.lam.components for t in s] == [(-1,)] and s[0].supports == [(), (1,)]


def test_two_strata_ordered():
    m = StackModel(2, [("x", (1, 0)), ("y", (0, 1))], [], (-1, 1))
    s = git_stratify(m)
    assert [(t.lam.components, t.mu_squared) for t in s] == [((1, -1), 2), ((1, 0), 1)]
    assert validate_stratification(m, s) == []
    assert validate_stratification(m, s[::-1])


def test_single_stratum_ok():
    s = git_stratify(A1(1))
    assert validate_stratification(A1(1), s) == []


def test_uncovered_support_reported():
    m = StackModel(2, [("x", (1, 0)), ("y", (0, 1))], [], (-1, 1))
    assert any("not covered" in v for v in validate_stratification(m, git_stratify(m)[:1]))


def test_example_positive_weight():
    s = stratum_from_cocharacter(example(2), Cocharacter((-1,)))
    assert [g.name for g in s.A.generators()] == ["y"]
    assert s.flags["regular_embedding"] is False and s.flags["affine_bundle_over_Z"] is True


def test_example_zero_weight():
    s = stratum_from_cocharacter(example(0), Cocharacter((-1,)))
    assert [g.name for g in s.A.even] == ["y"] and [g.name for g in s.A.odd] == ["u"]
    assert not s.A.du("u")
    assert not s.B.even and [g.name for g in s.B.odd] == ["u"] and not s.B.du("u")
    assert s.flags["regular_embedding"] is True and s.flags["affine_bundle_over_Z"] is True


def test_example_negative_weight():
    s = stratum_from_cocharacter(example(-2), Cocharacter((-1,)))
    assert s.A.du("u") == s.A.element("y^2")
    assert not s.B.generators()
    assert s.flags["regular_embedding"] is True and s.flags["affine_bundle_over_Z"] is False


def test_no_relations_is_regular():
    for s in git_stratify(StackModel(1, [("x", (1,)), ("y", (2,))], [], (1,))):
        assert s.flags["regular_embedding"]


def _brute_mu_squared_bound(m, support, lam_box=4):
    """Largest ``mu^2`` over integer cocharacters in a box (lower bound for the optimum)."""
    best = Fraction(0)
    for lam in itertools.product(range(-lam_box, lam_box + 1), repeat=m.rank):
        if not any(lam):
            continue
        if any(sum(a * b for a, b in zip(lam, m.coordinates[i].action_weight)) < 0 for i in support):
            continue
        p = -sum(a * b for a, b in zip(lam, m.linearization))
        if p > 0:
            best = max(best, Fraction(p * p, sum(a * a for a in lam)))
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_destabilizer_dominates_box_search(seed):
    rng = random.Random(seed)
    m = random_model(rng, rank=rng.choice([1, 2, 3]), n_rel=(0, 0))
    for k in range(m.n_coords + 1):
        for S in itertools.combinations(range(m.n_coords), k):
            d = optimal_destabilizer(m, S)
            box = _brute_mu_squared_bound(m, S)
            if d is None:
                assert box == 0
            else:
                assert d.mu_squared >= box
                lam = d.lam.components
                assert all(sum(a * b for a, b in zip(lam, m.coordinates[i].action_weight)) >= 0 for i in S)
                p = -sum(a * b for a, b in zip(lam, m.linearization))
                assert Fraction(p * p, sum(a * a for a in lam)) == d.mu_squared


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_destabilizer_scale_invariant(seed, k):
    rng = random.Random(seed)
    m = random_model(rng, rank=rng.choice([1, 2]), n_rel=(0, 0))
    mk = m.with_linearization(tuple(k * c for c in m.linearization))
    for S in [(), tuple(range(m.n_coords))]:
        a, b = optimal_destabilizer(m, S), optimal_destabilizer(mk, S)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.lam == b.lam and b.mu_squared == k * k * a.mu_squared


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_stratification_properties(seed):
    rng = random.Random(seed)
    m = random_model(rng, rank=rng.choice([1, 2]), n_rel=(0, 2))
    strata = git_stratify(m)
    assert validate_stratification(m, strata) == []
    cot = cotangent_character(m).full
    for s in strata:
        assert all(s.lam.pair(g.weight) <= 0 for g in s.A.generators())
        assert all(s.lam.pair(w) >= 1 for (w, _d) in relative_cotangent(s, m).terms)
        assert all(s.lam.pair(w) <= 0 for (w, _d) in stratum_cotangent(s).terms)
        zero = cot.restrict_levels(s.lam, lambda k: k == 0)
        assert s.lplus + s.lminus + zero == cot
        assert {g.name for g in s.B.generators()} <= {g.name for g in s.A.generators()}
