from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings

from oracle import OMap, alpha1_formula, alpha2_formula, as_fr
from ploi.construct import alpha1, alpha2, bump
from ploi.plcore import (
    Interval,
    PLError,
    PLMap,
    breakpoint_images_ok,
    commutator,
    compose,
    conjugate,
    end_slopes,
    eval_at,
    eval_inverse,
    fmt,
    identity,
    inverse,
    one_bump_factors,
    power,
    rational,
    restrict,
    support,
)
from strategies import pl_maps, unit_rationals, w2_elements

q = rational
A1, A2 = alpha1(), alpha2()


def iv(a, b):
    return Interval(q(a), q(b))


# --- frozen examples


def test_identity_examples():
    assert eval_at(identity(), q("1/3")) == q("1/3")
    assert compose(identity(), A2) == A2
    assert support(identity()) == []


@pytest.mark.parametrize("x,y", [("1/4", "1/2"), ("1/8", "1/4")])
def test_alpha1_values(x, y):
    assert eval_at(A1, q(x)) == q(y)


def test_alpha2_fixes_right_half():
    assert eval_at(A2, q("3/4")) == q("3/4")


def test_compose_examples():
    assert compose(A1, inverse(A1)) == identity()
    assert eval_at(compose(A1, A1), q("1/8")) == q("1/2")


def test_inverse_examples():
    assert inverse(identity()) == identity()
    assert eval_at(inverse(A1), q("1/2")) == q("1/4")
    assert inverse(inverse(A2)) == A2


def test_power_conjugate_commutator_examples():
    assert support(conjugate(A2, A1)) == [iv("1/2", "3/4")]
    assert power(A1, 0) == identity()
    assert commutator(A2, A2) == identity()


def test_support_examples():
    assert support(A2) == [iv("1/4", "1/2")]
    assert support(A1) == [iv(0, 1)]


def test_one_bump_factors_examples():
    assert one_bump_factors(A2) == [A2]
    assert one_bump_factors(identity()) == []
    f = compose(bump(iv("1/8", "1/4")), bump(iv("1/2", "3/4")))
    fs = one_bump_factors(f)
    assert len(fs) == 2
    assert compose(*fs) == f
    assert [support(g) for g in fs] == [[iv("1/8", "1/4")], [iv("1/2", "3/4")]]


def test_end_slopes_examples():
    assert end_slopes(A1, iv(0, 1)) == (2, q("1/2"))
    assert end_slopes(A2, iv(0, 1)) == (1, 1)
    assert end_slopes(identity(), iv("1/3", "2/3")) == (1, 1)


def test_end_slopes_requires_fixed_ends():
    with pytest.raises(PLError):
        end_slopes(A1, iv("1/4", "1/2"))


def test_fmt_lowest_terms():
    assert fmt(q("2/4")) == "1/2"
    assert fmt(q(0)) == "0"
    assert fmt(q("-6/4")) == "-3/2"


def test_rejects_floats_and_bad_maps():
    with pytest.raises(PLError):
        rational(0.5)
    with pytest.raises(PLError):
        PLMap([(0, 0), (q("1/2"), q("1/2")), (q("1/2"), 1), (1, 1)])
    with pytest.raises(PLError):
        PLMap([(0, q("1/8")), (1, 1)])
    with pytest.raises(PLError):
        Interval(q("1/2"), q("1/4"))


def test_normalization_removes_collinear_points():
    f = PLMap([(0, 0), (q("1/8"), q("1/4")), (q("1/4"), q("1/2")), (q("3/8"), q("5/8")), (q("1/2"), q("3/4")), (1, 1)])
    assert f == A1
    assert f.breakpoints == A1.breakpoints
    assert hash(f) == hash(A1)


def test_support_with_interior_fixed_point_and_crossing():
    f = PLMap([(0, 0), (q("1/4"), q("1/2")), (q("3/4"), q("5/8")), (1, 1)])
    # f(x) - x changes sign at 7/12
    assert support(f) == [iv(0, "7/12"), iv("7/12", 1)]
    g = PLMap([(0, 0), (q("1/4"), q("3/8")), (q("1/2"), q("1/2")), (q("3/4"), q("5/8")), (1, 1)])
    assert support(g) == [iv(0, "1/2"), iv("1/2", 1)]


def test_restrict_requires_nothing_outside():
    g = restrict(A1, iv(0, 1))
    assert g == A1


def test_eval_inverse_matches_inverse():
    for x in ["0", "1/3", "1/2", "7/8", "1"]:
        assert eval_inverse(A1, q(x)) == eval_at(inverse(A1), q(x))


# --- oracle agreement


@pytest.mark.parametrize("den", [8, 16, 32, 64])
def test_alpha_tables_against_formula(den):
    for k in range(den + 1):
        x = Fr(k, den)
        assert as_fr(eval_at(A1, q(x))) == alpha1_formula(x)
        assert as_fr(eval_at(A2, q(x))) == alpha2_formula(x)


@settings(max_examples=100, deadline=None)
@given(pl_maps(), pl_maps())
def test_compose_matches_oracle(f, g):
    assert OMap.of(compose(f, g)) == OMap.of(f).then(OMap.of(g))


@settings(max_examples=100, deadline=None)
@given(pl_maps())
def test_inverse_and_support_match_oracle(f):
    assert OMap.of(inverse(f)) == OMap.of(f).inv()
    got = [(as_fr(A.left), as_fr(A.right)) for A in support(f)]
    assert got == OMap.of(f).support()


# --- properties


@settings(max_examples=100, deadline=None)
@given(w2_elements, w2_elements, w2_elements)
def test_group_laws(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(f, inverse(f)) == identity()
    assert conjugate(f, identity()) == f


@settings(max_examples=100, deadline=None)
@given(pl_maps(), pl_maps(), unit_rationals)
def test_right_action(f, g, x):
    x = q(x)
    assert eval_at(compose(f, g), x) == eval_at(g, eval_at(f, x))


@settings(max_examples=100, deadline=None)
@given(pl_maps())
def test_normalization_idempotent(f):
    assert PLMap(f.breakpoints) == f
    assert PLMap(f.breakpoints).breakpoints == f.breakpoints


@settings(max_examples=100, deadline=None)
@given(pl_maps(), pl_maps())
def test_breakpoints_of_products(f, g):
    assert breakpoint_images_ok(f, g)


@settings(max_examples=100, deadline=None)
@given(pl_maps(), pl_maps())
def test_orbitals_under_conjugation(f, h):
    expected = [Interval(eval_at(h, A.left), eval_at(h, A.right)) for A in support(f)]
    assert support(conjugate(f, h)) == expected


@settings(max_examples=100, deadline=None)
@given(pl_maps())
def test_one_bump_factors_round_trip(f):
    fs = one_bump_factors(f)
    assert all(len(support(g)) == 1 for g in fs)
    acc = identity()
    for g in fs:
        acc = compose(acc, g)
    assert acc == f
