from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from m11pi.scalars import (
    GF,
    QQ,
    CoeffPoly,
    FieldError,
    Scalar,
    all_points,
    frobenius_reduce,
    poly_add,
    poly_mul,
    scalar_add,
    scalar_inv,
    scalar_mul,
)


def S(F, v):
    return Scalar(F, v)


def test_examples():
    assert scalar_add(S(QQ, Fraction(1, 2)), S(QQ, Fraction(1, 3))).value == Fraction(5, 6)
    assert scalar_mul(S(GF(3), 2), S(GF(3), 2)).value == 1
    assert scalar_inv(S(GF(5), 2)).value == 3


def test_rational_lowest_terms():
    v = S(QQ, Fraction(6, -4)).value
    assert v == Fraction(-3, 2) and v.denominator > 0


def test_p2_rejected():
    with pytest.raises(FieldError):
        GF(2)
    with pytest.raises(FieldError):
        GF(9)


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        S(GF(3), 1) + S(GF(5), 1)


def test_poly_examples():
    F = QQ
    t1, t2 = CoeffPoly.var(F, 1), CoeffPoly.var(F, 2)
    assert poly_mul(t1, t1) == CoeffPoly.var(F, 1, 2)
    assert poly_mul(poly_add(t1, t2), CoeffPoly.zero(F)).is_zero()
    G = GF(3)
    u = CoeffPoly.var(G, 1)
    assert (u + u.scale(2)).is_zero()


def test_frobenius_examples():
    G = GF(3)
    t = lambda e: CoeffPoly.var(G, 1, e)
    assert frobenius_reduce(t(3)) == t(1)
    assert frobenius_reduce(t(5)) == t(1)
    assert frobenius_reduce(t(3) - t(1)).is_zero()


fields = st.sampled_from([QQ, GF(3), GF(5), GF(7)])


@given(fields, st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_field_axioms(F, a, b, c):
    a, b, c = S(F, a), S(F, b), S(F, c)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    if a:
        assert (a * a.inverse()).value == 1


@given(st.integers(-20, 20), st.integers(1, 20), st.integers(-20, 20), st.integers(1, 20))
def test_rational_axioms_fractions(n1, d1, n2, d2):
    a, b = S(QQ, Fraction(n1, d1)), S(QQ, Fraction(n2, d2))
    assert (a + b).value == Fraction(n1, d1) + Fraction(n2, d2)
    if b:
        assert (a / b).value == Fraction(n1, d1) / Fraction(n2, d2)


def _poly(F, data):
    f = CoeffPoly.zero(F)
    for exps, c in data:
        m = CoeffPoly.const(F, c)
        for i, e in enumerate(exps, start=1):
            if e:
                m = m * CoeffPoly.var(F, i, e)
        f = f + m
    return f


def poly_data(p, nvars=3):
    return st.lists(
        st.tuples(st.tuples(*[st.integers(0, 2 * p)] * nvars), st.integers(1, p - 1)),
        max_size=5,
    )


@given(st.sampled_from([3, 5]).flatmap(lambda p: st.tuples(st.just(p), poly_data(p), poly_data(p))))
def test_frobenius_homomorphism(args):
    p, d1, d2 = args
    F = GF(p)
    f, g = _poly(F, d1), _poly(F, d2)
    rf = frobenius_reduce(f)
    assert frobenius_reduce(rf) == rf
    assert frobenius_reduce(f * g) == frobenius_reduce(rf * frobenius_reduce(g))
    assert all(e < p for ex in rf.terms for _, e in ex)


@given(poly_data(3))
def test_frobenius_oracle(data):
    F = GF(3)
    f = _poly(F, data)
    zero_fn = all(f.evaluate(pt) == 0 for pt in all_points(F, [1, 2, 3]))
    assert frobenius_reduce(f).is_zero() == zero_fn


def test_frobenius_oracle_exhaustive_univariate():
    F = GF(3)
    for cs in product(range(3), repeat=4):
        f = _poly(F, [((e, 0, 0), c) for e, c in zip(range(1, 5), cs) if c])
        zero_fn = all(f.evaluate({1: v}) == 0 for v in range(3))
        assert frobenius_reduce(f).is_zero() == zero_fn
