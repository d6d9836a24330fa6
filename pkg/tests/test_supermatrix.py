import random

import pytest
from hypothesis import given, strategies as st

from m11pi.engine.witness import cnz_substitution, nonc_substitution, random_matrix
from m11pi.freelie import lnorm
from m11pi.grassmann import GrassmannContext, GrassmannElement, word
from m11pi.identities import cnz, nonc1
from m11pi.scalars import GF, QQ, CoeffPoly
from m11pi.supermatrix import (
    ParityError,
    SuperMatrix,
    bracket,
    eval_poly,
    eval_term,
    generic_matrix,
    identity_matrix,
    is_parity_consistent,
    unit,
)

U = GrassmannContext(QQ, 4, True)
NU = GrassmannContext(QQ, 4, False)


def g(ctx, *idx, c=1):
    return GrassmannElement.monomial(ctx, idx, c)


def test_products():
    assert unit(U, 1, 1) @ unit(U, 1, 2, g(U, 1)) == unit(U, 1, 2, g(U, 1))
    assert unit(U, 1, 2, g(U, 1)) @ unit(U, 2, 1, g(U, 2)) == unit(U, 1, 1, g(U, 1, 2))


def test_parity_enforced():
    with pytest.raises(ParityError):
        unit(U, 1, 2)


def test_bracket_examples():
    x = unit(U, 1, 2, g(U, 3))
    assert bracket(x, x).is_zero()
    assert bracket(unit(U, 1, 1), x) == x
    assert eval_term(lnorm("x", "y"), {"x": unit(U, 1, 1), "y": x}) == x


@pytest.mark.parametrize("m", range(4))
def test_cnz_value(m):
    w = cnz_substitution(QQ)
    ctx = w["x"].ctx
    e12 = GrassmannElement.monomial(ctx, (1, 2), (-1) ** (m + 1))
    z = GrassmannElement.zero(ctx)
    assert eval_poly(cnz(m, QQ), w) == SuperMatrix(e12, z, z, e12)


def test_nonc_first_family_shape():
    d = nonc_substitution(0, 3, GF(3))
    v = eval_poly(nonc1(0, 3, GF(3)), d.witness)
    assert v.b.is_zero() and v.d.is_zero() and v.a == v.c and not v.a.is_zero()


@given(st.integers(0, 10_000))
def test_random_laws(seed):
    rng = random.Random(seed)
    ctx = GrassmannContext(GF(3) if seed % 2 else QQ, 6, bool(seed % 3))
    x, y, z = (random_matrix(ctx, rng) for _ in range(3))
    assert (x @ y) @ z == x @ (y @ z)
    assert bracket(x, y) == -bracket(y, x)
    assert bracket(x + y, z) == bracket(x, z) + bracket(y, z)
    jac = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)
    assert jac.is_zero()
    for m in (x @ y, x + y, bracket(x, y)):
        assert is_parity_consistent(m)
    if ctx.unital:
        I = identity_matrix(ctx)
        assert I @ x == x and x @ I == x


def test_non_unital_has_no_identity_among_units():
    words_even = [word(1, 2), word(3, 4)]
    cands = [SuperMatrix(GrassmannElement(NU, {w: CoeffPoly.const(QQ, 1)}), *(GrassmannElement.zero(NU),) * 2, GrassmannElement(NU, {w: CoeffPoly.const(QQ, 1)})) for w in words_even]
    probe = unit(NU, 1, 2, g(NU, 1))
    assert all(c @ probe != probe for c in cands)


def test_generic_matrix_enumeration():
    names = []
    namer = lambda lab: names.append(lab) or len(names)
    m = generic_matrix(1, [1, 2], False, namer, GrassmannContext(QQ, 2, False))
    assert set(m.a.terms) == {word(1, 2)}
    assert set(m.b.terms) == {word(1), word(2)}
    names.clear()
    mu = generic_matrix(1, [1, 2], True, namer, GrassmannContext(QQ, 2, True))
    assert set(mu.a.terms) == {0, word(1, 2)}
