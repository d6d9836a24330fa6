import random

import pytest
from hypothesis import given, settings, strategies as st

from m11pi.engine.algebra import AlgebraSpec, Identity, IdentityUpToBound, NonIdentity
from m11pi.engine.decide import (
    NotMultilinear,
    is_identity,
    is_identity_general,
    is_identity_multilinear,
    replay,
)
from m11pi.engine.spaces import identity_space
from m11pi.freelie import LiePoly, MultiDegree, multidegree_components, spanning_monomials
from m11pi.identities import cm, cp, pp
from m11pi.lang import parse
from m11pi.scalars import GF, QQ

G3 = GF(3)


def assert_replays(f, v):
    assert isinstance(v, NonIdentity)
    assert not replay(f, v.witness).is_zero()
    assert replay(f, v.witness) == v.value


def test_multilinear_examples():
    assert isinstance(is_identity_multilinear(cm(), AlgebraSpec(QQ, True)), Identity)
    f = parse("[x,y,z]")
    assert_replays(f, is_identity_multilinear(f, AlgebraSpec(QQ, False)))
    g = parse("[x,y]")
    assert_replays(g, is_identity_multilinear(g, AlgebraSpec(QQ, True)))
    with pytest.raises(NotMultilinear):
        is_identity_multilinear(parse("[x,y,y]"), AlgebraSpec())


def test_char_p_examples():
    A = AlgebraSpec(G3, False)
    assert is_identity_general(cp(3, G3), A).is_identity
    assert is_identity_general(pp(3, G3), A).is_identity
    v = is_identity_general(cp(3, G3), AlgebraSpec(G3, True))
    assert_replays(cp(3, G3), v)


def test_zero_polynomial_is_identity():
    assert is_identity(LiePoly.zero(QQ), AlgebraSpec()).is_identity


def _random_multilinear(rng, n, F, kernel_rows):
    D = MultiDegree.multilinear(n)
    mons = spanning_monomials(D)
    f = LiePoly(F, [(rng.randint(-2, 2), m) for m in rng.sample(mons, min(3, len(mons)))])
    if kernel_rows and rng.random() < 0.5:
        f = LiePoly.zero(F)
        for r in kernel_rows:
            f = f + r.scale(rng.randint(-2, 2))
    return f


_KERNEL5 = {}


def kernel5(F, unital):
    key = (F, unital)
    if key not in _KERNEL5:
        _KERNEL5[key] = identity_space(MultiDegree.multilinear(5), AlgebraSpec(F, unital)).lie_rows()
    return _KERNEL5[key]


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(2, 5), st.booleans(), st.sampled_from([QQ, G3]))
def test_fast_path_agrees_with_general(seed, n, unital, F):
    rng = random.Random(seed)
    A = AlgebraSpec(F, unital)
    f = _random_multilinear(rng, n, F, kernel5(F, unital) if n == 5 else None)
    if f.is_zero():
        return
    a = is_identity_multilinear(f, A)
    b = is_identity_general(f, A)
    assert a.is_identity == b.is_identity
    for v in (a, b):
        if not v.is_identity:
            assert_replays(f, v)


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.booleans(), st.sampled_from([QQ, G3, GF(5)]))
def test_every_nonidentity_replays(seed, unital, F):
    from treegen import random_poly

    rng = random.Random(seed)
    f = random_poly(rng, F, max_terms=3, max_size=5)
    v = is_identity(f, AlgebraSpec(F, unital))
    if isinstance(v, NonIdentity):
        assert_replays(f, v)


def test_pool_path_bounded():
    A = AlgebraSpec(QQ, False, N=4)
    v = is_identity_general(cm(), A)
    assert isinstance(v, IdentityUpToBound)
    w = is_identity_general(parse("[x,y,z]"), A)
    assert_replays(parse("[x,y,z]"), w)


@pytest.mark.parametrize("text", ["[x,y]", "[x,y,x]", "[x,y,y]", "[x,y,z]", "[x,y,[z,t]]", "[x,y,x,y]"])
@pytest.mark.parametrize("unital", [False, True])
def test_pool_agrees_with_symbolic_when_it_refutes(text, unital):
    f = parse(text, G3)
    sym = is_identity_general(f, AlgebraSpec(G3, unital))
    pool = is_identity_general(f, AlgebraSpec(G3, unital, N=2 * 4 - 1))
    if not pool.is_identity:
        assert_replays(f, pool)
        assert not sym.is_identity
    if sym.is_identity:
        assert pool.is_identity


@pytest.mark.parametrize("F", [QQ, G3])
def test_unital_identities_hold_in_nonunital(F):
    D = MultiDegree.parse("x:2,y:2,z")
    ku = identity_space(D, AlgebraSpec(F, True))
    kn = identity_space(D, AlgebraSpec(F, False))
    from m11pi.engine.spaces import containment

    assert containment(ku, kn)


def test_components_of_identities_over_gf3():
    rng = random.Random(7)
    A = AlgebraSpec(G3, False)
    parts = [cp(3, G3), pp(3, G3), cm(G3)]
    parts += identity_space(MultiDegree.parse("x:3,y,z"), A).lie_rows()[:3]
    for _ in range(5):
        f = LiePoly.zero(G3)
        for g in parts:
            f = f + g.scale(rng.randint(0, 2))
        assert is_identity(f, A).is_identity
        for _, comp in multidegree_components(f):
            assert is_identity_general(comp, A).is_identity


def test_mixed_degree_witness_is_for_f_itself():
    f = parse("[x,y] + [x,y,y]", G3)
    v = is_identity(f, AlgebraSpec(G3, True))
    assert_replays(f, v)
