import random
import warnings
from math import factorial

import pytest
from hypothesis import given, strategies as st

from m11pi.engine.linalg import Echelon
from m11pi.freelie import (
    AssocPoly,
    LinearizationWarning,
    LiePoly,
    MultiDegree,
    Var,
    commutator_probe,
    expand,
    lnorm,
    multidegree_components,
    partial_linearize,
    spanning_monomials,
    substitute,
)
from m11pi.identities import cm
from m11pi.lang import parse
from m11pi.scalars import GF, QQ
from treegen import random_poly, random_term


def A(d):
    return AssocPoly(QQ, d)


def test_expand_examples():
    assert expand(parse("[x1,x2]")) == A({("x1", "x2"): 1, ("x2", "x1"): -1})
    assert expand(parse("[x1,x2,x3] + [x2,x3,x1] + [x3,x1,x2]")).is_zero()
    assert expand(parse("[x1,x2,x3]")) == A(
        {("x1", "x2", "x3"): 1, ("x2", "x1", "x3"): -1, ("x3", "x1", "x2"): -1, ("x3", "x2", "x1"): 1}
    )


def test_components():
    comps = multidegree_components(parse("[x,y] + [x,[x,y]]"))
    assert [str(D) for D, _ in comps] == ["x:1,y:1", "x:2,y:1"]
    f = parse("[x,y,z]")
    assert len(multidegree_components(f)) == 1
    g = parse("[x,y] + 2*[x,y,x] - [y,[x,y]]")
    total = AssocPoly(QQ, {})
    for _, c in multidegree_components(g):
        total = total + expand(c)
    assert total == expand(g)


def test_substitute_examples():
    assert substitute(cm(), {"u": Var("x")}) == parse("[x,y,[x,v],z]")
    f = substitute(parse("[x,y]"), {"x": LiePoly(QQ, [(1, Var("x")), (1, Var("z"))])})
    assert expand(f) == expand(parse("[x,y] + [z,y]"))


@given(st.integers(0, 100_000))
def test_substitute_commutes_with_expand(seed):
    rng = random.Random(seed)
    f = random_poly(rng, QQ)
    g = LiePoly.of(random_term(rng, 3), 1, QQ)
    lhs = expand(substitute(f, {"x": g}))
    rhs = expand(f).substitute({"x": expand(g)})
    assert lhs == rhs


def test_partial_linearize():
    f = parse("[z,x,x]")
    assert expand(partial_linearize(f, "x", "y")) == expand(parse("[z,x,y] + [z,y,x]"))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinearizationWarning)
        assert partial_linearize(parse("[x,y,z]"), "x", "w").is_zero()


@pytest.mark.parametrize("F", [QQ, GF(3), GF(5)])
def test_linearize_then_identify(F):
    # f(x+y) - f(x) - f(y) at y -> x is (2^d - 2) f for f homogeneous of degree d in x
    f = parse("[z,x,x,t,x]", F)
    lin = partial_linearize(f, "x", "w")
    back = substitute(lin, {"w": Var("x")})
    for a, b in zip([back], [f.scale(F.norm(2**3 - 2))]):
        assert expand(a) == expand(b)
    for t in lin.terms:
        from m11pi.freelie import term_multidegree

        D = term_multidegree(t)
        assert D["x"] + D["w"] == 3


def test_commutator_probe_in_consequences():
    from m11pi.engine.spaces import consequence_space, contains

    f = parse("[x,y,z]")
    g = commutator_probe(f, "x", "y")
    S = consequence_space({"f": f}, g.multidegree, QQ)
    assert contains(S, g).member


def test_spanning_monomials():
    assert spanning_monomials(MultiDegree({"x1": 1, "x2": 1})) == [lnorm("x1", "x2"), lnorm("x2", "x1")]
    assert spanning_monomials(MultiDegree({"x": 2})) == []


def _rank(n):
    D = MultiDegree.multilinear(n)
    index = {}
    E = Echelon(QQ)
    for t in spanning_monomials(D):
        v = {}
        for w, c in expand(t).terms.items():
            v[index.setdefault(w, len(index))] = c
        E.add(v)
    return len(E.rows)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_multilinear_rank(n):
    assert _rank(n) == factorial(n - 1)


@given(st.integers(0, 100_000))
def test_anticommutativity_and_jacobi(seed):
    rng = random.Random(seed)
    a, b, c = (LiePoly.of(random_term(rng, rng.randint(1, 3)), 1, QQ) for _ in range(3))
    assert (expand(a.bracket(b)) + expand(b.bracket(a))).is_zero()
    jac = a.bracket(b).bracket(c) + b.bracket(c).bracket(a) + c.bracket(a).bracket(b)
    assert expand(jac).is_zero()
