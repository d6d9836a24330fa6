import random

import pytest

from m11pi.engine.algebra import AlgebraSpec
from m11pi.engine.relations import subs_relations_check
from m11pi.engine.spaces import identity_space
from m11pi.engine.witness import nonc_substitution, witness_search
from m11pi.freelie import MultiDegree
from m11pi.identities import cm, cnz, nonc2
from m11pi.lang import parse
from m11pi.scalars import GF, QQ
from m11pi.supermatrix import eval_poly

G3 = GF(3)


def test_cnz_curated():
    r = witness_search(cnz(2), AlgebraSpec(QQ, True), "curated")
    assert r.found and r.strategy == "curated:cnz"
    assert not eval_poly(cnz(2), r.witness).is_zero()


def test_nonc_second_family_word():
    d = nonc_substitution(1, 3, G3)
    f = nonc2(1, 3, G3)
    r = witness_search(f, AlgebraSpec(G3, False), "curated")
    assert r.found
    w = d.a[0] * d.a[1] * d.b0 * d.b0 * d.c0 * d.c0 * d.b1 * d.c2
    assert not w.is_zero()
    assert r.value.a == w and r.value.c == w
    assert r.value.b.is_zero() and r.value.d.is_zero()


def test_identity_has_no_witness():
    r = witness_search(cm(), AlgebraSpec(QQ, False), tries=20)
    assert not r.found and "random: 20 trials" in r.bound


def test_random_strategy_finds_commutator_witness():
    r = witness_search(parse("[x,y]"), AlgebraSpec(QQ, True), "random")
    assert r.found


@pytest.fixture(scope="module")
def kernel5():
    return identity_space(MultiDegree.multilinear(5), AlgebraSpec(QQ, True)).lie_rows()


def test_subs_on_kernel(kernel5):
    rng = random.Random(3)
    for f in rng.sample(kernel5, 5):
        for k in ("x2", "x5"):
            rep = subs_relations_check(f, "x1", k)
            assert rep.passed, rep


def test_subs_on_cm():
    rep = subs_relations_check(cm())
    assert rep.passed


def test_subs_precondition():
    rep = subs_relations_check(parse("[x1,x2,x3] - [x2,x3,x1]"))
    assert not rep.passed and rep.note.startswith("precondition")
