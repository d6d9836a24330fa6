"""The N = 3 bounded decider against brute-force evaluation on
M11(E_3) over GF(3).  Every multihomogeneous component of degree <= 4 in
two variables is one-dimensional, so every f is a multiple of a
left-normed monomial below."""

import pytest

import oracle
from m11pi.engine.algebra import AlgebraSpec, NonIdentity
from m11pi.engine.decide import is_identity_general, replay
from m11pi.freelie import MultiDegree, expand, spanning_monomials
from m11pi.lang import parse
from m11pi.scalars import GF

G3 = GF(3)
SEQS = ["xy", "xyx", "xyy", "xyxx", "xyxy", "xyyy"]


def test_candidates_cover_every_component():
    from m11pi.engine.linalg import Echelon

    for seq in SEQS:
        D = MultiDegree({v: seq.count(v) for v in set(seq)})
        E, index = Echelon(G3), {}
        for t in spanning_monomials(D):
            E.add({index.setdefault(w, len(index)): c for w, c in expand(t).over(G3).terms.items()})
        assert len(E.rows) == 1


@pytest.mark.parametrize("seq", SEQS)
@pytest.mark.parametrize("unital", [False, True])
@pytest.mark.parametrize("scale", [1, 2])
def test_oracle_agreement(seq, unital, scale):
    f = parse("[" + ",".join(seq) + "]", G3).scale(scale)
    v = is_identity_general(f, AlgebraSpec(G3, unital, N=3))
    assert v.is_identity == oracle.is_identity(list(seq), unital)
    if isinstance(v, NonIdentity):
        assert not replay(f, v.witness).is_zero()


def test_oracle_sign_rule():
    # e2 e1 = -e1 e2 inside the regular representation
    L1, L2 = oracle.left_mult(1), oracle.left_mult(2)
    assert (L2 @ L1 + L1 @ L2 == 0).all()
    assert not (L1 @ L2 == 0).all()
