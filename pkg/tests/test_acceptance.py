"""Acceptance criteria 1-12, one test each.  Every test prints a single
PASS/FAIL line (visible without -s) with its elapsed time; the time
limit of each criterion is asserted too."""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from math import factorial

import pytest

import oracle
from m11pi.engine.algebra import AlgebraSpec, Identity, NonIdentity
from m11pi.engine.decide import is_identity_general, is_identity_multilinear, replay
from m11pi.engine.linalg import Echelon
from m11pi.engine.relations import subs_relations_check
from m11pi.engine.spaces import consequence_space, containment, contains, identity_space, spaces_equal
from m11pi.engine.witness import nonc_substitution, witness_search
from m11pi.freelie import LiePoly, MultiDegree, expand, rename, spanning_monomials
from m11pi.identities import (
    c_identity,
    cm,
    cnz,
    con1,
    con2,
    con3,
    cp,
    insert_after_second,
    ja,
    nonc1,
    nonc2,
    pp,
    standard,
    tr,
)
from m11pi.lang import format_poly, parse
from m11pi.manifest import load_manifest, run_manifest
from m11pi.scalars import GF, QQ
from m11pi.supermatrix import eval_poly
from treegen import random_poly

G3 = GF(3)
ML = MultiDegree.multilinear


@contextmanager
def criterion(capsys, n: int, title: str, limit_s: float):
    t0 = time.perf_counter()
    status, detail = "PASS", ""
    try:
        yield
    except BaseException as e:
        status, detail = "FAIL", f" ({type(e).__name__}: {e})"
        raise
    finally:
        dt = time.perf_counter() - t0
        if status == "PASS" and dt > limit_s:
            status, detail = "FAIL", f" (time limit {limit_s:g} s exceeded)"
        with capsys.disabled():
            print(f"\n[acceptance {n:2d}] {status} {title} [{dt:.1f} s / limit {limit_s:g} s]{detail}")
    assert dt <= limit_s, f"criterion {n} took {dt:.1f} s > {limit_s} s"


def _replays(f, v):
    return isinstance(v, NonIdentity) and not replay(f, v.witness).is_zero()


def test_01_cm_identity(capsys):
    with criterion(capsys, 1, "cm is an identity of both algebras over Q, GF(3), GF(5)", 6 * 5):
        for F in (QQ, GF(3), GF(5)):
            for unital in (False, True):
                t0 = time.perf_counter()
                v = is_identity_general(cm(F), AlgebraSpec(F, unital))
                assert isinstance(v, Identity), (F, unital)
                assert time.perf_counter() - t0 < 5


def test_02_multilinear_basis(capsys):
    with criterion(capsys, 2, "multilinear identities = consequences of cm (n=5,6); algebras agree (n=3..6)", 300):
        for n in (5, 6):
            C = consequence_space({"cm": cm()}, ML(n), QQ)
            for unital in (False, True):
                K = identity_space(ML(n), AlgebraSpec(QQ, unital))
                assert spaces_equal(K, C).equal, (n, unital)
        for n in (3, 4, 5, 6):
            a = identity_space(ML(n), AlgebraSpec(QQ, False))
            b = identity_space(ML(n), AlgebraSpec(QQ, True))
            assert spaces_equal(a, b).equal, n


def test_03_low_degrees_zero(capsys):
    with criterion(capsys, 3, "multilinear identity spaces of degree 3 and 4 are zero over Q", 30):
        for n in (3, 4):
            for unital in (False, True):
                assert identity_space(ML(n), AlgebraSpec(QQ, unital)).dim == 0


def test_04_cnz(capsys):
    with criterion(capsys, 4, "cnz substitution gives a nonzero value for m = 0..3", 1):
        for m in range(4):
            f = cnz(m)
            r = witness_search(f, AlgebraSpec(QQ, True), "curated")
            assert r.found and not eval_poly(f, r.witness).is_zero()


def test_05_nonc(capsys):
    with criterion(capsys, 5, "nonc families nonzero at p=3, k=0,1; first family is diag(w,w) up to sign", 10):
        for k in (0, 1):
            d = nonc_substitution(k, 3, G3)
            v1 = eval_poly(nonc1(k, 3, G3), d.witness)
            v2 = eval_poly(nonc2(k, 3, G3), d.witness)
            assert not v1.is_zero() and not v2.is_zero()
            w = d.b0 * d.c0 * d.c0 * d.c1 * d.c2
            for a in reversed(d.a):
                w = a * w
            w = w.scale(2)
            assert not w.is_zero()
            assert v1.b.is_zero() and v1.d.is_zero() and v1.a == v1.c
            # c1 c2 are odd: the value equals w with the last two factors swapped
            assert v1.a == -w


def test_06_char_p(capsys):
    with criterion(capsys, 6, "cp and pp hold in M11(E) over GF(3); cp fails in M11(E1) with a witness", 120):
        A = AlgebraSpec(G3, False)
        assert is_identity_general(cp(3, G3), A).is_identity
        assert is_identity_general(pp(3, G3), A).is_identity
        v = is_identity_general(cp(3, G3), AlgebraSpec(G3, True))
        assert _replays(cp(3, G3), v)


def test_07_conseq(capsys):
    with criterion(capsys, 7, "con1, con2, con3 are certified consequences of cm, cp, pp at p=3, k=1", 600):
        gens = standard(3, G3)
        for f in (con1(1, 3, G3), con2(1, 3, G3), con3(1, 3, G3)):
            m = contains(consequence_space(gens, f.multidegree, G3), f)
            assert m.member and m.verified, format_poly(f)


def test_08_corollary(capsys):
    with criterion(capsys, 8, "Ja (k=0,1) and exactly one sign of C (k=0,1,2) are consequences of cm", 120):
        for k in (0, 1):
            f = ja(k)
            m = contains(consequence_space({"cm": cm()}, f.multidegree, QQ), f)
            assert m.member and m.verified
        for k in (0, 1, 2):
            ok = []
            for sign in (1, -1):
                f = c_identity(k, sign)
                m = contains(consequence_space({"cm": cm()}, f.multidegree, QQ), f)
                ok.append(m.member and m.verified)
            assert ok.count(True) == 1, (k, ok)


def test_09_insertion(capsys):
    with criterion(capsys, 9, "inserted polynomial g lies in the consequences of f and cm", 120):
        for f in (parse("[x1,x2,x3]"), rename(ja(0), {"x": "x1", "y": "x2", "z": "x3"})):
            g = insert_after_second(f)
            m = contains(consequence_space({"f": f, "cm": cm()}, g.multidegree, QQ), g)
            assert m.member and m.verified


def test_10_subs(capsys):
    with criterion(capsys, 10, "relations (i)-(iii) hold on every degree-5 multilinear kernel row", 60):
        K = identity_space(ML(5), AlgebraSpec(QQ, True))
        assert K.dim == 15
        for f in K.lie_rows():
            for k in ("x2", "x3", "x4", "x5"):
                rep = subs_relations_check(f, "x1", k)
                assert rep.passed, (format_poly(f), k, rep)


def test_11_self_consistency(capsys):
    with criterion(capsys, 11, "oracle agreement, fast path = general path, witness replay, consequences in kernels", 600):
        # brute-force oracle, GF(3), N = 3, degree <= 4, two variables
        for seq in ("xy", "xyx", "xyy", "xyxx", "xyxy", "xyyy"):
            f = parse("[" + ",".join(seq) + "]", G3)
            for unital in (False, True):
                v = is_identity_general(f, AlgebraSpec(G3, unital, N=3))
                assert v.is_identity == oracle.is_identity(list(seq), unital), (seq, unital)
                if not v.is_identity:
                    assert _replays(f, v)
        # fast path against the general path, n <= 5
        rng = random.Random(11)
        for F in (QQ, G3):
            for unital in (False, True):
                A = AlgebraSpec(F, unital)
                samples = []
                for n in (2, 3, 4):
                    samples += [LiePoly.of(t, 1, F) for t in spanning_monomials(ML(n))]
                mons5 = spanning_monomials(ML(5))
                samples += [LiePoly.of(t, 1, F) for t in rng.sample(mons5, 6)]
                samples += [LiePoly(F, [(rng.randint(1, 2), t) for t in rng.sample(mons5, 3)]) for _ in range(3)]
                samples += identity_space(ML(5), A).lie_rows()[:3]
                for f in samples:
                    a, b = is_identity_multilinear(f, A), is_identity_general(f, A)
                    assert a.is_identity == b.is_identity, format_poly(f)
                    for v in (a, b):
                        if not v.is_identity:
                            assert _replays(f, v)
        # witness replay on random, mostly non-identity input
        for seed in range(40):
            r = random.Random(seed)
            F = (QQ, G3, GF(5))[seed % 3]
            f = random_poly(r, F, max_terms=2, max_size=5)
            from m11pi.engine.decide import is_identity

            v = is_identity(f, AlgebraSpec(F, bool(seed % 2)))
            if isinstance(v, NonIdentity):
                assert _replays(f, v)
        # consequence spaces of the shipped suites lie in the identity spaces
        suites = [
            ({"cm": cm()}, QQ, [ML(5), ML(6), MultiDegree.parse("x:2,y:2,z")] + [ja(k).multidegree for k in (0, 1)] + [c_identity(k, 1).multidegree for k in (0, 1, 2)]),
            (standard(3, G3), G3, [f.multidegree for f in (con1(1, 3, G3), con2(1, 3, G3), con3(1, 3, G3), tr(3, G3))]),
        ]
        for gens, F, Ds in suites:
            for D in Ds:
                S = consequence_space(gens, D, F)
                for unital in ((False, True) if F.p is None else (False,)):
                    assert containment(S, identity_space(D, AlgebraSpec(F, unital))), (D, unital)
        # and the shipped manifest runs green
        rep = run_manifest(load_manifest(), timing=False)
        failed = [r["check"] for r in rep["checks"] if not r["passed"]]
        assert not failed, failed


def test_12_free_lie(capsys):
    with criterion(capsys, 12, "multilinear rank (n-1)! for n=3..6; parser round-trip on 1000 random trees", 60):
        for n in (3, 4, 5, 6):
            E, index = Echelon(QQ), {}
            for t in spanning_monomials(ML(n)):
                E.add({index.setdefault(w, len(index)): c for w, c in expand(t).terms.items()})
            assert len(E.rows) == factorial(n - 1)
        rng = random.Random(2024)
        for _ in range(1000):
            f = random_poly(rng, QQ)
            s = format_poly(f)
            g = parse(s)
            assert format_poly(g) == s and expand(g) == expand(f)
