"""Identity deciders for M_{1,1}(E) and M_{1,1}(E^1).

Three procedures live here:

``is_identity_multilinear``
    Concrete enumeration.  Every variable takes one of the values
    E11*w, E22*w (w a length-2 word), E12*e, E21*e (e a generator), plus
    E11*1 and E22*1 for the unital algebra, with disjoint generator blocks
    per variable.  This is complete for multilinear f: by linearity it is
    enough to substitute basis elements m*w; words sharing a generator kill
    every product, so disjoint supports suffice; and since signs of products
    of disjoint words depend only on their parities, every word can be
    replaced by a representative of length 2 (even), 1 (odd) or 0.

``is_identity_general``
    Symbolic evaluation on generic supercommutative matrices (see
    :mod:`.symbolic` for why this is exact).  A nonzero coordinate is turned
    into a concrete witness which is replayed with ``eval_term``.

pool path
    When the caller fixes a generator budget N below 2*degree, the
    spanning-set model with one generic element per variable over a shared
    pool of N generators is used instead (entries over words of length at
    most 2, each word carrying its own scalar indeterminate).  The verdict is
    then only reported up to that bound.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..freelie import Bracket, LiePoly, LieTerm, MultiDegree, Var, sort_vars
from ..grassmann import BudgetExceeded, GrassmannContext, GrassmannElement, word
from ..scalars import CoeffPoly, Field, frobenius_reduce, reduce_exponent
from ..supermatrix import SuperMatrix, bracket, eval_poly, generic_matrix
from .algebra import AlgebraSpec, Identity, IdentityUpToBound, NonIdentity, Undecided, Verdict
from .symbolic import A as SLOT_A, C as SLOT_C, ODD_MASK, GenericModel, model_for


class NotMultilinear(ValueError):
    pass


class NotMultihomogeneous(ValueError):
    pass


class ReplayFailure(AssertionError):
    """A constructed witness did not reproduce a nonzero value (a bug)."""


# ---------------------------------------------------------------------------
# helpers


def _const(F: Field, c) -> CoeffPoly:
    return CoeffPoly.const(F, c)


def element(ctx: GrassmannContext, parts: Sequence[Tuple[Sequence[int], object]]) -> GrassmannElement:
    """Sum of coeff * e_{i1}...e_{ik} over ``parts``."""
    acc = GrassmannElement.zero(ctx)
    for idx, c in parts:
        acc = acc + GrassmannElement.monomial(ctx, idx, c)
    return acc


def matrix(ctx: GrassmannContext, a=(), b=(), d=(), c=()) -> SuperMatrix:
    return SuperMatrix(element(ctx, a), element(ctx, b), element(ctx, d), element(ctx, c))


def replay(f: LiePoly, witness: Mapping[str, SuperMatrix]) -> SuperMatrix:
    return eval_poly(f, witness)


def _nonidentity(f: LiePoly, witness: Dict[str, SuperMatrix], method: str) -> NonIdentity:
    value = replay(f, witness)
    if value.is_zero():
        raise ReplayFailure(f"witness for {f} replays to zero")
    return NonIdentity(witness=witness, value=value, method=method)


# ---------------------------------------------------------------------------
# multilinear enumeration


def parity_options(k: int, ctx: GrassmannContext, unital: bool) -> List[Tuple[str, SuperMatrix]]:
    """The candidate values of the k-th variable (0-based); generators
    2k+1 and 2k+2 are reserved for it."""
    g1, g2 = 2 * k + 1, 2 * k + 2
    F = ctx.field
    opts = [
        ("E11*w", matrix(ctx, a=[((g1, g2), 1)])),
        ("E22*w", matrix(ctx, c=[((g1, g2), 1)])),
        ("E12*e", matrix(ctx, b=[((g1,), 1)])),
        ("E21*e", matrix(ctx, d=[((g1,), 1)])),
    ]
    if unital:
        opts += [("E11*1", matrix(ctx, a=[((), 1)])), ("E22*1", matrix(ctx, c=[((), 1)]))]
    return opts


def is_identity_multilinear(f: LiePoly, A: AlgebraSpec) -> Verdict:
    if not f.terms:
        return Identity(method="zero polynomial")
    if not f.is_multilinear():
        raise NotMultilinear(f"{f} is not multilinear")
    f = f.over(A.field) if f.field != A.field else f
    V = f.variables()
    n = len(V)
    N = 2 * n if A.N is None else A.N
    if N < 2 * n:
        raise BudgetExceeded(f"multilinear enumeration needs N >= {2 * n}")
    ctx = GrassmannContext(A.field, N, A.unital)
    options = [parity_options(k, ctx, A.unital) for k in range(n)]
    pos = {v: k for k, v in enumerate(V)}
    leaves: Dict[LieTerm, Tuple[int, ...]] = {}

    def vars_of(t: LieTerm) -> Tuple[int, ...]:
        hit = leaves.get(t)
        if hit is None:
            hit = leaves[t] = tuple(sorted({pos[x] for x in t.leaves()}))
        return hit

    memo: Dict[Tuple[LieTerm, Tuple[int, ...]], SuperMatrix] = {}

    def ev(t: LieTerm, choice: Tuple[int, ...]) -> SuperMatrix:
        key = (t, tuple(choice[i] for i in vars_of(t)))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            m = options[pos[t.name]][choice[pos[t.name]]][1]
        else:
            m = bracket(ev(t.left, choice), ev(t.right, choice))
        memo[key] = m
        return m

    F = A.field
    for choice in product(*(range(len(o)) for o in options)):
        total = None
        for t, c in f.terms.items():
            v = ev(t, choice)
            if v.is_zero():
                continue
            v = v.scale(F.norm(c))
            total = v if total is None else total + v
        if total is not None and not total.is_zero():
            witness = {V[k]: options[k][choice[k]][1] for k in range(n)}
            return _nonidentity(f, witness, "multilinear-enumeration")
    return Identity(method="multilinear-enumeration")


# ---------------------------------------------------------------------------
# symbolic path


def _check_multihomogeneous(f: LiePoly):
    if not f.is_multihomogeneous():
        raise NotMultihomogeneous(
            f"{f} is not multihomogeneous; split it with multidegree_components first"
        )


def _grid(F: Field, deg: int):
    return range(F.p) if F.p is not None else range(deg + 1)


def _find_t_point(F: Field, poly: Dict[Tuple[int, ...], object], nvars: int) -> Optional[Tuple[int, ...]]:
    """A point where the polynomial sum c * prod t_i^e_i is nonzero.  Over
    GF(p) the exponents are already reduced, so a point exists; over Q a
    grid of side (max degree + 1) contains one."""
    involved = sorted({i for exps in poly for i, e in enumerate(exps) if e})
    deg = max((max(exps) for exps in poly), default=0)
    for vals in product(_grid(F, deg), repeat=len(involved)):
        point = [0] * nvars
        for i, v in zip(involved, vals):
            point[i] = v
        s = 0
        for exps, c in poly.items():
            term = c
            for i, e in enumerate(exps):
                if e:
                    term = F.mul(term, F.norm(point[i] ** e))
            s = F.add(s, term)
        if s:
            return tuple(point)
    return None


def witness_from_model(
    f: LiePoly, model: GenericModel, coords: Mapping[Tuple[int, int], object], A: AlgebraSpec
) -> Dict[str, SuperMatrix]:
    """Concrete substitution realising a nonzero generic coordinate."""
    F = A.field
    groups: Dict[Tuple[int, int], Dict[Tuple[int, ...], object]] = {}
    for (entry, key), c in coords.items():
        rest, ts = model.t_free_key(key)
        groups.setdefault((entry, rest), {})[ts] = c
    nv = len(model.variables)
    for (entry, rest) in sorted(groups, key=lambda k: (k[1], k[0])):
        point = _find_t_point(F, groups[(entry, rest)], nv)
        if point is not None:
            break
    else:  # pragma: no cover - coordinates were reduced, so unreachable
        raise ReplayFailure("no nonzero coordinate found")
    exps, odds = model.decode(rest)
    odd_set = set(odds)
    needed = 0
    for (v, kind), e in exps.items():
        needed += 2 * e
    needed += len(odds)
    N = needed if A.N is None else max(A.N, needed)
    ctx = GrassmannContext(F, max(N, 1), A.unital)
    nxt = [1]

    def fresh(k):
        out = list(range(nxt[0], nxt[0] + k))
        nxt[0] += k
        return out

    witness = {}
    for i, v in enumerate(model.variables):
        a_parts, c_parts, b_parts, d_parts = [], [], [], []
        if A.unital and point[i]:
            a_parts.append(((), point[i]))
        for _ in range(exps.get((v, SLOT_A), 0)):
            a_parts.append((tuple(fresh(2)), 1))
        for _ in range(exps.get((v, SLOT_C), 0)):
            c_parts.append((tuple(fresh(2)), 1))
        if (v, "b") in odd_set:
            b_parts.append((tuple(fresh(1)), 1))
        if (v, "d") in odd_set:
            d_parts.append((tuple(fresh(1)), 1))
        witness[v] = matrix(ctx, a_parts, b_parts, d_parts, c_parts)
    return witness


def generic_coordinates(f: LiePoly, A: AlgebraSpec):
    model = model_for(f.variables(), A.unital)
    return model, model.poly_coordinates(f, A.field)


def is_identity_general(f: LiePoly, A: AlgebraSpec) -> Verdict:
    if not f.terms:
        return Identity(method="zero polynomial")
    _check_multihomogeneous(f)
    f = f.over(A.field) if f.field != A.field else f
    deg = f.multidegree.total
    if A.truncated(deg):
        return _pool_decide(f, A)
    model, coords = generic_coordinates(f, A)
    if not coords:
        return Identity(method="generic-supercommutative")
    witness = witness_from_model(f, model, coords, A)
    return _nonidentity(f, witness, "generic-supercommutative")


def is_identity(f: LiePoly, A: AlgebraSpec) -> Verdict:
    """Dispatch: multihomogeneous f goes to the general decider; other f is
    split into multihomogeneous components, each decided separately.

    A failing component's witness is lifted to one for f by scaling the
    variables.  Over Q, and over GF(p) for the non-unital algebra, a failing
    component already refutes f; for the unital algebra over GF(p) it does
    not, and an unlifted failure is reported as ``Undecided``."""
    if not f.terms or f.is_multihomogeneous():
        return is_identity_general(f, A)
    from ..freelie import multidegree_components

    for D, comp in multidegree_components(f):
        v = is_identity_general(comp, A)
        if v.is_identity:
            continue
        w = lift_witness(f, v.witness, A.field)
        if w is not None:
            return _nonidentity(f, w, f"{v.method}+scaled")
        if A.field.p is not None and A.unital:
            return Undecided(component=str(D), note="component fails; no scaling refutes f")
        return NonIdentity(witness=v.witness, value=v.value, method=f"component {D}")
    return Identity(method="per-component")


def lift_witness(
    f: LiePoly, witness: Mapping[str, SuperMatrix], F: Field, tries: int = 200, seed: int = 0
) -> Optional[Dict[str, SuperMatrix]]:
    """Scale the witness variables so that f itself is nonzero.  f(l*w) is a
    polynomial in the l's whose coefficients are the components' values, so
    some scaling works when the field has enough elements."""
    import random

    ctx = next(iter(witness.values())).ctx
    witness = dict(witness)
    for v in f.variables():
        witness.setdefault(v, SuperMatrix.zero(ctx))
    V = sorted(witness)
    if not replay(f, witness).is_zero():
        return dict(witness)
    if F.p is not None and (F.p - 1) ** len(V) <= 4096:
        choices = product(range(1, F.p), repeat=len(V))
    else:
        rng = random.Random(seed)
        hi = F.p - 1 if F.p else 97
        choices = (tuple(rng.randint(1, hi) for _ in V) for _ in range(tries))
    for lam in choices:
        w = {v: witness[v].scale(l) for v, l in zip(V, lam)}
        if not replay(f, w).is_zero():
            return w
    return None


# ---------------------------------------------------------------------------
# pool path (truncated generator budget)


class _Namer:
    def __init__(self):
        self.labels: List[str] = []

    def __call__(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels)


def pool_evaluate(f: LiePoly, A: AlgebraSpec, N: int):
    """Value of f on one generic element per variable over generators
    1..N; returns (value, generic matrices, namer)."""
    ctx = GrassmannContext(A.field, N, A.unital)
    namer = _Namer()
    V = f.variables()
    gens = {}
    for v in V:
        gens[v] = generic_matrix(0, range(1, N + 1), A.unital, lambda lab, v=v: namer(f"{v}.{lab}"), ctx)
    return eval_poly(f, gens), gens, namer


def pool_coordinates(value: SuperMatrix, F: Field) -> Dict[tuple, object]:
    out = {}
    for e, entry in enumerate(value.entries()):
        for w, c in entry.terms.items():
            if F.p is not None:
                c = frobenius_reduce(c)
            for exps, x in c.terms.items():
                out[(e, w, exps)] = x
    return out


def _nonroot(poly: CoeffPoly, F: Field) -> Dict[int, int]:
    """Greedy point where a (reduced, if finite field) polynomial is nonzero."""
    point: Dict[int, int] = {}
    cur = poly
    for i in sorted(poly.variables()):
        deg = max((e for exps in cur.terms for j, e in exps if j == i), default=0)
        for val in _grid(F, deg):
            sub = _partial(cur, i, val, F)
            if sub:
                point[i] = val
                cur = sub
                break
    return point


def _partial(poly: CoeffPoly, i: int, val: int, F: Field) -> CoeffPoly:
    out = {}
    for exps, c in poly.terms.items():
        rest = []
        for j, e in exps:
            if j == i:
                c = F.mul(c, F.norm(val ** e))
            else:
                rest.append((j, e))
        if c:
            k = tuple(rest)
            s = F.add(out.get(k, 0), c)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return CoeffPoly(F, out, _raw=True)


def _pool_decide(f: LiePoly, A: AlgebraSpec) -> Verdict:
    F = A.field
    N = A.N
    deg = f.multidegree.total
    value, gens, namer = pool_evaluate(f, A, N)
    target = None
    for entry in value.entries():
        for w, c in sorted(entry.terms.items()):
            r = frobenius_reduce(c) if F.p is not None else c
            if r:
                target = r
                break
        if target is not None:
            break
    if target is None:
        return IdentityUpToBound(bound=f"N={N} generators (< 2*{deg})", method="generic-pool")
    point = _nonroot(target, F)

    def specialise(c: CoeffPoly) -> CoeffPoly:
        return CoeffPoly.const(F, c.evaluate(point))

    witness = {v: m.map_entries(lambda e: e.map_coefficients(specialise)) for v, m in gens.items()}
    return _nonidentity(f, witness, "generic-pool")
