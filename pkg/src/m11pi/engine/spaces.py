"""Identity spaces, consequence spaces, membership and equality.

Everything is compared in associative-word coordinates.  When the
multidegree D has a letter ``a`` of degree 1, only words starting with
``a`` are kept: a Lie element linear in ``a`` is a combination of the
left-normed monomials [a, y2, ..., yn], and [a, y2, ..., yn] is the only one
of them whose expansion contains the word a*y2*...*yn.  So this projection is
injective on the D-component of the free Lie algebra and the coordinate of
a*w is the coefficient of [a, w] in that basis.  Without such a letter the
full word list is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..freelie import (
    AssocPoly,
    LiePoly,
    LieTerm,
    MultiDegree,
    Var,
    expand,
    expand_term,
    lnorm,
    serialize,
    sort_vars,
    spanning_monomials,
    var_key,
)
from ..scalars import Field, QQ, reduce_exponent
from .algebra import AlgebraSpec
from .linalg import Echelon, Vec, kernel, vec_add_scaled

DEFAULT_CAP = 7


class CapExceeded(ValueError):
    pass


class MultidegreeMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# coordinates


def multiset_words(counts: Mapping[str, int]) -> List[Tuple[str, ...]]:
    """All words with the given letter counts, lexicographic in var order."""
    order = sort_vars(counts)
    left = dict(counts)
    n = sum(left.values())
    out: List[Tuple[str, ...]] = []
    cur: List[str] = []

    def rec():
        if len(cur) == n:
            out.append(tuple(cur))
            return
        for v in order:
            if left[v]:
                left[v] -= 1
                cur.append(v)
                rec()
                cur.pop()
                left[v] += 1

    rec()
    return out


class Coordinates:
    """Coordinate system of the D-component (see module docstring)."""

    def __init__(self, D: MultiDegree):
        self.D = D
        ones = [v for v, e in D.items if e == 1]
        self.lead: Optional[str] = ones[0] if ones else None
        if self.lead is not None:
            rest = D.as_dict()
            rest[self.lead] -= 1
            rest = {k: v for k, v in rest.items() if v}
            self.words = [(self.lead,) + w for w in multiset_words(rest)]
        else:
            self.words = multiset_words(D.as_dict())
        self.index = {w: i for i, w in enumerate(self.words)}
        self._basis: Optional[List[LieTerm]] = None
        self._solver: Optional[Echelon] = None

    @property
    def ncols(self) -> int:
        return len(self.words)

    def of_assoc(self, p: AssocPoly) -> Vec:
        idx = self.index
        return {idx[w]: c for w, c in p.terms.items() if w in idx}

    def of_lie(self, f: LiePoly) -> Vec:
        return self.of_assoc(expand(f))

    # Lie forms ---------------------------------------------------------------

    def basis(self) -> List[LieTerm]:
        """Left-normed monomials forming a basis of the D-component."""
        if self._basis is None:
            if self.lead is not None:
                self._basis = [lnorm(*w) for w in self.words]
            else:
                E = Echelon(QQ, track=True)
                chosen = []
                for t in spanning_monomials(self.D):
                    added, _ = E.add(self.of_assoc(expand(t)), {len(chosen): 1})
                    if added:
                        chosen.append(t)
                self._basis = chosen
        return self._basis

    def to_lie(self, v: Vec, field: Field) -> LiePoly:
        if self.lead is not None:
            return LiePoly(field, [(c, lnorm(*self.words[i])) for i, c in sorted(v.items())])
        B = self.basis()
        if self._solver is None or self._solver.field != field:
            S = Echelon(field, track=True)
            for i, t in enumerate(B):
                S.add(self.of_assoc(expand(LiePoly.of(t, 1, field))), {i: 1})
            self._solver = S
        r, pr = self._solver.reduce(v)
        if r:
            raise ValueError("vector is not in the Lie component")
        return LiePoly(field, [(field.neg(c), B[i]) for i, c in sorted(pr.items())])


@lru_cache(maxsize=256)
def coordinates(D: MultiDegree) -> Coordinates:
    return Coordinates(D)


# ---------------------------------------------------------------------------
# subspaces


@dataclass
class Bounds:
    """Search bounds of a consequence computation."""

    s: int = 2
    cap: int = DEFAULT_CAP

    def as_json(self):
        return {"summands": self.s, "degree_cap": self.cap}


@dataclass
class SpanVec:
    """One spanning vector of a consequence space: the component of
    [g(sigma), tail...] picked out by the exponent classes ``ks``."""

    gen: str
    images: Tuple[Tuple[str, Tuple[LieTerm, ...]], ...]
    ks: Tuple[Tuple[Tuple[int, ...], ...], ...]  # per variable: class members
    tail: Tuple[str, ...]

    def describe(self) -> str:
        parts = []
        for (v, terms), cls in zip(self.images, self.ks):
            names = [serialize(t) for t in terms]
            if len(names) == 1:
                parts.append(f"{v}->{names[0]}")
            else:
                ks = "|".join("(" + ",".join(map(str, k)) + ")" for k in cls)
                parts.append(f"{v}->{'+'.join(names)}@{ks}")
        s = f"{self.gen}({'; '.join(parts)})"
        if self.tail:
            s = f"[{s},{','.join(self.tail)}]"
        return s


@dataclass
class SubspaceBasis:
    D: MultiDegree
    field: Field
    coords: Coordinates
    rows: List[Vec]
    label: str = ""
    bounds: Optional[Bounds] = None
    complete: bool = True
    provenance: Optional[List[Vec]] = None
    spanning: Optional[List[SpanVec]] = None
    gens: Optional[Dict[str, LiePoly]] = None
    _echelon: Optional[Echelon] = dc_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> List[Tuple[str, ...]]:
        return self.coords.words

    def echelon(self) -> Echelon:
        if self._echelon is None:
            E = Echelon(self.field, track=self.provenance is not None)
            for i, r in enumerate(self.rows):
                piv = min(r)
                E.rows[piv] = r
                if self.provenance is not None:
                    E.prov[piv] = self.provenance[i]
            self._echelon = E
        return self._echelon

    def lie_rows(self) -> List[LiePoly]:
        return [self.coords.to_lie(r, self.field) for r in self.rows]

    def as_json(self):
        return {
            "multidegree": str(self.D),
            "field": self.field.name,
            "dimension": self.dim,
            "columns": len(self.coords.words),
            "complete": self.complete,
            "bounds": self.bounds.as_json() if self.bounds else None,
        }


@dataclass
class Membership:
    member: bool
    certificate: Optional[List[Tuple[object, SpanVec]]] = None
    verified: bool = False
    note: str = ""

    def __bool__(self):
        return self.member


def _check_D(space: SubspaceBasis, f: LiePoly):
    if not f.terms:
        return
    if not f.is_multihomogeneous() or f.multidegree != space.D:
        raise MultidegreeMismatch(f"polynomial is not of multidegree {space.D}")


def contains(space: SubspaceBasis, f: LiePoly) -> Membership:
    """Exact membership in the computed span.  For consequence spaces a
    positive answer carries a certificate, re-checked by expansion."""
    _check_D(space, f)
    F = space.field
    f = f.over(F) if f.field != F else f
    v = space.coords.of_lie(f)
    E = space.echelon()
    r, pr = E.reduce(v, {} if E.track else None)
    if r:
        note = "" if space.complete else f"not found within bounds {space.bounds.as_json() if space.bounds else ''}"
        return Membership(False, note=note)
    if not (E.track and space.spanning is not None):
        return Membership(True)
    cert = [(F.neg(c), space.spanning[i]) for i, c in sorted(pr.items())]
    ok = verify_certificate(space, f, cert)
    return Membership(True, cert, ok)


def verify_certificate(space: SubspaceBasis, f: LiePoly, cert) -> bool:
    """Recompute every cited spanning vector from scratch and compare the
    full associative expansions."""
    F = space.field
    total = AssocPoly(F, {}, _raw=True)
    for c, sv in cert:
        total = total + span_vector(sv, space.gens, F).scale(c)
    return total == expand(f.over(F) if f.field != F else f)


@dataclass
class Equality:
    equal: bool
    dim_a: int
    dim_b: int

    def __bool__(self):
        return self.equal


def spaces_equal(a: SubspaceBasis, b: SubspaceBasis) -> Equality:
    if a.D != b.D or a.field != b.field:
        raise MultidegreeMismatch("spaces live in different components")
    return Equality(a.rows == b.rows, a.dim, b.dim)


def containment(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    """a is a subspace of b."""
    if a.D != b.D or a.field != b.field:
        raise MultidegreeMismatch("spaces live in different components")
    E = b.echelon()
    return all(not E.reduce(r)[0] for r in a.rows)


def span_of(D: MultiDegree, field: Field, vectors: Sequence[Vec], label: str = "") -> SubspaceBasis:
    E = Echelon(field)
    for v in vectors:
        E.add(v)
    return SubspaceBasis(D, field, coordinates(D), E.sorted_rows(), label)


def span_of_polys(D: MultiDegree, polys: Sequence[LiePoly], field: Field, label: str = "") -> SubspaceBasis:
    C = coordinates(D)
    return span_of(D, field, [C.of_lie(p.over(field) if p.field != field else p) for p in polys], label)


# ---------------------------------------------------------------------------
# identity spaces


def evaluation_images(terms: Sequence[LieTerm], variables: Sequence[str], A: AlgebraSpec, degree: int) -> List[Vec]:
    """Evaluation coordinates of each term on the algebra."""
    F = A.field
    if A.truncated(degree):
        from .decide import pool_coordinates, pool_evaluate

        out = []
        for t in terms:
            value, _, _ = pool_evaluate(LiePoly.of(t, 1, F), A, A.N)
            out.append(pool_coordinates(value, F))
        return out
    from .symbolic import model_for

    model = model_for(variables, A.unital)
    return [model.term_coordinates(t, F) for t in terms]


def identity_space(D: MultiDegree, A: AlgebraSpec, cap: int = DEFAULT_CAP) -> SubspaceBasis:
    """Kernel of evaluation on the D-component, in word coordinates."""
    if D.total > cap:
        raise CapExceeded(f"total degree {D.total} exceeds cap {cap}")
    F = A.field
    C = coordinates(D)
    B = C.basis()
    images = evaluation_images(B, D.variables, A, D.total)
    null = kernel(images, F)
    vecs = []
    for lam in null:
        v: Vec = {}
        for i, c in lam.items():
            vec_add_scaled(F, v, {j: F.norm(x) for j, x in C.of_assoc(expand(B[i])).items()}, c)
        vecs.append(v)
    sp = span_of(D, F, vecs, f"identities of {A.label}")
    sp.complete = not A.truncated(D.total)
    return sp


# ---------------------------------------------------------------------------
# consequence spaces


def sub_multidegrees(R: MultiDegree) -> List[MultiDegree]:
    """Nonzero d <= R, ordered by (total, variable order)."""
    items = R.items
    out = []
    for exps in product(*(range(e + 1) for _, e in items)):
        if any(exps):
            out.append(MultiDegree({k: e for (k, _), e in zip(items, exps)}))
    out.sort(key=lambda d: d.sort_key())
    return out


@lru_cache(maxsize=4096)
def basis_monomials(d: MultiDegree) -> Tuple[LieTerm, ...]:
    if d.total == 1:
        return (Var(d.variables[0]),)
    return tuple(coordinates(d).basis())


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Positive integer vectors of the given length summing to total."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _exponent_class(k: Tuple[int, ...], p: Optional[int]) -> Tuple[Tuple[int, ...], ...]:
    """Exponent vectors (same length, same sum) giving the same function of
    the scalars as k: over GF(p) exponents agree after t^p = t."""
    if p is None:
        return (k,)
    red = tuple(reduce_exponent(e, p) for e in k)
    return tuple(
        k2 for k2 in _compositions(sum(k), len(k)) if tuple(reduce_exponent(e, p) for e in k2) == red
    )


def _load(ds: Sequence[MultiDegree], k: Tuple[int, ...]) -> MultiDegree:
    acc = MultiDegree()
    for d, e in zip(ds, k):
        acc = acc + d.scaled(e)
    return acc


@dataclass
class _Choice:
    var: str
    terms: Tuple[LieTerm, ...]
    degs: Tuple[MultiDegree, ...]
    cls: Tuple[Tuple[int, ...], ...]


def _var_choices(e: int, R: MultiDegree, s: int, p: Optional[int]) -> Iterator[Tuple[Tuple[LieTerm, ...], Tuple[MultiDegree, ...], Tuple[Tuple[int, ...], ...], MultiDegree]]:
    """Images of a variable of degree e: one monomial (e = 1), or a formal
    combination of up to s distinct monomials with one exponent class."""
    cands: List[Tuple[LieTerm, MultiDegree]] = []
    for d in sub_multidegrees(R):
        if d.scaled(1).le(R):
            cands += [(t, d) for t in basis_monomials(d)]
    if e == 1:
        for t, d in cands:
            yield (t,), (d,), ((1,),), d
        return
    for r in range(1, s + 1):
        for combo in _combinations(len(cands), r):
            terms = tuple(cands[i][0] for i in combo)
            ds = tuple(cands[i][1] for i in combo)
            seen = set()
            for k in _compositions(e, r):
                cls = _exponent_class(k, p)
                if cls in seen or cls[0] != k:
                    continue
                seen.add(cls)
                loads = {_load(ds, k2) for k2 in cls}
                if len(loads) != 1:
                    continue  # mixed multidegrees inside one class: skipped
                load = next(iter(loads))
                if load.le(R):
                    yield terms, ds, cls, load


def _combinations(n: int, r: int):
    from itertools import combinations

    return combinations(range(n), r)


def enumerate_instances(name: str, g: LiePoly, D: MultiDegree, s: int, p: Optional[int]) -> Iterator[SpanVec]:
    gm = g.multidegree
    V = gm.variables
    min_total = gm.total
    if min_total > D.total:
        return
    chosen: List[Tuple[str, Tuple[LieTerm, ...], Tuple[Tuple[int, ...], ...]]] = []

    def rec(i: int, R: MultiDegree):
        if i == len(V):
            for tail in multiset_words(R.as_dict()) if R.total else [()]:
                yield SpanVec(
                    name,
                    tuple((v, terms) for v, terms, _ in chosen),
                    tuple(cls for _, _, cls in chosen),
                    tuple(tail),
                )
            return
        v = V[i]
        # remaining variables need at least their own degree in letters
        reserve = sum(gm[w] for w in V[i + 1 :])
        for terms, ds, cls, load in _var_choices(gm[v], R, s, p):
            rest = R - load
            if rest.total < reserve:
                continue
            chosen.append((v, terms, cls))
            yield from rec(i + 1, rest)
            chosen.pop()

    yield from rec(0, D)


def span_vector(sv: SpanVec, gens: Mapping[str, LiePoly], F: Field) -> AssocPoly:
    """Recompute the associative expansion of one spanning vector."""
    g = gens[sv.gen]
    g = g.over(F) if g.field != F else g
    E = expand(g)
    images = {}
    for v, terms in sv.images:
        images[v] = [AssocPoly(F, expand_term(t)) for t in terms]
    total = AssocPoly(F, {}, _raw=True)
    # product over variables of their exponent classes
    names = [v for v, _ in sv.images]
    for combo in product(*sv.ks):
        target = dict(zip(names, combo))
        total = total + _component(E, images, target, F)
    for a in sv.tail:
        total = total.bracket(AssocPoly.letter(a, F))
    return total


def _component(E: AssocPoly, images: Mapping[str, List[AssocPoly]], target: Mapping[str, Tuple[int, ...]], F: Field) -> AssocPoly:
    """Part of E(v -> sum_j lambda_{v,j} m_{v,j}) with lambda-exponents
    ``target``."""
    out: Dict[Tuple[str, ...], object] = {}
    names = sorted(images)
    slot = {v: i for i, v in enumerate(names)}
    goal = tuple(target[v] for v in names)
    for w, c in E.terms.items():
        states: Dict[Tuple[Tuple[int, ...], ...], AssocPoly] = {
            tuple((0,) * len(images[v]) for v in names): AssocPoly(F, {(): c}, _raw=True)
        }
        for letter in w:
            i = slot[letter]
            imgs = images[letter]
            nxt: Dict[Tuple[Tuple[int, ...], ...], AssocPoly] = {}
            for st, acc in states.items():
                used = st[i]
                for j, P in enumerate(imgs):
                    if used[j] >= goal[i][j]:
                        continue
                    nu = used[:j] + (used[j] + 1,) + used[j + 1 :]
                    key = st[:i] + (nu,) + st[i + 1 :]
                    val = acc * P
                    prev = nxt.get(key)
                    nxt[key] = val if prev is None else prev + val
            states = nxt
        acc = states.get(goal)
        if acc is not None:
            for ww, cc in acc.terms.items():
                s2 = F.add(out.get(ww, 0), cc)
                if s2:
                    out[ww] = s2
                else:
                    out.pop(ww, None)
    return AssocPoly(F, out, _raw=True)


def consequence_space(
    gens: Mapping[str, LiePoly],
    D: MultiDegree,
    field: Field = QQ,
    bounds: Optional[Bounds] = None,
    stop_at: Optional[int] = None,
) -> SubspaceBasis:
    """Span of substitution instances of the generators (and their brackets
    with letters) at multidegree D.

    Variables of degree 1 are substituted by basis monomials, which is
    complete by linearity; in particular the result is the whole T-ideal
    component when every generator is multilinear.  A variable of higher
    degree e takes a formal combination of up to ``bounds.s`` monomials and
    each exponent class of the scalars is a separate vector: over Q each
    homogeneous component lies in the T-ideal (Vandermonde), over GF(p) the
    sum over a class of exponents that agree as functions does.  Classes
    whose members have different multidegrees are skipped, so over GF(p) the
    result is a certified under-approximation.

    ``stop_at`` lets callers that know an upper bound on the dimension (for
    instance the dimension of the identity space) stop early.
    """
    bounds = bounds or Bounds()
    if D.total > bounds.cap:
        raise CapExceeded(f"total degree {D.total} exceeds cap {bounds.cap}")
    F = field
    C = coordinates(D)
    gens = {k: (g.over(F) if g.field != F else g) for k, g in gens.items()}
    E = Echelon(F, track=True)
    spanning: List[SpanVec] = []
    seen = set()
    complete = True
    for name in sorted(gens, key=var_key):
        g = gens[name]
        if not g.terms:
            continue
        if not g.is_multihomogeneous():
            raise ValueError(f"generator {name} is not multihomogeneous")
        if any(e > 1 for _, e in g.multidegree.items):
            complete = False
        for sv in enumerate_instances(name, g, D, bounds.s, F.p):
            if E.rank == C.ncols or (stop_at is not None and E.rank >= stop_at):
                break
            v = C.of_assoc(span_vector(sv, gens, F))
            if not v:
                continue
            key = tuple(sorted(v.items()))
            if key in seen:
                continue
            seen.add(key)
            added, _ = E.add(v, {len(spanning): 1})
            if added:
                spanning.append(sv)
    if E.rank == C.ncols:
        complete = True
    label = "consequences of " + ",".join(sorted(gens, key=var_key))
    return SubspaceBasis(
        D,
        F,
        C,
        E.sorted_rows(),
        label,
        bounds,
        complete,
        E.sorted_prov(),
        spanning,
        dict(gens),
    )
