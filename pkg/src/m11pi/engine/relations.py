"""Coefficient relations for identities written in the two-family form

    f = sum_{i,j} alpha_ij [x1, x_i, ..., x_j] + sum_{i != k} beta_i [x_k, x_i, ..., x1]

(middle letters in increasing variable order; modulo consequences of cm the
middle positions may be permuted freely, so this loses nothing).

The representation is found by solving a linear system modulo the
consequence space of cm.  It need not be unique, so the relations are
checked on one particular solution and on a basis of the homogeneous
solutions; all of them must satisfy the relations for the check to pass.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from ..freelie import LiePoly, LieTerm, MultiDegree, lnorm, sort_vars
from ..identities import cm
from ..scalars import Field, QQ
from .algebra import AlgebraSpec
from .decide import is_identity_general
from .linalg import Echelon, Vec, kernel
from .spaces import SubspaceBasis, consequence_space, coordinates

_CM_CACHE: Dict[Tuple[MultiDegree, Field], SubspaceBasis] = {}


def _cm_space(D: MultiDegree, F: Field) -> SubspaceBasis:
    key = (D, F)
    if key not in _CM_CACHE:
        _CM_CACHE[key] = consequence_space({"cm": cm(F)}, D, F)
    return _CM_CACHE[key]


@dataclass
class SubsReport:
    k: str
    expressible: bool
    clauses: Dict[str, Optional[bool]] = dc_field(default_factory=dict)
    solutions: int = 0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.expressible and all(v is not False for v in self.clauses.values())


def _middle(D: MultiDegree, first: str, second: str, last: str) -> Optional[List[str]]:
    c = Counter(D.as_dict())
    for v in (first, second, last):
        c[v] -= 1
        if c[v] < 0:
            return None
    return [v for v in sort_vars(c) for _ in range(c[v])]


def displayed_terms(D: MultiDegree, x1: str, xk: str):
    """Index labels and monomials of the two families."""
    V = D.variables
    alpha: List[Tuple[Tuple[str, str], LieTerm]] = []
    beta: List[Tuple[str, LieTerm]] = []
    for i in V:
        if i == x1:
            continue
        for j in V:
            if j == x1:
                continue
            mid = _middle(D, x1, i, j)
            if mid is not None and not (i == x1):
                alpha.append(((i, j), lnorm(x1, i, *mid, j)))
    for i in V:
        if i == xk:
            continue
        mid = _middle(D, xk, i, x1)
        if mid is not None:
            beta.append((i, lnorm(xk, i, *mid, x1)))
    return alpha, beta


def _relations(
    sol: Dict[str, object], alpha_idx, beta_idx, m: int, x1: str, xk: str, F: Field, homogeneous: bool
) -> Dict[str, Optional[bool]]:
    s = 1 if m % 2 == 0 else -1
    a = {idx: sol.get(("a", idx), 0) for idx in alpha_idx}
    b = {i: sol.get(("b", i), 0) for i in beta_idx}
    out: Dict[str, Optional[bool]] = {}
    ok = True
    for (i, j), v in a.items():
        if F.sub(v, F.mul(s, a.get((j, i), 0))) != 0:
            ok = False
    out["i"] = ok
    js = [j for j in sort_vars({j for _, j in alpha_idx}) if j != xk]
    ok = True
    for j in js:
        total = 0
        for (i, jj), v in a.items():
            if jj == j:
                total = F.add(total, v)
        if F.sub(b.get(j, 0), F.mul(-s, total)) != 0:
            ok = False
    out["ii"] = ok if js else None
    if xk != x1:
        sb = 0
        for v in b.values():
            sb = F.add(sb, v)
        sa = 0
        for (i, j), v in a.items():
            if j == xk:
                sa = F.add(sa, v)
        out["iii"] = F.sub(sb, F.mul(s, sa)) == 0
    else:
        out["iii"] = None
    return out


def subs_relations_check(
    f: LiePoly,
    x1: Optional[str] = None,
    xk: Optional[str] = None,
    field: Field = QQ,
    require_identity: bool = True,
) -> SubsReport:
    F = field
    f = f.over(F) if f.field != F else f
    if not f.terms:
        return SubsReport(xk or "", False, note="zero polynomial")
    if not f.is_multihomogeneous():
        return SubsReport(xk or "", False, note="precondition: f is not multihomogeneous")
    D = f.multidegree
    m = D.total
    if m < 3:
        return SubsReport(xk or "", False, note="precondition: degree < 3")
    if require_identity and not is_identity_general(f, AlgebraSpec(F, unital=True)).is_identity:
        return SubsReport(xk or "", False, note="precondition: f is not an identity of the unital algebra")
    V = D.variables
    x1 = x1 or V[0]
    xk = xk or V[-1]
    alpha, beta = displayed_terms(D, x1, xk)
    S = _cm_space(D, F)
    C = coordinates(D)
    E = S.echelon()

    def red(poly: LiePoly) -> Vec:
        return E.reduce(C.of_lie(poly))[0]

    labels = [("a", idx) for idx, _ in alpha] + [("b", i) for i, _ in beta]
    images = [red(LiePoly.of(t, 1, F)) for _, t in alpha] + [red(LiePoly.of(t, 1, F)) for _, t in beta]
    images.append(red(f))
    null = kernel(images, F)
    fi = len(labels)
    part = next((v for v in null if v.get(fi)), None)
    if part is None:
        return SubsReport(xk, False, note="precondition: f is not expressible in the displayed form")
    pf = part[fi]
    scale = F.neg(F.inv(pf))
    particular = {labels[i]: F.mul(c, scale) for i, c in part.items() if i != fi}
    homs = []
    for v in null:
        if v is part:
            continue
        t = F.div(v.get(fi, 0), pf)
        w = dict(v)
        for i, c in part.items():
            w[i] = F.sub(w.get(i, 0), F.mul(t, c))
        homs.append({labels[i]: c for i, c in w.items() if i != fi and c})
    alpha_idx = [idx for idx, _ in alpha]
    beta_idx = [i for i, _ in beta]
    clauses = _relations(particular, alpha_idx, beta_idx, m, x1, xk, F, False)
    for h in homs:
        r = _relations(h, alpha_idx, beta_idx, m, x1, xk, F, True)
        for key, val in r.items():
            if val is False:
                clauses[key] = False
    return SubsReport(xk, True, clauses, 1 + len(homs))
