"""Catalogue of the named Lie polynomials used by the checks."""

from __future__ import annotations

from typing import Callable, Dict, List

from .freelie import Bracket, LiePoly, LieTerm, Var, lnorm, power, spine
from .scalars import Field, QQ


def _t(*items) -> LieTerm:
    return lnorm(*items)


def _names(stem: str, n: int) -> List[str]:
    return [f"{stem}{i}" for i in range(1, n + 1)]


def cm(field: Field = QQ) -> LiePoly:
    """Centre-by-metabelian identity [x,y,[u,v],z]."""
    return LiePoly.of(_t("x", "y", _t("u", "v"), "z"), 1, field)


def cp(p: int, field: Field | None = None) -> LiePoly:
    """[x,z,u^(p),v]."""
    return LiePoly.of(_t("x", "z", *power("u", p), "v"), 1, field or QQ)


def pp(p: int, field: Field | None = None) -> LiePoly:
    """[x,y,x^(p-1),y^(p-1),v]."""
    return LiePoly.of(_t("x", "y", *power("x", p - 1), *power("y", p - 1), "v"), 1, field or QQ)


def ja(k: int, field: Field = QQ) -> LiePoly:
    """Cyclic sum over (x,y,z) of [x,y,t1..t2k,z]."""
    ts = _names("t", 2 * k)
    return LiePoly(
        field,
        [(1, _t("x", "y", *ts, "z")), (1, _t("y", "z", *ts, "x")), (1, _t("z", "x", *ts, "y"))],
    )


def c_identity(k: int, sign: int, field: Field = QQ) -> LiePoly:
    """[x,y,t1..tk,[u,v]] + sign*[u,v,t1..tk,[x,y]]."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    ts = _names("t", k)
    return LiePoly(
        field,
        [(1, _t("x", "y", *ts, _t("u", "v"))), (sign, _t("u", "v", *ts, _t("x", "y")))],
    )


def con1(k: int, p: int, field: Field | None = None) -> LiePoly:
    """[y,z1..z2k,y^(p)]."""
    return LiePoly.of(_t("y", *_names("z", 2 * k), *power("y", p)), 1, field or QQ)


def con2(k: int, p: int, field: Field | None = None) -> LiePoly:
    """[x,y^(p),z..,t] + [x,t,z..,y^(p)] - [x,y,t,z..,y^(p-1)], z1..z_{2k-1}
    in every term (the middle run must be equally long for the three
    terms to share a multidegree)."""
    if k < 1:
        raise ValueError("k >= 1")
    zs = _names("z", 2 * k - 1)
    return LiePoly(
        field or QQ,
        [
            (1, _t("x", *power("y", p), *zs, "t")),
            (1, _t("x", "t", *zs, *power("y", p))),
            (-1, _t("x", "y", "t", *zs, *power("y", p - 1))),
        ],
    )


def con3(k: int, p: int, field: Field | None = None) -> LiePoly:
    """[x,y^(p),z1..z_{2k-1},x^(p-1)] - [y,x^(p),z1..z_{2k-1},y^(p-1)]."""
    if k < 1:
        raise ValueError("k >= 1")
    zs = _names("z", 2 * k - 1)
    return LiePoly(
        field or QQ,
        [
            (1, _t("x", *power("y", p), *zs, *power("x", p - 1))),
            (-1, _t("y", *power("x", p), *zs, *power("y", p - 1))),
        ],
    )


def tr(p: int, field: Field | None = None) -> LiePoly:
    """[x,y^(p),z,v] - [z,y^(p),x,v]."""
    return LiePoly(
        field or QQ,
        [(1, _t("x", *power("y", p), "z", "v")), (-1, _t("z", *power("y", p), "x", "v"))],
    )


def cnz(m: int, field: Field = QQ) -> LiePoly:
    """[x,y,t^(m),[u,v]]."""
    return LiePoly.of(_t("x", "y", *(power("t", m) if m else []), _t("u", "v")), 1, field)


def nonc1(k: int, p: int, field: Field | None = None) -> LiePoly:
    """[y,x,z1..z2k,y^(p)]."""
    return LiePoly.of(_t("y", "x", *_names("z", 2 * k), *power("y", p)), 1, field or QQ)


def nonc2(k: int, p: int, field: Field | None = None) -> LiePoly:
    """[x,y^(p-1),x^(p-1),z1..z2k,y]."""
    return LiePoly.of(
        _t("x", *power("y", p - 1), *power("x", p - 1), *_names("z", 2 * k), "y"), 1, field or QQ
    )


def insert_after_second(f: LiePoly, y: str = "y", z: str = "z") -> LiePoly:
    """Insert the letters y, z right after the second item of every
    left-normed term of f."""
    clash = {y, z} & set(f.variables())
    if clash:
        raise ValueError(f"inserted letters {sorted(clash)} already occur in f")
    pairs = []
    for t, c in f.terms.items():
        items = spine(t)
        if len(items) < 2:
            raise ValueError("terms need at least two items")
        pairs.append((c, lnorm(*items[:2], Var(y), Var(z), *items[2:])))
    return LiePoly(f.field, pairs)


def standard(p: int = 3, field: Field | None = None) -> Dict[str, LiePoly]:
    """cm, cp, pp at characteristic p."""
    F = field or QQ
    return {"cm": cm(F), "cp": cp(p, F), "pp": pp(p, F)}


CATALOGUE: Dict[str, Callable[..., LiePoly]] = {
    "cm": cm,
    "cp": cp,
    "pp": pp,
    "ja": ja,
    "c": c_identity,
    "con1": con1,
    "con2": con2,
    "con3": con3,
    "tr": tr,
    "cnz": cnz,
    "nonc1": nonc1,
    "nonc2": nonc2,
}
