"""Witness search: curated substitutions, parity patterns, random trials."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from ..freelie import LiePoly
from ..grassmann import GrassmannContext, GrassmannElement
from ..supermatrix import SuperMatrix
from .algebra import AlgebraSpec
from .decide import (
    element,
    is_identity_general,
    is_identity_multilinear,
    matrix,
    replay,
)


@dataclass
class WitnessResult:
    witness: Optional[Dict[str, SuperMatrix]]
    value: Optional[SuperMatrix]
    strategy: str
    bound: str

    @property
    def found(self) -> bool:
        return self.witness is not None


# ---------------------------------------------------------------------------
# curated substitutions


def cnz_substitution(field) -> Dict[str, SuperMatrix]:
    """x = u = t = E11, y = e1*E12, v = e2*E21 over E^1."""
    ctx = GrassmannContext(field, 2, True)
    e11 = matrix(ctx, a=[((), 1)])
    return {
        "x": e11,
        "u": e11,
        "t": e11,
        "y": matrix(ctx, b=[((1,), 1)]),
        "v": matrix(ctx, d=[((2,), 1)]),
    }


@dataclass
class NoncData:
    witness: Dict[str, SuperMatrix]
    a: List[GrassmannElement]
    b0: GrassmannElement
    b1: GrassmannElement
    c0: GrassmannElement
    c1: GrassmannElement
    c2: GrassmannElement


def nonc_substitution(k: int, p: int, field) -> NoncData:
    """z_i = a_i E11, x = b0 E11 + b1 E12, y = c0 E11 + c1 E12 + c2 E21.

    a_i are single even words; b0 and c0 are sums of p-1 disjoint even words
    so that their (p-1)-th powers survive; b1, c1, c2 are generators."""
    nxt = [1]

    def fresh(n):
        out = tuple(range(nxt[0], nxt[0] + n))
        nxt[0] += n
        return out

    a_idx = [fresh(2) for _ in range(2 * k)]
    b0_idx = [fresh(2) for _ in range(p - 1)]
    c0_idx = [fresh(2) for _ in range(p - 1)]
    b1, c1, c2 = fresh(1), fresh(1), fresh(1)
    ctx = GrassmannContext(field, nxt[0] - 1, False)
    a = [element(ctx, [(w, 1)]) for w in a_idx]
    b0 = element(ctx, [(w, 1) for w in b0_idx])
    c0 = element(ctx, [(w, 1) for w in c0_idx])
    g = lambda i: element(ctx, [(i, 1)])
    w = {f"z{i + 1}": matrix(ctx, a=[(a_idx[i], 1)]) for i in range(2 * k)}
    w["x"] = matrix(ctx, a=[(x, 1) for x in b0_idx], b=[(b1, 1)])
    w["y"] = matrix(ctx, a=[(x, 1) for x in c0_idx], b=[(c1, 1)], d=[(c2, 1)])
    return NoncData(w, a, b0, g(b1), c0, g(c1), g(c2))


CURATED: Dict[str, Callable[[LiePoly, AlgebraSpec], Optional[Dict[str, SuperMatrix]]]] = {}


def _curated_cnz(f: LiePoly, A: AlgebraSpec):
    if not A.unital:
        return None
    return cnz_substitution(A.field)


def _curated_nonc(f: LiePoly, A: AlgebraSpec):
    if A.field.p is None:
        return None
    zs = [v for v in f.variables() if v.startswith("z")]
    return nonc_substitution(len(zs) // 2, A.field.p, A.field).witness


CURATED["cnz"] = _curated_cnz
CURATED["nonc"] = _curated_nonc


# ---------------------------------------------------------------------------
# random sparse elements


def random_element(ctx: GrassmannContext, rng: random.Random, parity: int, terms: int = 2) -> GrassmannElement:
    F = ctx.field
    parts = []
    for _ in range(terms):
        length = rng.choice([l for l in range(0, min(ctx.N, 4) + 1) if l % 2 == parity and (l or ctx.unital)] or [parity])
        idx = tuple(sorted(rng.sample(range(1, ctx.N + 1), length)))
        c = rng.randrange(1, F.p) if F.p else rng.randint(-3, 3) or 1
        parts.append((idx, c))
    return element(ctx, parts)


def random_matrix(ctx: GrassmannContext, rng: random.Random) -> SuperMatrix:
    return SuperMatrix(
        random_element(ctx, rng, 0),
        random_element(ctx, rng, 1),
        random_element(ctx, rng, 1),
        random_element(ctx, rng, 0),
    )


# ---------------------------------------------------------------------------


def _covers(f: LiePoly, w: Dict[str, SuperMatrix]) -> bool:
    return set(f.variables()) <= set(w)


def witness_search(
    f: LiePoly,
    A: AlgebraSpec,
    strategy: str = "all",
    seed: int = 0,
    tries: int = 200,
) -> WitnessResult:
    """Search for a substitution on which f is nonzero.

    Strategies, tried in this order for ``"all"``: ``curated`` (fixed
    matrices known to separate specific families), ``patterns`` (the
    parity-pattern enumeration for multilinear f, the generic model
    otherwise), ``random`` (seeded sparse elements)."""
    order = ["curated", "patterns", "random"] if strategy == "all" else [strategy]
    bounds = []
    for st in order:
        if st == "curated":
            for name, make in CURATED.items():
                w = make(f, A)
                if w is None or not _covers(f, w):
                    continue
                w = {k: v for k, v in w.items() if k in f.variables()}
                val = replay(f, w)
                if not val.is_zero():
                    return WitnessResult(w, val, f"curated:{name}", "")
            bounds.append(f"curated: {len(CURATED)} substitutions")
        elif st == "patterns":
            if f.terms and f.is_multilinear():
                v = is_identity_multilinear(f, A)
            elif f.terms and f.is_multihomogeneous():
                v = is_identity_general(f, A)
            else:
                v = None
            if v is not None and not v.is_identity:
                return WitnessResult(v.witness, v.value, f"patterns:{v.method}", "")
            bounds.append("patterns: exhaustive")
        elif st == "random":
            rng = random.Random(seed)
            n = max(len(f.variables()), 1)
            ctx = GrassmannContext(A.field, max(2 * n + 2, 4), A.unital)
            for _ in range(tries):
                w = {v: random_matrix(ctx, rng) for v in f.variables()}
                val = replay(f, w)
                if not val.is_zero():
                    return WitnessResult(w, val, "random", "")
            bounds.append(f"random: {tries} trials, seed {seed}")
        else:
            raise ValueError(f"unknown strategy {st!r}")
    return WitnessResult(None, None, strategy, "; ".join(bounds))
