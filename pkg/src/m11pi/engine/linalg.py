"""Exact linear algebra over Q and GF(p) for the subspace computations.

Vectors are sparse dicts ``column -> raw field value``.  :class:`Echelon`
keeps rows in reduced row-echelon form and can track, for every row, the
combination of inserted vectors that produced it (its provenance), which
is how membership certificates are made.

Over Q, large systems first go through a modular pass (numpy, one prime
below 2^24) that only *selects* rows; all numbers that end up in results
are recomputed exactly and the selection is verified, so the prime can only
cost time, never correctness.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..scalars import Field

Vec = Dict[int, object]

MOD_PRIME = 16777213  # largest prime < 2^24; keeps int64 matmuls exact


def vec_add_scaled(F: Field, v: Vec, w: Vec, s) -> None:
    """v += s * w, in place."""
    p = F.p
    for c, x in w.items():
        if p is None:
            y = v.get(c, 0) + s * x
            if isinstance(y, Fraction) and y.denominator == 1:
                y = y.numerator
        else:
            y = (v.get(c, 0) + s * x) % p
        if y:
            v[c] = y
        else:
            v.pop(c, None)


def vec_scale(F: Field, v: Vec, s) -> Vec:
    return {c: F.norm(x * s) if F.p is None else x * s % F.p for c, x in v.items()}


def integral(v: Vec) -> Tuple[Dict[int, int], int]:
    """Scale a Q-vector to integers; returns (int vector, multiplier)."""
    m = 1
    for x in v.values():
        if isinstance(x, Fraction):
            m = lcm(m, x.denominator)
    if m == 1:
        return {c: int(x) for c, x in v.items()}, 1
    return {c: int(x * m) for c, x in v.items()}, m


class Echelon:
    """Incremental reduced row-echelon form with optional provenance."""

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.track = track
        self.rows: Dict[int, Vec] = {}
        self.prov: Dict[int, Vec] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def reduce(self, v: Vec, prov: Optional[Vec] = None) -> Tuple[Vec, Optional[Vec]]:
        """Reduce a copy of ``v`` against the rows.  Rows are fully reduced,
        so one pass over the pivot columns present in ``v`` suffices."""
        F = self.field
        v = dict(v)
        prov = dict(prov) if prov is not None else ({} if self.track else None)
        for c in [c for c in v if c in self.rows]:
            x = v.get(c)
            if not x:
                continue
            s = F.neg(x)
            vec_add_scaled(F, v, self.rows[c], s)
            if prov is not None:
                vec_add_scaled(F, prov, self.prov[c], s)
        return v, prov

    def add(self, v: Vec, prov: Optional[Vec] = None) -> Tuple[bool, Optional[Vec]]:
        """Insert ``v``.  Returns (new pivot?, provenance of the residue);
        when the vector was dependent the provenance is a relation."""
        F = self.field
        r, pr = self.reduce(v, prov)
        if not r:
            return False, pr
        piv = min(r)
        inv = F.inv(r[piv])
        r = vec_scale(F, r, inv)
        if pr is not None:
            pr = vec_scale(F, pr, inv)
        for c, row in self.rows.items():
            x = row.get(piv)
            if x:
                s = F.neg(x)
                vec_add_scaled(F, row, r, s)
                if self.track:
                    vec_add_scaled(F, self.prov[c], pr, s)
        self.rows[piv] = r
        if self.track:
            self.prov[piv] = pr
        return True, pr

    def sorted_rows(self) -> List[Vec]:
        return [self.rows[c] for c in sorted(self.rows)]

    def sorted_prov(self) -> List[Vec]:
        return [self.prov[c] for c in sorted(self.rows)]


# ---------------------------------------------------------------------------
# modular selection


def _to_mod(v: Vec, p: int) -> Dict[int, int]:
    out = {}
    for c, x in v.items():
        if isinstance(x, Fraction):
            y = x.numerator * pow(x.denominator % p, -1, p) % p if x.denominator % p else None
            if y is None:
                raise ZeroDivisionError
        else:
            y = int(x) % p
        if y:
            out[c] = y
    return out


def select_independent(vectors: Sequence[Vec], ncols: int, p: int = MOD_PRIME, batch: int = 512) -> List[int]:
    """Indices of a greedy maximal subset of ``vectors`` that is linearly
    independent modulo ``p`` (so also over Q).  Batched numpy elimination."""
    basis = np.zeros((0, ncols), dtype=np.int64)  # RREF mod p
    pivots: List[int] = []
    chosen: List[int] = []
    for start in range(0, len(vectors), batch):
        if len(pivots) == ncols:
            break
        idx = list(range(start, min(start + batch, len(vectors))))
        B = np.zeros((len(idx), ncols), dtype=np.int64)
        bad = []
        for r, i in enumerate(idx):
            try:
                for c, x in _to_mod(vectors[i], p).items():
                    B[r, c] = x
            except ZeroDivisionError:
                bad.append(r)
        if pivots:
            B = (B - (B[:, pivots] @ basis) % p) % p
        for r in range(len(idx)):
            if r in bad:
                continue
            row = B[r]
            if pivots:
                row = (row - (row[pivots] @ basis) % p) % p
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            c = int(nz[0])
            row = row * pow(int(row[c]), -1, p) % p
            if basis.shape[0]:
                col = basis[:, c].copy()
                basis = (basis - np.outer(col, row) % p) % p
            # insert keeping pivots sorted is unnecessary: pivot order only
            # matters for indexing, which uses the parallel list
            basis = np.vstack([basis, row[None, :]])
            pivots.append(c)
            chosen.append(idx[r])
            if len(pivots) == ncols:
                break
    return chosen


def rank_mod(vectors: Sequence[Vec], ncols: int, p: int = MOD_PRIME) -> int:
    return len(select_independent(vectors, ncols, p))


# ---------------------------------------------------------------------------
# kernels of linear maps given by sparse columns


def kernel(images: Sequence[Vec], field: Field) -> List[Vec]:
    """Basis of {lambda : sum_i lambda_i images[i] = 0}, as sparse vectors
    over range(len(images)), echelonised.

    The system is transposed: every coordinate of the target gives one
    equation in the unknowns lambda.  Over GF(p) plain elimination is used.
    Over Q the equations are filtered by the modular pass, the kernel of the
    selected subsystem is computed exactly, and then checked against every
    equation; any violated equation is added and the step repeated.
    """
    n = len(images)
    eqs: Dict[object, Vec] = {}
    for i, v in enumerate(images):
        for coord, x in v.items():
            eqs.setdefault(coord, {})[i] = x
    equations = list(eqs.values())
    if field.p is not None:
        E = Echelon(field)
        for e in equations:
            E.add(e)
            if E.rank == n:
                break
        return _null_from_rref(E, n, field)
    # dedupe equations up to scale before the modular pass
    seen = set()
    uniq: List[Vec] = []
    for e in equations:
        iv, _ = integral(e)
        c0 = min(iv)
        s = 1 if iv[c0] > 0 else -1
        key = tuple(sorted((c, s * x) for c, x in iv.items()))
        from math import gcd

        g = 0
        for _, x in key:
            g = gcd(g, x)
        key = tuple((c, x // g) for c, x in key)
        if key not in seen:
            seen.add(key)
            uniq.append(dict(key))
    selected = select_independent(uniq, n) if len(uniq) > n else list(range(len(uniq)))
    E = Echelon(field)
    for i in selected:
        E.add(uniq[i])
    while True:
        null = _null_from_rref(E, n, field)
        bad = _violated(uniq, null)
        if bad is None:
            return null
        E.add(uniq[bad])


def _violated(equations: Sequence[Vec], null: List[Vec]) -> Optional[int]:
    if not null:
        return None
    for j, e in enumerate(equations):
        for v in null:
            s = 0
            for c, x in e.items():
                y = v.get(c)
                if y:
                    s += x * y
            if s:
                return j
    return None


def _null_from_rref(E: Echelon, n: int, field: Field) -> List[Vec]:
    piv = E.pivots()
    pset = set(piv)
    free = [c for c in range(n) if c not in pset]
    out: List[Vec] = []
    for f in free:
        v: Vec = {f: 1}
        for c in piv:
            x = E.rows[c].get(f)
            if x:
                v[c] = field.neg(x)
        out.append(v)
    # echelonise for determinism
    R = Echelon(field)
    for v in out:
        R.add(v)
    return R.sorted_rows()
