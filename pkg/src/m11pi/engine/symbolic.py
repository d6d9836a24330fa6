"""Evaluation on generic matrices over a free supercommutative algebra.

Each variable v is sent to

    X_v = (t_v + a_v) E11 + c_v E22 + b_v E12 + d_v E21

where a_v, c_v are commuting *even* symbols, b_v, d_v anticommuting *odd*
symbols, and t_v (unital algebra only) is a scalar indeterminate standing
for the coefficient of the identity word.

Why this decides identities of M_{1,1}(E) and M_{1,1}(E^1):

* E is supercommutative, so every substitution of concrete matrices is the
  image of this generic evaluation under a superalgebra homomorphism
  (a_v -> the non-unit even part of the (1,1) entry, and so on).
* Conversely send every even symbol to a sum of k disjoint length-2 words
  and every odd symbol to a fresh generator.  A monomial with even
  exponents (k_1, ...) then maps to prod(k_i!) times a sum of distinct
  Grassmann words, and different monomials land on different words.  So the
  value vanishes on every substitution iff every monomial coefficient whose
  image is nonzero vanishes.  In characteristic p the image of u^k is zero
  exactly when k >= p (u^p = p! * ... = 0), hence those monomials are
  discarded.
* t_v ranges over the field, so coefficients are polynomial *functions* in
  the t's: over GF(p) exponents are reduced with t^p = t.
* The E22 unit is omitted: s*E22 = s*I - s*E11 and I is central, so for a
  Lie polynomial of degree >= 2 it only shifts t_v.

All arithmetic here is over the integers; the field enters when the
coordinates are read off (:meth:`GenericModel.coordinates`).
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple

from ..freelie import Bracket, LieTerm, Var, sort_vars
from ..grassmann import merge_sign
from ..scalars import Field, reduce_exponent

SLOT_BITS = 6
ODD_BITS = 24
ODD_MASK = (1 << ODD_BITS) - 1

# slot kinds within one variable
A, C, T = 0, 1, 2
KIND_NAMES = {A: "a", C: "c", T: "t"}

Poly = Dict[int, int]
Matrix = Tuple[Poly, Poly, Poly, Poly]  # entries (1,1), (1,2), (2,1), (2,2)
ENTRY_NAMES = ("11", "12", "21", "22")


def _mul_into(out: Poly, P: Poly, Q: Poly, sign: int = 1):
    for k1, c1 in P.items():
        o1 = k1 & ODD_MASK
        for k2, c2 in Q.items():
            o2 = k2 & ODD_MASK
            if o1 & o2:
                continue
            c = c1 * c2 * sign
            if o1 and o2 and merge_sign(o1, o2) < 0:
                c = -c
            k = k1 + k2
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]


def _matmul_into(out: List[Poly], X: Matrix, Y: Matrix, sign: int):
    a, b, d, c = X
    A_, B_, D_, C_ = Y
    _mul_into(out[0], a, A_, sign)
    _mul_into(out[0], b, D_, sign)
    _mul_into(out[1], a, B_, sign)
    _mul_into(out[1], b, C_, sign)
    _mul_into(out[2], d, A_, sign)
    _mul_into(out[2], c, D_, sign)
    _mul_into(out[3], d, B_, sign)
    _mul_into(out[3], c, C_, sign)


def bracket(X: Matrix, Y: Matrix) -> Matrix:
    out: List[Poly] = [{}, {}, {}, {}]
    _matmul_into(out, X, Y, 1)
    _matmul_into(out, Y, X, -1)
    return tuple(out)  # type: ignore[return-value]


class GenericModel:
    """Generic matrices for a fixed ordered variable list."""

    def __init__(self, variables: Sequence[str], unital: bool):
        self.variables = sort_vars(variables)
        if 2 * len(self.variables) > ODD_BITS:
            raise ValueError("too many variables for the generic model")
        self.unital = unital
        self.index = {v: i for i, v in enumerate(self.variables)}
        self._cache: Dict[LieTerm, Matrix] = {}

    # key layout ------------------------------------------------------------

    def slot(self, var_index: int, kind: int) -> int:
        return 3 * var_index + kind

    def even_key(self, var_index: int, kind: int, exponent: int = 1) -> int:
        return exponent << (SLOT_BITS * self.slot(var_index, kind) + ODD_BITS)

    @staticmethod
    def odd_bit(var_index: int, which: int) -> int:
        """which = 0 for b (entry 12), 1 for d (entry 21)."""
        return 1 << (2 * var_index + which)

    def decode(self, key: int):
        """(exponents {(var, kind): e}, odd symbols [(var, 'b'|'d')])."""
        odd = key & ODD_MASK
        packed = key >> ODD_BITS
        exps = {}
        s = 0
        while packed:
            e = packed & ((1 << SLOT_BITS) - 1)
            if e:
                exps[(self.variables[s // 3], s % 3)] = e
            packed >>= SLOT_BITS
            s += 1
        odds = []
        i = 0
        while odd:
            if odd & 1:
                odds.append((self.variables[i // 2], "bd"[i % 2]))
            odd >>= 1
            i += 1
        return exps, odds

    def describe(self, key: int) -> str:
        exps, odds = self.decode(key)
        parts = []
        for (v, kind), e in sorted(exps.items(), key=lambda kv: (self.index[kv[0][0]], kv[0][1])):
            parts.append(f"{KIND_NAMES[kind]}_{v}" + (f"^{e}" if e > 1 else ""))
        parts += [f"{k}_{v}" for v, k in odds]
        return "·".join(parts) or "1"

    # evaluation --------------------------------------------------------------

    def generic(self, var: str) -> Matrix:
        i = self.index[var]
        a = {self.even_key(i, A): 1}
        if self.unital:
            a[self.even_key(i, T)] = 1
        return (a, {self.odd_bit(i, 0): 1}, {self.odd_bit(i, 1): 1}, {self.even_key(i, C): 1})

    def evaluate(self, t: LieTerm) -> Matrix:
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            m = self.generic(t.name)
        elif isinstance(t, Bracket):
            m = bracket(self.evaluate(t.left), self.evaluate(t.right))
        else:
            raise TypeError(t)
        self._cache[t] = m
        return m

    def clear(self):
        self._cache.clear()

    # reading off coordinates -----------------------------------------------

    def reduce_key(self, key: int, p: int | None) -> int | None:
        """Canonical key after applying the field's rules, or None if the
        monomial maps to zero."""
        if p is None:
            return key
        odd = key & ODD_MASK
        packed = key >> ODD_BITS
        out = 0
        s = 0
        full = (1 << SLOT_BITS) - 1
        while packed:
            e = packed & full
            if e:
                if s % 3 == T:
                    e = reduce_exponent(e, p)
                elif e >= p:
                    return None
                out |= e << (SLOT_BITS * s)
            packed >>= SLOT_BITS
            s += 1
        return (out << ODD_BITS) | odd

    def coordinates(self, m: Matrix, field: Field, scale=1) -> Dict[Tuple[int, int], object]:
        """Sparse coordinate vector {(entry, key): raw coefficient}."""
        p = field.p
        out: Dict[Tuple[int, int], object] = {}
        for e, poly in enumerate(m):
            for key, c in poly.items():
                k = self.reduce_key(key, p)
                if k is None:
                    continue
                c = field.mul(field.norm(c), scale)
                if not c:
                    continue
                idx = (e, k)
                s = field.add(out.get(idx, 0), c)
                if s:
                    out[idx] = s
                else:
                    del out[idx]
        return out

    def term_coordinates(self, t: LieTerm, field: Field) -> Dict[Tuple[int, int], object]:
        return self.coordinates(self.evaluate(t), field)

    def poly_coordinates(self, f, field: Field | None = None) -> Dict[Tuple[int, int], object]:
        field = field or f.field
        out: Dict[Tuple[int, int], object] = {}
        for t, c in f.terms.items():
            for idx, v in self.term_coordinates(t, field).items():
                s = field.add(out.get(idx, 0), field.mul(v, c))
                if s:
                    out[idx] = s
                else:
                    out.pop(idx, None)
        return out

    def t_free_key(self, key: int) -> Tuple[int, Tuple[int, ...]]:
        """Split a key into (key without t-slots, tuple of t exponents)."""
        odd = key & ODD_MASK
        packed = key >> ODD_BITS
        rest = 0
        ts = [0] * len(self.variables)
        s = 0
        full = (1 << SLOT_BITS) - 1
        while packed:
            e = packed & full
            if e:
                if s % 3 == T:
                    ts[s // 3] = e
                else:
                    rest |= e << (SLOT_BITS * s)
            packed >>= SLOT_BITS
            s += 1
        return (rest << ODD_BITS) | odd, tuple(ts)


_MODELS: Dict[Tuple[Tuple[str, ...], bool], GenericModel] = {}


def model_for(variables: Iterable[str], unital: bool) -> GenericModel:
    key = (tuple(sort_vars(variables)), unital)
    m = _MODELS.get(key)
    if m is None:
        if len(_MODELS) > 64:
            _MODELS.clear()
        m = _MODELS[key] = GenericModel(key[0], unital)
    return m
