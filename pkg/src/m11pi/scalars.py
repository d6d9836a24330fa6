"""Exact base fields (the rationals and GF(p), p an odd prime) and sparse
coefficient polynomials in commuting indeterminates t1, t2, ...

Hot loops elsewhere in the package work on *raw* field values (``int`` or
``Fraction`` for Q, ``int`` in ``[0, p)`` for GF(p)) through a :class:`Field`
object; :class:`Scalar` is the checked, self-describing wrapper used at API
boundaries and in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, Tuple


class FieldError(ValueError):
    """Mixed-field arithmetic, bad characteristic, or division by zero."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Field:
    """Q when ``p is None``, otherwise GF(p) with p an odd prime."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if p == 2:
                raise FieldError("characteristic 2 is not supported")
            if not _is_prime(p):
                raise FieldError(f"{p} is not a prime")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def name(self) -> str:
        return "q" if self.p is None else f"gf{self.p}"

    # raw-value arithmetic ------------------------------------------------

    def norm(self, v):
        """Bring an int/Fraction into this field's canonical raw form."""
        p = self.p
        if p is None:
            if isinstance(v, Fraction):
                return v.numerator if v.denominator == 1 else v
            return int(v)
        if isinstance(v, Fraction):
            den = v.denominator % p
            if den == 0:
                raise FieldError(f"denominator of {v} vanishes mod {p}")
            return v.numerator * pow(den, -1, p) % p
        return int(v) % p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise FieldError("inverse of zero")
        if self.p is None:
            f = Fraction(1) / a
            return f.numerator if f.denominator == 1 else f
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> Iterator[int]:
        if self.p is None:
            raise FieldError("Q is infinite")
        return iter(range(self.p))

    def fmt(self, v) -> str:
        """Wire form: ``num/den`` for Q, ``r mod p`` for GF(p)."""
        if self.p is None:
            f = Fraction(v)
            return f"{f.numerator}/{f.denominator}"
        return f"{int(v) % self.p} mod {self.p}"

    def fmt_short(self, v) -> str:
        if self.p is None:
            f = Fraction(v)
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return str(int(v) % self.p)

    def parse(self, text: str):
        text = text.strip()
        if " mod " in text:
            r, p = text.split(" mod ")
            if self.p != int(p):
                raise FieldError(f"{text!r} is not an element of {self!r}")
            return self.norm(int(r))
        if self.p is not None and "/" in text:
            raise FieldError(f"{text!r} is not an element of {self!r}")
        return self.norm(Fraction(text))

    def __call__(self, v) -> "Scalar":
        return Scalar(self, self.norm(v))


QQ = Field()


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def field_from_flags(name: str, p: int | None = None) -> Field:
    """Field from CLI-style flags: ``q`` or ``fp`` (with ``p``)."""
    name = name.lower()
    if name in ("q", "qq", "rational"):
        return QQ
    if name in ("fp", "gf", "p"):
        if p is None:
            raise FieldError("--field=fp needs --p")
        return GF(p)
    if name.startswith("gf"):
        return GF(int(name[2:]))
    raise FieldError(f"unknown field {name!r}")


@dataclass(frozen=True)
class Scalar:
    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.norm(self.value))

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            return self.field(other)
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field!r} and {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.fmt(self.value)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_neg(a: Scalar) -> Scalar:
    return -a


def scalar_inv(a: Scalar) -> Scalar:
    return a.inverse()


# ---------------------------------------------------------------------------
# coefficient polynomials

# An exponent vector is a sorted tuple of (indeterminate index, exponent>0).
Exps = Tuple[Tuple[int, int], ...]


def _mul_exps(u: Exps, v: Exps) -> Exps:
    if not u:
        return v
    if not v:
        return u
    d = dict(u)
    for i, e in v:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


def reduce_exponent(e: int, p: int) -> int:
    """Exponent of t^e as a function on GF(p): 0 stays 0, else 1..p-1."""
    return e if e == 0 else (e - 1) % (p - 1) + 1


def _grlex(exps: Exps):
    return (sum(e for _, e in exps), tuple((-i, e) for i, e in exps))


class CoeffPoly:
    """Sparse polynomial over a :class:`Field`; immutable once built."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: Mapping[Exps, object] | None = None, *, _raw=False):
        self.field = field
        if _raw:
            self.terms = terms
            return
        clean: Dict[Exps, object] = {}
        for exps, c in (terms or {}).items():
            c = field.norm(c)
            if c != 0:
                exps = tuple(sorted((int(i), int(e)) for i, e in exps if e))
                clean[exps] = field.add(clean.get(exps, 0), c)
                if clean[exps] == 0:
                    del clean[exps]
        self.terms = clean

    # constructors
    @classmethod
    def const(cls, field: Field, c) -> "CoeffPoly":
        c = field.norm(c)
        return cls(field, {(): c} if c else {}, _raw=True)

    @classmethod
    def var(cls, field: Field, index: int, power: int = 1) -> "CoeffPoly":
        return cls(field, {((index, power),): 1}, _raw=True)

    @classmethod
    def zero(cls, field: Field) -> "CoeffPoly":
        return cls(field, {}, _raw=True)

    def _same(self, other: "CoeffPoly"):
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field!r} and {other.field!r}")

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self):
        return self.terms.get((), 0)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, CoeffPoly):
            return self.field == other.field and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
        self._same(other)
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = F.add(out.get(k, 0), c)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return CoeffPoly(F, out, _raw=True)

    def __neg__(self) -> "CoeffPoly":
        F = self.field
        return CoeffPoly(F, {k: F.neg(c) for k, c in self.terms.items()}, _raw=True)

    def __sub__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self + (-other)

    def scale(self, c) -> "CoeffPoly":
        F = self.field
        c = F.norm(c)
        if c == 0:
            return CoeffPoly(F, {}, _raw=True)
        return CoeffPoly(F, {k: F.mul(v, c) for k, v in self.terms.items()}, _raw=True)

    def __mul__(self, other: "CoeffPoly") -> "CoeffPoly":
        self._same(other)
        F = self.field
        a, b = self.terms, other.terms
        if len(a) == 1 and () in a:
            return other.scale(a[()])
        if len(b) == 1 and () in b:
            return self.scale(b[()])
        out: Dict[Exps, object] = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = _mul_exps(ka, kb)
                s = F.add(out.get(k, 0), F.mul(ca, cb))
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return CoeffPoly(F, out, _raw=True)

    def variables(self) -> set:
        return {i for exps in self.terms for i, _ in exps}

    def evaluate(self, point: Mapping[int, object]):
        """Raw field value at ``point`` (missing indeterminates read as 0)."""
        F = self.field
        total = 0
        for exps, c in self.terms.items():
            v = c
            for i, e in exps:
                v = F.mul(v, pow(F.norm(point.get(i, 0)), e) if F.p is None else pow(point.get(i, 0), e, F.p))
                if v == 0:
                    break
            total = F.add(total, v)
        return total

    def items(self):
        """Terms in graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex(kv[0]))

    def __repr__(self):
        return f"CoeffPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "·".join(f"t{i}" + (f"^{e}" if e > 1 else "") for i, e in exps)
            if self.field.p is None:
                neg = c < 0
                mag = -c if neg else c
            else:
                neg, mag = False, c
            cs = self.field.fmt_short(mag)
            body = mono if (mono and cs == "1") else (cs if not mono else f"{cs}·{mono}")
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


def poly_add(f: CoeffPoly, g: CoeffPoly) -> CoeffPoly:
    return f + g


def poly_mul(f: CoeffPoly, g: CoeffPoly) -> CoeffPoly:
    return f * g


def frobenius_reduce(f: CoeffPoly, p: int | None = None) -> CoeffPoly:
    """Rewrite ``f`` so that it represents the same function on GF(p)
    with every exponent in ``1..p-1``; the result is zero iff ``f``
    vanishes at every GF(p)-point."""
    F = f.field
    if F.p is None:
        raise FieldError("frobenius_reduce needs GF(p) coefficients")
    if p is not None and p != F.p:
        raise FieldError(f"p={p} does not match {F!r}")
    p = F.p
    out: Dict[Exps, object] = {}
    for exps, c in f.terms.items():
        k = tuple((i, reduce_exponent(e, p)) for i, e in exps)
        s = (out.get(k, 0) + c) % p
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return CoeffPoly(F, out, _raw=True)


def all_points(field: Field, indices: Iterable[int]) -> Iterator[Dict[int, int]]:
    """Every GF(p)-assignment of the given indeterminates, in lex order."""
    from itertools import product

    idx = sorted(indices)
    for vals in product(range(field.p), repeat=len(idx)):
        yield dict(zip(idx, vals))
