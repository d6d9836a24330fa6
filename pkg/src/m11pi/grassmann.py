"""Truncated Grassmann algebras E_N (non-unital) and E^1_N (unital).

A generator word e_{i1}...e_{ik} with i1 < ... < ik is stored as an ``int``
bit set (bit i-1 <-> e_i).  Elements are sparse maps word -> CoeffPoly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Tuple

from .scalars import CoeffPoly, Field, FieldError, QQ


class ContextError(ValueError):
    """Operands live in different Grassmann/matrix contexts."""


class BudgetExceeded(RuntimeError):
    """The generator budget N is too small for the requested computation."""


def popcount(w: int) -> int:
    return bin(w).count("1")


def parity(w: int) -> int:
    return popcount(w) & 1


def word_indices(w: int) -> List[int]:
    out, i = [], 1
    while w:
        if w & 1:
            out.append(i)
        w >>= 1
        i += 1
    return out


def word(*indices: int) -> int:
    """Bit set of the *set* {indices}; no sign bookkeeping."""
    w = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"generator index {i} < 1")
        w |= 1 << (i - 1)
    return w


def merge_sign(u: int, v: int) -> int:
    """(-1)^#{(i in u, j in v) : i > j} for disjoint words."""
    inv = 0
    while v:
        low = v & -v
        inv += popcount(u & ~((low << 1) - 1))
        v ^= low
    return -1 if inv & 1 else 1


def word_mul(u: int, v: int) -> Tuple[int, int]:
    """Product of two canonical words as ``(sign, word)``; sign 0 means zero."""
    if u & v:
        return 0, 0
    return merge_sign(u, v), u | v


def format_word(w: int) -> str:
    return "".join(f"e{i}" for i in word_indices(w)) or "1"


def parse_word(text: str) -> Tuple[int, int]:
    """``"e2e1"`` -> (-1, e1e2).  Returns (sign, word); sign 0 if zero."""
    text = text.strip()
    if text == "1":
        return 1, 0
    if not text.startswith("e"):
        raise ValueError(f"bad Grassmann word {text!r}")
    sign, acc = 1, 0
    for part in text[1:].split("e"):
        s, acc = word_mul(acc, word(int(part)))
        sign *= s
        if s == 0:
            return 0, 0
    return sign, acc


def _word_key(w: int):
    return (popcount(w), word_indices(w))


@dataclass(frozen=True)
class GrassmannContext:
    field: Field = QQ
    N: int = 8
    unital: bool = False

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be non-negative")


class GrassmannElement:
    """Element of E_N or E^1_N with CoeffPoly coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: GrassmannContext, terms: Mapping[int, CoeffPoly] | None = None, *, _raw=False):
        self.ctx = ctx
        if _raw:
            self.terms = terms
            return
        clean: Dict[int, CoeffPoly] = {}
        full = (1 << ctx.N) - 1
        for w, c in (terms or {}).items():
            if not isinstance(c, CoeffPoly):
                c = CoeffPoly.const(ctx.field, c)
            elif c.field != ctx.field:
                raise FieldError("coefficient field does not match context")
            if w & ~full:
                raise BudgetExceeded(f"word {format_word(w)} exceeds N={ctx.N}")
            if w == 0 and not ctx.unital:
                raise ContextError("the empty word is not admissible in the non-unital algebra E")
            if c:
                prev = clean.get(w)
                c = c if prev is None else prev + c
                if c:
                    clean[w] = c
                else:
                    clean.pop(w, None)
        self.terms = clean

    # constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ctx: GrassmannContext) -> "GrassmannElement":
        return cls(ctx, {}, _raw=True)

    @classmethod
    def one(cls, ctx: GrassmannContext) -> "GrassmannElement":
        if not ctx.unital:
            raise ContextError("E has no identity element")
        return cls(ctx, {0: CoeffPoly.const(ctx.field, 1)})

    @classmethod
    def monomial(cls, ctx: GrassmannContext, indices: Iterable[int], coeff=1) -> "GrassmannElement":
        sign, acc = 1, 0
        for i in indices:
            s, acc = word_mul(acc, word(i))
            sign *= s
        if not isinstance(coeff, CoeffPoly):
            coeff = CoeffPoly.const(ctx.field, coeff)
        if sign == 0:
            return cls.zero(ctx)
        return cls(ctx, {acc: coeff.scale(sign)})

    # arithmetic ----------------------------------------------------------

    def _same(self, other: "GrassmannElement"):
        if other.ctx != self.ctx:
            raise ContextError(f"context mismatch: {self.ctx} vs {other.ctx}")

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        self._same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            s = c if prev is None else prev + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return GrassmannElement(self.ctx, out, _raw=True)

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement(self.ctx, {w: -c for w, c in self.terms.items()}, _raw=True)

    def __sub__(self, other: "GrassmannElement") -> "GrassmannElement":
        return self + (-other)

    def scale(self, c) -> "GrassmannElement":
        if isinstance(c, CoeffPoly):
            out = {}
            for w, v in self.terms.items():
                s = v * c
                if s:
                    out[w] = s
            return GrassmannElement(self.ctx, out, _raw=True)
        c = self.ctx.field.norm(c)
        if c == 0:
            return GrassmannElement.zero(self.ctx)
        return GrassmannElement(self.ctx, {w: v.scale(c) for w, v in self.terms.items()}, _raw=True)

    def __mul__(self, other: "GrassmannElement") -> "GrassmannElement":
        self._same(other)
        out: Dict[int, CoeffPoly] = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                if u & v:
                    continue
                c = cu * cv
                if merge_sign(u, v) < 0:
                    c = -c
                w = u | v
                prev = out.get(w)
                s = c if prev is None else prev + c
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return GrassmannElement(self.ctx, out, _raw=True)

    def parity_projection(self, par: int) -> "GrassmannElement":
        return GrassmannElement(self.ctx, {w: c for w, c in self.terms.items() if parity(w) == par}, _raw=True)

    def is_homogeneous(self, par: int) -> bool:
        return all(parity(w) == par for w in self.terms)

    def map_coefficients(self, fn) -> "GrassmannElement":
        out = {}
        for w, c in self.terms.items():
            c = fn(c)
            if c:
                out[w] = c
        return GrassmannElement(self.ctx, out, _raw=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.ctx == other.ctx and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def items(self):
        """Terms in graded-lexicographic word order."""
        return sorted(self.terms.items(), key=lambda kv: _word_key(kv[0]))

    def __repr__(self):
        return f"GrassmannElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.ctx.field
        parts = []
        for w, c in self.items():
            neg = False
            if c.is_const():
                v = c.const_value()
                if F.p is None and v < 0:
                    neg, v = True, -v
                cs = F.fmt_short(v)
            else:
                cs = f"({c})" if len(c.terms) > 1 else str(c)
            ws = format_word(w)
            if w == 0:
                body = cs
            elif cs == "1":
                body = ws
            else:
                body = f"{cs}·{ws}"
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]

    # wire form -----------------------------------------------------------

    def to_json(self) -> List[List[str]]:
        out = []
        for w, c in self.items():
            if not c.is_const():
                raise ValueError("only constant coefficients serialize")
            out.append([format_word(w), self.ctx.field.fmt(c.const_value())])
        return out

    @classmethod
    def from_json(cls, ctx: GrassmannContext, data) -> "GrassmannElement":
        acc = cls.zero(ctx)
        for ws, cs in data:
            sign, w = parse_word(ws)
            if sign:
                F = ctx.field
                acc = acc + cls(ctx, {w: CoeffPoly.const(F, F.mul(F.parse(cs), F.norm(sign)))})
        return acc


def elem_add(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    return x + y


def elem_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    return x * y


def elem_scale(x: GrassmannElement, c) -> GrassmannElement:
    return x.scale(c)


def parity_projection(x: GrassmannElement, par: int) -> GrassmannElement:
    return x.parity_projection(par)


class GeneratorAllocator:
    """Hands out disjoint blocks of generator indices from 1..N."""

    def __init__(self, N: int):
        self.N = N
        self.next = 1

    @property
    def used(self) -> int:
        return self.next - 1

    def fresh_block(self, count: int) -> List[int]:
        if count < 0:
            raise ValueError("count must be non-negative")
        if self.next + count - 1 > self.N:
            raise BudgetExceeded(f"need {count} fresh generators, only {self.N - self.used} of N={self.N} left")
        block = list(range(self.next, self.next + count))
        self.next += count
        return block


def fresh_block(allocator: GeneratorAllocator, count: int) -> List[int]:
    return allocator.fresh_block(count)
