"""Free Lie polynomials: bracket trees, their associative expansion,
multidegrees, substitution and linearization.

Equality of Lie polynomials is always decided on associative expansions
(noncommutative words), never on a Hall/Lyndon normal form.
"""

from __future__ import annotations

import re
import warnings
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import count
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from .scalars import Field, FieldError, QQ

# ---------------------------------------------------------------------------
# variables

_VAR_RE = re.compile(r"^(_?[A-Za-z]+)(\d*)$")

#: prefix of engine-reserved variables (never produced by the parser)
RESERVED = "_"


def var_key(name: str):
    m = _VAR_RE.match(name)
    if not m:
        return (1, name, -1)
    letters, digits = m.groups()
    return (1 if letters.startswith(RESERVED) else 0, letters, int(digits) if digits else -1)


def sort_vars(names: Iterable[str]) -> List[str]:
    return sorted(set(names), key=var_key)


class FreshVars:
    """Supply of engine-reserved variable names ``_u1, _u2, ...``."""

    def __init__(self, stem: str = "u", avoid: Iterable[str] = ()):
        self.stem = RESERVED + stem
        self.avoid = set(avoid)
        self._n = count(1)

    def __call__(self) -> str:
        while True:
            name = f"{self.stem}{next(self._n)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


# ---------------------------------------------------------------------------
# bracket trees


class LieTerm:
    __slots__ = ()

    def leaves(self) -> Iterator[str]:
        raise NotImplementedError

    @property
    def degree(self) -> int:
        raise NotImplementedError


class Var(LieTerm):
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("V", name)))

    def __setattr__(self, k, v):
        raise AttributeError("LieTerm is immutable")

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name

    def leaves(self):
        yield self.name

    @property
    def degree(self):
        return 1


class Bracket(LieTerm):
    __slots__ = ("left", "right", "_hash", "_deg")

    def __init__(self, left: LieTerm, right: LieTerm):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "_hash", hash(("B", left, right)))
        object.__setattr__(self, "_deg", left.degree + right.degree)

    def __setattr__(self, k, v):
        raise AttributeError("LieTerm is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Bracket)
            and other._hash == self._hash
            and other.left == self.left
            and other.right == self.right
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return serialize(self)

    def leaves(self):
        yield from self.left.leaves()
        yield from self.right.leaves()

    @property
    def degree(self):
        return self._deg


TermLike = Union[LieTerm, str]


def as_term(t: TermLike) -> LieTerm:
    return Var(t) if isinstance(t, str) else t


def lnorm(*items: TermLike) -> LieTerm:
    """Left-normalised product [a1, a2, ..., an] = [[...[a1,a2],...],an]."""
    if not items:
        raise ValueError("empty bracket")
    acc = as_term(items[0])
    for it in items[1:]:
        acc = Bracket(acc, as_term(it))
    return acc


def power(item: TermLike, m: int) -> List[LieTerm]:
    """``z^(m)``: m copies of ``item`` to splice into :func:`lnorm`."""
    if m < 1:
        raise ValueError("power exponent must be >= 1")
    return [as_term(item)] * m


def spine(t: LieTerm) -> List[LieTerm]:
    """Items of ``t`` read as a left-normalised list (leftmost leaf first)."""
    items = []
    while isinstance(t, Bracket):
        items.append(t.right)
        t = t.left
    items.append(t)
    items.reverse()
    return items


def serialize(t: LieTerm) -> str:
    """Canonical text ``[x1,x2,[x3,x4],x5]``; no power compression."""
    if isinstance(t, Var):
        return t.name
    return "[" + ",".join(serialize(i) for i in spine(t)) + "]"


def has_square(t: LieTerm) -> bool:
    """True if some subterm is [s, s] (which is zero)."""
    if isinstance(t, Var):
        return False
    return t.left == t.right or has_square(t.left) or has_square(t.right)


def term_multidegree(t: LieTerm) -> "MultiDegree":
    return MultiDegree(Counter(t.leaves()))


# ---------------------------------------------------------------------------
# multidegrees


class MultiDegree:
    """Variable -> positive degree, stored sorted by variable order."""

    __slots__ = ("items", "_hash")

    def __init__(self, degrees: Mapping[str, int] | Iterable[Tuple[str, int]] = ()):
        d = dict(degrees)
        for k, v in d.items():
            if v < 0:
                raise ValueError("negative degree")
        items = tuple((k, int(d[k])) for k in sort_vars(k for k, v in d.items() if v > 0))
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "_hash", hash(items))

    def __setattr__(self, k, v):
        raise AttributeError("MultiDegree is immutable")

    @classmethod
    def multilinear(cls, n: int, stem: str = "x") -> "MultiDegree":
        return cls({f"{stem}{i}": 1 for i in range(1, n + 1)})

    @classmethod
    def parse(cls, text: str) -> "MultiDegree":
        """``"x:2,y:1,z"`` (a bare name means degree 1)."""
        d: Dict[str, int] = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            if ":" in part:
                k, v = part.split(":")
                d[k.strip()] = d.get(k.strip(), 0) + int(v)
            else:
                d[part] = d.get(part, 0) + 1
        return cls(d)

    def __getitem__(self, var: str) -> int:
        return dict(self.items).get(var, 0)

    def get(self, var: str, default=0) -> int:
        return dict(self.items).get(var, default)

    @property
    def variables(self) -> List[str]:
        return [k for k, _ in self.items]

    @property
    def total(self) -> int:
        return sum(v for _, v in self.items)

    def is_multilinear(self) -> bool:
        return all(v == 1 for _, v in self.items)

    def as_dict(self) -> Dict[str, int]:
        return dict(self.items)

    def letters(self) -> List[str]:
        """Multiset of letters, in variable order."""
        return [k for k, v in self.items for _ in range(v)]

    def __add__(self, other: "MultiDegree") -> "MultiDegree":
        d = self.as_dict()
        for k, v in other.items:
            d[k] = d.get(k, 0) + v
        return MultiDegree(d)

    def __sub__(self, other: "MultiDegree") -> "MultiDegree":
        d = self.as_dict()
        for k, v in other.items:
            d[k] = d.get(k, 0) - v
            if d[k] < 0:
                raise ValueError("multidegree difference is negative")
        return MultiDegree(d)

    def scaled(self, m: int) -> "MultiDegree":
        return MultiDegree({k: v * m for k, v in self.items})

    def le(self, other: "MultiDegree") -> bool:
        return all(other[k] >= v for k, v in self.items)

    def __eq__(self, other):
        return isinstance(other, MultiDegree) and other.items == self.items

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.total, tuple((var_key(k), -v) for k, v in self.items))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"MultiDegree({self})"

    def __str__(self):
        return ",".join(f"{k}:{v}" for k, v in self.items)


def word_multidegree(w: Sequence[str]) -> MultiDegree:
    return MultiDegree(Counter(w))


# ---------------------------------------------------------------------------
# associative polynomials

Word = Tuple[str, ...]


class AssocPoly:
    """Sparse noncommutative polynomial: word -> nonzero raw coefficient."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field = QQ, terms: Mapping[Word, object] | None = None, *, _raw=False):
        self.field = field
        if _raw:
            self.terms = terms
            return
        out: Dict[Word, object] = {}
        for w, c in (terms or {}).items():
            c = field.norm(c)
            if c:
                w = tuple(w)
                s = field.add(out.get(w, 0), c)
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        self.terms = out

    @classmethod
    def letter(cls, name: str, field: Field = QQ) -> "AssocPoly":
        return cls(field, {(name,): 1}, _raw=True)

    def _same(self, other: "AssocPoly"):
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field!r} and {other.field!r}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, AssocPoly):
            return self.field == other.field and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __add__(self, other: "AssocPoly") -> "AssocPoly":
        self._same(other)
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = F.add(out.get(w, 0), c)
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return AssocPoly(F, out, _raw=True)

    def __neg__(self):
        F = self.field
        return AssocPoly(F, {w: F.neg(c) for w, c in self.terms.items()}, _raw=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AssocPoly":
        F = self.field
        c = F.norm(c)
        if c == 0:
            return AssocPoly(F, {}, _raw=True)
        return AssocPoly(F, {w: F.mul(v, c) for w, v in self.terms.items()}, _raw=True)

    def __mul__(self, other: "AssocPoly") -> "AssocPoly":
        self._same(other)
        F = self.field
        out: Dict[Word, object] = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = u + v
                s = F.add(out.get(w, 0), F.mul(cu, cv))
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return AssocPoly(F, out, _raw=True)

    def bracket(self, other: "AssocPoly") -> "AssocPoly":
        return self * other - other * self

    def over(self, field: Field) -> "AssocPoly":
        if field == self.field:
            return self
        if self.field.is_finite:
            raise FieldError("cannot lift GF(p) coefficients")
        return AssocPoly(field, self.terms)

    def multidegree_components(self) -> Dict[MultiDegree, "AssocPoly"]:
        parts: Dict[MultiDegree, Dict[Word, object]] = {}
        for w, c in self.terms.items():
            parts.setdefault(word_multidegree(w), {})[w] = c
        return {d: AssocPoly(self.field, t, _raw=True) for d, t in parts.items()}

    def substitute(self, mapping: Mapping[str, "AssocPoly"]) -> "AssocPoly":
        F = self.field
        out = AssocPoly(F, {}, _raw=True)
        for w, c in self.terms.items():
            acc = AssocPoly(F, {(): c}, _raw=True)
            for letter in w:
                img = mapping.get(letter)
                acc = acc * (img if img is not None else AssocPoly.letter(letter, F))
                if not acc:
                    break
            out = out + acc
        return out

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), [var_key(x) for x in kv[0]]))

    def __repr__(self):
        return f"AssocPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for w, c in self.items():
            neg = F.p is None and c < 0
            mag = -c if neg else c
            cs = F.fmt_short(mag)
            mono = "".join(w) if all(len(x) == 1 for x in w) else "*".join(w)
            body = mono if cs == "1" else f"{cs}·{mono}"
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


@lru_cache(maxsize=200_000)
def _expand_int(t: LieTerm) -> Tuple[Tuple[Word, int], ...]:
    if isinstance(t, Var):
        return (((t.name,), 1),)
    left = _expand_int(t.left)
    right = _expand_int(t.right)
    out: Dict[Word, int] = {}
    for u, cu in left:
        for v, cv in right:
            c = cu * cv
            w = u + v
            out[w] = out.get(w, 0) + c
            w = v + u
            out[w] = out.get(w, 0) - c
    return tuple((w, c) for w, c in out.items() if c)


def expand_term(t: LieTerm) -> Dict[Word, int]:
    """Integer expansion of one bracket monomial."""
    return dict(_expand_int(t))


# ---------------------------------------------------------------------------
# Lie polynomials


class ZeroTermWarning(UserWarning):
    """A bracket [s, s] was dropped as identically zero."""


class LinearizationWarning(UserWarning):
    """Linearization of a variable of degree < 2 yields zero."""


class LiePoly:
    """Sparse combination of bracket trees with coefficients in ``field``."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field = QQ, terms: Mapping[LieTerm, object] | Iterable[Tuple[object, LieTerm]] | None = None):
        self.field = field
        out: Dict[LieTerm, object] = {}
        if terms is None:
            pairs: Iterable = ()
        elif isinstance(terms, Mapping):
            pairs = ((c, t) for t, c in terms.items())
        else:
            pairs = terms
        for c, t in pairs:
            t = as_term(t)
            c = field.norm(c)
            if c == 0 or has_square(t):
                continue
            s = field.add(out.get(t, 0), c)
            if s:
                out[t] = s
            else:
                out.pop(t, None)
        self.terms = dict(sorted(out.items(), key=lambda kv: serialize(kv[0])))

    @classmethod
    def of(cls, t: TermLike, coeff=1, field: Field = QQ) -> "LiePoly":
        return cls(field, [(coeff, as_term(t))])

    @classmethod
    def zero(cls, field: Field = QQ) -> "LiePoly":
        return cls(field)

    def _same(self, other: "LiePoly"):
        if other.field != self.field:
            raise FieldError(f"mixed fields: {self.field!r} and {other.field!r}")

    def is_zero(self) -> bool:
        """Syntactic emptiness; use ``expand(f).is_zero()`` for Lie equality."""
        return not self.terms

    def items(self):
        return list(self.terms.items())

    def __add__(self, other: "LiePoly") -> "LiePoly":
        self._same(other)
        return LiePoly(self.field, [(c, t) for t, c in self.terms.items()] + [(c, t) for t, c in other.terms.items()])

    def __neg__(self):
        F = self.field
        return LiePoly(F, [(F.neg(c), t) for t, c in self.terms.items()])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LiePoly":
        F = self.field
        c = F.norm(c)
        return LiePoly(F, [(F.mul(v, c), t) for t, v in self.terms.items()])

    def bracket(self, other: "LiePoly") -> "LiePoly":
        self._same(other)
        F = self.field
        return LiePoly(
            F,
            [(F.mul(c1, c2), Bracket(t1, t2)) for t1, c1 in self.terms.items() for t2, c2 in other.terms.items()],
        )

    def over(self, field: Field) -> "LiePoly":
        if field == self.field:
            return self
        if self.field.is_finite:
            raise FieldError("cannot move GF(p) coefficients to another field")
        return LiePoly(field, [(c if isinstance(c, int) else Fraction(c), t) for t, c in self.terms.items()])

    def variables(self) -> List[str]:
        return sort_vars(v for t in self.terms for v in t.leaves())

    def multidegrees(self) -> List[MultiDegree]:
        return sorted({term_multidegree(t) for t in self.terms})

    def is_multihomogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    @property
    def multidegree(self) -> MultiDegree:
        ds = self.multidegrees()
        if len(ds) != 1:
            raise ValueError("polynomial is not multihomogeneous (or is zero)")
        return ds[0]

    def is_multilinear(self) -> bool:
        return all(d.is_multilinear() for d in self.multidegrees())

    def degree_in(self, var: str) -> int:
        return max((term_multidegree(t)[var] for t in self.terms), default=0)

    def __eq__(self, other):
        if isinstance(other, LiePoly):
            return self.field == other.field and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.field, tuple(self.terms.items())))

    def __repr__(self):
        from .lang import format_poly

        return f"LiePoly({format_poly(self)})"

    def __str__(self):
        from .lang import format_poly

        return format_poly(self)


def expand(f: Union[LiePoly, LieTerm]) -> AssocPoly:
    """Associative expansion; [s, t] -> st - ts."""
    if isinstance(f, LieTerm):
        return AssocPoly(QQ, expand_term(f))
    F = f.field
    out: Dict[Word, object] = {}
    for t, c in f.terms.items():
        for w, k in _expand_int(t):
            s = F.add(out.get(w, 0), F.mul(c, F.norm(k)))
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return AssocPoly(F, out, _raw=True)


def lie_equal(f: LiePoly, g: LiePoly) -> bool:
    return expand(f) == expand(g)


def multidegree_components(f: LiePoly) -> List[Tuple[MultiDegree, LiePoly]]:
    parts: Dict[MultiDegree, List] = {}
    for t, c in f.terms.items():
        parts.setdefault(term_multidegree(t), []).append((c, t))
    return [(d, LiePoly(f.field, parts[d])) for d in sorted(parts)]


def _subst_term(t: LieTerm, mapping: Mapping[str, LiePoly], F: Field, cache: dict) -> LiePoly:
    hit = cache.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Var):
        img = mapping.get(t.name)
        out = LiePoly.of(t, 1, F) if img is None else img
    else:
        out = _subst_term(t.left, mapping, F, cache).bracket(_subst_term(t.right, mapping, F, cache))
    cache[t] = out
    return out


def substitute(f: LiePoly, mapping: Mapping[str, Union[LiePoly, TermLike]]) -> LiePoly:
    """Simultaneous substitution of variables by Lie polynomials."""
    F = f.field
    m = {k: (v if isinstance(v, LiePoly) else LiePoly.of(v, 1, F)) for k, v in mapping.items()}
    for v in m.values():
        f._same(v)
    cache: dict = {}
    pairs = []
    for t, c in f.terms.items():
        img = _subst_term(t, m, F, cache)
        pairs.extend((F.mul(c, ci), ti) for ti, ci in img.terms.items())
    return LiePoly(F, pairs)


def rename(f: LiePoly, mapping: Mapping[str, str]) -> LiePoly:
    return substitute(f, {k: Var(v) for k, v in mapping.items()})


def partial_linearize(f: LiePoly, x: str, y: str) -> LiePoly:
    """f(x+y, ...) - f(x, ...) - f(y, ...)."""
    if y in f.variables():
        raise ValueError(f"{y} already occurs in the polynomial")
    F = f.field
    if f.degree_in(x) < 2:
        warnings.warn(f"degree in {x} is < 2; linearization is zero", LinearizationWarning, stacklevel=2)
        return LiePoly.zero(F)
    xy = LiePoly(F, [(1, Var(x)), (1, Var(y))])
    return substitute(f, {x: xy}) - f - substitute(f, {x: Var(y)})


def commutator_probe(f: LiePoly, i: str, j: str, fresh: FreshVars | None = None) -> LiePoly:
    """Part of f(.. i+A .., .. j+B ..) containing both A = [u1,u2] and
    B = [u3,u4] (fresh reserved variables), by inclusion-exclusion:
    f(i+A, j+B) - f(i+A, j) - f(i, j+B) + f.  When ``i == j`` the single
    variable is replaced by i + A + B."""
    F = f.field
    fresh = fresh or FreshVars("u", f.variables())
    u1, u2, u3, u4 = (fresh() for _ in range(4))
    A = LiePoly.of(lnorm(u1, u2), 1, F)
    B = LiePoly.of(lnorm(u3, u4), 1, F)
    I, J = LiePoly.of(i, 1, F), LiePoly.of(j, 1, F)
    if i == j:
        both = substitute(f, {i: I + A + B})
        a_only = substitute(f, {i: I + A})
        b_only = substitute(f, {i: I + B})
    else:
        both = substitute(f, {i: I + A, j: J + B})
        a_only = substitute(f, {i: I + A})
        b_only = substitute(f, {j: J + B})
    return both - a_only - b_only + f


def _multiset_perms(counts: Dict[str, int], order: List[str], n: int) -> Iterator[List[str]]:
    seq: List[str] = []

    def rec():
        if len(seq) == n:
            yield list(seq)
            return
        for v in order:
            if counts[v]:
                if len(seq) == 1 and seq[0] == v:
                    continue
                counts[v] -= 1
                seq.append(v)
                yield from rec()
                seq.pop()
                counts[v] += 1

    yield from rec()


def spanning_sequences(D: MultiDegree) -> List[List[str]]:
    """Letter sequences of the left-normalised monomials spanning the
    D-component (first two letters distinct)."""
    if D.total < 2:
        return [D.letters()] if D.total == 1 else []
    counts = D.as_dict()
    return list(_multiset_perms(counts, D.variables, D.total))


def spanning_monomials(D: MultiDegree) -> List[LieTerm]:
    return [lnorm(*s) for s in spanning_sequences(D)]


def multilinear_vars(n: int) -> List[str]:
    return [f"x{i}" for i in range(1, n + 1)]
