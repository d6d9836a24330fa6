"""The associative superalgebra M_{1,1} over a Grassmann algebra and its
adjoint Lie bracket.

Layout is ((a, b), (d, c)): ``a``/``c`` even, ``b``/``d`` odd.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Mapping

from .grassmann import (
    ContextError,
    BudgetExceeded,
    GrassmannContext,
    GrassmannElement,
    format_word,
    parity,
    word,
)
from .scalars import CoeffPoly

CHECK_PARITY = True


class ParityError(AssertionError):
    """A matrix entry has the wrong Z/2 parity (an internal bug)."""


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class SuperMatrix:
    a: GrassmannElement
    b: GrassmannElement
    d: GrassmannElement
    c: GrassmannElement

    def __post_init__(self):
        ctx = self.a.ctx
        for e in (self.b, self.d, self.c):
            if e.ctx != ctx:
                raise ContextError("matrix entries from different contexts")
        if CHECK_PARITY:
            self.check_parity()

    def check_parity(self):
        for name, e, par in (("a", self.a, 0), ("b", self.b, 1), ("d", self.d, 1), ("c", self.c, 0)):
            if not e.is_homogeneous(par):
                raise ParityError(f"entry {name} is not {'even' if par == 0 else 'odd'}: {e}")

    @property
    def ctx(self) -> GrassmannContext:
        return self.a.ctx

    @classmethod
    def zero(cls, ctx: GrassmannContext) -> "SuperMatrix":
        z = GrassmannElement.zero(ctx)
        return cls(z, z, z, z)

    def entries(self):
        return (self.a, self.b, self.d, self.c)

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix(self.a + other.a, self.b + other.b, self.d + other.d, self.c + other.c)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix(self.a - other.a, self.b - other.b, self.d - other.d, self.c - other.c)

    def __neg__(self) -> "SuperMatrix":
        return SuperMatrix(-self.a, -self.b, -self.d, -self.c)

    def scale(self, s) -> "SuperMatrix":
        return SuperMatrix(self.a.scale(s), self.b.scale(s), self.d.scale(s), self.c.scale(s))

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if other.ctx != self.ctx:
            raise ContextError("matrix context mismatch")
        a, b, d, c = self.a, self.b, self.d, self.c
        A, B, D, C = other.a, other.b, other.d, other.c
        return SuperMatrix(a * A + b * D, a * B + b * C, d * A + c * D, d * B + c * C)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.d or self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def map_entries(self, fn) -> "SuperMatrix":
        return SuperMatrix(*(fn(e) for e in self.entries()))

    def __str__(self):
        return format_matrix(self)

    def to_json(self) -> Dict[str, list]:
        return {k: e.to_json() for k, e in zip("abdc", self.entries())}

    @classmethod
    def from_json(cls, ctx: GrassmannContext, data) -> "SuperMatrix":
        return cls(*(GrassmannElement.from_json(ctx, data.get(k, [])) for k in "abdc"))


def mat_mul(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    return x @ y


def mat_add(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    return x + y


def bracket(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    return x @ y - y @ x


def format_matrix(m: SuperMatrix) -> str:
    cells = [[str(m.a), str(m.b)], [str(m.d), str(m.c)]]
    w0 = max(len(cells[0][0]), len(cells[1][0]))
    w1 = max(len(cells[0][1]), len(cells[1][1]))
    return "\n".join(f"( {r[0].ljust(w0)}  {r[1].ljust(w1)} )" for r in cells)


def unit(ctx: GrassmannContext, i: int, j: int, entry: GrassmannElement | None = None) -> SuperMatrix:
    """Matrix unit E_ij, optionally scaled by a Grassmann element."""
    if entry is None:
        entry = GrassmannElement.one(ctx)
    z = GrassmannElement.zero(ctx)
    slots = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    if (i, j) not in slots:
        raise ValueError(f"no matrix unit E{i}{j}")
    cells = [z, z, z, z]
    cells[slots[(i, j)]] = entry
    return SuperMatrix(*cells)


def identity_matrix(ctx: GrassmannContext) -> SuperMatrix:
    one = GrassmannElement.one(ctx)
    z = GrassmannElement.zero(ctx)
    return SuperMatrix(one, z, z, one)


def eval_term(term, assignment: Mapping[str, SuperMatrix], cache: dict | None = None) -> SuperMatrix:
    """Evaluate a LieTerm by recursive brackets, memoised on subterms."""
    from .freelie import Bracket, Var

    if cache is None:
        cache = {}

    def go(t):
        hit = cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            try:
                v = assignment[t.name]
            except KeyError:
                raise UnboundVariable(t.name) from None
        elif isinstance(t, Bracket):
            v = bracket(go(t.left), go(t.right))
        else:
            raise TypeError(f"not a LieTerm: {t!r}")
        cache[t] = v
        return v

    return go(term)


def eval_poly(f, assignment: Mapping[str, SuperMatrix]) -> SuperMatrix:
    """Evaluate a LiePoly; coefficients are mapped into the matrix field."""
    ctx = next(iter(assignment.values())).ctx if assignment else None
    if f.is_zero():
        if ctx is None:
            raise ValueError("cannot infer the context of an empty assignment")
        return SuperMatrix.zero(ctx)
    cache: dict = {}
    total = None
    for term, c in f.terms.items():
        v = eval_term(term, assignment, cache)
        ctx = v.ctx
        v = v.scale(ctx.field.norm(c))
        total = v if total is None else total + v
    return total


def generic_matrix(
    var_degree: int,
    pool,
    unital: bool,
    coeff_namer: Callable[[str], int],
    ctx: GrassmannContext,
) -> SuperMatrix:
    """Generic element over a generator pool.

    Diagonal entries run over every even word of length <= 2 on ``pool``
    (the empty word only when unital), off-diagonal entries over every
    generator of ``pool``; each word gets its own fresh indeterminate from
    ``coeff_namer(label)``.  ``var_degree`` is the degree of the variable
    in the polynomial under test and only feeds the pool-size check.
    """
    pool = list(pool)
    if len(pool) < 2 * var_degree:
        raise BudgetExceeded(f"pool of {len(pool)} generators < 2*{var_degree}")
    if unital != ctx.unital:
        raise ContextError("unital flag disagrees with context")
    F = ctx.field

    def term(w, label):
        return {w: CoeffPoly.var(F, coeff_namer(label))}

    def even(tag):
        terms = {}
        if unital:
            terms.update(term(0, f"{tag}:1"))
        for i, j in combinations(pool, 2):
            terms.update(term(word(i, j), f"{tag}:{format_word(word(i, j))}"))
        return GrassmannElement(ctx, terms)

    def odd(tag):
        terms = {}
        for i in pool:
            terms.update(term(word(i), f"{tag}:e{i}"))
        return GrassmannElement(ctx, terms)

    return SuperMatrix(even("a"), odd("b"), odd("d"), even("c"))


def is_parity_consistent(m: SuperMatrix) -> bool:
    try:
        m.check_parity()
    except ParityError:
        return False
    return True


__all__ = [
    "SuperMatrix",
    "ParityError",
    "UnboundVariable",
    "mat_mul",
    "mat_add",
    "bracket",
    "unit",
    "identity_matrix",
    "eval_term",
    "eval_poly",
    "generic_matrix",
    "format_matrix",
    "parity",
]
