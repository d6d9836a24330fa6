"""Algebra descriptors and verdict types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from ..grassmann import GrassmannContext
from ..scalars import Field, QQ
from ..supermatrix import SuperMatrix


@dataclass(frozen=True)
class AlgebraSpec:
    """M_{1,1}(E) (``unital=False``) or M_{1,1}(E^1) over ``field``.

    ``N`` is the generator budget.  ``None`` means "as many as the degree
    needs" (2 per variable occurrence), which makes the verdicts exact for
    the infinitely generated algebra.
    """

    field: Field = QQ
    unital: bool = False
    N: Optional[int] = None

    @property
    def label(self) -> str:
        base = "M11(E1)" if self.unital else "M11(E)"
        n = "" if self.N is None else f"[N={self.N}]"
        return f"{base}{n}/{self.field!r}"

    def budget(self, degree: int) -> int:
        return 2 * degree if self.N is None else self.N

    def truncated(self, degree: int) -> bool:
        return self.N is not None and self.N < 2 * degree

    def context(self, N: int) -> GrassmannContext:
        return GrassmannContext(self.field, N, self.unital)

    def as_json(self):
        return {"field": self.field.name, "unital": self.unital, "N": self.N}


class Verdict:
    is_identity: bool = False

    def as_json(self):
        raise NotImplementedError


@dataclass
class Identity(Verdict):
    method: str = ""
    is_identity = True

    def __str__(self):
        return "identity"

    def as_json(self):
        return {"result": "identity", "method": self.method}


@dataclass
class IdentityUpToBound(Verdict):
    bound: str = ""
    method: str = ""
    is_identity = True

    def __str__(self):
        return f"identity up to bound ({self.bound})"

    def as_json(self):
        return {"result": "identity-up-to-bound", "bound": self.bound, "method": self.method}


@dataclass
class NonIdentity(Verdict):
    witness: Dict[str, SuperMatrix] = field(default_factory=dict)
    value: Optional[SuperMatrix] = None
    method: str = ""
    is_identity = False

    def __str__(self):
        return "non-identity"

    def as_json(self):
        return {
            "result": "non-identity",
            "method": self.method,
            "witness": witness_json(self.witness),
            "value": None if self.value is None else self.value.to_json(),
        }


@dataclass
class Undecided(Verdict):
    """Some component is not an identity but no substitution refuting f
    itself was found.  Only possible over a finite field for the unital
    algebra, where components of an identity need not be identities."""

    component: str = ""
    note: str = ""
    is_identity = False

    def __str__(self):
        return f"undecided ({self.note})"

    def as_json(self):
        return {"result": "undecided", "component": self.component, "note": self.note}


def witness_json(w: Dict[str, SuperMatrix]):
    if not w:
        return None
    ctx = next(iter(w.values())).ctx
    return {
        "field": ctx.field.name,
        "N": ctx.N,
        "unital": ctx.unital,
        "assignment": {k: w[k].to_json() for k in sorted(w)},
    }


def witness_from_json(data) -> Dict[str, SuperMatrix]:
    from ..scalars import field_from_flags

    f = data["field"]
    field_ = field_from_flags(f) if f == "q" else field_from_flags("fp", int(f[2:]))
    ctx = GrassmannContext(field_, int(data["N"]), bool(data["unital"]))
    return {k: SuperMatrix.from_json(ctx, v) for k, v in data["assignment"].items()}
