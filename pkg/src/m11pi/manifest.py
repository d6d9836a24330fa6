"""Check manifests: parsing and execution.

One check per line::

    name: op key=value key="quoted value" ... expect=<outcome>

``expect: <outcome>`` is accepted too.  Blank lines and ``#`` comments
are ignored.  Every check carries a claim tag (``claim=``) and an anchor
string (``anchor=``); a tag must always be paired with the same anchor.
"""

from __future__ import annotations

import re
import shlex
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Dict, List, Optional

from .engine.algebra import AlgebraSpec, IdentityUpToBound, NonIdentity, witness_json
from .engine.decide import is_identity, is_identity_general, is_identity_multilinear
from .engine.relations import subs_relations_check
from .engine.spaces import (
    Bounds,
    SubspaceBasis,
    consequence_space,
    containment,
    contains,
    identity_space,
    span_of,
    spaces_equal,
)
from .engine.witness import nonc_substitution, witness_search
from .freelie import LiePoly, MultiDegree, rename
from .identities import CATALOGUE, cm, insert_after_second, nonc1, nonc2
from .lang import format_poly, parse
from .scalars import Field, QQ, field_from_flags
from .supermatrix import eval_poly

OUTCOMES = ("identity", "non-identity", "consequence", "spaces-equal", "relations-hold")
SCHEMA_VERSION = 1


class ManifestError(ValueError):
    pass


@dataclass
class Check:
    name: str
    op: str
    params: Dict[str, str]
    expect: str
    claim: str
    anchor: str
    line: int = 0


def parse_manifest_text(text: str, source: str = "<manifest>") -> List[Check]:
    checks: List[Check] = []
    anchors: Dict[str, str] = {}
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(r"^([A-Za-z0-9_.\-]+)\s*:\s*(.*)$", line)
        if not m:
            raise ManifestError(f"{source}:{lineno}: expected 'name: op key=value ...'")
        name, rest = m.groups()
        rest = re.sub(r"(^|\s)expect:\s*", r"\1expect=", rest)
        if name in names:
            raise ManifestError(f"{source}:{lineno}: duplicate check name {name!r}")
        names.add(name)
        try:
            toks = shlex.split(rest, comments=True)
        except ValueError as e:
            raise ManifestError(f"{source}:{lineno}: {e}") from e
        if not toks:
            raise ManifestError(f"{source}:{lineno}: missing operation")
        op, kv = toks[0], {}
        for t in toks[1:]:
            if "=" not in t:
                raise ManifestError(f"{source}:{lineno}: expected key=value, got {t!r}")
            k, v = t.split("=", 1)
            kv[k] = v
        expect = kv.pop("expect", None)
        if expect not in OUTCOMES:
            raise ManifestError(f"{source}:{lineno}: expect must be one of {', '.join(OUTCOMES)}")
        claim = kv.pop("claim", "")
        anchor = kv.pop("anchor", "")
        if not claim or not anchor:
            raise ManifestError(f"{source}:{lineno}: claim= and anchor= are required")
        if anchors.setdefault(claim, anchor) != anchor:
            raise ManifestError(f"{source}:{lineno}: claim {claim!r} has two different anchors")
        if op not in OPS:
            raise ManifestError(f"{source}:{lineno}: unknown operation {op!r}")
        checks.append(Check(name, op, kv, expect, claim, anchor, lineno))
    return checks


def load_manifest(path: Optional[str] = None) -> List[Check]:
    if path is None:
        text = resources.files("m11pi").joinpath("data/paper.manifest").read_text(encoding="utf-8")
        return parse_manifest_text(text, "paper.manifest")
    with open(path, encoding="utf-8") as fh:
        return parse_manifest_text(fh.read(), path)


# ---------------------------------------------------------------------------
# parameters


_REF = re.compile(r"^([a-z][a-z0-9]*)(?:\(([^()]*)\))?$")


def field_param(p: Dict[str, str]) -> Field:
    name = p.get("field", "q")
    if name == "q":
        return QQ
    m = re.match(r"^gf(\d+)$", name)
    if not m:
        raise ManifestError(f"bad field {name!r}")
    return field_from_flags("fp", int(m.group(1)))


def poly_ref(text: str, F: Field) -> LiePoly:
    """Catalogue reference like ``cp(3)`` / ``c(1,-1)`` or a bracket
    expression."""
    m = _REF.match(text.strip())
    if m and m.group(1) in CATALOGUE:
        args = [int(a) for a in (m.group(2) or "").split(",") if a.strip()]
        return CATALOGUE[m.group(1)](*args, field=F)
    return parse(text, F)


def degree_param(p: Dict[str, str]) -> MultiDegree:
    d = p.get("D")
    if d is None:
        raise ManifestError("missing D=")
    if d.startswith("multilinear:"):
        return MultiDegree.multilinear(int(d.split(":")[1]))
    return MultiDegree.parse(d)


def _yes(v: Optional[str]) -> bool:
    return (v or "no").lower() in ("yes", "true", "1")


def algebra_param(p: Dict[str, str]) -> AlgebraSpec:
    N = p.get("N")
    return AlgebraSpec(field_param(p), _yes(p.get("unital")), int(N) if N else None)


def gens_param(text: str, F: Field) -> Dict[str, LiePoly]:
    out = {}
    for ref in text.split(";"):
        ref = ref.strip()
        if ref:
            out[ref] = poly_ref(ref, F)
    return out


def _rename(f: LiePoly, spec: Optional[str]) -> LiePoly:
    if not spec:
        return f
    return rename(f, dict(kv.split(":") for kv in spec.split(",")))


# ---------------------------------------------------------------------------
# execution


class Runner:
    """Executes checks, caching spaces across them."""

    def __init__(self):
        self._spaces: Dict[tuple, SubspaceBasis] = {}

    def kernel(self, D: MultiDegree, A: AlgebraSpec) -> SubspaceBasis:
        key = ("kernel", D, A)
        if key not in self._spaces:
            self._spaces[key] = identity_space(D, A)
        return self._spaces[key]

    def consequences(self, gens: Dict[str, LiePoly], D: MultiDegree, F: Field, s: int = 2) -> SubspaceBasis:
        key = ("cons", tuple(sorted(gens)), D, F, s)
        if key not in self._spaces:
            self._spaces[key] = consequence_space(gens, D, F, Bounds(s=s))
        return self._spaces[key]

    def space(self, spec: str, D: MultiDegree, p: Dict[str, str]) -> SubspaceBasis:
        F = field_param(p)
        if spec == "zero":
            return span_of(D, F, [], "zero")
        if spec.startswith("kernel"):
            unital = {"kernel": _yes(p.get("unital")), "kernel-unital": True, "kernel-nonunital": False}[spec]
            return self.kernel(D, AlgebraSpec(F, unital))
        m = re.match(r"^cons\((.*)\)$", spec)
        if m:
            return self.consequences(gens_param(m.group(1), F), D, F, int(p.get("s", 2)))
        raise ManifestError(f"unknown space {spec!r}")

    def run(self, c: Check, timing: bool = True) -> Dict:
        t0 = time.perf_counter()
        try:
            out = OPS[c.op](self, c.params)
        except ManifestError:
            raise
        except Exception as e:  # reported, not raised: the check fails
            out = {"result": f"error: {type(e).__name__}: {e}"}
        millis = round((time.perf_counter() - t0) * 1000) if timing else 0
        rec = {
            "check": c.name,
            "claim": c.claim,
            "claim_anchor": c.anchor,
            "operation": c.op,
            "inputs": dict(sorted(c.params.items())),
            "result": out.pop("result"),
            "expected": c.expect,
        }
        rec.update(out)
        rec["passed"] = rec["result"] == c.expect
        rec["millis"] = millis
        rec["replay"] = f"m11pi verify-paper --only {c.name}"
        return rec


def op_identity(r: Runner, p) -> Dict:
    A = algebra_param(p)
    f = _rename(poly_ref(p["poly"], A.field), p.get("rename"))
    method = p.get("method", "general")
    v = is_identity_multilinear(f, A) if method == "multilinear" else is_identity(f, A)
    out = {"polynomial": format_poly(f), "verdict": v.as_json()}
    if isinstance(v, NonIdentity):
        out["result"] = "non-identity"
        out["witness"] = witness_json(v.witness)
    elif v.is_identity:
        out["result"] = "identity"
        if isinstance(v, IdentityUpToBound):
            out["bounds"] = v.bound
    else:
        out["result"] = "undecided"
    return out


def op_witness(r: Runner, p) -> Dict:
    A = algebra_param(p)
    f = poly_ref(p["poly"], A.field)
    w = witness_search(f, A, p.get("strategy", "all"))
    if not w.found:
        return {"result": "no-witness", "bounds": w.bound}
    return {
        "result": "non-identity",
        "polynomial": format_poly(f),
        "strategy": w.strategy,
        "witness": witness_json(w.witness),
        "value": w.value.to_json(),
    }


def op_nonc(r: Runner, p) -> Dict:
    """Both families on the fixed matrices, plus the diagonal shape of the
    first family's value."""
    k, pr = int(p["k"]), int(p["p"])
    F = field_param(p)
    d = nonc_substitution(k, pr, F)
    v1 = eval_poly(nonc1(k, pr, F), d.witness)
    v2 = eval_poly(nonc2(k, pr, F), d.witness)
    w = d.b0
    for _ in range(pr - 1):
        w = w * d.c0
    w = (w * d.c1 * d.c2).scale(2)
    for a in reversed(d.a):
        w = a * w
    w2 = d.b0
    for _ in range(pr - 2):
        w2 = w2 * d.b0
    for _ in range(pr - 1):
        w2 = w2 * d.c0
    w2 = w2 * d.b1 * d.c2
    for a in reversed(d.a):
        w2 = a * w2
    diag = v1.b.is_zero() and v1.d.is_zero() and v1.a == v1.c
    sign = 1 if v1.a == w else (-1 if v1.a == -w else 0)
    shape2 = v2.b.is_zero() and v2.d.is_zero() and v2.a == w2 and v2.c == w2
    ok = (not v1.is_zero()) and (not v2.is_zero()) and diag and sign != 0 and not w.is_zero() and shape2
    return {
        "result": "non-identity" if ok else "shape-mismatch",
        "polynomials": [format_poly(nonc1(k, pr, F)), format_poly(nonc2(k, pr, F))],
        "dimensions": {
            "family1_diagonal": diag,
            "family1_sign_vs_w": sign,
            "family2_equals_diag_w2": shape2,
        },
        "witness": witness_json(d.witness),
    }


def op_consequence(r: Runner, p) -> Dict:
    F = field_param(p)
    f = _rename(poly_ref(p["poly"], F), p.get("rename"))
    gens = gens_param(p["gens"], F)
    S = r.consequences(gens, f.multidegree, F, int(p.get("s", 2)))
    m = contains(S, f)
    out = {"dimensions": S.as_json(), "bounds": S.bounds.as_json() if S.bounds else None}
    if m.member and m.verified:
        out["result"] = "consequence"
        out["certificate"] = [[F.fmt(c), sv.describe()] for c, sv in m.certificate]
    else:
        out["result"] = "not-found" if not m.member else "certificate-failed"
    return out


def op_insertion(r: Runner, p) -> Dict:
    F = field_param(p)
    f = _rename(poly_ref(p["poly"], F), p.get("rename"))
    g = insert_after_second(f, p.get("y", "y"), p.get("z", "z"))
    S = r.consequences({"f": f, "cm": cm(F)}, g.multidegree, F)
    m = contains(S, g)
    out = {"dimensions": S.as_json(), "derived": str(g)}
    out["result"] = "consequence" if (m.member and m.verified) else "not-found"
    if m.certificate:
        out["certificate"] = [[F.fmt(c), sv.describe()] for c, sv in m.certificate]
    return out


def op_sign_probe(r: Runner, p) -> Dict:
    """Both signs of the C family; passes when exactly one is a consequence
    and the other is refuted by a witness."""
    F = field_param(p)
    k = int(p["k"])
    gens = gens_param(p.get("gens", "cm"), F)
    found = {}
    for sign in (1, -1):
        f = CATALOGUE["c"](k, sign, field=F)
        S = r.consequences(gens, f.multidegree, F)
        m = contains(S, f)
        if m.member and m.verified:
            found[sign] = "consequence"
        else:
            v = is_identity_general(f, AlgebraSpec(F, False))
            found[sign] = "refuted" if not v.is_identity else "undecided"
    good = [s for s, v in found.items() if v == "consequence"]
    ok = len(good) == 1 and all(v != "undecided" for v in found.values())
    return {
        "result": "consequence" if ok else "ambiguous",
        "dimensions": {"sign+1": found[1], "sign-1": found[-1], "successful_sign": good[0] if len(good) == 1 else None, "degree": k + 4},
    }


def op_equal(r: Runner, p) -> Dict:
    D = degree_param(p)
    a = r.space(p["left"], D, p)
    b = r.space(p["right"], D, p)
    e = spaces_equal(a, b)
    return {
        "result": "spaces-equal" if e.equal else "spaces-differ",
        "dimensions": {"left": e.dim_a, "right": e.dim_b, "columns": a.coords.ncols},
    }


def op_containment(r: Runner, p) -> Dict:
    """Every element of the consequence space is an identity."""
    D = degree_param(p)
    F = field_param(p)
    S = r.consequences(gens_param(p["gens"], F), D, F, int(p.get("s", 2)))
    K = r.kernel(D, AlgebraSpec(F, _yes(p.get("unital"))))
    ok = containment(S, K)
    return {
        "result": "consequence" if ok else "not-contained",
        "dimensions": {"consequences": S.dim, "identities": K.dim},
    }


def op_relations(r: Runner, p) -> Dict:
    D = degree_param(p)
    F = field_param(p)
    K = r.kernel(D, AlgebraSpec(F, True))
    x1 = D.variables[0]
    failures = []
    checked = 0
    for i, f in enumerate(K.lie_rows()):
        for xk in D.variables[1:]:
            rep = subs_relations_check(f, x1, xk, F, require_identity=False)
            checked += 1
            if not rep.passed:
                failures.append({"row": i, "k": xk, "clauses": rep.clauses, "note": rep.note})
    return {
        "result": "relations-hold" if not failures else "relations-fail",
        "dimensions": {"kernel": K.dim, "checked": checked},
        "failures": failures,
    }


OPS: Dict[str, Callable[[Runner, Dict[str, str]], Dict]] = {
    "identity": op_identity,
    "witness": op_witness,
    "nonc": op_nonc,
    "consequence": op_consequence,
    "insertion": op_insertion,
    "sign-probe": op_sign_probe,
    "equal": op_equal,
    "containment": op_containment,
    "relations": op_relations,
}


def run_manifest(checks: List[Check], timing: bool = True, only: Optional[List[str]] = None) -> Dict:
    runner = Runner()
    recs = []
    for c in checks:
        if only and c.name not in only:
            continue
        recs.append(runner.run(c, timing))
    return {"schema_version": SCHEMA_VERSION, "checks": recs}
