"""Command-line front end.

Subcommands: ``check``, ``kernel``, ``consequences``, ``equal``,
``verify-paper``.  Exit codes: 0 success (all checks pass), 1 a check
failed, 2 usage, parse or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Dict, List, Optional

from .engine.algebra import AlgebraSpec, IdentityUpToBound, NonIdentity, witness_from_json, witness_json
from .engine.decide import NotMultihomogeneous, is_identity, is_identity_general
from .engine.spaces import CapExceeded, SubspaceBasis, spaces_equal
from .freelie import LiePoly, MultiDegree, multidegree_components
from .lang import IdentityFileError, ParseError, format_poly, parse, parse_identity_file
from .manifest import SCHEMA_VERSION, ManifestError, Runner, gens_param, load_manifest, run_manifest
from .scalars import Field, FieldError, field_from_flags
from .supermatrix import eval_poly

FF_CAVEAT = (
    "caveat: over a finite field the components of an identity of the unital "
    "algebra need not be identities; per-component verdicts do not decide f"
)


class UsageError(Exception):
    pass


def _field(args) -> Field:
    return field_from_flags(args.field, args.p)


def _degree(args) -> MultiDegree:
    if args.multilinear is not None:
        return MultiDegree.multilinear(args.multilinear)
    if args.degree:
        return MultiDegree.parse(args.degree)
    raise UsageError("give --multilinear N or --degree SPEC")


def _emit(report: Dict, args, text: List[str]) -> None:
    data = json.dumps(report, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    if args.json == "-":
        sys.stdout.write(data)
        return
    sys.stdout.write("\n".join(text) + "\n")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(data)


def _millis(t0: float, args) -> int:
    return 0 if args.no_timing else round((time.perf_counter() - t0) * 1000)


def _record(name: str, inputs: Dict, result: str, expected: Optional[str], millis: int, **extra) -> Dict:
    rec = {"check": name, "claim_anchor": "", "inputs": inputs, "result": result, "expected": expected}
    rec.update({k: v for k, v in extra.items() if v is not None})
    rec["millis"] = millis
    return rec


def _verdict_word(v) -> str:
    if isinstance(v, NonIdentity):
        return "non-identity"
    if isinstance(v, IdentityUpToBound):
        return "identity-up-to-bound"
    return "identity" if v.is_identity else "undecided"


# ---------------------------------------------------------------------------
# check


def _pick_witness(data: Dict, name: Optional[str]) -> Dict:
    """Accepts a bare witness, a record with a ``witness`` field, or a full
    report (first check with a witness, or the one named)."""
    if "checks" in data:
        recs = [r for r in data["checks"] if r.get("witness") and (name is None or r["check"] == name)]
        if not recs:
            raise UsageError("no witness in report" + (f" for check {name!r}" if name else ""))
        return recs[0]["witness"]
    if "assignment" in data:
        return data
    if data.get("witness"):
        return data["witness"]
    raise UsageError("file holds no witness")


def _indent(label: str, m) -> str:
    lines = str(m).split("\n")
    pad = " " * len(label)
    return "\n".join([label + lines[0]] + [pad + l for l in lines[1:]])


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    F = _field(args)
    f = parse(args.expr, F)
    A = AlgebraSpec(F, args.unital, args.generators)
    inputs = {"expr": args.expr, "algebra": A.as_json()}
    text = []

    if args.witness:
        with open(args.witness, encoding="utf-8") as fh:
            data = json.load(fh)
        w = witness_from_json(_pick_witness(data, args.from_check))
        missing = sorted(set(f.variables()) - set(w))
        if missing:
            raise UsageError(f"witness does not assign {', '.join(missing)}")
        value = eval_poly(f, w)
        result = "non-identity" if not value.is_zero() else "zero-on-witness"
        text.append(f"{format_poly(f)}: value on witness {'is nonzero' if not value.is_zero() else 'is zero'}")
        if not value.is_zero():
            text.append(_indent("value = ", value))
        rec = _record("check", inputs, result, args.expect, _millis(t0, args), value=value.to_json())
    else:
        comps = multidegree_components(f) if f.terms else []
        caveat = F.is_finite and args.unital and len(comps) > 1
        if caveat:
            text.append(FF_CAVEAT)
        parts = []
        if len(comps) > 1:
            for D, g in comps:
                v = is_identity_general(g, A)
                parts.append({"multidegree": str(D), "result": _verdict_word(v)})
                text.append(f"  component {D}: {v}")
        v = is_identity(f, A)
        result = _verdict_word(v)
        text.insert(0, f"{format_poly(f)}: {v} in {A.label}")
        wit = val = None
        if isinstance(v, NonIdentity) and set(v.witness) >= set(f.variables()) and not eval_poly(f, v.witness).is_zero():
            wit = witness_json(v.witness)
            val = v.value.to_json()
            text.append("witness:")
            for name in sorted(v.witness):
                text.append(_indent(f"  {name} = ", v.witness[name]))
            text.append(_indent("value = ", v.value))
        rec = _record(
            "check",
            inputs,
            result,
            args.expect,
            _millis(t0, args),
            components=parts or None,
            caveat=FF_CAVEAT if caveat else None,
            witness=wit,
            value=val,
            bounds=v.bound if isinstance(v, IdentityUpToBound) else None,
        )
    rec["passed"] = args.expect is None or rec["result"] == args.expect
    _emit({"schema_version": SCHEMA_VERSION, "checks": [rec]}, args, text)
    return 0 if rec["passed"] else 1


# ---------------------------------------------------------------------------
# spaces


def _basis_lines(S: SubspaceBasis, limit: Optional[int]) -> List[str]:
    rows = S.lie_rows()
    out = [f"  {format_poly(r)}" for r in rows[: limit if limit is not None else len(rows)]]
    if limit is not None and len(rows) > limit:
        out.append(f"  ... {len(rows) - limit} more")
    return out


def _load_gens(spec: str, F: Field) -> Dict[str, LiePoly]:
    if os.path.isfile(spec):
        return parse_identity_file(spec, F)
    return gens_param(spec, F)


def _space(spec: str, D: MultiDegree, args, runner: Runner) -> SubspaceBasis:
    F = _field(args)
    if spec in ("kernel", "identities"):
        return runner.kernel(D, AlgebraSpec(F, args.unital))
    if spec in ("kernel-unital", "kernel-nonunital"):
        return runner.kernel(D, AlgebraSpec(F, spec == "kernel-unital"))
    for head in ("consequences(", "cons("):
        if spec.startswith(head) and spec.endswith(")"):
            return runner.consequences(_load_gens(spec[len(head) : -1], F), D, F, args.s)
    if spec == "zero":
        return runner.space("zero", D, {"field": F.name})
    raise UsageError(f"unknown space {spec!r} (kernel, kernel-unital, kernel-nonunital, consequences(GENS), zero)")


def cmd_kernel(args) -> int:
    t0 = time.perf_counter()
    D = _degree(args)
    A = AlgebraSpec(_field(args), args.unital)
    S = Runner().kernel(D, A)
    text = [f"identities of {A.label} in multidegree {D}: dimension {S.dim} (of {S.coords.ncols})"]
    text += _basis_lines(S, args.limit)
    rec = _record(
        "kernel",
        {"multidegree": str(D), "algebra": A.as_json()},
        "dimension",
        None,
        _millis(t0, args),
        dimensions=S.as_json(),
        basis=[format_poly(r) for r in S.lie_rows()],
    )
    _emit({"schema_version": SCHEMA_VERSION, "checks": [rec]}, args, text)
    return 0


def cmd_consequences(args) -> int:
    t0 = time.perf_counter()
    D = _degree(args)
    F = _field(args)
    gens = _load_gens(args.gens, F)
    S = Runner().consequences(gens, D, F, args.s)
    text = [f"consequences of {', '.join(gens)} in multidegree {D}: dimension {S.dim} (of {S.coords.ncols})"]
    if not S.complete:
        text.append(f"  (bounded enumeration: {S.bounds.as_json() if S.bounds else ''})")
    text += _basis_lines(S, args.limit)
    rec = _record(
        "consequences",
        {"generators": {k: format_poly(g) for k, g in gens.items()}, "multidegree": str(D), "field": F.name},
        "dimension",
        None,
        _millis(t0, args),
        dimensions=S.as_json(),
        bounds=S.bounds.as_json() if S.bounds else None,
        basis=[format_poly(r) for r in S.lie_rows()],
    )
    _emit({"schema_version": SCHEMA_VERSION, "checks": [rec]}, args, text)
    return 0


def cmd_equal(args) -> int:
    t0 = time.perf_counter()
    D = _degree(args)
    runner = Runner()
    a = _space(args.left, D, args, runner)
    b = _space(args.right, D, args, runner)
    e = spaces_equal(a, b)
    result = "spaces-equal" if e.equal else "spaces-differ"
    text = [f"{args.left} (dim {e.dim_a}) {'=' if e.equal else '!='} {args.right} (dim {e.dim_b}) in multidegree {D}"]
    rec = _record(
        "equal",
        {"left": args.left, "right": args.right, "multidegree": str(D), "field": _field(args).name, "unital": args.unital},
        result,
        "spaces-equal",
        _millis(t0, args),
        dimensions={"left": e.dim_a, "right": e.dim_b, "columns": a.coords.ncols},
    )
    rec["passed"] = e.equal
    _emit({"schema_version": SCHEMA_VERSION, "checks": [rec]}, args, text)
    return 0 if e.equal else 1


# ---------------------------------------------------------------------------
# verify-paper


def cmd_verify_paper(args) -> int:
    checks = load_manifest(args.manifest)
    if not checks:
        print("warning: manifest contains no checks", file=sys.stderr)
    report = run_manifest(checks, timing=not args.no_timing, only=args.only)
    text = []
    for r in report["checks"]:
        if args.manifest:
            r["replay"] = f"m11pi verify-paper {args.manifest} --only {r['check']}"
        mark = "PASS" if r["passed"] else "FAIL"
        line = f"{mark} {r['check']}: {r['result']} (expected {r['expected']})"
        if not args.no_timing:
            line += f" [{r['millis']} ms]"
        text.append(line)
    failed = [r for r in report["checks"] if not r["passed"]]
    text.append(f"{len(report['checks']) - len(failed)}/{len(report['checks'])} checks passed")
    for r in failed:
        text.append(f"replay: {r['replay']}")
    _emit(report, args, text)
    return 1 if failed else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="m11pi", description="Polynomial identities of M11(E) and M11(E1).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, degree=False):
        p.add_argument("--field", default="q", help="q or fp")
        p.add_argument("--p", type=int, default=None, help="characteristic for --field=fp")
        p.add_argument("--unital", action="store_true", help="use M11(E1) instead of M11(E)")
        p.add_argument("--json", default=None, metavar="PATH", help="write the JSON report (- for stdout)")
        p.add_argument("--no-timing", action="store_true", help="report millis as 0 (byte-stable output)")
        if degree:
            p.add_argument("--multilinear", type=int, default=None, metavar="N")
            p.add_argument("--degree", default=None, metavar="SPEC", help='multidegree like "x:2,y,z"')
            p.add_argument("--s", type=int, default=2, help="formal monomials per substituted variable")
            p.add_argument("--limit", type=int, default=None, help="print at most this many basis rows")

    p = sub.add_parser("check", help="decide whether an expression is an identity")
    p.add_argument("expr")
    common(p)
    p.add_argument("--generators", type=int, default=None, metavar="N", help="generator budget of E")
    p.add_argument("--witness", default=None, metavar="FILE", help="evaluate on a serialized substitution")
    p.add_argument("--from-check", default=None, metavar="NAME", help="with a report file: take the witness of this check")
    p.add_argument("--expect", default=None, choices=["identity", "non-identity"], help="exit 1 unless the result matches")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("kernel", help="identity space of one multidegree")
    common(p, degree=True)
    p.set_defaults(run=cmd_kernel)

    p = sub.add_parser("consequences", help="consequence space of generators")
    p.add_argument("gens", help="identity file, or catalogue names separated by ';'")
    common(p, degree=True)
    p.set_defaults(run=cmd_consequences)

    p = sub.add_parser("equal", help="compare two spaces")
    p.add_argument("left")
    p.add_argument("right")
    common(p, degree=True)
    p.set_defaults(run=cmd_equal)

    p = sub.add_parser("verify-paper", help="run a check manifest")
    p.add_argument("manifest", nargs="?", default=None, help="manifest file (default: shipped)")
    p.add_argument("--json", default=None, metavar="PATH")
    p.add_argument("--no-timing", action="store_true")
    p.add_argument("--only", action="append", default=None, metavar="NAME", help="run only this check")
    p.set_defaults(run=cmd_verify_paper)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.run(args)
    except (
        UsageError,
        ParseError,
        FieldError,
        IdentityFileError,
        ManifestError,
        CapExceeded,
        NotMultihomogeneous,
        OSError,
        KeyError,
        ValueError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
