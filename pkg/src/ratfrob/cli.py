"""Command-line front end: ``ratfrob <verb> [flags]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .charts import Family
from .core.text import format_value
from .errors import RatFrobError
from .golden import NAMES, golden, reference_f, reference_prepotential
from .prepotential import Prepotential, assemble, solve_f
from .verify import VerifyConfig, compare_mod_quadratics, verify_structure


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("FF_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"FF_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("FF_THREADS must be a positive integer")
    return n


def _family_dict(fam: Family) -> dict:
    return {"family": fam.kind, "ell": fam.ell, "r": fam.r, "n_poles": fam.n_poles}


def build_document(fam: Family) -> dict:
    from .flat import base_chart

    F = assemble(fam)
    chart = base_chart(fam)
    doc = {"instance": _family_dict(fam), "label": fam.label()}
    doc.update(F.to_dict())
    doc["f"] = format_value(solve_f(Family(fam.kind, fam.ell, fam.r)))
    doc["sigma"] = chart.sigma_json()
    return doc


def _load(path: str) -> tuple[Family, Prepotential, dict]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    inst = doc["instance"]
    fam = Family(inst["family"], inst["ell"], inst.get("r", 0), inst["n_poles"])
    return fam, Prepotential.from_dict(doc), doc


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _fail(report: dict) -> int:
    print(json.dumps(report, sort_keys=True), file=sys.stderr)
    return 1


# verbs -----------------------------------------------------------------------------


def cmd_build(args) -> int:
    if args.poles < 1:
        raise UsageError("--poles must be at least 1 for tail builds")
    if args.ell < 0:
        raise UsageError("--ell must be non-negative")
    if args.verb == "build-a":
        fam = Family("A", args.ell, 0, args.poles)
    else:
        if args.r < 1:
            raise UsageError("--r must be at least 1")
        fam = Family("EAW", args.ell, args.r, args.poles)
    _emit(build_document(fam), args.out)
    return 0


def cmd_verify(args) -> int:
    from .flat import full_flat_chart

    fam, F, _ = _load(args.input)
    chart = full_flat_chart(fam)
    cfg = VerifyConfig(points=args.points, seed=args.seed)
    reports = [r.to_dict() for r in verify_structure(F, chart, cfg, fam.label(), symbolic_metric=args.symbolic)]
    doc = {"instance": fam.label(), "passed": all(r["passed"] for r in reports), "reports": reports}
    if not doc["passed"]:
        return _fail(doc)
    print(json.dumps(doc, sort_keys=True))
    return 0


def run_example(name: str) -> dict:
    ex = golden(name)
    F = assemble(ex.family)
    rep = compare_mod_quadratics(F, reference_prepotential(name), name).to_dict()
    out = {"example": name, "label": ex.family.label(), "prepotential": rep}
    ref_f = reference_f(name)
    if ref_f is not None:
        f = solve_f(Family(ex.family.kind, ex.family.ell, ex.family.r))
        out["f"] = {"built": format_value(f), "reference": format_value(ref_f), "passed": f == ref_f}
    out["passed"] = rep["passed"] and out.get("f", {}).get("passed", True)
    if ex.note and not rep["passed"]:
        out["note"] = ex.note
    return out


def cmd_examples(args) -> int:
    names = list(NAMES) if args.all else [args.name]
    n = _threads()
    if n > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(run_example, names))
    else:
        results = [run_example(x) for x in names]
    doc = results[0] if len(results) == 1 else {"passed": all(r["passed"] for r in results), "examples": results}
    if not doc["passed"]:
        return _fail(doc)
    print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_invariants(args) -> int:
    from .invariants import certify_polynomiality

    kind = "theta" if args.kind == "theta" else "theta_tilde"
    fam = args.family
    if (kind == "theta") != (fam == "a"):
        raise UsageError("--kind theta goes with --family a, theta-tilde with --family eaw")
    r = args.r if fam == "eaw" else 0
    if fam == "eaw" and r < 1:
        raise UsageError("--r must be at least 1")
    if args.poles < 1:
        raise UsageError("--poles must be at least 1")
    cert = certify_polynomiality(kind, args.k, fam, args.ell, r, args.poles)
    doc = cert.to_dict()
    if not cert.passed:
        return _fail(doc)
    print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_export(args) -> int:
    _, F, doc = _load(args.input)
    if args.format == "json":
        out = dict(doc)
        out.update(F.to_dict())
        _emit(out, args.out)
    else:
        text = F.to_latex()
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    return 0


# parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratfrob", description="Frobenius structures on rational superpotentials.")
    sub = p.add_subparsers(dest="verb", required=True)

    a = sub.add_parser("build-a", help="assemble the polynomial-part family with simple poles")
    a.add_argument("--ell", type=int, required=True)
    a.add_argument("--poles", type=int, required=True)
    a.add_argument("--out")

    e = sub.add_parser("build-eaw", help="assemble the Laurent-part family with simple poles")
    e.add_argument("--ell", type=int, required=True)
    e.add_argument("--r", type=int, required=True)
    e.add_argument("--poles", type=int, required=True)
    e.add_argument("--out")

    v = sub.add_parser("verify", help="run the verification suite on a built JSON document")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--points", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--symbolic", action="store_true", help="check the metric symbolically")

    x = sub.add_parser("examples", help="rebuild a reference example and compare")
    g = x.add_mutually_exclusive_group(required=True)
    g.add_argument("--name", choices=NAMES)
    g.add_argument("--all", action="store_true")

    i = sub.add_parser("invariants", help="certify power sums in the zero/pole chart")
    i.add_argument("--kind", choices=("theta", "theta-tilde"), required=True)
    i.add_argument("--k", type=int, required=True)
    i.add_argument("--poles", type=int, required=True)
    i.add_argument("--family", choices=("a", "eaw"), required=True)
    i.add_argument("--ell", type=int, default=1)
    i.add_argument("--r", type=int, default=1)

    o = sub.add_parser("export", help="convert a built JSON document")
    o.add_argument("--in", dest="input", required=True)
    o.add_argument("--format", choices=("json", "latex"), required=True)
    o.add_argument("--out")
    return p


_VERBS = {"build-a": cmd_build, "build-eaw": cmd_build, "verify": cmd_verify, "examples": cmd_examples,
          "invariants": cmd_invariants, "export": cmd_export}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.verb == "verify" and args.points < 1:
        parser.print_usage(sys.stderr)
        print("ratfrob: error: --points must be positive", file=sys.stderr)
        return 2
    try:
        _threads()
        return _VERBS[args.verb](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ratfrob: error: {exc}", file=sys.stderr)
        return 2
    except (RatFrobError, OSError, ValueError, KeyError) as exc:
        return _fail({"passed": False, "error": type(exc).__name__, "message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
