"""Command line front end: wittlab {witt, hh, check, list-instances}."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .hochschild import BarComplex, ComplexError, HochschildHomology, homology_json
from .linalg_exact import is_prime
from .ring_core import GradedModule, PolyQuotRing
from .ring_core.poly import PolyParseError
from .witt import (
    TruncationError,
    WittError,
    WittParseError,
    WittSemanticError,
    decompose,
    evaluate_expression,
    format_witt,
    ghost_map,
)
from .witt.vectors import format_element

EXIT_OK = 0
EXIT_UNDECIDED = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_COMPUTE = 4


class UsageError(ValueError):
    pass


def _load_json(arg: str):
    """A path to a JSON file or an inline JSON document."""
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        raise UsageError(f"{arg!r} is neither a file nor inline JSON") from None


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _fail(code: int, msg: str) -> int:
    print(f"wittlab: {msg}", file=sys.stderr)
    return code


def parse_modulus(text: str | None) -> int | None:
    """'4' or '2^2'."""
    if text is None:
        return None
    try:
        if "^" in text:
            p, v = text.split("^")
            p, v = int(p), int(v)
            if not is_prime(p) or v < 1:
                raise ValueError
            return p ** v
        q = int(text)
    except ValueError:
        raise UsageError(f"bad modulus {text!r}; expected q or p^v") from None
    if q < 2:
        raise UsageError("the modulus must be at least 2")
    return q


def parse_degrees(text: str) -> list[int]:
    """'0..4' or '0,1,3'."""
    try:
        if ".." in text:
            a, b = text.split("..")
            out = list(range(int(a), int(b) + 1))
        else:
            out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad degree list {text!r}") from None
    if not out or min(out) < 0:
        raise UsageError("degrees must be a nonempty list of nonnegative integers")
    return out


def parse_truncation(text: str) -> list[int]:
    try:
        return [int(x) for x in text.strip("{} ").split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad truncation set {text!r}") from None


# ------------------------------------------------------------------ witt

def cmd_witt(args) -> int:
    try:
        ring = PolyQuotRing.from_json(_load_json(args.ring))
        S = parse_truncation(args.S)
        w = evaluate_expression(args.expr, ring, S)
    except (WittParseError, PolyParseError, UsageError) as exc:
        return _fail(EXIT_PARSE, f"parse error: {exc}")
    except (WittSemanticError, TruncationError, WittError, ValueError) as exc:
        return _fail(EXIT_SEMANTIC, f"semantic error: {exc}")
    out = {
        "expression": args.expr,
        "ring": ring.to_json(),
        "S": list(w.trunc),
        "vector": format_witt(w),
        "coefficients": [format_element(c) for c in w.coeffs],
        "decomposition": [[i, format_element(a)] for i, a in decompose(w)],
    }
    if args.ghost:
        try:
            out["ghost"] = [format_element(g) for g in ghost_map(w)]
        except WittError as exc:
            return _fail(EXIT_SEMANTIC, f"semantic error: {exc}")
    _emit(_dump(out), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ hh

def _coefficients(spec, ring: PolyQuotRing, bound: int) -> GradedModule | None:
    if spec is None:
        return None
    data = _load_json(spec)
    unknown = set(data) - {"generators", "relations"}
    if unknown:
        raise UsageError(f"unknown module keys {sorted(unknown)}")
    rels = [[str(x) for x in r] for r in data.get("relations", [])]
    return GradedModule.from_presentation(ring, data["generators"], rels, bound)


def hh_table(ring: PolyQuotRing, degrees, coeff=None, modulus=None, internal_bound=None,
             normalized: bool = True) -> dict:
    if modulus and ring.base.modulus != 0:
        raise ComplexError("--mod applies to algebras over Z")
    bar = BarComplex(ring, coeff, max(degrees) + 1, internal_bound, normalized)
    records = []
    for n in degrees:
        H = HochschildHomology(bar, n, modulus)
        if modulus and not H.check_universal_coefficients():
            raise ComplexError("universal coefficient sequence failed")
        M = H.module
        rec = {"n": n, "invariants": homology_json(M)}
        if is_prime(M.base):
            rec["dimension"] = M.dimension()
        rec["by_degree"] = [homology_json(H.piece(d).module) for d in bar.degrees()]
        records.append(rec)
    return {
        "ring": ring.to_json(),
        "coefficients": bar.coeff_label,
        "modulus": modulus,
        "internal_bound": bar.bound if ring.is_graded else None,
        "normalized": normalized,
        "records": records,
    }


def cmd_hh(args) -> int:
    try:
        ring = PolyQuotRing.from_json(_load_json(args.ring))
        degrees = parse_degrees(args.degrees)
        modulus = parse_modulus(args.mod)
    except (UsageError, PolyParseError, ValueError, KeyError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    try:
        bound = args.internal_bound
        coeff = None
        if args.coeff is not None:
            if bound is None and ring.is_graded and not ring.is_finite_rank:
                raise ComplexError("coefficients over a ring of infinite rank need --internal-bound")
            b = bound if bound is not None else (ring.top_degree + max(degrees) + 1 if ring.is_graded else 0)
            coeff = _coefficients(args.coeff, ring, b)
            bound = b if ring.is_graded else bound
        table = hh_table(ring, degrees, coeff, modulus, bound, not args.unnormalized)
    except UsageError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except (ComplexError, ValueError, ArithmeticError) as exc:
        return _fail(EXIT_COMPUTE, f"precondition failed: {exc}")
    _emit(_dump(table), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ check

def _resolve(target: str) -> dict:
    from .pro_systems.instances import builtin

    try:
        return builtin(target)
    except KeyError:
        pass
    if not os.path.exists(target) and not target.lstrip().startswith("{"):
        raise UsageError(f"no built-in instance or file named {target!r}")
    return _load_json(target)


def run_one(config, stage_bound=None, internal_bound=None, jobs=1):
    """(exit code, report or None, message)."""
    from .pro_systems.instances import SchemaError, run_instance

    try:
        rep = run_instance(config, jobs=jobs, stage_bound=stage_bound, internal_bound=internal_bound)
    except SchemaError as exc:
        return EXIT_PARSE, None, f"schema error: {exc}"
    except Exception as exc:  # computation failures of any kind map to one exit code
        return EXIT_COMPUTE, None, f"computation error: {type(exc).__name__}: {exc}"
    return rep["exit_code"], rep, ""


def _write_report(rep: dict, path: str | None, wall_time: bool):
    from .pro_systems.instances import report_csv, report_json

    _emit(report_json(rep, wall_time), path)
    if path:
        root, _ = os.path.splitext(path)
        with open(root + ".csv", "w") as fh:
            fh.write(report_csv(rep))


def cmd_check(args) -> int:
    from .pro_systems.instances import BUILTIN

    targets = list(args.instances)
    if args.all:
        targets += [c["name"] for c in BUILTIN]
    if not targets:
        return _fail(EXIT_PARSE, "give instance names or files, or --all")
    configs = []
    for t in targets:
        try:
            configs.append(_resolve(t))
        except UsageError as exc:
            return _fail(EXIT_PARSE, f"schema error: {exc}")
    multi = len(configs) > 1
    if multi and args.out:
        os.makedirs(args.out, exist_ok=True)
    if multi and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            futures = [ex.submit(run_one, c, args.stage_bound, args.internal_bound, 1) for c in configs]
            results = [f.result() for f in futures]
    else:
        jobs = 1 if multi else args.jobs
        results = [run_one(c, args.stage_bound, args.internal_bound, jobs) for c in configs]
    worst = EXIT_OK
    summary = []
    for cfg, (code, rep, msg) in zip(configs, results):
        name = cfg.get("name", cfg.get("theorem", "instance")) if isinstance(cfg, dict) else "instance"
        worst = max(worst, code)
        if msg:
            print(f"wittlab: {name}: {msg}", file=sys.stderr)
        if rep is None:
            summary.append({"name": name, "exit_code": code, "error": msg})
            continue
        summary.append({"name": name, "exit_code": code, "verdict": rep["verdict"]})
        if multi:
            if args.out:
                _write_report(rep, os.path.join(args.out, f"{name}.json"), not args.no_wall_time)
        else:
            _write_report(rep, args.out, not args.no_wall_time)
    if multi:
        text = _dump({"wittlab_version": __version__, "instances": summary})
        if args.out:
            with open(os.path.join(args.out, "summary.json"), "w") as fh:
                fh.write(text)
        sys.stdout.write(text)
    return worst


def cmd_list(args) -> int:
    from .pro_systems.instances import list_instances

    _emit(_dump(list_instances()), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(_fail(EXIT_PARSE, message))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wittlab", description="Witt vectors, Hochschild homology and pro-module checks.")
    p.add_argument("--version", action="version", version=f"wittlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("witt", help="evaluate a Witt vector expression")
    w.add_argument("expr")
    w.add_argument("--ring", required=True, help="ring JSON file or inline JSON")
    w.add_argument("--S", default="1", help="truncation set, e.g. 1,2,4")
    w.add_argument("--ghost", action="store_true", help="also print ghost components")
    w.add_argument("--out")
    w.set_defaults(func=cmd_witt)

    h = sub.add_parser("hh", help="Hochschild homology table")
    h.add_argument("ring", help="ring JSON file or inline JSON")
    h.add_argument("--coeff", help="coefficient module JSON {generators, relations}")
    h.add_argument("--degrees", default="0..2")
    h.add_argument("--mod", help="finite coefficients Z/q, given as q or p^v")
    h.add_argument("--internal-bound", type=int)
    h.add_argument("--unnormalized", action="store_true")
    h.add_argument("--out")
    h.set_defaults(func=cmd_hh)

    c = sub.add_parser("check", help="run theorem instances")
    c.add_argument("instances", nargs="*", help="built-in names or instance JSON files")
    c.add_argument("--all", action="store_true", help="run every built-in instance")
    c.add_argument("--stage-bound", type=int)
    c.add_argument("--internal-bound", type=int)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", help="report path (a directory when several instances run)")
    c.add_argument("--no-wall-time", action="store_true", help="omit the wall-time field")
    c.set_defaults(func=cmd_check)

    ls = sub.add_parser("list-instances", help="list the built-in instance matrix")
    ls.add_argument("--out")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "stage_bound", None) is not None and args.stage_bound < 1:
        return _fail(EXIT_PARSE, "--stage-bound must be at least 1")
    if getattr(args, "jobs", 1) < 1:
        return _fail(EXIT_PARSE, "--jobs must be at least 1")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
