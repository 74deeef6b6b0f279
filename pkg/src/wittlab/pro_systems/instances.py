"""Instance configs for the named checks, the built-in matrix and evidence reports."""

from __future__ import annotations

import copy
import csv
import io
import json
import random
import time

import jsonschema

from .. import __version__
from ..ring_core import GradedModule, PolyQuotRing
from ..witt import FiniteWittRing
from .checkers import (
    CheckResult,
    artin_rees_check,
    continuity_restriction_check,
    frobenius_completion_check,
    group_homology_pro_check,
    pro_hkr_check,
    random_witt_ses,
    torsion_pro_check,
    witt_exactness_check,
    witt_power_check,
)
from .core import NotDecidedBy, ProZero


class SchemaError(ValueError):
    pass


THEOREMS = ("pro_hkr", "thm_4_5_i", "cor_1_3", "cor_1_4", "artin_rees", "lemma_2_3", "lemma_2_6")

_INT_OR_LIST = {"oneOf": [
    {"type": "integer", "minimum": 0},
    {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
]}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["theorem", "ring", "ideal"],
    "properties": {
        "theorem": {"enum": list(THEOREMS)},
        "name": {"type": "string"},
        "ring": {
            "type": "object",
            "additionalProperties": False,
            "required": ["base"],
            "properties": {
                "base": {},
                "vars": {"type": "array", "items": {"type": "string"}},
                "ideal": {"type": "array", "items": {"type": "string"}},
            },
        },
        "ideal": {"type": "array", "items": {"type": "string"}},
        "module": {
            "type": "object",
            "additionalProperties": False,
            "required": ["generators"],
            "properties": {
                "generators": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "relations": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": ["string", "integer"]}},
                },
            },
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n": _INT_OR_LIST,
                "N": {"type": "integer", "minimum": 1},
                "cap": {"type": "integer", "minimum": 1},
                "internal_bound": {"type": "integer", "minimum": 0},
                "p": {"type": "integer", "minimum": 2},
                "v": {"type": "integer", "minimum": 1},
                "m": {"type": "integer", "minimum": 1},
                "r": {"type": "integer", "minimum": 1},
                "S": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
                "reduce_module": {"type": "boolean"},
                "sequences": {"type": "integer", "minimum": 0},
                "seed": {"type": "integer"},
            },
        },
        "claims_regular": {"type": "boolean"},
        "aq_finite": {"type": "boolean"},
    },
}

# parameters each theorem understands (N, cap and internal_bound are common)
_COMMON = {"N", "cap", "internal_bound"}
PARAMS = {
    "pro_hkr": _COMMON | {"n"},
    "thm_4_5_i": _COMMON | {"n", "p", "v"},
    "cor_1_3": _COMMON | {"n", "m"},
    "cor_1_4": _COMMON | {"m"},
    "artin_rees": _COMMON | {"n", "reduce_module"},
    "lemma_2_3": {"N", "cap", "S"},
    "lemma_2_6": {"N", "cap", "p", "r", "sequences", "seed"},
}
REQUIRED = {
    "pro_hkr": {"n"},
    "thm_4_5_i": {"n"},
    "cor_1_3": {"n", "m"},
    "cor_1_4": {"m"},
    "artin_rees": {"n"},
    "lemma_2_3": {"S"},
    "lemma_2_6": {"p", "r"},
}
DEFAULT_N = 8
DEFAULT_INTERNAL_BOUND = 10


def validate(config: dict) -> dict:
    """Schema-check a config and return a normalized copy; raises SchemaError."""
    try:
        jsonschema.validate(config, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {exc.message}") from None
    cfg = copy.deepcopy(config)
    theorem = cfg["theorem"]
    params = cfg.setdefault("params", {})
    extra = set(params) - PARAMS[theorem]
    if extra:
        raise SchemaError(f"params {sorted(extra)} are not used by {theorem}")
    missing = REQUIRED[theorem] - set(params)
    if missing:
        raise SchemaError(f"{theorem} needs params {sorted(missing)}")
    if "module" in cfg and theorem in ("pro_hkr", "lemma_2_3", "lemma_2_6"):
        raise SchemaError(f"{theorem} does not take a module")
    if cfg.get("aq_finite") and theorem != "thm_4_5_i":
        raise SchemaError("aq_finite only applies to thm_4_5_i")
    if "claims_regular" in cfg and theorem != "pro_hkr":
        raise SchemaError("claims_regular only applies to pro_hkr")
    if isinstance(params.get("n"), int):
        params["n"] = [params["n"]]
    try:
        ring = build_ring(cfg)
        for g in cfg["ideal"]:
            ring.normal_form(g)
        if "module" in cfg:
            build_module(cfg, ring, 0)
    except (ValueError, KeyError) as exc:
        raise SchemaError(f"bad ring or module: {exc}") from None
    cfg.setdefault("name", theorem)
    return cfg


def build_ring(cfg: dict) -> PolyQuotRing:
    return PolyQuotRing.from_json(cfg["ring"])


def build_module(cfg: dict, ring: PolyQuotRing, bound: int) -> GradedModule:
    spec = cfg.get("module")
    if spec is None:
        return GradedModule.ring_module(ring, bound)
    gens = spec["generators"]
    rels = spec.get("relations", [])
    for r in rels:
        if len(r) != len(gens):
            raise ValueError("each relation needs one entry per generator")
    rels = [[str(x) for x in r] for r in rels]
    return GradedModule.from_presentation(ring, gens, rels, bound)


# ------------------------------------------------------------------ running

def _stage(params, key, default):
    return params.get(key, default)


def run_checks(cfg: dict, jobs: int = 1) -> list[CheckResult]:
    theorem = cfg["theorem"]
    params = cfg["params"]
    ring = build_ring(cfg)
    I = list(cfg["ideal"])
    N = _stage(params, "N", DEFAULT_N)
    cap = params.get("cap")
    D = _stage(params, "internal_bound", DEFAULT_INTERNAL_BOUND)
    out = []
    if theorem == "pro_hkr":
        for n in params["n"]:
            out.append(pro_hkr_check(ring, I, n, N, D, cfg.get("claims_regular", False), cap, jobs))
    elif theorem == "thm_4_5_i":
        modulus = None
        if "p" in params:
            modulus = params["p"] ** params.get("v", 1)
        M = build_module(cfg, ring, D)
        for n in params["n"]:
            out.append(continuity_restriction_check(ring, I, M, n, N, D, modulus, cfg.get("aq_finite", False), cap, jobs))
    elif theorem == "cor_1_3":
        M = build_module(cfg, ring, D)
        for n in params["n"]:
            out.append(group_homology_pro_check(M, I, params["m"], n, N, cap, jobs))
    elif theorem == "cor_1_4":
        out.append(torsion_pro_check(build_module(cfg, ring, D), I, params["m"], N, cap, jobs))
    elif theorem == "artin_rees":
        M = build_module(cfg, ring, D)
        out.append(artin_rees_check(M, I, params["n"], N, params.get("reduce_module", False), cap, jobs))
    elif theorem == "lemma_2_3":
        out.append(witt_power_check(FiniteWittRing(ring, params["S"]), I, N, cap))
    elif theorem == "lemma_2_6":
        p, r = params["p"], params["r"]
        W = FiniteWittRing(ring, [p ** i for i in range(r)])
        out.append(frobenius_completion_check(W, I, p, r, N, cap))
        rng = random.Random(params.get("seed", 0))
        for k in range(params.get("sequences", 0)):
            K, inc, F, Q = random_witt_ses(W, rng)
            res = witt_exactness_check(K, inc, F, Q, I, N, cap)
            res.name = f"witt_exactness_{k}"
            out.append(res)
    return out


def _verdict_summary(results: list[CheckResult]) -> str:
    kinds = [v.kind for res in results for v in res.verdicts.values()]
    if any(k == NotDecidedBy.kind for k in kinds):
        return "NotDecidedBy"
    if all(k == ProZero.kind for k in kinds):
        return "ProZero"
    return "ProIso"


def run_instance(config: dict, jobs: int = 1, stage_bound: int | None = None,
                 internal_bound: int | None = None) -> dict:
    """Validate, run and report.  Schema problems raise SchemaError."""
    cfg = validate(config)
    if stage_bound is not None:
        cfg["params"]["N"] = stage_bound
    if internal_bound is not None and "internal_bound" in PARAMS[cfg["theorem"]]:
        cfg["params"]["internal_bound"] = internal_bound
    t0 = time.perf_counter()
    results = run_checks(cfg, jobs)
    summary = _verdict_summary(results)
    return {
        "wittlab_version": __version__,
        "instance": cfg,
        "verdict": summary,
        "exit_code": 1 if summary == "NotDecidedBy" else 0,
        "checks": [r.to_json() for r in results],
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }


def report_json(report: dict, wall_time: bool = True) -> str:
    data = dict(report)
    if not wall_time:
        data.pop("wall_time_s", None)
    return json.dumps(data, indent=2) + "\n"


def _fmt(inv: dict) -> str:
    parts = []
    if inv["free_rank"]:
        parts.append(f"free^{inv['free_rank']}")
    parts += [f"Z/{t}" for t in inv["torsion"]]
    return " + ".join(parts) or "0"


CSV_FIELDS = ["instance", "check", "kind", "label", "s", "source", "target", "kernel", "cokernel", "value"]


def report_csv(report: dict) -> str:
    """Stage tables and witnesses, one row each."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    name = report["instance"]["name"]
    for chk in report["checks"]:
        for row in chk["evidence"]:
            rec = {"instance": name, "check": chk["check"], "s": row["s"]}
            if "map" in row:
                rec.update(kind="map", label=row["map"],
                           **{k: _fmt(row[k]) for k in ("source", "target", "kernel", "cokernel")})
            else:
                rec.update(kind="level", label=row["system"], value=_fmt(row["level"]))
            w.writerow(rec)
        for key, v in chk["verdicts"].items():
            parts = [(key, v)] if "witness" in v else [(f"{key}/{p}", v[p]) for p in ("kernel", "cokernel") if p in v]
            for label, part in parts:
                for r, s in part.get("witness", []):
                    w.writerow({"instance": name, "check": chk["check"], "kind": "witness",
                                "label": label, "s": r, "value": s})
            if v["verdict"] == NotDecidedBy.kind:
                for r in v["undecided_levels"]:
                    w.writerow({"instance": name, "check": chk["check"], "kind": "undecided",
                                "label": v.get("part", key), "s": r, "value": v["cap"]})
    return buf.getvalue()


# ------------------------------------------------------------------ built-in matrix

F2X = {"base": {"Fp": 2}, "vars": ["x"]}
F2X4 = {"base": {"Fp": 2}, "vars": ["x"], "ideal": ["x^4"]}
F3XY = {"base": {"Fp": 3}, "vars": ["x", "y"]}
NODE = {"base": {"Fp": 2}, "vars": ["x", "y"], "ideal": ["x*y"]}
ZX = {"base": "Z", "vars": ["x"]}

BUILTIN = [
    {"name": "pro_hkr_f2x_n1", "theorem": "pro_hkr", "ring": F2X, "ideal": ["x"],
     "params": {"n": 1, "N": 10, "internal_bound": 12}, "claims_regular": True},
    {"name": "pro_hkr_f2x_n2", "theorem": "pro_hkr", "ring": F2X, "ideal": ["x"],
     "params": {"n": 2, "N": 10, "internal_bound": 12}, "claims_regular": True},
    {"name": "pro_hkr_f2x_n3", "theorem": "pro_hkr", "ring": F2X, "ideal": ["x"],
     "params": {"n": 3, "N": 10, "internal_bound": 12}, "claims_regular": True},
    {"name": "pro_hkr_f3xy_n1", "theorem": "pro_hkr", "ring": F3XY, "ideal": ["x", "y"],
     "params": {"n": 1, "N": 6, "internal_bound": 8}, "claims_regular": True},
    {"name": "artin_rees_node_y", "theorem": "artin_rees", "ring": NODE, "ideal": ["x"],
     "module": {"generators": [0], "relations": [["y"]]},
     "params": {"n": [1, 2], "N": 12, "internal_bound": 16}},
    {"name": "artin_rees_node_x_plus_y", "theorem": "artin_rees", "ring": NODE, "ideal": ["x"],
     "module": {"generators": [0], "relations": [["x + y"]]},
     "params": {"n": [1, 2], "N": 12, "internal_bound": 16}},
    {"name": "artin_rees_reduced_node_y", "theorem": "artin_rees", "ring": NODE, "ideal": ["x"],
     "module": {"generators": [0], "relations": [["y"]]},
     "params": {"n": [1, 2], "N": 8, "internal_bound": 12, "reduce_module": True}},
    {"name": "artin_rees_reduced_node_x_plus_y", "theorem": "artin_rees", "ring": NODE, "ideal": ["x"],
     "module": {"generators": [0], "relations": [["x + y"]]},
     "params": {"n": [1, 2], "N": 8, "internal_bound": 12, "reduce_module": True}},
    {"name": "artin_rees_z_4_mod_8", "theorem": "artin_rees", "ring": {"base": "Z"}, "ideal": ["4"],
     "module": {"generators": [0], "relations": [["8"]]},
     "params": {"n": 1, "N": 8, "internal_bound": 0}},
    {"name": "cor_1_3_free", "theorem": "cor_1_3", "ring": ZX, "ideal": ["x"],
     "params": {"n": [0, 1, 2, 3], "m": 2, "N": 8, "internal_bound": 10}},
    {"name": "cor_1_3_mod_2x", "theorem": "cor_1_3", "ring": ZX, "ideal": ["x"],
     "module": {"generators": [0], "relations": [["2*x"]]},
     "params": {"n": [0, 1, 2, 3], "m": 2, "N": 8, "internal_bound": 10}},
    {"name": "cor_1_4_free_plus_z2", "theorem": "cor_1_4", "ring": ZX, "ideal": ["x"],
     "module": {"generators": [0, 0], "relations": [["0", "2"]]},
     "params": {"m": 2, "N": 8, "internal_bound": 10}},
    {"name": "cor_1_4_free", "theorem": "cor_1_4", "ring": ZX, "ideal": ["x"],
     "params": {"m": 2, "N": 8, "internal_bound": 10}},
    {"name": "cor_1_4_invertible", "theorem": "cor_1_4", "ring": ZX, "ideal": ["x"],
     "module": {"generators": [0], "relations": [["3"]]},
     "params": {"m": 2, "N": 8, "internal_bound": 10}},
    {"name": "thm_4_5_i_zx", "theorem": "thm_4_5_i", "ring": ZX, "ideal": ["x"],
     "params": {"n": [0, 1, 2], "p": 2, "v": 1, "N": 8, "internal_bound": 10}},
    {"name": "thm_4_5_i_f2x4", "theorem": "thm_4_5_i", "ring": F2X4, "ideal": ["x"],
     "params": {"n": [1, 2], "N": 6, "internal_bound": 8}, "aq_finite": True},
    {"name": "lemma_2_3_f2x4", "theorem": "lemma_2_3", "ring": F2X4, "ideal": ["x"],
     "params": {"S": [1, 2], "N": 6}},
    {"name": "lemma_2_3_f2x3_s124", "theorem": "lemma_2_3", "ring": {"base": {"Fp": 2}, "vars": ["x"], "ideal": ["x^3"]},
     "ideal": ["x"], "params": {"S": [1, 2, 4], "N": 6}},
    {"name": "lemma_2_6_f2x4", "theorem": "lemma_2_6", "ring": F2X4, "ideal": ["x"],
     "params": {"p": 2, "r": 2, "N": 6, "sequences": 20, "seed": 0}},
    {"name": "sanity_constant_system", "theorem": "artin_rees", "ring": F2X, "ideal": ["x"],
     "module": {"generators": [0], "relations": [["x"]]},
     "params": {"n": 0, "N": 4, "internal_bound": 4}},
]

# the sanity instance is a constant nonzero system and must stay undecided
EXPECTED_EXIT = {cfg["name"]: (1 if cfg["name"].startswith("sanity") else 0) for cfg in BUILTIN}


def builtin(name: str) -> dict:
    for cfg in BUILTIN:
        if cfg["name"] == name:
            return copy.deepcopy(cfg)
    raise KeyError(name)


def list_instances() -> list[dict]:
    return [{"name": c["name"], "theorem": c["theorem"], "expected_exit": EXPECTED_EXIT[c["name"]]} for c in BUILTIN]
