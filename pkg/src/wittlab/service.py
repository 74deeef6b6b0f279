"""Optional HTTP wrapper around the CLI operations (needs the service extra).

Run with ``uvicorn wittlab.service:app``.  The CLI never imports this module.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .cli import hh_table
from .hochschild import ComplexError
from .pro_systems.instances import SchemaError, builtin, list_instances, run_instance
from .ring_core import PolyQuotRing
from .witt import WittError, WittParseError, WittSemanticError, evaluate_expression, format_witt

app = FastAPI(title="wittlab", version=__version__)


class WittRequest(BaseModel):
    expr: str
    ring: dict
    S: list[int] = Field(default_factory=lambda: [1])


class HHRequest(BaseModel):
    ring: dict
    degrees: list[int] = Field(default_factory=lambda: [0, 1, 2])
    modulus: int | None = None
    internal_bound: int | None = None


class CheckRequest(BaseModel):
    name: str | None = None
    instance: dict | None = None
    stage_bound: int | None = None


@app.get("/instances")
def instances():
    return list_instances()


@app.post("/witt")
def witt(req: WittRequest):
    try:
        w = evaluate_expression(req.expr, PolyQuotRing.from_json(req.ring), req.S)
    except WittParseError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except (WittSemanticError, WittError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return {"vector": format_witt(w), "S": list(w.trunc)}


@app.post("/hh")
def hh(req: HHRequest):
    try:
        ring = PolyQuotRing.from_json(req.ring)
        return hh_table(ring, req.degrees, None, req.modulus, req.internal_bound)
    except (ComplexError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/check")
def check(req: CheckRequest):
    if (req.name is None) == (req.instance is None):
        raise HTTPException(status_code=400, detail="give exactly one of name and instance")
    try:
        cfg = builtin(req.name) if req.name else req.instance
    except KeyError:
        raise HTTPException(status_code=404, detail=f"no built-in instance {req.name!r}")
    try:
        return run_instance(cfg, stage_bound=req.stage_bound)
    except SchemaError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except Exception as exc:
        raise HTTPException(status_code=500, detail=f"{type(exc).__name__}: {exc}")
