"""HTTP facade over the engine, plus a file-backed map store.

Endpoints add no semantics: every computational response is exactly what
the corresponding library call returns, serialized.  Stored map documents
are kept as canonical bytes on disk (one file per map plus an index);
writes are atomic whole-file replaces serialized per map id, so concurrent
readers always observe a complete old or new document.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from pathlib import Path
from typing import Any, Optional

import numpy as np
from fastapi import Body, FastAPI, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import analysis, dynamics, fixtures, formats, scenario as scen
from .mapcore import CognitiveMap, InvalidMapError, MapError
from .scenario import ScenarioError, UnreachableTargetError


class NotFound(Exception):
    def __init__(self, map_id: str):
        self.map_id = map_id


class MapStore:
    """Directory of canonical map documents with a revision index."""

    def __init__(self, directory: str | Path):
        self.root = Path(directory)
        self.maps_dir = self.root / "maps"
        self.maps_dir.mkdir(parents=True, exist_ok=True)
        self.index_path = self.root / "index.json"
        self._index_lock = threading.Lock()
        self._map_locks: dict[str, threading.Lock] = {}
        if not self.index_path.exists():
            self._write_index({})

    def _lock_for(self, map_id: str) -> threading.Lock:
        # dict.setdefault is atomic under the GIL: one lock per id, always
        return self._map_locks.setdefault(map_id, threading.Lock())

    def _read_index(self) -> dict[str, int]:
        return json.loads(self.index_path.read_text())

    def _write_index(self, index: dict[str, int]) -> None:
        formats.write_atomic(str(self.index_path), (json.dumps(index, indent=2) + "\n").encode())

    def _path(self, map_id: str) -> Path:
        return self.maps_dir / f"{map_id}.json"

    def create(self, m: CognitiveMap) -> tuple[str, int]:
        map_id = secrets.token_hex(6)
        with self._lock_for(map_id):
            formats.write_atomic(str(self._path(map_id)), formats.save_map(m))
            with self._index_lock:
                index = self._read_index()
                index[map_id] = 1
                self._write_index(index)
        return map_id, 1

    def replace(self, map_id: str, m: CognitiveMap) -> int:
        with self._lock_for(map_id):
            with self._index_lock:
                index = self._read_index()
                if map_id not in index:
                    raise NotFound(map_id)
            formats.write_atomic(str(self._path(map_id)), formats.save_map(m))
            with self._index_lock:
                index = self._read_index()
                index[map_id] = index.get(map_id, 0) + 1
                self._write_index(index)
                return index[map_id]

    def delete(self, map_id: str) -> None:
        with self._lock_for(map_id):
            with self._index_lock:
                index = self._read_index()
                index.pop(map_id, None)
                self._write_index(index)
            try:
                os.unlink(self._path(map_id))
            except FileNotFoundError:
                pass

    def revision(self, map_id: str) -> int:
        with self._index_lock:
            index = self._read_index()
        if map_id not in index:
            raise NotFound(map_id)
        return index[map_id]

    def document_bytes(self, map_id: str) -> bytes:
        self.revision(map_id)  # existence check
        try:
            return self._path(map_id).read_bytes()
        except FileNotFoundError:
            raise NotFound(map_id) from None

    def load(self, map_id: str) -> CognitiveMap:
        return formats.load_map(self.document_bytes(map_id))

    def list_maps(self) -> list[dict[str, Any]]:
        with self._index_lock:
            index = self._read_index()
        out = []
        for map_id, revision in sorted(index.items()):
            entry: dict[str, Any] = {"id": map_id, "revision": revision}
            try:
                m = self.load(map_id)
                entry["name"] = m.metadata.name
                entry["factors"] = m.n
                entry["edges"] = len(m.edges)
            except (NotFound, formats.DocumentError, InvalidMapError):
                entry["name"] = None
            out.append(entry)
        return out


class SimulateBody(BaseModel):
    schedule: dict[str, dict[str, float]] = Field(default_factory=dict)
    horizon: int
    clamp: bool = False
    y_base: Optional[dict[str, float]] = None


class AnalyzeBody(BaseModel):
    tol: float = 1e-6


class StabilizeBody(BaseModel):
    tol: float = 1e-6
    locked: list[tuple[str, str]] = Field(default_factory=list)


class ScenarioBody(BaseModel):
    name: str = "scenario"
    controls: list[str]
    schedule: dict[str, dict[str, float]] = Field(default_factory=dict)
    horizon: int
    clamp: bool = False
    y_base: Optional[dict[str, float]] = None


class TargetBody(BaseModel):
    factor: str
    desired_delta: float
    horizon: int


class CompareBody(BaseModel):
    scenarios: list[ScenarioBody]
    target: TargetBody
    y_base: Optional[dict[str, float]] = None


class InvertBody(BaseModel):
    controls: list[str]
    target: TargetBody
    ridge: float = 0.0
    y_base: Optional[dict[str, float]] = None


def _error(status: int, code: str, message: str, violations: list | None = None) -> JSONResponse:
    body: dict[str, Any] = {"error": {"code": code, "message": message}}
    if violations:
        body["error"]["violations"] = violations
    return JSONResponse(body, status_code=status)


def _y_base(m: CognitiveMap, named: Optional[dict[str, float]]):
    if named is None:
        return np.zeros(m.n)
    return dynamics.vector_from_named(m, named)


def _schedule(m: CognitiveMap, raw: dict[str, dict[str, float]]) -> dynamics.ImpulseSchedule:
    try:
        named = {int(t): vals for t, vals in raw.items()}
    except ValueError:
        raise ValueError("schedule keys must be integer step indices") from None
    return dynamics.ImpulseSchedule.from_named(m, named)


def create_app(data_dir: str | Path, cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="sedmap service", version="1")
    store = MapStore(data_dir)
    app.state.store = store

    origins = list(cors_origins or [])
    env_origins = os.environ.get("SEDMAP_CORS", "")
    origins += [o.strip() for o in env_origins.split(",") if o.strip()]
    if origins:
        app.add_middleware(
            CORSMiddleware, allow_origins=origins, allow_methods=["*"], allow_headers=["*"]
        )

    @app.exception_handler(NotFound)
    async def _not_found(request, exc: NotFound):
        return _error(404, "not-found", f"no map with id {exc.map_id!r}")

    @app.exception_handler(InvalidMapError)
    async def _invalid_map(request, exc: InvalidMapError):
        return _error(
            400, "invalid-map", str(exc),
            [{"code": v.code, "subject": v.subject, "message": v.message} for v in exc.report.violations],
        )

    @app.exception_handler(formats.DocumentError)
    async def _bad_document(request, exc: formats.DocumentError):
        return _error(400, "bad-document", str(exc))

    @app.exception_handler(UnreachableTargetError)
    async def _unreachable(request, exc):
        return _error(409, "unreachable-target", str(exc))

    @app.exception_handler(ScenarioError)
    async def _bad_scenario(request, exc):
        return _error(400, "bad-scenario", str(exc))

    @app.exception_handler(MapError)
    async def _map_error(request, exc):
        return _error(400, "bad-request", str(exc))

    @app.exception_handler(ValueError)
    async def _value_error(request, exc):
        return _error(400, "bad-request", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _body_error(request, exc: RequestValidationError):
        return _error(400, "bad-body", str(exc))

    @app.post("/v1/maps", status_code=201)
    def create_map(payload: dict = Body(...)):
        m = formats.map_from_document(payload)
        map_id, revision = store.create(m)
        return {"id": map_id, "revision": revision}

    @app.get("/v1/maps")
    def list_maps():
        return {"maps": store.list_maps()}

    @app.get("/v1/maps/{map_id}")
    def get_map(map_id: str):
        data = store.document_bytes(map_id)
        return Response(
            content=data,
            media_type="application/json",
            headers={"X-Map-Revision": str(store.revision(map_id))},
        )

    @app.put("/v1/maps/{map_id}")
    def put_map(map_id: str, payload: dict = Body(...)):
        m = formats.map_from_document(payload)
        revision = store.replace(map_id, m)
        return {"id": map_id, "revision": revision}

    @app.delete("/v1/maps/{map_id}", status_code=204)
    def delete_map(map_id: str):
        store.delete(map_id)
        return Response(status_code=204)

    @app.post("/v1/maps/{map_id}/simulate")
    def simulate_map(map_id: str, body: SimulateBody):
        m = store.load(map_id)
        traj = dynamics.simulate(
            m, _y_base(m, body.y_base), _schedule(m, body.schedule), body.horizon, body.clamp
        )
        return formats.trajectory_document(traj)

    @app.post("/v1/maps/{map_id}/analyze")
    def analyze_map_endpoint(map_id: str, body: AnalyzeBody):
        m = store.load(map_id)
        closure, infl, stab = analysis.analyze_map(m, body.tol)
        return formats.analysis_document(m, closure, infl, stab)

    @app.post("/v1/maps/{map_id}/stabilize")
    def stabilize_map(map_id: str, body: StabilizeBody):
        m = store.load(map_id)
        plan = analysis.stabilize_search(m, frozenset(tuple(e) for e in body.locked), body.tol)
        return formats.plan_document(plan)

    def _scenario(m: CognitiveMap, body: ScenarioBody) -> scen.Scenario:
        return scen.Scenario(
            body.name, tuple(body.controls), _schedule(m, body.schedule), body.horizon, body.clamp
        )

    @app.post("/v1/maps/{map_id}/scenarios/run")
    def run_scenario_endpoint(map_id: str, body: ScenarioBody):
        m = store.load(map_id)
        result = scen.run_scenario(m, _y_base(m, body.y_base), _scenario(m, body))
        return formats.scenario_result_document(result)

    @app.post("/v1/maps/{map_id}/scenarios/compare")
    def compare_endpoint(map_id: str, body: CompareBody):
        m = store.load(map_id)
        target = scen.TargetSpec(body.target.factor, body.target.desired_delta, body.target.horizon)
        ranked = scen.compare_scenarios(
            m, _y_base(m, body.y_base), [_scenario(m, s) for s in body.scenarios], target
        )
        return formats.ranking_document(ranked)

    @app.post("/v1/maps/{map_id}/scenarios/invert")
    def invert_endpoint(map_id: str, body: InvertBody):
        m = store.load(map_id)
        target = scen.TargetSpec(body.target.factor, body.target.desired_delta, body.target.horizon)
        y_base = _y_base(m, body.y_base)
        impulse = scen.invert_scenario(m, y_base, tuple(body.controls), target, body.ridge)
        check = scen.run_scenario(
            m, y_base,
            scen.Scenario("inverse", tuple(body.controls), dynamics.ImpulseSchedule({0: impulse}), target.horizon),
        )
        residual = (check.target_delta - target.desired_delta) ** 2 + body.ridge * float(impulse @ impulse)
        return {
            "format": formats.FORMAT_VERSION,
            "kind": "inverse-impulse",
            "impulse": {fid: float(impulse[m.index[fid]]) for fid in body.controls},
            "achieved_delta": check.target_delta,
            "residual": residual,
        }

    @app.get("/v1/registry")
    def get_registry():
        custom = store.root / "registry.json"
        if custom.exists():
            return Response(content=custom.read_bytes(), media_type="application/json")
        return Response(
            content=formats.save_registry(fixtures.default_knowledge_base()),
            media_type="application/json",
        )

    return app
