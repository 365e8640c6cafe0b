"""HTTP API around scenarios, what-if simulation and genetic runs.

Runs execute on a small worker pool (one at a time by default); the run
record lives in memory while running, is persisted at every status change,
and survives restarts.  Progress is observable by polling the run record or
by following the line-delimited JSON event stream.
"""

from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import store as storage
from .budget import (
    MultiYearScenario,
    investment_from_projects,
    scenario_from_dict,
    simulate_multi_year,
    tax_levels_from_rates,
)
from .ga import GenerationStats, InfeasibleInitError
from .operational import expand_optional_flags
from .pipeline import execute_run, load_run_config

logger = logging.getLogger(__name__)

PRUDENTIAL_LIMIT_YEARS = 15.0
DEMO_SCENARIO_IDS = ("demo-operational", "demo-whatif")


class ScenarioCreate(BaseModel):
    name: str = ""
    scenario: dict


class SimulateRequest(BaseModel):
    scenario: Optional[dict] = None
    scenario_id: Optional[str] = None
    investments: Optional[list[float]] = None
    project_flags: Optional[list[bool]] = None
    taxes: Optional[list[float]] = None
    tax_rates: Optional[list[float]] = None


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


class RunHandle:
    """In-memory state of one run; the lock guards the record, the condition
    signals trace growth and completion to event streams."""

    def __init__(self, record: dict):
        self.record = record
        self.lock = threading.Lock()
        self.condition = threading.Condition(self.lock)
        self.cancel_event = threading.Event()
        self.future = None

    def snapshot(self, with_results: bool = False) -> dict:
        with self.lock:
            out = {k: v for k, v in self.record.items() if with_results or k != "results"}
            out["trace"] = list(self.record.get("trace", []))
            if not with_results:
                results = self.record.get("results")
                out["result_count"] = len(results) if results else 0
            return json.loads(json.dumps(out))

    @property
    def finished(self) -> bool:
        with self.lock:
            return self.record["status"] in ("done", "cancelled", "failed")


class RunManager:
    """Owns run execution, status transitions and persistence."""

    def __init__(self, run_store: storage.JsonDirStore, scenario_store: storage.JsonDirStore, workers: int = 1):
        self.runs = run_store
        self.scenarios = scenario_store
        self.executor = ThreadPoolExecutor(max_workers=workers)
        self.handles: dict[str, RunHandle] = {}
        self._fail_interrupted()

    def _fail_interrupted(self) -> None:
        for record in self.runs.list():
            if record.get("status") in ("pending", "running"):
                record["status"] = "failed"
                record["error"] = "interrupted by service restart"
                record["finished_at"] = storage.utc_now()
                self.runs.save(record["run_id"], record)

    def _resolve_scenario(self, scenario_id: str) -> MultiYearScenario:
        record = self.scenarios.load(scenario_id)
        if record is None:
            raise _error(404, "unknown_scenario", f"no scenario {scenario_id!r}")
        return scenario_from_dict(record["scenario"])

    def create(self, config: dict) -> str:
        try:
            bundle = load_run_config(config, scenario_resolver=self._resolve_scenario)
        except HTTPException:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise _error(422, "invalid_config", str(exc))
        run_id = storage.new_id()
        record = {
            "run_id": run_id,
            "status": "pending",
            "created_at": storage.utc_now(),
            "started_at": None,
            "finished_at": None,
            "config": config,
            "frame": bundle.frame_document(),
            "trace": [],
            "results": None,
            "error": None,
        }
        handle = RunHandle(record)
        self.handles[run_id] = handle
        self.runs.save(run_id, record)
        handle.future = self.executor.submit(self._execute, run_id, bundle)
        return run_id

    def _set_status(self, handle: RunHandle, status: str, **fields) -> None:
        with handle.condition:
            old = handle.record["status"]
            if not storage.can_transition(old, status):
                logger.warning("ignoring status transition %s -> %s", old, status)
                return
            handle.record["status"] = status
            handle.record.update(fields)
            handle.condition.notify_all()
        self.runs.save(handle.record["run_id"], handle.record)

    def _execute(self, run_id: str, bundle) -> None:
        handle = self.handles[run_id]
        if handle.cancel_event.is_set():
            self._set_status(handle, "cancelled", finished_at=storage.utc_now())
            return
        self._set_status(handle, "running", started_at=storage.utc_now())

        def progress(stats: GenerationStats) -> bool:
            with handle.condition:
                handle.record["trace"].append(
                    {
                        "generation": stats.generation,
                        "best": stats.best,
                        "mean": stats.mean,
                        "feasible_count": stats.feasible_count,
                    }
                )
                handle.condition.notify_all()
            return handle.cancel_event.is_set()

        try:
            result, entries = execute_run(bundle, progress)
        except InfeasibleInitError as exc:
            self._set_status(handle, "failed", error=str(exc), finished_at=storage.utc_now())
            return
        except Exception as exc:  # noqa: BLE001 - a run must never kill the worker
            logger.exception("run %s crashed", run_id)
            self._set_status(handle, "failed", error=str(exc), finished_at=storage.utc_now())
            return
        status = "cancelled" if result.cancelled else "done"
        with handle.lock:
            handle.record["results"] = entries
        self._set_status(handle, status, finished_at=storage.utc_now())

    def cancel(self, run_id: str) -> dict:
        handle = self.handles.get(run_id)
        if handle is None:
            record = self.runs.load(run_id)
            if record is None:
                raise _error(404, "unknown_run", f"no run {run_id!r}")
            raise _error(409, "already_finished", f"run is {record['status']}")
        if handle.finished:
            raise _error(409, "already_finished", f"run is {handle.record['status']}")
        handle.cancel_event.set()
        if handle.future is not None and handle.future.cancel():
            self._set_status(handle, "cancelled", finished_at=storage.utc_now())
        return {"run_id": run_id, "status": handle.record["status"]}

    def snapshot(self, run_id: str, with_results: bool = False) -> dict:
        handle = self.handles.get(run_id)
        if handle is not None:
            return handle.snapshot(with_results)
        record = self.runs.load(run_id)
        if record is None:
            raise _error(404, "unknown_run", f"no run {run_id!r}")
        if not with_results:
            results = record.pop("results", None)
            record["result_count"] = len(results) if results else 0
        return record

    def events(self, run_id: str) -> Iterator[str]:
        handle = self.handles.get(run_id)
        if handle is None:
            record = self.runs.load(run_id)
            if record is None:
                yield json.dumps({"event": "end", "status": "unknown"}) + "\n"
                return
            for entry in record.get("trace", []):
                yield json.dumps(entry) + "\n"
            yield json.dumps({"event": "end", "status": record["status"]}) + "\n"
            return

        sent = 0
        while True:
            with handle.condition:
                while len(handle.record["trace"]) <= sent and not self._finished_locked(handle):
                    handle.condition.wait(timeout=0.25)
                entries = handle.record["trace"][sent:]
                finished = self._finished_locked(handle)
                status = handle.record["status"]
            for entry in entries:
                yield json.dumps(entry) + "\n"
            sent += len(entries)
            if finished and sent >= len(handle.record["trace"]):
                yield json.dumps({"event": "end", "status": status}) + "\n"
                return

    @staticmethod
    def _finished_locked(handle: RunHandle) -> bool:
        return handle.record["status"] in ("done", "cancelled", "failed")


def _load_packaged_json(name: str) -> dict:
    return json.loads(resources.files("budgetbox.data").joinpath(name).read_text())


def seed_demo_scenarios(scenario_store: storage.JsonDirStore) -> None:
    """Install the bundled demo scenarios under fixed ids (idempotent)."""
    demo_operational = _load_packaged_json("demo_scenario.json")
    demo_whatif = _load_packaged_json("demo_run_config.json")["scenario"]
    for scenario_id, payload in (
        ("demo-operational", demo_operational),
        ("demo-whatif", demo_whatif),
    ):
        if scenario_store.load(scenario_id) is None:
            scenario_store.save(
                scenario_id,
                {
                    "scenario_id": scenario_id,
                    "name": payload.get("name", scenario_id),
                    "scenario": payload,
                    "created_at": storage.utc_now(),
                },
            )


def create_app(
    data_dir: Path | str,
    ui_dir: Optional[Path | str] = None,
    workers: int = 1,
    seed_demo: bool = True,
) -> FastAPI:
    data_dir = Path(data_dir)
    scenario_store = storage.JsonDirStore(data_dir / "scenarios")
    run_store = storage.JsonDirStore(data_dir / "runs")
    if seed_demo:
        seed_demo_scenarios(scenario_store)
    manager = RunManager(run_store, scenario_store, workers=workers)

    app = FastAPI(title="budgetbox", version="0.1.0")
    app.state.manager = manager
    app.state.scenario_store = scenario_store

    @app.exception_handler(HTTPException)
    async def http_error(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "validation_error", "message": str(exc.errors())},
        )

    @app.post("/api/scenarios", status_code=201)
    def create_scenario(body: ScenarioCreate):
        try:
            scenario = scenario_from_dict(body.scenario)
        except Exception as exc:  # jsonschema or invariant failure
            raise _error(422, "invalid_scenario", str(exc))
        scenario_id = storage.new_id()
        record = {
            "scenario_id": scenario_id,
            "name": body.name or scenario.name or scenario_id,
            "scenario": body.scenario,
            "created_at": storage.utc_now(),
        }
        scenario_store.save(scenario_id, record)
        return record

    @app.get("/api/scenarios")
    def list_scenarios():
        out = []
        for record in scenario_store.list():
            out.append(
                {
                    "scenario_id": record["scenario_id"],
                    "name": record.get("name", ""),
                    "years": record["scenario"].get("years"),
                    "tax_mode": record["scenario"].get("tax_mode", "levels"),
                    "created_at": record.get("created_at"),
                }
            )
        return out

    @app.get("/api/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str):
        record = scenario_store.load(scenario_id)
        if record is None:
            raise _error(404, "unknown_scenario", f"no scenario {scenario_id!r}")
        return record

    def _scenario_from_request(body: SimulateRequest) -> MultiYearScenario:
        if body.scenario is not None:
            try:
                return scenario_from_dict(body.scenario)
            except Exception as exc:
                raise _error(422, "invalid_scenario", str(exc))
        if body.scenario_id is not None:
            record = scenario_store.load(body.scenario_id)
            if record is None:
                raise _error(404, "unknown_scenario", f"no scenario {body.scenario_id!r}")
            return scenario_from_dict(record["scenario"])
        raise _error(422, "invalid_request", "provide 'scenario' or 'scenario_id'")

    @app.post("/api/simulate")
    def simulate(body: SimulateRequest):
        scenario = _scenario_from_request(body)
        catalog = scenario.projects
        if body.investments is not None:
            investments = body.investments
        elif body.project_flags is not None:
            flags = body.project_flags
            if len(flags) == len(catalog.projects):
                active = flags
            elif len(flags) == len(catalog.optional_projects()):
                active = expand_optional_flags(catalog, flags)
            else:
                raise _error(
                    422,
                    "invalid_request",
                    f"project_flags must cover all {len(catalog.projects)} projects "
                    f"or the {len(catalog.optional_projects())} optional ones",
                )
            investments = investment_from_projects(catalog, active)
        else:
            raise _error(422, "invalid_request", "provide 'investments' or 'project_flags'")

        if body.taxes is not None:
            taxes = body.taxes
        elif body.tax_rates is not None:
            taxes = tax_levels_from_rates(scenario.base_tax, body.tax_rates)
        else:
            raise _error(422, "invalid_request", "provide 'taxes' or 'tax_rates'")

        try:
            solution = simulate_multi_year(scenario, investments, taxes)
        except ValueError as exc:
            raise _error(422, "invalid_request", str(exc))
        payload = solution.to_dict()
        payload["prudential_limit_years"] = PRUDENTIAL_LIMIT_YEARS
        return payload

    @app.post("/api/runs", status_code=202)
    def create_run(config: dict):
        run_id = manager.create(config)
        return {"run_id": run_id, "status": "pending"}

    @app.get("/api/runs")
    def list_runs():
        seen = set()
        out = []
        for run_id, handle in list(manager.handles.items()):
            snap = handle.snapshot()
            snap.pop("trace", None)
            snap.pop("config", None)
            out.append(snap)
            seen.add(run_id)
        for record in manager.runs.list():
            if record["run_id"] not in seen:
                results = record.pop("results", None)
                record["result_count"] = len(results) if results else 0
                record.pop("trace", None)
                record.pop("config", None)
                out.append(record)
        out.sort(key=lambda r: r.get("created_at") or "", reverse=True)
        return out

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        return manager.snapshot(run_id)

    @app.get("/api/runs/{run_id}/results")
    def get_results(run_id: str):
        snap = manager.snapshot(run_id, with_results=True)
        if snap["status"] not in ("done", "cancelled") or snap.get("results") is None:
            raise _error(409, "not_finished", f"run is {snap['status']}")
        return {"run_id": run_id, "status": snap["status"], "results": snap["results"]}

    @app.post("/api/runs/{run_id}/cancel")
    def cancel_run(run_id: str):
        return manager.cancel(run_id)

    @app.get("/api/runs/{run_id}/events")
    def run_events(run_id: str):
        manager.snapshot(run_id)  # 404 for unknown runs before streaming starts
        return StreamingResponse(manager.events(run_id), media_type="application/x-ndjson")

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
