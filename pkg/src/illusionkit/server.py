"""HTTP service for live 2AFC sessions.

Sessions are independent; within a session requests are serialized by a
per-session lock. Persistence is an append-only JSONL file per session
(header line + one trial/result pair per line), so a crashed session
replays to the identical state: the schedule is seed-deterministic and
the results are all on disk.

Trial payloads carry both stimuli as inline base64 PNGs under the
neutral names ``left_image`` / ``right_image``; nothing in the payload
reveals which side is the comparator.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import FitError, IllusionKitError, ProtocolError
from .psychophysics import (
    TrialResult,
    aggregate,
    default_comparator_specs,
    fit_psychometric,
    illusory_reduction,
    marker_rows,
    read_session_log,
    render_standard_strip,
    response_from_key,
    schedule_session,
    trial_to_dict,
    result_to_dict,
    SESSION_LOG_VERSION,
)
from .raster import encode_png_base64
from .stimuli import render_stimulus

DEFAULT_INTER_TRIAL_MS = 500
MIN_FITTABLE_TRIALS = 33  # three responses per standard level on average


@dataclass
class SessionRecord:
    session_id: str
    subject_id: str
    family: str
    seed: int
    schedule: list
    results: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def status(self) -> str:
        return "complete" if len(self.results) == len(self.schedule) else "active"

    @property
    def current_index(self) -> int:
        return len(self.results)


class CreateSessionRequest(BaseModel):
    subject_id: str
    family: str
    n_trials: int = 110
    seed: int | None = None


class ResponseRequest(BaseModel):
    trial_id: str
    key: str
    rt_ms: float = 0.0


class SessionStore:
    """In-memory registry backed by per-session JSONL logs."""

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, SessionRecord] = {}
        self._registry_lock = threading.Lock()

    def _log_path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.jsonl"

    def create(self, subject_id: str, family: str, n_trials: int, seed: int) -> SessionRecord:
        schedule = schedule_session(default_comparator_specs(family), n_trials, seed)
        session_id = uuid.uuid4().hex[:12]
        record = SessionRecord(session_id, subject_id, family, seed, schedule)
        header = {
            "type": "session", "version": SESSION_LOG_VERSION,
            "session_id": session_id, "subject_id": subject_id,
            "family": family, "seed": seed, "n_trials": n_trials,
        }
        with open(self._log_path(session_id), "w") as fh:
            fh.write(json.dumps(header) + "\n")
        with self._registry_lock:
            self._sessions[session_id] = record
        return record

    def get(self, session_id: str) -> SessionRecord:
        with self._registry_lock:
            record = self._sessions.get(session_id)
        if record is None:
            record = self._load(session_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return record

    def _load(self, session_id: str) -> SessionRecord | None:
        """Replay a session from its log (crash recovery)."""
        path = self._log_path(session_id)
        if not path.exists():
            return None
        header, pairs = read_session_log(path)
        schedule = schedule_session(
            default_comparator_specs(header["family"]), header["n_trials"], header["seed"]
        )
        record = SessionRecord(session_id, header["subject_id"], header["family"],
                               header["seed"], schedule,
                               results=[result for _, result in pairs])
        with self._registry_lock:
            self._sessions.setdefault(session_id, record)
            return self._sessions[session_id]

    def append_result(self, record: SessionRecord, trial, result: TrialResult) -> None:
        line = {"type": "trial", "version": SESSION_LOG_VERSION,
                "trial": trial_to_dict(trial), "result": result_to_dict(result)}
        with open(self._log_path(record.session_id), "a") as fh:
            fh.write(json.dumps(line) + "\n")
        record.results.append(result)


def create_app(data_dir, inter_trial_ms: int = DEFAULT_INTER_TRIAL_MS,
               ui_dir=None) -> FastAPI:
    app = FastAPI(title="illusionkit 2AFC server")
    store = SessionStore(data_dir)
    app.state.store = store

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        seed = req.seed if req.seed is not None else int.from_bytes(
            uuid.uuid4().bytes[:6], "big")
        try:
            record = store.create(req.subject_id, req.family, req.n_trials, seed)
        except ProtocolError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except IllusionKitError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"session_id": record.session_id, "n_trials": len(record.schedule),
                "family": record.family, "seed": record.seed}

    @app.get("/sessions/{session_id}/trial")
    def next_trial(session_id: str):
        record = store.get(session_id)
        with record.lock:
            if record.status == "complete":
                return {"done": True, "trial_index": len(record.schedule),
                        "n_trials": len(record.schedule)}
            trial = record.schedule[record.current_index]
            comparator_img, _ = render_stimulus(trial.comparator_spec)
            standard_img = render_standard_strip(trial.standard)
            if trial.comparator_side == "left":
                left, right = comparator_img, standard_img
            else:
                left, right = standard_img, comparator_img
            y0, y1 = marker_rows(trial.standard)
            height, width = comparator_img.shape
            return {
                "done": False,
                "trial_id": trial.trial_id,
                "trial_index": record.current_index,
                "n_trials": len(record.schedule),
                "left_image": encode_png_base64(left),
                "right_image": encode_png_base64(right),
                "marker": {"rows": [y0, y1], "cross": [width // 2, height // 2]},
                "fixation_ms": trial.fixation_ms,
                "exposure_ms": trial.exposure_ms,
                "inter_trial_ms": inter_trial_ms,
            }

    @app.post("/sessions/{session_id}/responses")
    def post_response(session_id: str, req: ResponseRequest):
        record = store.get(session_id)
        with record.lock:
            if record.status == "complete":
                raise HTTPException(status_code=409, detail="session already complete")
            trial = record.schedule[record.current_index]
            if req.trial_id != trial.trial_id:
                answered = {r.trial_id for r in record.results}
                if req.trial_id in answered:
                    raise HTTPException(
                        status_code=409,
                        detail=f"trial {req.trial_id} already answered")
                raise HTTPException(
                    status_code=409,
                    detail=f"expected response for trial {trial.trial_id}, "
                           f"got {req.trial_id}")
            try:
                response = response_from_key(req.key)
            except IllusionKitError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            result = TrialResult(trial.trial_id, response, float(req.rt_ms), trial.d)
            store.append_result(record, trial, result)
            return {"accepted": True, "trial_index": record.current_index,
                    "completed": record.status == "complete"}

    @app.get("/sessions/{session_id}/results")
    def session_results(session_id: str):
        record = store.get(session_id)
        with record.lock:
            if not record.results:
                raise HTTPException(status_code=409, detail="no trials answered yet")
            if record.status != "complete" and len(record.results) < MIN_FITTABLE_TRIALS:
                raise HTTPException(
                    status_code=409,
                    detail=f"only {len(record.results)} trials answered; need "
                           f"{MIN_FITTABLE_TRIALS} for a partial fit")
            points = aggregate(record.results)
            try:
                fit = fit_psychometric(points)
            except FitError as exc:
                raise HTTPException(status_code=409, detail=f"unfittable: {exc}")
            payload = {
                "session_id": record.session_id,
                "subject_id": record.subject_id,
                "family": record.family,
                "status": record.status,
                "partial": record.status != "complete",
                "n_trials": len(record.results),
                "points": [{"d": p.d, "n_trials": p.n_trials,
                            "n_standard_brighter": p.n_standard_brighter,
                            "proportion": p.proportion} for p in points],
                "fit": {
                    "family": fit.family, "pse": fit.pse,
                    "slope_sigma": fit.slope_sigma,
                    "log_likelihood": fit.log_likelihood,
                    "n_trials": fit.n_trials, "warning": fit.warning,
                },
            }
            comparator_intensity = record.schedule[0].comparator_intensity
            try:
                reduction = illusory_reduction(fit, comparator_intensity)
                payload["reduction"] = {
                    "comparator_intensity": reduction.comparator_intensity,
                    "reduction": reduction.reduction,
                    "perceived_intensity": reduction.perceived_intensity,
                }
            except FitError as exc:
                payload["reduction"] = None
                payload["reduction_error"] = str(exc)
            return payload

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
