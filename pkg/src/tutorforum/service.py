"""HTTP facade binding the passage index, the answer pipeline, and the forum.

The question POST returns before the AI answer exists: AI answering runs on a
bounded background worker pool consuming a queue that `post_question` feeds
(and that startup re-seeds from the replayed pending list, so answers owed
before a shutdown are still produced after a restart).
"""

from __future__ import annotations

import json
import logging
import os
import queue
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import uvicorn
from fastapi import Depends, FastAPI, Header, HTTPException

from . import __version__
from .forum import (
    ConflictError,
    Forum,
    ForumError,
    InvalidInputError,
    NotPermittedError,
    UnknownEntityError,
)
from .index import Index, load_index
from .ragcore import BACKEND_TOKEN_ENV, ExternalBackend, GenerationBackend, StubBackend

log = logging.getLogger("tutorforum.service")

TOKENS_FILE = "tokens.json"
EVENT_LOG_FILE = "events.log"
SNAPSHOT_FILE = "snapshot.json"

_CONFIG_INT_FIELDS = {"request_timeout_ms", "ai_answer_concurrency"}
_MAX_AI_ATTEMPTS = 3


class ConfigError(ValueError):
    """Service configuration is invalid or incomplete."""


@dataclass
class ServiceConfig:
    index_dir: Path
    data_dir: Path
    listen_address: str = "127.0.0.1:8080"
    backend: str = "stub"
    external_endpoint: str | None = None
    request_timeout_ms: int = 30000
    ai_answer_concurrency: int = 4

    def validate(self) -> None:
        if self.backend not in ("stub", "external"):
            raise ConfigError(f"backend must be 'stub' or 'external', got {self.backend!r}")
        if self.backend == "external":
            if not self.external_endpoint:
                raise ConfigError("backend=external requires external_endpoint")
            if not os.environ.get(BACKEND_TOKEN_ENV):
                raise ConfigError(f"backend=external requires the {BACKEND_TOKEN_ENV} environment variable")
        if self.ai_answer_concurrency < 1:
            raise ConfigError("ai_answer_concurrency must be >= 1")
        if self.request_timeout_ms < 1:
            raise ConfigError("request_timeout_ms must be >= 1")


def load_config(path: Path | str) -> ServiceConfig:
    """Parse the flat key=value config file."""
    path = Path(path)
    values: dict[str, Any] = {}
    known = {f for f in ServiceConfig.__dataclass_fields__}
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {line_no}: expected key = value")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in known:
            raise ConfigError(f"{path}: line {line_no}: unknown key {key!r}")
        if key in _CONFIG_INT_FIELDS:
            try:
                values[key] = int(raw)
            except ValueError:
                raise ConfigError(f"{path}: line {line_no}: {key} must be an integer") from None
        elif key in ("index_dir", "data_dir"):
            values[key] = Path(raw)
        else:
            values[key] = raw
    for required in ("index_dir", "data_dir"):
        if required not in values:
            raise ConfigError(f"{path}: missing required key {required!r}")
    config = ServiceConfig(**values)
    config.validate()
    return config


def _build_backend(config: ServiceConfig) -> GenerationBackend:
    if config.backend == "stub":
        return StubBackend()
    return ExternalBackend(
        endpoint=config.external_endpoint,
        token=os.environ.get(BACKEND_TOKEN_ENV),
        timeout_s=config.request_timeout_ms / 1000.0,
    )


class ServiceRuntime:
    """Everything the request handlers and the AI worker pool share."""

    def __init__(self, config: ServiceConfig):
        config.validate()
        self.config = config
        try:
            self.index: Index = load_index(config.index_dir)
        except Exception as exc:
            raise ConfigError(f"cannot load index from {config.index_dir}: {exc}") from exc
        self.backend = _build_backend(config)
        config.data_dir.mkdir(parents=True, exist_ok=True)
        self.forum = Forum(log_path=config.data_dir / EVENT_LOG_FILE)
        self.tokens = self._load_tokens(config.data_dir / TOKENS_FILE)
        self.ai_queue: queue.Queue[str] = queue.Queue()
        self._attempts: dict[str, int] = {}
        self._workers: list[threading.Thread] = []
        self._stop = threading.Event()
        for question_id in self.forum.pending_ai_questions():
            self.ai_queue.put(question_id)

    @staticmethod
    def _load_tokens(path: Path) -> dict[str, str]:
        if not path.exists():
            return {}
        try:
            mapping = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid token file: {exc}") from None
        return {str(token): str(user_id) for token, user_id in mapping.items()}

    def start(self) -> None:
        self._stop.clear()
        for n in range(self.config.ai_answer_concurrency):
            worker = threading.Thread(target=self._worker_loop, name=f"ai-worker-{n}", daemon=True)
            worker.start()
            self._workers.append(worker)

    def stop(self) -> None:
        self._stop.set()
        for worker in self._workers:
            worker.join(timeout=5.0)
        self._workers.clear()
        (self.config.data_dir / SNAPSHOT_FILE).write_text(
            json.dumps(self.forum.snapshot(), ensure_ascii=False, indent=2), encoding="utf-8"
        )
        self.forum.close()

    def enqueue_ai(self, question_id: str) -> None:
        self.ai_queue.put(question_id)

    def _worker_loop(self) -> None:
        while not self._stop.is_set():
            try:
                question_id = self.ai_queue.get(timeout=0.1)
            except queue.Empty:
                continue
            try:
                question = self.forum.get_question(question_id)
                if self.forum.ai_answer_for(question_id) is None:
                    body, citations, fallback = self.forum.run_ai_pipeline(question, self.index, self.backend)
                    self.forum.record_ai_answer(question_id, body, citations, fallback)
            except Exception:
                log.exception("AI answering failed for question %s", question_id)
                attempts = self._attempts.get(question_id, 0) + 1
                self._attempts[question_id] = attempts
                if attempts < _MAX_AI_ATTEMPTS:
                    self.ai_queue.put(question_id)
            finally:
                self.ai_queue.task_done()


def _domain(call, *args, **kwargs):
    try:
        return call(*args, **kwargs)
    except UnknownEntityError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from None
    except NotPermittedError as exc:
        raise HTTPException(status_code=403, detail=str(exc)) from None
    except ConflictError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from None
    except InvalidInputError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    except ForumError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


def build_app(config: ServiceConfig) -> FastAPI:
    """Construct the service; raises ConfigError for bad config or missing index."""
    runtime = ServiceRuntime(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        runtime.start()
        yield
        runtime.stop()

    app = FastAPI(title="tutorforum", version=__version__, lifespan=lifespan)
    app.state.runtime = runtime

    def current_user(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        user_id = runtime.tokens.get(authorization.removeprefix("Bearer ").strip())
        if user_id is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return user_id

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "version": __version__,
            "backend": config.backend,
            "passages": len(runtime.index),
        }

    @app.get("/me")
    def me(user_id: str = Depends(current_user)) -> dict:
        user = _domain(runtime.forum.get_user, user_id)
        return {
            "user_id": user.user_id,
            "display_name": user.display_name,
            "role": user.role.value,
            "cohort_id": user.cohort_id,
            "helpfulness_score": user.helpfulness_score,
            "badge": user.badge.value,
        }

    @app.post("/cohorts", status_code=201)
    def create_cohort(
        body: dict,
        user_id: str = Depends(current_user),
        idempotency_key: str | None = Header(default=None),
    ) -> dict:
        try:
            members = [
                (m["user_id"], m.get("display_name", m["user_id"]), m.get("role", "learner"))
                for m in body.get("members", [])
            ]
        except (KeyError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=f"bad member record: {exc}") from None
        try:
            cohort = _domain(runtime.forum.create_cohort, body.get("name", ""), members, key=idempotency_key)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return {"cohort_id": cohort.cohort_id, "name": cohort.name, "members": sorted(cohort.member_ids)}

    @app.post("/cohorts/{cohort_id}/questions", status_code=201)
    def post_question(
        cohort_id: str,
        body: dict,
        user_id: str = Depends(current_user),
        idempotency_key: str | None = Header(default=None),
    ) -> dict:
        question = _domain(
            runtime.forum.post_question,
            cohort_id,
            user_id,
            body.get("body", ""),
            tags=body.get("tags", ()),
            anonymous=bool(body.get("anonymous", False)),
            attachments=body.get("attachments", ()),
            key=idempotency_key,
        )
        runtime.enqueue_ai(question.question_id)
        return {
            "question_id": question.question_id,
            "detected_language": question.detected_language.value,
            "ai_pending": runtime.forum.ai_answer_for(question.question_id) is None,
        }

    @app.get("/cohorts/{cohort_id}/questions")
    def list_questions(cohort_id: str) -> dict:
        questions = _domain(runtime.forum.cohort_questions, cohort_id)
        forum = runtime.forum
        return {
            "questions": [
                {
                    **forum.question_public_view(q),
                    "answer_count": len(forum.answers_for(q.question_id)),
                    "ai_pending": forum.ai_answer_for(q.question_id) is None,
                }
                for q in questions
            ]
        }

    @app.get("/questions/{question_id}")
    def get_thread(question_id: str) -> dict:
        return _domain(runtime.forum.thread_view, question_id)

    @app.post("/questions/{question_id}/answers", status_code=201)
    def post_answer(
        question_id: str,
        body: dict,
        user_id: str = Depends(current_user),
        idempotency_key: str | None = Header(default=None),
    ) -> dict:
        answer = _domain(
            runtime.forum.post_human_answer, question_id, user_id, body.get("body", ""), key=idempotency_key
        )
        return runtime.forum.answer_public_view(answer)

    @app.post("/answers/{answer_id}/vote")
    def vote(
        answer_id: str,
        body: dict,
        user_id: str = Depends(current_user),
        idempotency_key: str | None = Header(default=None),
    ) -> dict:
        direction = body.get("direction", "")
        if direction not in ("up", "down"):
            raise HTTPException(status_code=422, detail="direction must be 'up' or 'down'")
        upvotes, downvotes = _domain(runtime.forum.vote, user_id, answer_id, direction, key=idempotency_key)
        return {"answer_id": answer_id, "upvotes": upvotes, "downvotes": downvotes}

    @app.post("/questions/{question_id}/accept")
    def accept(
        question_id: str,
        body: dict,
        user_id: str = Depends(current_user),
        idempotency_key: str | None = Header(default=None),
    ) -> dict:
        answer_id = body.get("answer_id", "")
        answer = _domain(runtime.forum.accept_answer, user_id, question_id, answer_id, key=idempotency_key)
        return {"question_id": question_id, "accepted_answer_id": answer.answer_id}

    @app.get("/cohorts/{cohort_id}/leaderboard")
    def leaderboard(cohort_id: str, n: int = 10) -> dict:
        users = _domain(runtime.forum.leaderboard, cohort_id, n)
        return {
            "entries": [
                {
                    "user_id": u.user_id,
                    "display_name": u.display_name,
                    "role": u.role.value,
                    "helpfulness_score": u.helpfulness_score,
                    "badge": u.badge.value,
                }
                for u in users
            ]
        }

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    app = build_app(config)
    host, _, port = config.listen_address.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080), log_level="info")
