"""HTTP service exposing verification jobs, reports, overrides, and reruns."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Any

from fastapi import FastAPI, HTTPException, Request
from pydantic import BaseModel

from .config import AppConfig
from .models import NewsArticle, VerdictLabel
from .pipeline import reaggregate_with_overrides, rerun_claim, run_pipeline
from .retrieval import RetrievalError
from .store import (
    JobNotFoundError,
    JobState,
    JobStore,
    LabelOverride,
    new_job_id,
)

logger = logging.getLogger(__name__)

MAX_PAYLOAD_BYTES = 1_000_000

_STAGE_TO_STATE = {
    "extracting": JobState.EXTRACTING,
    "searching": JobState.SEARCHING,
    "verifying": JobState.VERIFYING,
    "aggregating": JobState.AGGREGATING,
}


class ArticleIn(BaseModel):
    body: str
    title: str = ""
    id: str | None = None
    url: str | None = None
    published_at: str | None = None


class OverrideIn(BaseModel):
    claim_id: str
    result_id: str
    new_label: str
    author: str = "reviewer"


class VerificationService:
    """Owns the job store, the pipeline dependencies, and the worker pool."""

    def __init__(self, config: AppConfig, mode: str | None = None, synchronous: bool = False):
        self.config = config
        self.store = JobStore(config.data_dir)
        self.gateway = config.build_gateway()
        self.backends = config.build_backends()
        self.registry = config.build_registry()
        self.pipeline_config = config.build_pipeline_config(mode)
        self.synchronous = synchronous
        self._pool = None if synchronous else ThreadPoolExecutor(max_workers=config.workers)

    def submit(self, payload: ArticleIn) -> str:
        article = NewsArticle(
            id=payload.id or new_job_id(),
            title=payload.title,
            body=payload.body,
            url=payload.url,
            published_at=(
                datetime.fromisoformat(payload.published_at.replace("Z", "+00:00"))
                if payload.published_at
                else None
            ),
        )
        job = self.store.create()
        if self.synchronous:
            self._run_job(job.job_id, article)
        else:
            self._pool.submit(self._run_job, job.job_id, article)
        return job.job_id

    def _run_job(self, job_id: str, article: NewsArticle) -> None:
        def on_state(stage: str) -> None:
            self.store.advance(job_id, _STAGE_TO_STATE[stage])

        try:
            report = run_pipeline(
                article,
                self.gateway,
                self.backends,
                self.registry,
                self.pipeline_config,
                on_state=on_state,
            )
            self.store.advance(job_id, JobState.DONE, report=report)
        except Exception as exc:  # failed is reachable from any non-done state
            logger.exception("job %s failed", job_id)
            self.store.advance(job_id, JobState.FAILED, error=str(exc))

    def apply_override(self, job_id: str, payload: OverrideIn) -> dict[str, Any]:
        job = self.store.get(job_id)
        if job.state is not JobState.DONE:
            raise JobNotDoneError(job.state.value)
        report = job.report
        if not any(
            item.claim_id == payload.claim_id and item.result.id == payload.result_id
            for item in report.evidence
        ):
            raise JobNotFoundError(f"evidence {payload.claim_id}/{payload.result_id}")
        override = LabelOverride(
            job_id=job_id,
            claim_id=payload.claim_id,
            result_id=payload.result_id,
            new_label=VerdictLabel.parse(payload.new_label),
            author=payload.author,
            at=datetime.now(timezone.utc),
        )
        overrides = {
            (o.claim_id, o.result_id): o.new_label for o in job.overrides + (override,)
        }
        updated = reaggregate_with_overrides(
            report, overrides, self.registry, self.pipeline_config
        )
        self.store.record_override(override, updated)
        claim_verdict = next(
            v for v in updated.claim_verdicts if v.claim_id == payload.claim_id
        )
        return {
            "claim_verdict": claim_verdict.to_dict(),
            "article_verdict": updated.article_verdict.value,
            "article_probability": updated.article_probability,
            "report": updated.to_dict(),
        }

    def rerun(self, job_id: str, claim_id: str) -> dict[str, Any]:
        job = self.store.get(job_id)
        if job.state is not JobState.DONE:
            raise JobNotDoneError(job.state.value)
        try:
            updated, archived = rerun_claim(
                job.report, claim_id, self.gateway, self.backends, self.registry,
                self.pipeline_config,
            )
        except KeyError:
            raise JobNotFoundError(f"claim {claim_id}") from None
        self.store.replace_report(job_id, updated, archived)
        return {"report": updated.to_dict()}


class JobNotDoneError(Exception):
    pass


def create_app(config: AppConfig, mode: str | None = None, synchronous: bool = False) -> FastAPI:
    service = VerificationService(config, mode=mode, synchronous=synchronous)
    app = FastAPI(title="claimcheck", version="0.1.0")
    app.state.service = service

    @app.post("/v1/verify")
    async def submit(payload: ArticleIn, request: Request) -> dict[str, str]:
        raw = await request.body()
        if len(raw) > MAX_PAYLOAD_BYTES:
            raise HTTPException(status_code=413, detail="payload too large")
        if not payload.body.strip():
            raise HTTPException(status_code=422, detail="article body is empty")
        return {"job_id": service.submit(payload)}

    @app.get("/v1/jobs/{job_id}")
    def get_job(job_id: str) -> dict[str, Any]:
        try:
            return service.store.get(job_id).to_dict()
        except JobNotFoundError:
            raise HTTPException(status_code=404, detail="job not found") from None

    @app.get("/v1/reports/{job_id}")
    def get_report(job_id: str) -> dict[str, Any]:
        try:
            job = service.store.get(job_id)
        except JobNotFoundError:
            raise HTTPException(status_code=404, detail="job not found") from None
        if job.state is not JobState.DONE or job.report is None:
            raise HTTPException(status_code=409, detail=f"job is {job.state.value}, not done")
        return job.report.to_dict()

    @app.post("/v1/jobs/{job_id}/overrides")
    def post_override(job_id: str, payload: OverrideIn) -> dict[str, Any]:
        try:
            return service.apply_override(job_id, payload)
        except JobNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except JobNotDoneError as exc:
            raise HTTPException(status_code=409, detail=f"job is {exc}, not done") from None
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

    @app.post("/v1/jobs/{job_id}/claims/{claim_id}/rerun")
    def post_rerun(job_id: str, claim_id: str) -> dict[str, Any]:
        try:
            return service.rerun(job_id, claim_id)
        except JobNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except JobNotDoneError as exc:
            raise HTTPException(status_code=409, detail=f"job is {exc}, not done") from None
        except RetrievalError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from None

    @app.get("/v1/registry")
    def get_registry() -> dict[str, Any]:
        registry = service.registry
        return {"entries": dict(sorted(registry.entries.items())), "default_tier": registry.default_tier}

    console_dir = config.raw.get("console_dir")
    if console_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/console",
            StaticFiles(directory=str(config.resolve(console_dir)), html=True),
            name="console",
        )

    return app
