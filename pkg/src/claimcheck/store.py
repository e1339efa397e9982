"""Durable job store and the append-only evidence ledger.

Jobs move strictly forward through the pipeline stages (failed is reachable
from any non-done state); every write is serialized per job and mirrored to
a JSON snapshot on disk, while evidence, overrides, and rerun archives go
to a single append-only JSONL ledger. Nothing in the ledger is ever
rewritten, matching the system's audit-trail purpose.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Iterator

from .models import EvidenceItem, VerdictLabel, VerificationReport

_CROCKFORD = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"


def new_job_id(now_ms: int | None = None) -> str:
    """26-char sortable id: 48-bit millisecond timestamp + 80 random bits."""
    ts = int(time.time() * 1000) if now_ms is None else now_ms
    value = (ts & (2**48 - 1)) << 80 | int.from_bytes(os.urandom(10), "big")
    chars = []
    for _ in range(26):
        chars.append(_CROCKFORD[value & 31])
        value >>= 5
    return "".join(reversed(chars))


class JobState(str, Enum):
    QUEUED = "queued"
    EXTRACTING = "extracting"
    SEARCHING = "searching"
    VERIFYING = "verifying"
    AGGREGATING = "aggregating"
    DONE = "done"
    FAILED = "failed"

    @property
    def order(self) -> int:
        return _STATE_ORDER[self]


_STATE_ORDER = {
    JobState.QUEUED: 0,
    JobState.EXTRACTING: 1,
    JobState.SEARCHING: 2,
    JobState.VERIFYING: 3,
    JobState.AGGREGATING: 4,
    JobState.DONE: 5,
    JobState.FAILED: 6,
}


class StoreError(Exception):
    pass


class JobNotFoundError(StoreError):
    pass


class InvalidTransitionError(StoreError):
    pass


@dataclass(frozen=True)
class LabelOverride:
    job_id: str
    claim_id: str
    result_id: str
    new_label: VerdictLabel
    author: str
    at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "job_id": self.job_id,
            "claim_id": self.claim_id,
            "result_id": self.result_id,
            "new_label": self.new_label.value,
            "author": self.author,
            "at": self.at.astimezone(timezone.utc).isoformat().replace("+00:00", "Z"),
        }


@dataclass(frozen=True)
class VerificationJob:
    job_id: str
    state: JobState
    submitted_at: datetime
    updated_at: datetime
    report: VerificationReport | None = None
    error: str | None = None
    overrides: tuple[LabelOverride, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        iso = lambda dt: dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
        return {
            "job_id": self.job_id,
            "state": self.state.value,
            "submitted_at": iso(self.submitted_at),
            "updated_at": iso(self.updated_at),
            "report": self.report.to_dict() if self.report else None,
            "error": self.error,
            "overrides": [o.to_dict() for o in self.overrides],
        }


class EvidenceLedger:
    """Append-only JSONL record of evidence, overrides, and rerun archives."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.touch(exist_ok=True)
        self._lock = threading.Lock()

    def append(self, kind: str, payload: dict[str, Any]) -> None:
        line = json.dumps({"kind": kind, **payload}, ensure_ascii=False)
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def append_evidence(self, job_id: str, items: list[EvidenceItem]) -> None:
        for item in items:
            self.append("evidence", {"job_id": job_id, "item": item.to_dict()})

    def size_bytes(self) -> int:
        return self.path.stat().st_size

    def entries(self) -> Iterator[dict[str, Any]]:
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield json.loads(line)


class JobStore:
    """In-memory job table with per-job write serialization and JSON snapshots.

    Reads return immutable snapshots and take no lock. State changes are
    validated against the forward-only order before anything is persisted.
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.jobs_dir = self.data_dir / "jobs"
        self.jobs_dir.mkdir(parents=True, exist_ok=True)
        self.ledger = EvidenceLedger(self.data_dir / "ledger.jsonl")
        self._jobs: dict[str, VerificationJob] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._table_lock = threading.Lock()

    def _job_lock(self, job_id: str) -> threading.Lock:
        with self._table_lock:
            if job_id not in self._locks:
                self._locks[job_id] = threading.Lock()
            return self._locks[job_id]

    def create(self, job_id: str | None = None) -> VerificationJob:
        job_id = job_id or new_job_id()
        now = datetime.now(timezone.utc)
        job = VerificationJob(job_id=job_id, state=JobState.QUEUED, submitted_at=now, updated_at=now)
        with self._job_lock(job_id):
            self._jobs[job_id] = job
            self._persist(job)
        return job

    def get(self, job_id: str) -> VerificationJob:
        job = self._jobs.get(job_id)
        if job is None:
            raise JobNotFoundError(job_id)
        return job

    def advance(
        self,
        job_id: str,
        state: JobState,
        report: VerificationReport | None = None,
        error: str | None = None,
    ) -> VerificationJob:
        """Move a job forward; backward or post-terminal moves are rejected."""
        with self._job_lock(job_id):
            job = self.get(job_id)
            if job.state in (JobState.DONE, JobState.FAILED):
                raise InvalidTransitionError(f"{job_id}: job already {job.state.value}")
            if state is JobState.FAILED:
                pass  # reachable from any non-terminal state
            elif state.order <= job.state.order:
                raise InvalidTransitionError(
                    f"{job_id}: cannot move {job.state.value} -> {state.value}"
                )
            if state is JobState.DONE and report is None:
                raise StoreError("done jobs must carry a report")
            updated = replace(
                job,
                state=state,
                updated_at=datetime.now(timezone.utc),
                report=report if report is not None else job.report,
                error=error,
            )
            self._jobs[job_id] = updated
            self._persist(updated)
        if state is JobState.DONE and report is not None:
            self.ledger.append_evidence(job_id, list(report.evidence))
        return updated

    def record_override(self, override: LabelOverride, updated_report: VerificationReport) -> VerificationJob:
        """Attach an override and the recomputed report; the ledger keeps the event."""
        with self._job_lock(override.job_id):
            job = self.get(override.job_id)
            updated = replace(
                job,
                overrides=job.overrides + (override,),
                report=updated_report,
                updated_at=datetime.now(timezone.utc),
            )
            self._jobs[override.job_id] = updated
            self._persist(updated)
        self.ledger.append("override", override.to_dict())
        return updated

    def replace_report(
        self, job_id: str, report: VerificationReport, archived: list[EvidenceItem]
    ) -> VerificationJob:
        """Swap in a rerun's report, archiving the claim's prior evidence."""
        with self._job_lock(job_id):
            job = self.get(job_id)
            updated = replace(job, report=report, updated_at=datetime.now(timezone.utc))
            self._jobs[job_id] = updated
            self._persist(updated)
        for item in archived:
            self.ledger.append("archived_evidence", {"job_id": job_id, "item": item.to_dict()})
        self.ledger.append_evidence(job_id, list(report.evidence))
        return updated

    def _persist(self, job: VerificationJob) -> None:
        path = self.jobs_dir / f"{job.job_id}.json"
        path.write_text(json.dumps(job.to_dict(), ensure_ascii=False, indent=2), encoding="utf-8")
