"""HTTP service contract, job store semantics, and the evidence ledger."""

import json
import random
import time

import pytest
from fastapi.testclient import TestClient

from claimcheck.config import AppConfig
from claimcheck.service import create_app
from claimcheck.store import (
    InvalidTransitionError,
    JobState,
    JobStore,
    new_job_id,
)
from conftest import FIXTURES, make_report


def minimal_app(tmp_path, synchronous=True):
    config = AppConfig.load(FIXTURES / "minimal" / "config.json")
    config.raw["data_dir"] = str(tmp_path / "data")
    return create_app(config, synchronous=synchronous)


def submit_article(client):
    payload = json.loads((FIXTURES / "minimal" / "article.json").read_text(encoding="utf-8"))
    response = client.post("/v1/verify", json=payload)
    assert response.status_code == 200
    return response.json()["job_id"]


def poll_done(client, job_id, timeout=10.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        job = client.get(f"/v1/jobs/{job_id}").json()
        if job["state"] in ("done", "failed"):
            return job
        time.sleep(0.02)
    raise TimeoutError(f"job {job_id} did not finish")


class TestJobIds:
    def test_26_chars(self):
        job_id = new_job_id()
        assert len(job_id) == 26
        assert all(c in "0123456789ABCDEFGHJKMNPQRSTVWXYZ" for c in job_id)

    def test_sortable_by_timestamp(self):
        early = new_job_id(now_ms=1_000_000)
        late = new_job_id(now_ms=2_000_000)
        assert early < late


class TestSubmitAndPoll:
    def test_round_trip_with_worker_pool(self, tmp_path):
        app = minimal_app(tmp_path, synchronous=False)
        with TestClient(app) as client:
            job_id = submit_article(client)
            assert len(job_id) == 26
            job = poll_done(client, job_id)
            assert job["state"] == "done"
            report = client.get(f"/v1/reports/{job_id}").json()
            assert report["article_verdict"] == "real"
            assert report["content_hash"]

    def test_fresh_job_starts_queued(self, tmp_path):
        app = minimal_app(tmp_path, synchronous=True)
        with TestClient(app) as client:
            job = app.state.service.store.create()
            snapshot = client.get(f"/v1/jobs/{job.job_id}").json()
            assert snapshot["state"] == "queued"
            assert snapshot["report"] is None

    def test_empty_body_rejected_422(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            response = client.post("/v1/verify", json={"body": "   ", "title": "x"})
            assert response.status_code == 422

    def test_oversized_payload_rejected_413(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            response = client.post("/v1/verify", json={"body": "x" * 2_000_000})
            assert response.status_code == 413

    def test_unknown_job_404(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            assert client.get("/v1/jobs/NOPE").status_code == 404
            assert client.get("/v1/reports/NOPE").status_code == 404

    def test_report_before_done_409(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job = app.state.service.store.create()
            assert client.get(f"/v1/reports/{job.job_id}").status_code == 409

    def test_same_payload_same_content_hash(self, tmp_path):
        app = minimal_app(tmp_path, synchronous=True)
        with TestClient(app) as client:
            first = submit_article(client)
            second = submit_article(client)
            hash1 = client.get(f"/v1/reports/{first}").json()["content_hash"]
            hash2 = client.get(f"/v1/reports/{second}").json()["content_hash"]
            assert hash1 == hash2


class TestOverrides:
    def _done_job(self, client):
        job_id = submit_article(client)
        poll_done(client, job_id)
        report = client.get(f"/v1/reports/{job_id}").json()
        item = report["evidence"][0]
        return job_id, report, item

    def test_flip_sole_support_flips_verdict(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job_id, report, item = self._done_job(client)
            assert report["article_verdict"] == "real"
            response = client.post(
                f"/v1/jobs/{job_id}/overrides",
                json={
                    "claim_id": item["claim_id"],
                    "result_id": item["result"]["id"],
                    "new_label": "negate",
                    "author": "tester",
                },
            )
            assert response.status_code == 200
            body = response.json()
            assert body["article_verdict"] == "fake"
            assert body["claim_verdict"]["decision"] == "refuted"
            assert body["article_probability"] == pytest.approx(1 / 3.5)
            # evidence keeps its original label; only verdicts moved
            assert body["report"]["evidence"][0]["label"] == "support"

    def test_same_label_override_is_noop_on_verdict(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job_id, report, item = self._done_job(client)
            response = client.post(
                f"/v1/jobs/{job_id}/overrides",
                json={
                    "claim_id": item["claim_id"],
                    "result_id": item["result"]["id"],
                    "new_label": "support",
                },
            )
            assert response.json()["article_verdict"] == report["article_verdict"]

    def test_missing_result_404(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job_id, _, item = self._done_job(client)
            response = client.post(
                f"/v1/jobs/{job_id}/overrides",
                json={"claim_id": item["claim_id"], "result_id": "ghost", "new_label": "negate"},
            )
            assert response.status_code == 404

    def test_not_done_job_409(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job = app.state.service.store.create()
            response = client.post(
                f"/v1/jobs/{job.job_id}/overrides",
                json={"claim_id": "c", "result_id": "r", "new_label": "negate"},
            )
            assert response.status_code == 409

    def test_bad_label_422(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job_id, _, item = self._done_job(client)
            response = client.post(
                f"/v1/jobs/{job_id}/overrides",
                json={"claim_id": item["claim_id"], "result_id": item["result"]["id"],
                      "new_label": "bogus"},
            )
            assert response.status_code == 422


class TestRerun:
    def test_rerun_reproduces_under_same_transcript(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job_id = submit_article(client)
            poll_done(client, job_id)
            report = client.get(f"/v1/reports/{job_id}").json()
            claim_id = report["claims"][0]["id"]
            response = client.post(f"/v1/jobs/{job_id}/claims/{claim_id}/rerun")
            assert response.status_code == 200
            assert response.json()["report"]["content_hash"] == report["content_hash"]

    def test_rerun_unknown_claim_404(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job_id = submit_article(client)
            poll_done(client, job_id)
            assert client.post(f"/v1/jobs/{job_id}/claims/ghost/rerun").status_code == 404


class TestRegistryEndpoint:
    def test_returns_tiers(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            body = client.get("/v1/registry").json()
            assert body["entries"]["citynews.com"] == 4
            assert body["default_tier"] == 3


class TestLedger:
    def test_append_only_across_operations(self, tmp_path):
        app = minimal_app(tmp_path)
        service = app.state.service
        sizes = [service.store.ledger.size_bytes()]
        with TestClient(app) as client:
            job_id = submit_article(client)
            poll_done(client, job_id)
            sizes.append(service.store.ledger.size_bytes())
            report = client.get(f"/v1/reports/{job_id}").json()
            item = report["evidence"][0]
            client.post(
                f"/v1/jobs/{job_id}/overrides",
                json={"claim_id": item["claim_id"], "result_id": item["result"]["id"],
                      "new_label": "negate"},
            )
            sizes.append(service.store.ledger.size_bytes())
            claim_id = report["claims"][0]["id"]
            client.post(f"/v1/jobs/{job_id}/claims/{claim_id}/rerun")
            sizes.append(service.store.ledger.size_bytes())
        assert sizes == sorted(sizes)
        assert sizes[-1] > sizes[0]
        kinds = [entry["kind"] for entry in service.store.ledger.entries()]
        assert "evidence" in kinds and "override" in kinds and "archived_evidence" in kinds

    def test_job_snapshot_persisted(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            job_id = submit_article(client)
            poll_done(client, job_id)
        snapshot = json.loads(
            (tmp_path / "data" / "jobs" / f"{job_id}.json").read_text(encoding="utf-8")
        )
        assert snapshot["state"] == "done"
        assert snapshot["report"]["content_hash"]


class TestStateMachine:
    FORWARD = [JobState.QUEUED, JobState.EXTRACTING, JobState.SEARCHING,
               JobState.VERIFYING, JobState.AGGREGATING, JobState.DONE]

    def test_randomized_stub_never_observes_backward_motion(self, tmp_path):
        store = JobStore(tmp_path / "data")
        rng = random.Random(1234)
        states = list(JobState)
        for _ in range(200):
            job = store.create()
            observed = [store.get(job.job_id).state]
            for _ in range(rng.randint(1, 12)):
                target = rng.choice(states)
                try:
                    store.advance(
                        job.job_id,
                        target,
                        report=make_report() if target is JobState.DONE else None,
                    )
                except InvalidTransitionError:
                    continue
                observed.append(store.get(job.job_id).state)
            for before, after in zip(observed, observed[1:]):
                if after is JobState.FAILED:
                    assert before not in (JobState.DONE, JobState.FAILED)
                else:
                    assert after.order > before.order

    def test_done_requires_report(self, tmp_path):
        store = JobStore(tmp_path / "data")
        job = store.create()
        with pytest.raises(Exception):
            store.advance(job.job_id, JobState.DONE, report=None)

    def test_failed_reachable_from_any_nonterminal(self, tmp_path):
        store = JobStore(tmp_path / "data")
        for intermediate in [JobState.QUEUED, JobState.EXTRACTING, JobState.VERIFYING]:
            job = store.create()
            if intermediate is not JobState.QUEUED:
                store.advance(job.job_id, intermediate)
            store.advance(job.job_id, JobState.FAILED, error="boom")
            assert store.get(job.job_id).state is JobState.FAILED

    def test_terminal_states_are_final(self, tmp_path):
        store = JobStore(tmp_path / "data")
        job = store.create()
        store.advance(job.job_id, JobState.FAILED, error="boom")
        with pytest.raises(InvalidTransitionError):
            store.advance(job.job_id, JobState.EXTRACTING)

    def test_service_lifecycle_observed_states_forward(self, tmp_path):
        app = minimal_app(tmp_path, synchronous=False)
        order = {state.value: i for i, state in enumerate(self.FORWARD)}
        with TestClient(app) as client:
            job_id = submit_article(client)
            seen = []
            deadline = time.monotonic() + 10
            while time.monotonic() < deadline:
                state = client.get(f"/v1/jobs/{job_id}").json()["state"]
                if not seen or seen[-1] != state:
                    seen.append(state)
                if state in ("done", "failed"):
                    break
            assert seen[-1] == "done"
            indices = [order[s] for s in seen]
            assert indices == sorted(indices)


class TestConsoleMount:
    def test_console_served_when_configured(self, tmp_path):
        console = tmp_path / "console"
        console.mkdir()
        (console / "index.html").write_text("<html><body>console</body></html>", encoding="utf-8")
        config = AppConfig.load(FIXTURES / "minimal" / "config.json")
        config.raw["data_dir"] = str(tmp_path / "data")
        config.raw["console_dir"] = str(console)
        app = create_app(config, synchronous=True)
        with TestClient(app) as client:
            response = client.get("/console/")
            assert response.status_code == 200
            assert "console" in response.text

    def test_no_mount_without_config(self, tmp_path):
        app = minimal_app(tmp_path)
        with TestClient(app) as client:
            assert client.get("/console/").status_code == 404
