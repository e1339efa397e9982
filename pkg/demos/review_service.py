"""Drive the verification service end to end through its HTTP API.

Runs the app in-process against the minimal replay fixture: submit an
article, poll the job to completion, fetch the report, then act as a human
reviewer flipping the only supporting result to "negate" and watch the
article verdict flip with it. Every action lands in the append-only ledger.
"""

import json
import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from claimcheck.config import AppConfig
from claimcheck.service import create_app

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "minimal"

config = AppConfig.load(FIXTURE / "config.json")
workdir = tempfile.mkdtemp(prefix="claimcheck-demo-")
config.raw["data_dir"] = workdir
app = create_app(config, synchronous=False)

with TestClient(app) as client:
    payload = json.loads((FIXTURE / "article.json").read_text())
    print(f"POST /v1/verify  body={payload['body']!r}")
    job_id = client.post("/v1/verify", json=payload).json()["job_id"]
    print(f"  -> job_id {job_id}")

    state = None
    while state not in ("done", "failed"):
        snapshot = client.get(f"/v1/jobs/{job_id}").json()
        if snapshot["state"] != state:
            state = snapshot["state"]
            print(f"GET /v1/jobs/{{id}}  state={state}")
        time.sleep(0.02)

    report = client.get(f"/v1/reports/{job_id}").json()
    item = report["evidence"][0]
    print(f"\nverdict: {report['article_verdict']} (p={report['article_probability']:.3f})")
    print(f"evidence: {item['result']['domain']} tier {item['source_tier']} "
          f"-> {item['label']} ({item['confidence']})")

    print("\nreviewer overrides the sole support to 'negate'...")
    response = client.post(
        f"/v1/jobs/{job_id}/overrides",
        json={
            "claim_id": item["claim_id"],
            "result_id": item["result"]["id"],
            "new_label": "negate",
            "author": "demo-reviewer",
        },
    ).json()
    print(f"  -> claim decision {response['claim_verdict']['decision']}, "
          f"article verdict {response['article_verdict']} "
          f"(p={response['article_probability']:.3f})")

ledger = Path(workdir) / "ledger.jsonl"
print(f"\nledger at {ledger}:")
for line in ledger.read_text().splitlines():
    entry = json.loads(line)
    print(f"  {entry['kind']}")
