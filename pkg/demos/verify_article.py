"""Walk an article through the whole verification pipeline, offline.

Uses the frozen replay fixture under fixtures/choline: a health-scare story
about eggs and blood clots. Every model call is answered from the recorded
transcript and every search hits the bundled corpus, so this runs with no
network and prints the same report every time.
"""

import json
from collections import Counter
from pathlib import Path

from claimcheck.config import AppConfig
from claimcheck.models import NewsArticle
from claimcheck.pipeline import run_pipeline

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "choline"

config = AppConfig.load(FIXTURE / "config.json")
article = NewsArticle.from_dict(json.loads((FIXTURE / "article.json").read_text()))

print(f"Article: {article.title}")
print(f"Body: {len(article.body)} chars\n")

report = run_pipeline(
    article,
    config.build_gateway(),
    config.build_backends(),
    config.build_registry(),
    config.build_pipeline_config(),
    on_state=lambda stage: print(f"  stage -> {stage}"),
)

print(f"\nExtracted {len(report.claims)} key claims:")
for claim in report.claims:
    print(f"  [{claim.ordinal}] {claim.text}")

first = report.claims[0]
pool = [e for e in report.evidence if e.claim_id == first.id]
labels = Counter(e.label.value for e in pool)
print(f"\nClaim [0] gathered {len(pool)} search results: {dict(labels)}")
print("Supporting sources:")
for item in pool:
    if item.label.value == "support":
        print(f"  - {item.result.domain} (tier {item.source_tier}): {item.rationale[:80]}...")

print("\nPer-claim verdicts:")
for verdict in report.claim_verdicts:
    print(f"  {verdict.claim_id}: p={verdict.truth_probability:.3f} {verdict.decision.value}")

print(f"\nArticle verdict: {report.article_verdict.value.upper()} "
      f"(p={report.article_probability:.3f})")
print(f"Report hash: {report.content_hash}")
