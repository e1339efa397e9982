import json
from datetime import datetime, timezone
from pathlib import Path

import pytest

from claimcheck.config import AppConfig
from claimcheck.models import (
    ArticleVerdict,
    Claim,
    ClaimVerdict,
    Confidence,
    Decision,
    EvidenceItem,
    Granularity,
    NewsArticle,
    SearchQuery,
    SearchResult,
    VerdictLabel,
    VerificationReport,
    seal,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TS = datetime(2024, 5, 2, 12, 0, tzinfo=timezone.utc)


def transcript_for(exchanges):
    """Build a transcript from (template_name, bindings, reask_suffix, response)."""
    from claimcheck.llm import ProviderTranscript, render, request_digest
    from claimcheck.prompts import get_template

    entries = []
    for name, bindings, suffix, response in exchanges:
        prompt = render(get_template(name), bindings) + suffix
        entries.append((request_digest(name, prompt), response))
    return ProviderTranscript(entries=entries)


def replay_gateway(exchanges):
    from claimcheck.llm import LlmGateway, ReplayProvider

    return LlmGateway(ReplayProvider(transcript_for(exchanges)))


class SequenceProvider:
    """Returns canned responses in call order, ignoring the digest."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.calls = 0

    def complete_once(self, digest, prompt):
        response = self.responses[min(self.calls, len(self.responses) - 1)]
        self.calls += 1
        return response


def make_claim(text="The bridge closed on Monday for repairs.", claim_id="a1:main:0"):
    return Claim(id=claim_id, article_id="a1", text=text, granularity=Granularity.MAIN, ordinal=0)


def make_feature_vector(counts):
    from claimcheck.credibility import FeatureVector

    totals = (sum(counts[0::3]), sum(counts[1::3]), sum(counts[2::3]))
    return FeatureVector(counts=tuple(counts), totals=totals, n_results=sum(counts))


def synthetic_rule_rows(n=200, seed=42):
    """Rows where the label is 1 iff tier-5 support count > tier-5 negate count."""
    import random as _random

    rng = _random.Random(seed)
    rows = []
    for _ in range(n):
        fv = make_feature_vector([rng.randint(0, 3) for _ in range(15)])
        label = 1 if fv.counts[12] > fv.counts[13] else 0
        rows.append((fv, label))
    return rows


def make_result(rid="r1", url="https://apnews.com/story/1", title="Story", body="Body text.",
                query_rank=0):
    from claimcheck.models import registrable_domain

    return SearchResult(
        id=rid,
        query_rank=query_rank,
        url=url,
        domain=registrable_domain(url),
        title=title,
        snippet_or_body=body,
        retrieved_at=TS,
    )


def make_report(evidence=None, claims=None, queries=None, verdicts=None):
    """A small well-formed report for model-level tests."""
    article = NewsArticle(id="a1", title="Bridge closure", body="The bridge closed on Monday for repairs.")
    if claims is None:
        claims = [
            Claim(id="a1:main:0", article_id="a1", text="The bridge closed on Monday for repairs.",
                  granularity=Granularity.MAIN, ordinal=0),
        ]
    if queries is None:
        queries = [SearchQuery(claim_id=claims[0].id, text="bridge closed Monday repairs", rank=0)]
    if evidence is None:
        evidence = [
            EvidenceItem(
                claim_id=claims[0].id,
                result=make_result("r1", "https://apnews.com/story/1", "Bridge shut"),
                label=VerdictLabel.SUPPORT,
                confidence=Confidence.HIGH,
                rationale="Reports the same closure.",
                source_tier=5,
            ),
            EvidenceItem(
                claim_id=claims[0].id,
                result=make_result("r2", "https://citynews.com/story/2", "Roadworks"),
                label=VerdictLabel.BASELESS,
                confidence=Confidence.MEDIUM,
                rationale="Unrelated roadworks.",
                source_tier=3,
            ),
            EvidenceItem(
                claim_id=claims[0].id,
                result=make_result("r3", "https://blogspot.example.com/p/3", "Rumor mill"),
                label=VerdictLabel.NEGATE,
                confidence=Confidence.LOW,
                rationale="Claims the bridge stayed open.",
                source_tier=1,
            ),
        ]
    if verdicts is None:
        verdicts = [ClaimVerdict(claim_id=claims[0].id, truth_probability=0.7, decision=Decision.SUPPORTED)]
    return seal(
        VerificationReport(
            article=article,
            claims=tuple(claims),
            queries=tuple(queries),
            evidence=tuple(evidence),
            claim_verdicts=tuple(verdicts),
            article_verdict=ArticleVerdict.REAL,
            article_probability=0.7,
        )
    )


@pytest.fixture(scope="session")
def choline_config() -> AppConfig:
    return AppConfig.load(FIXTURES / "choline" / "config.json")


@pytest.fixture(scope="session")
def choline_article() -> NewsArticle:
    payload = json.loads((FIXTURES / "choline" / "article.json").read_text(encoding="utf-8"))
    return NewsArticle.from_dict(payload)


@pytest.fixture(scope="session")
def choline_meta() -> dict:
    return json.loads((FIXTURES / "choline" / "meta.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def minimal_meta() -> dict:
    return json.loads((FIXTURES / "minimal" / "meta.json").read_text(encoding="utf-8"))
