"""Shared domain types for the verification pipeline.

Every stage of the pipeline produces or consumes these values. All of them
are immutable after construction so they can be handed between concurrent
stages without coordination. Reports serialize to a single JSON document
with the exact field names used here; evidence also flows through an
append-only JSONL ledger, one item per line.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Iterable
from urllib.parse import urlparse

PIPELINE_VERSION = "claimcheck/0.1.0"

# Second-level public suffixes under which registrable domains sit one label
# deeper (bbc.co.uk -> bbc.co.uk, not co.uk). Deliberately a small embedded
# set: deterministic, no network fetch of the full public-suffix list.
_TWO_LEVEL_SUFFIXES = {
    "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "net.uk",
    "com.au", "net.au", "org.au", "gov.au", "edu.au",
    "co.nz", "org.nz", "net.nz", "govt.nz",
    "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
    "com.br", "org.br", "net.br", "gov.br",
    "co.in", "org.in", "net.in", "gov.in", "ac.in",
    "com.cn", "org.cn", "net.cn", "gov.cn",
    "co.za", "org.za", "com.mx", "com.ar", "com.sg", "com.hk",
    "co.kr", "or.kr", "go.kr",
}

_PRONOUNS = {"he", "she", "it", "they", "him", "her", "them", "his", "hers", "its", "their"}

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Case-fold and split on non-alphanumeric runs."""
    return _TOKEN_RE.findall(text.casefold())


def registrable_domain(url: str) -> str:
    """Reduce a URL (or bare host) to its lowercase registrable domain.

    Strips scheme, port, and any subdomains including "www."; keeps one
    label above the public suffix ("https://www.news.apnews.com/x" ->
    "apnews.com"). Unknown multi-part suffixes fall back to suffix+1 of
    the last two labels.
    """
    host = urlparse(url).hostname if "//" in url else url
    if not host:
        host = url
    host = host.strip().lower().rstrip(".")
    if host.startswith("www."):
        host = host[4:]
    labels = host.split(".")
    if len(labels) <= 2:
        return host
    tail2 = ".".join(labels[-2:])
    if tail2 in _TWO_LEVEL_SUFFIXES and len(labels) >= 3:
        return ".".join(labels[-3:])
    return tail2


def is_self_contained(claim_text: str) -> bool:
    """Minimal proxy for whether a claim stands on its own.

    Rejects texts whose first token is a bare third-person pronoun (the
    subject is unresolved without the article) and texts shorter than
    4 tokens. Anything stronger needs NLP out of scope here.
    """
    tokens = tokenize(claim_text)
    if len(tokens) < 4:
        return False
    return tokens[0] not in _PRONOUNS


def _utc_iso(dt: datetime | None) -> str | None:
    if dt is None:
        return None
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _parse_utc(value: str | None) -> datetime | None:
    if value is None:
        return None
    return datetime.fromisoformat(value.replace("Z", "+00:00")).astimezone(timezone.utc)


class Granularity(str, Enum):
    MAIN = "main"
    KEY = "key"

    @property
    def sort_index(self) -> int:
        return 0 if self is Granularity.MAIN else 1


class VerdictLabel(str, Enum):
    """Closed three-way verdict for one search result against one claim."""

    SUPPORT = "support"
    NEGATE = "negate"
    BASELESS = "baseless"

    @classmethod
    def parse(cls, token: str) -> "VerdictLabel":
        for member in cls:
            if member.value == token:
                return member
        raise ValueError(f"unknown verdict label: {token!r}")


class Confidence(str, Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"

    @classmethod
    def parse(cls, token: str) -> "Confidence":
        for member in cls:
            if member.value == token:
                return member
        raise ValueError(f"unknown confidence: {token!r}")


class Decision(str, Enum):
    SUPPORTED = "supported"
    REFUTED = "refuted"
    INSUFFICIENT = "insufficient_evidence"


class ArticleVerdict(str, Enum):
    REAL = "real"
    FAKE = "fake"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class NewsArticle:
    id: str
    title: str
    body: str
    url: str | None = None
    published_at: datetime | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "body": self.body,
            "url": self.url,
            "published_at": _utc_iso(self.published_at),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "NewsArticle":
        return cls(
            id=d["id"],
            title=d.get("title", ""),
            body=d["body"],
            url=d.get("url"),
            published_at=_parse_utc(d.get("published_at")),
        )


@dataclass(frozen=True)
class Claim:
    """A self-contained factual statement extracted from an article."""

    id: str
    article_id: str
    text: str
    granularity: Granularity
    ordinal: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "article_id": self.article_id,
            "text": self.text,
            "granularity": self.granularity.value,
            "ordinal": self.ordinal,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Claim":
        return cls(
            id=d["id"],
            article_id=d["article_id"],
            text=d["text"],
            granularity=Granularity(d["granularity"]),
            ordinal=int(d["ordinal"]),
        )


def claim_id_for(article_id: str, granularity: Granularity, ordinal: int) -> str:
    return f"{article_id}:{granularity.value}:{ordinal}"


@dataclass(frozen=True)
class SearchQuery:
    claim_id: str
    text: str
    rank: int

    def to_dict(self) -> dict[str, Any]:
        return {"claim_id": self.claim_id, "text": self.text, "rank": self.rank}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SearchQuery":
        return cls(claim_id=d["claim_id"], text=d["text"], rank=int(d["rank"]))


@dataclass(frozen=True)
class SearchResult:
    id: str
    query_rank: int
    url: str
    domain: str
    title: str
    snippet_or_body: str
    retrieved_at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "query_rank": self.query_rank,
            "url": self.url,
            "domain": self.domain,
            "title": self.title,
            "snippet_or_body": self.snippet_or_body,
            "retrieved_at": _utc_iso(self.retrieved_at),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SearchResult":
        return cls(
            id=d["id"],
            query_rank=int(d["query_rank"]),
            url=d["url"],
            domain=d["domain"],
            title=d["title"],
            snippet_or_body=d["snippet_or_body"],
            retrieved_at=_parse_utc(d["retrieved_at"]),
        )


@dataclass(frozen=True)
class EvidenceItem:
    """One search result joined with its verification verdict for a claim.

    source_tier is None until the credibility registry assigns it.
    """

    claim_id: str
    result: SearchResult
    label: VerdictLabel
    confidence: Confidence
    rationale: str
    source_tier: int | None = None

    def with_tier(self, tier: int) -> "EvidenceItem":
        return replace(self, source_tier=tier)

    def with_label(self, label: VerdictLabel) -> "EvidenceItem":
        return replace(self, label=label)

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "result": self.result.to_dict(),
            "label": self.label.value,
            "confidence": self.confidence.value,
            "rationale": self.rationale,
            "source_tier": self.source_tier,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EvidenceItem":
        return cls(
            claim_id=d["claim_id"],
            result=SearchResult.from_dict(d["result"]),
            label=VerdictLabel.parse(d["label"]),
            confidence=Confidence.parse(d["confidence"]),
            rationale=d["rationale"],
            source_tier=d.get("source_tier"),
        )


@dataclass(frozen=True)
class ClaimVerdict:
    claim_id: str
    truth_probability: float
    decision: Decision
    evidence_counts: dict[tuple[int, VerdictLabel], int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        counts = {
            f"{tier}:{label.value}": n
            for (tier, label), n in sorted(
                self.evidence_counts.items(), key=lambda kv: (kv[0][0], kv[0][1].value)
            )
        }
        return {
            "claim_id": self.claim_id,
            "truth_probability": self.truth_probability,
            "decision": self.decision.value,
            "evidence_counts": counts,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ClaimVerdict":
        counts: dict[tuple[int, VerdictLabel], int] = {}
        for key, n in d.get("evidence_counts", {}).items():
            tier_s, label_s = key.split(":", 1)
            counts[(int(tier_s), VerdictLabel.parse(label_s))] = int(n)
        return cls(
            claim_id=d["claim_id"],
            truth_probability=float(d["truth_probability"]),
            decision=Decision(d["decision"]),
            evidence_counts=counts,
        )


@dataclass(frozen=True)
class VerificationReport:
    """Full audit trail for one article: claims, queries, evidence, verdicts."""

    article: NewsArticle
    claims: tuple[Claim, ...]
    queries: tuple[SearchQuery, ...]
    evidence: tuple[EvidenceItem, ...]
    claim_verdicts: tuple[ClaimVerdict, ...]
    article_verdict: ArticleVerdict
    article_probability: float
    pipeline_version: str = PIPELINE_VERSION
    content_hash: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "article": self.article.to_dict(),
            "claims": [c.to_dict() for c in self.claims],
            "queries": [q.to_dict() for q in self.queries],
            "evidence": [e.to_dict() for e in self.evidence],
            "claim_verdicts": [v.to_dict() for v in self.claim_verdicts],
            "article_verdict": self.article_verdict.value,
            "article_probability": self.article_probability,
            "pipeline_version": self.pipeline_version,
            "content_hash": self.content_hash,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VerificationReport":
        return cls(
            article=NewsArticle.from_dict(d["article"]),
            claims=tuple(Claim.from_dict(c) for c in d["claims"]),
            queries=tuple(SearchQuery.from_dict(q) for q in d["queries"]),
            evidence=tuple(EvidenceItem.from_dict(e) for e in d["evidence"]),
            claim_verdicts=tuple(ClaimVerdict.from_dict(v) for v in d["claim_verdicts"]),
            article_verdict=ArticleVerdict(d["article_verdict"]),
            article_probability=float(d["article_probability"]),
            pipeline_version=d.get("pipeline_version", PIPELINE_VERSION),
            content_hash=d.get("content_hash", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))


def canonical_sort(report: VerificationReport) -> VerificationReport:
    """Return the report with claims and evidence in canonical order.

    Claims sort by (granularity, ordinal) with the main claim first;
    evidence by (claim_id, domain, url, query_rank); queries by
    (claim_id, rank). Idempotent, and the basis of content hashing: any
    permutation of the input lists yields the same sorted report.
    """
    claims = tuple(sorted(report.claims, key=lambda c: (c.granularity.sort_index, c.ordinal)))
    queries = tuple(sorted(report.queries, key=lambda q: (q.claim_id, q.rank)))
    evidence = tuple(
        sorted(
            report.evidence,
            key=lambda e: (e.claim_id, e.result.domain, e.result.url, e.result.query_rank),
        )
    )
    verdicts = tuple(sorted(report.claim_verdicts, key=lambda v: v.claim_id))
    return replace(report, claims=claims, queries=queries, evidence=evidence, claim_verdicts=verdicts)


def _strip_volatile(doc: Any) -> Any:
    """Drop retrieved_at timestamps and the hash field itself before hashing."""
    if isinstance(doc, dict):
        return {k: _strip_volatile(v) for k, v in doc.items() if k not in ("retrieved_at", "content_hash")}
    if isinstance(doc, list):
        return [_strip_volatile(v) for v in doc]
    return doc


def compute_content_hash(report: VerificationReport) -> str:
    """SHA-256 over the canonical, timestamp-free serialization of the report."""
    doc = _strip_volatile(canonical_sort(report).to_dict())
    payload = json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def seal(report: VerificationReport) -> VerificationReport:
    """Canonically sort the report and stamp its content hash."""
    sorted_report = canonical_sort(report)
    return replace(sorted_report, content_hash=compute_content_hash(sorted_report))


def validate(report: VerificationReport, extraction_only: bool = False) -> list[str]:
    """Check every type invariant; violations are returned, never raised.

    Pure: the same report always yields the same list, in a stable order.
    """
    violations: list[str] = []
    art = report.article
    if not art.body.strip():
        violations.append(f"article {art.id}: body empty")

    seen_ordinals: set[tuple[str, Granularity, int]] = set()
    claim_ids: set[str] = set()
    for claim in report.claims:
        claim_ids.add(claim.id)
        if not claim.text.strip():
            violations.append(f"claim {claim.id}: text empty")
        elif not is_self_contained(claim.text):
            violations.append(f"claim {claim.id}: text fails self-containedness check")
        if claim.ordinal < 0:
            violations.append(f"claim {claim.id}: ordinal negative")
        key = (claim.article_id, claim.granularity, claim.ordinal)
        if key in seen_ordinals:
            violations.append(f"claim {claim.id}: duplicate ordinal {claim.ordinal} for granularity {claim.granularity.value}")
        seen_ordinals.add(key)

    queries_per_claim: dict[str, int] = {}
    for query in report.queries:
        queries_per_claim[query.claim_id] = queries_per_claim.get(query.claim_id, 0) + 1
        if not query.text.strip():
            violations.append(f"query for {query.claim_id}: text empty")
        if not 0 <= query.rank <= 2:
            violations.append(f"query for {query.claim_id}: rank {query.rank} outside [0,2]")
    for claim_id, n in queries_per_claim.items():
        if n > 3:
            violations.append(f"claim {claim_id}: {n} queries exceeds 3")
    if not extraction_only:
        for claim in report.claims:
            if queries_per_claim.get(claim.id, 0) == 0:
                violations.append(f"claim {claim.id}: no queries")

    for item in report.evidence:
        res = item.result
        if not res.snippet_or_body.strip():
            violations.append(f"result {res.id}: snippet_or_body empty")
        if res.domain != registrable_domain(res.url):
            violations.append(f"result {res.id}: domain {res.domain!r} does not match url {res.url!r}")
        if item.source_tier is None or not 1 <= item.source_tier <= 5:
            violations.append(f"evidence {item.claim_id}/{res.id}: source_tier out of range")
        if item.label in (VerdictLabel.SUPPORT, VerdictLabel.NEGATE) and not item.rationale.strip():
            violations.append(f"evidence {item.claim_id}/{res.id}: rationale empty for label {item.label.value}")
        if item.claim_id not in claim_ids:
            violations.append(f"evidence {item.claim_id}/{res.id}: unknown claim")

    for verdict in report.claim_verdicts:
        if not 0.0 <= verdict.truth_probability <= 1.0:
            violations.append(f"verdict {verdict.claim_id}: truth_probability outside [0,1]")

    if not 0.0 <= report.article_probability <= 1.0:
        violations.append("article_probability outside [0,1]")
    return violations


def evidence_to_jsonl(items: Iterable[EvidenceItem]) -> str:
    """Serialize evidence items for the ledger, one JSON object per line."""
    return "".join(json.dumps(item.to_dict(), ensure_ascii=False) + "\n" for item in items)
