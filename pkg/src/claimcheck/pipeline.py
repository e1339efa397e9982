"""End-to-end orchestration: article in, sealed verification report out."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from . import credibility, extraction, retrieval, verification
from .credibility import CredibilityRegistry, claim_verdict_from, decide_article
from .gbdt import GbdtModel, predict
from .llm import LlmGateway
from .models import (
    Claim,
    ClaimVerdict,
    Decision,
    EvidenceItem,
    NewsArticle,
    SearchQuery,
    VerificationReport,
    seal,
)
from .retrieval import FilterPolicy, SearchBackend
from .verification import VerifierConfig

logger = logging.getLogger(__name__)

MODE_MAIN = "main"
MODE_ALL = "all"


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for one verification run.

    mode "main" verifies only the article's main claim and the article
    verdict is that claim's verdict; mode "all" verifies every key claim
    and takes the weakest one.
    """

    mode: str = MODE_MAIN
    policy: FilterPolicy = field(default_factory=FilterPolicy)
    min_relevant: int = 8
    verifier: VerifierConfig = field(default_factory=VerifierConfig)
    aggregator: str = "rule"
    tier_weights: dict[int, float] | None = None
    model: GbdtModel | None = None

    def __post_init__(self) -> None:
        if self.mode not in (MODE_MAIN, MODE_ALL):
            raise ValueError(f"unknown pipeline mode: {self.mode!r}")
        if self.aggregator not in ("rule", "gbdt"):
            raise ValueError(f"unknown aggregator: {self.aggregator!r}")
        if self.aggregator == "gbdt" and self.model is None:
            raise ValueError("gbdt aggregation needs a trained model")


def aggregate_claim(
    claim_id: str, evidence: list[EvidenceItem], config: PipelineConfig
) -> ClaimVerdict:
    """Turn one claim's tiered evidence into its verdict."""
    fv = credibility.featurize(evidence)
    rule_score, rule_decision = credibility.rule_aggregate(fv, config.tier_weights)
    if config.aggregator == "gbdt":
        probability = predict(config.model, fv)
        if rule_decision is Decision.INSUFFICIENT:
            decision = Decision.INSUFFICIENT
        else:
            decision = Decision.SUPPORTED if probability >= 0.5 else Decision.REFUTED
    else:
        probability, decision = rule_score, rule_decision
    return claim_verdict_from(claim_id, fv, probability, decision)


def run_pipeline(
    article: NewsArticle,
    gateway: LlmGateway,
    backends: list[SearchBackend],
    registry: CredibilityRegistry,
    config: PipelineConfig = PipelineConfig(),
    on_state: Callable[[str], None] | None = None,
) -> VerificationReport:
    """Run extract -> query -> search -> verify -> aggregate for one article.

    on_state fires at each stage boundary (extracting, searching,
    verifying, aggregating) so a job store can track progress. The returned
    report is canonically sorted and carries its content hash.
    """

    def notify(state: str) -> None:
        if on_state is not None:
            on_state(state)

    notify("extracting")
    if config.mode == MODE_MAIN:
        claims = [extraction.extract_main_claim(gateway, article)]
    else:
        claims = extraction.extract_key_claims(gateway, article)
    logger.info("article %s: %d claims extracted", article.id, len(claims))

    notify("searching")
    queries: list[SearchQuery] = []
    pools: dict[str, list] = {}
    for claim in claims:
        claim_queries = retrieval.generate_queries(gateway, claim)
        queries.extend(claim_queries)
        pools[claim.id] = retrieval.gather_evidence_pool(
            claim_queries, backends, config.policy, min_relevant=config.min_relevant
        )
        logger.info("claim %s: %d queries, pool of %d", claim.id, len(claim_queries), len(pools[claim.id]))

    notify("verifying")
    evidence: list[EvidenceItem] = []
    for claim in claims:
        evidence.extend(
            verification.verify_claim(gateway, claim, pools[claim.id], config.verifier)
        )

    notify("aggregating")
    evidence = credibility.assign_tiers(evidence, registry)
    by_claim: dict[str, list[EvidenceItem]] = {claim.id: [] for claim in claims}
    for item in evidence:
        by_claim[item.claim_id].append(item)
    verdicts = [aggregate_claim(claim.id, by_claim[claim.id], config) for claim in claims]

    decide_mode = "main_claim" if config.mode == MODE_MAIN else "min_over_claims"
    main_id = claims[0].id if config.mode == MODE_MAIN else None
    article_verdict, article_probability = decide_article(verdicts, decide_mode, main_id)

    report = VerificationReport(
        article=article,
        claims=tuple(claims),
        queries=tuple(queries),
        evidence=tuple(evidence),
        claim_verdicts=tuple(verdicts),
        article_verdict=article_verdict,
        article_probability=article_probability,
    )
    return seal(report)


def rerun_claim(
    report: VerificationReport,
    claim_id: str,
    gateway: LlmGateway,
    backends: list[SearchBackend],
    registry: CredibilityRegistry,
    config: PipelineConfig,
) -> tuple[VerificationReport, list[EvidenceItem]]:
    """Re-run retrieval and verification for a single claim of a done report.

    Returns the updated report and the claim's prior evidence (for the
    caller to archive). Other claims are untouched.
    """
    matches = [c for c in report.claims if c.id == claim_id]
    if not matches:
        raise KeyError(claim_id)
    claim = matches[0]

    new_queries = retrieval.generate_queries(gateway, claim)
    pool = retrieval.gather_evidence_pool(
        new_queries, backends, config.policy, min_relevant=config.min_relevant
    )
    new_items = verification.verify_claim(gateway, claim, pool, config.verifier)
    new_items = credibility.assign_tiers(new_items, registry)

    archived = [item for item in report.evidence if item.claim_id == claim_id]
    queries = tuple(q for q in report.queries if q.claim_id != claim_id) + tuple(new_queries)
    evidence = tuple(e for e in report.evidence if e.claim_id != claim_id) + tuple(new_items)

    by_claim: dict[str, list[EvidenceItem]] = {c.id: [] for c in report.claims}
    for item in evidence:
        by_claim[item.claim_id].append(item)
    verdicts = [aggregate_claim(c.id, by_claim[c.id], config) for c in report.claims]
    decide_mode = "main_claim" if config.mode == MODE_MAIN else "min_over_claims"
    main_id = report.claims[0].id if config.mode == MODE_MAIN else None
    article_verdict, article_probability = decide_article(verdicts, decide_mode, main_id)

    updated = VerificationReport(
        article=report.article,
        claims=report.claims,
        queries=queries,
        evidence=evidence,
        claim_verdicts=tuple(verdicts),
        article_verdict=article_verdict,
        article_probability=article_probability,
        pipeline_version=report.pipeline_version,
    )
    return seal(updated), archived


def reaggregate_with_overrides(
    report: VerificationReport,
    overrides: dict[tuple[str, str], "object"],
    registry: CredibilityRegistry,
    config: PipelineConfig,
) -> VerificationReport:
    """Recompute verdicts with (claim_id, result_id) -> label overrides applied.

    The evidence list keeps its original labels; only the verdict math sees
    the overridden ones.
    """
    effective: list[EvidenceItem] = []
    for item in report.evidence:
        new_label = overrides.get((item.claim_id, item.result.id))
        effective.append(item.with_label(new_label) if new_label is not None else item)
    effective = credibility.assign_tiers(effective, registry)

    by_claim: dict[str, list[EvidenceItem]] = {claim.id: [] for claim in report.claims}
    for item in effective:
        by_claim[item.claim_id].append(item)
    verdicts = [
        aggregate_claim(claim.id, by_claim[claim.id], config) for claim in report.claims
    ]
    decide_mode = "main_claim" if config.mode == MODE_MAIN else "min_over_claims"
    main_id = report.claims[0].id if config.mode == MODE_MAIN else None
    article_verdict, article_probability = decide_article(verdicts, decide_mode, main_id)
    updated = VerificationReport(
        article=report.article,
        claims=report.claims,
        queries=report.queries,
        evidence=report.evidence,
        claim_verdicts=tuple(verdicts),
        article_verdict=article_verdict,
        article_probability=article_probability,
        pipeline_version=report.pipeline_version,
    )
    return seal(updated)
