"""Per-result claim verification: support / negate / baseless with rationale."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import prompts
from .llm import LlmGateway
from .models import Claim, Confidence, EvidenceItem, SearchResult, VerdictLabel

logger = logging.getLogger(__name__)

FALLBACK_RATIONALE = "unparseable model output"
PRESCREEN_RATIONALE = "pre-screened: unrelated"
REASK_VERIFY = "\nThe previous output was not valid JSON. Please output now:"


@dataclass(frozen=True)
class VerifierConfig:
    prescreen: bool = False
    token_budget: int = 3000
    max_reasks: int = 2
    fan_out: int = 8


def format_result_text(result: SearchResult, token_budget: int = 3000) -> str:
    """Render a search result for the model, truncating the body head-first."""
    words = result.snippet_or_body.split()
    if len(words) > token_budget:
        body = " ".join(words[:token_budget])
    else:
        body = result.snippet_or_body
    return f"Title: {result.title}\nDomain: {result.domain}\nContent: {body}"


def verify_pair(
    gateway: LlmGateway,
    claim: Claim,
    result: SearchResult,
    config: VerifierConfig = VerifierConfig(),
) -> EvidenceItem:
    """Judge one (claim, search result) pair.

    Never raises for bad model output: after the re-ask budget is spent the
    item falls back to (baseless, low) with a fixed rationale, the neutral
    bucket for content that proves nothing either way.
    """
    bindings = {
        "search_result": format_result_text(result, config.token_budget),
        "claim": claim.text,
    }
    response = gateway.ask(prompts.VERIFY, bindings)
    reasks = 0
    while not response.parse_ok and reasks < config.max_reasks:
        reasks += 1
        logger.info(
            "verify re-ask %d for claim %s result %s: %s",
            reasks, claim.id, result.id, response.parse_error,
        )
        response = gateway.ask(
            prompts.VERIFY, bindings, reask_suffix=REASK_VERIFY * reasks
        )
    if response.parse_ok:
        label, confidence, rationale = response.parsed
    else:
        label, confidence, rationale = VerdictLabel.BASELESS, Confidence.LOW, FALLBACK_RATIONALE
    return EvidenceItem(
        claim_id=claim.id,
        result=result,
        label=label,
        confidence=confidence,
        rationale=rationale,
    )


def relevance_check(
    gateway: LlmGateway, claim: Claim, result: SearchResult, token_budget: int = 3000
) -> tuple[bool, bool]:
    """Pre-screen one result: (same news story?, related content?).

    Fails open: unparseable output counts as related so the pair still goes
    through full verification.
    """
    bindings = {
        "search_result": format_result_text(result, token_budget),
        "claim": claim.text,
    }
    response = gateway.ask(prompts.RELEVANCE, bindings)
    if not response.parse_ok:
        logger.info("relevance parse failure for %s/%s: fail-open", claim.id, result.id)
        return False, True
    return response.parsed


def verify_claim(
    gateway: LlmGateway,
    claim: Claim,
    pool: list[SearchResult],
    config: VerifierConfig = VerifierConfig(),
) -> list[EvidenceItem]:
    """Verify a claim against every result in its evidence pool.

    Pairs fan out concurrently (bounded by the gateway's in-flight limit);
    the output is canonically sorted so concurrency never changes content.
    Exactly one evidence item comes back per pool entry.
    """
    if not pool:
        return []

    def judge(result: SearchResult) -> EvidenceItem:
        if config.prescreen:
            _, related = relevance_check(gateway, claim, result, config.token_budget)
            if not related:
                return EvidenceItem(
                    claim_id=claim.id,
                    result=result,
                    label=VerdictLabel.BASELESS,
                    confidence=Confidence.HIGH,
                    rationale=PRESCREEN_RATIONALE,
                )
        return verify_pair(gateway, claim, result, config)

    if len(pool) == 1:
        items = [judge(pool[0])]
    else:
        with ThreadPoolExecutor(max_workers=min(config.fan_out, len(pool))) as executor:
            items = list(executor.map(judge, pool))
    items.sort(key=lambda e: (e.claim_id, e.result.domain, e.result.url, e.result.query_rank))
    return items
