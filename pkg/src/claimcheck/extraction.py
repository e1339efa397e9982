"""Claim extraction: one main claim plus the salient key claims per article."""

from __future__ import annotations

import logging

from . import prompts
from .llm import LlmGateway
from .models import Claim, Granularity, NewsArticle, claim_id_for, is_self_contained

logger = logging.getLogger(__name__)

# Bounds downstream search cost; re-ask suffixes give follow-up prompts a
# distinct request digest so replay transcripts can hold both exchanges.
MAX_KEY_CLAIMS = 16
REASK_SELF_CONTAINED = (
    "\nThe previous claim was not self-contained. Restate it naming every subject"
    " explicitly, without pronouns. Please output now:"
)
REASK_UNPARSEABLE = "\nThe previous output was not valid JSON. Please output now:"


class ExtractionError(Exception):
    pass


class EmptyArticleError(ExtractionError):
    pass


def _article_content(article: NewsArticle) -> str:
    if article.title.strip():
        return f"{article.title}\n\n{article.body}"
    return article.body


def extract_main_claim(gateway: LlmGateway, article: NewsArticle) -> Claim:
    """Summarize the article into its single main claim.

    A claim that fails the self-containedness check (or unparseable output)
    gets exactly one re-ask before the extraction fails.
    """
    if not article.body.strip():
        raise EmptyArticleError(f"article {article.id} has an empty body")
    bindings = {"content": _article_content(article)}
    response = gateway.ask(prompts.MAIN_CLAIM, bindings)
    if response.parse_ok and is_self_contained(response.parsed):
        text = response.parsed
    else:
        suffix = REASK_SELF_CONTAINED if response.parse_ok else REASK_UNPARSEABLE
        logger.info("main claim re-ask for article %s: %s", article.id, response.parse_error or "not self-contained")
        response = gateway.ask(prompts.MAIN_CLAIM, bindings, reask_suffix=suffix)
        if not response.parse_ok or not is_self_contained(response.parsed):
            raise ExtractionError(
                f"article {article.id}: main claim extraction failed after re-ask"
            )
        text = response.parsed
    return Claim(
        id=claim_id_for(article.id, Granularity.MAIN, 0),
        article_id=article.id,
        text=text,
        granularity=Granularity.MAIN,
        ordinal=0,
    )


def extract_key_claims(gateway: LlmGateway, article: NewsArticle) -> list[Claim]:
    """Extract all salient key claims, deduplicated and capped.

    Model output order is preserved; exact duplicates (case-folded) and
    non-self-contained texts are dropped, then ordinals are assigned
    densely from 0. If nothing usable remains, one re-ask is issued.
    """
    if not article.body.strip():
        raise EmptyArticleError(f"article {article.id} has an empty body")
    bindings = {"content": _article_content(article)}
    texts = _usable_claims(gateway.ask(prompts.KEY_CLAIMS, bindings))
    if not texts:
        logger.info("key claims re-ask for article %s", article.id)
        texts = _usable_claims(gateway.ask(prompts.KEY_CLAIMS, bindings, reask_suffix=REASK_UNPARSEABLE))
    if not texts:
        raise ExtractionError(f"article {article.id}: key claim extraction failed after re-ask")
    return [
        Claim(
            id=claim_id_for(article.id, Granularity.KEY, ordinal),
            article_id=article.id,
            text=text,
            granularity=Granularity.KEY,
            ordinal=ordinal,
        )
        for ordinal, text in enumerate(texts[:MAX_KEY_CLAIMS])
    ]


def _usable_claims(response) -> list[str]:
    if not response.parse_ok:
        return []
    seen: set[str] = set()
    texts: list[str] = []
    for text in response.parsed:
        folded = text.casefold()
        if folded in seen or not is_self_contained(text):
            continue
        seen.add(folded)
        texts.append(text)
    return texts
