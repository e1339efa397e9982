"""Query generation and evidence retrieval.

Backends are pluggable. The fixture-corpus backend ranks documents by
case-folded token overlap with the query and is fully deterministic, which
is what offline tests and replay runs use; the web backend does a plain
HTTP GET against a configured search API. All backend traffic can be
recorded to a transcript and replayed later.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Protocol

import httpx

from . import prompts
from .llm import LlmGateway
from .models import Claim, SearchQuery, SearchResult, registrable_domain, tokenize

logger = logging.getLogger(__name__)

MAX_QUERIES_PER_CLAIM = 3
REASK_QUERY = "\nThe previous output was not valid JSON. Please output now:"

# Fixture and replay results carry a fixed timestamp so that repeated runs
# serialize to identical bytes.
FIXED_RETRIEVED_AT = datetime(2000, 1, 1, tzinfo=timezone.utc)

DEFAULT_BLOCKED_DOMAINS = frozenset(
    {"politifact.com", "snopes.com", "factcheck.org", "fullfact.org"}
)
DEFAULT_BLOCKED_URL_SUBSTRINGS = frozenset({"/fact-check", "/factcheck"})


class RetrievalError(Exception):
    pass


class CorpusMissingError(RetrievalError):
    pass


class BackendUnreachableError(RetrievalError):
    pass


class QueryGenerationError(RetrievalError):
    pass


@dataclass(frozen=True)
class FilterPolicy:
    """Drops fact-checking and otherwise blocked content from search results."""

    blocked_domains: frozenset[str] = DEFAULT_BLOCKED_DOMAINS
    blocked_url_substrings: frozenset[str] = DEFAULT_BLOCKED_URL_SUBSTRINGS
    max_results_per_query: int = 10

    def __post_init__(self) -> None:
        if not 0 < self.max_results_per_query <= 50:
            raise ValueError("max_results_per_query must be in (0, 50]")

    def allows(self, url: str) -> bool:
        if registrable_domain(url) in self.blocked_domains:
            return False
        return not any(sub in url for sub in self.blocked_url_substrings)


class SearchBackend(Protocol):
    """Returns ranked documents as dicts with id, url, title, body keys."""

    name: str

    def search(self, query_text: str) -> list[dict[str, Any]]: ...

    def result_timestamp(self) -> datetime: ...


class FixtureCorpusBackend:
    """Deterministic search over a JSONL corpus of {id, url, domain, title, body}.

    A document matches when it shares at least one case-folded token with
    the query; score is the number of distinct shared tokens, ties broken
    by document id.
    """

    def __init__(self, corpus_path: str | Path, name: str = "fixture"):
        self.name = name
        path = Path(corpus_path)
        if not path.is_file():
            raise CorpusMissingError(f"corpus file not readable: {path}")
        self.documents: list[dict[str, Any]] = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                self.documents.append(json.loads(line))
        self._doc_tokens = [
            frozenset(tokenize(f"{doc.get('title', '')} {doc.get('body', '')}"))
            for doc in self.documents
        ]

    def search(self, query_text: str) -> list[dict[str, Any]]:
        query_tokens = set(tokenize(query_text))
        scored = []
        for doc, tokens in zip(self.documents, self._doc_tokens):
            score = len(query_tokens & tokens)
            if score > 0:
                scored.append((score, doc))
        scored.sort(key=lambda pair: (-pair[0], pair[1]["id"]))
        return [doc for _, doc in scored]

    def result_timestamp(self) -> datetime:
        return FIXED_RETRIEVED_AT


class WebApiBackend:
    """HTTP GET search backend (query and key passed as URL parameters).

    Expects a JSON body with an "items" list of {link|url, title, snippet}.
    The API key comes from an environment variable named in the config.
    """

    def __init__(
        self,
        endpoint: str,
        name: str = "web",
        query_param: str = "q",
        key_param: str = "key",
        api_key_env: str = "",
        extra_params: dict[str, str] | None = None,
        timeout_s: float = 20.0,
    ):
        import os

        self.name = name
        self.endpoint = endpoint
        self.query_param = query_param
        self.key_param = key_param
        self.api_key = os.environ.get(api_key_env, "") if api_key_env else ""
        self.extra_params = dict(extra_params or {})
        self.timeout_s = timeout_s

    def search(self, query_text: str) -> list[dict[str, Any]]:
        params = {self.query_param: query_text, **self.extra_params}
        if self.api_key:
            params[self.key_param] = self.api_key
        try:
            response = httpx.get(self.endpoint, params=params, timeout=self.timeout_s)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise BackendUnreachableError(f"{self.name}: {exc}") from exc
        docs = []
        for item in response.json().get("items", []):
            url = item.get("link") or item.get("url") or ""
            if not url:
                continue
            docs.append(
                {
                    "id": hashlib.sha256(url.encode("utf-8")).hexdigest()[:16],
                    "url": url,
                    "title": item.get("title", ""),
                    "body": item.get("snippet", "") or item.get("body", ""),
                }
            )
        return docs

    def result_timestamp(self) -> datetime:
        return datetime.now(timezone.utc)


def _query_digest(backend_name: str, query_text: str) -> str:
    h = hashlib.sha256()
    h.update(backend_name.encode("utf-8"))
    h.update(b"\x00")
    h.update(query_text.encode("utf-8"))
    return h.hexdigest()


class RecordingSearchBackend:
    """Wraps a backend and records every query's documents for replay."""

    def __init__(self, inner: SearchBackend):
        self.inner = inner
        self.name = inner.name
        self.entries: list[dict[str, Any]] = []
        self._seen: set[str] = set()
        self._lock = threading.Lock()

    def search(self, query_text: str) -> list[dict[str, Any]]:
        docs = self.inner.search(query_text)
        digest = _query_digest(self.name, query_text)
        with self._lock:
            if digest not in self._seen:
                self._seen.add(digest)
                self.entries.append(
                    {"query_digest": digest, "query": query_text, "documents": docs}
                )
        return docs

    def result_timestamp(self) -> datetime:
        return FIXED_RETRIEVED_AT

    def save(self, path: str | Path) -> None:
        lines = [json.dumps(entry, ensure_ascii=False) for entry in self.entries]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class ReplaySearchBackend:
    """Replays recorded backend traffic; unknown queries are hard errors."""

    def __init__(self, transcript_path: str | Path, name: str = "web"):
        self.name = name
        self._by_digest: dict[str, list[dict[str, Any]]] = {}
        path = Path(transcript_path)
        if not path.is_file():
            raise CorpusMissingError(f"search transcript not readable: {path}")
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                entry = json.loads(line)
                self._by_digest[entry["query_digest"]] = entry["documents"]

    def search(self, query_text: str) -> list[dict[str, Any]]:
        digest = _query_digest(self.name, query_text)
        if digest not in self._by_digest:
            raise BackendUnreachableError(f"no recorded results for query {query_text!r}")
        return self._by_digest[digest]

    def result_timestamp(self) -> datetime:
        return FIXED_RETRIEVED_AT


def generate_queries(gateway: LlmGateway, claim: Claim, max_reasks: int = 1) -> list[SearchQuery]:
    """Generate up to three search queries for one claim.

    Duplicate texts (case-folded) collapse to the first occurrence and the
    list is truncated to three, ranks assigned densely from 0.
    """
    bindings = {"claim": claim.text}
    response = gateway.ask(prompts.QUERY_GEN, bindings)
    asked = 1
    while not response.parse_ok and asked <= max_reasks:
        logger.info("query re-ask for claim %s: %s", claim.id, response.parse_error)
        response = gateway.ask(prompts.QUERY_GEN, bindings, reask_suffix=REASK_QUERY)
        asked += 1
    if not response.parse_ok:
        raise QueryGenerationError(f"claim {claim.id}: query generation failed after re-asks")
    seen: set[str] = set()
    texts: list[str] = []
    for text in response.parsed:
        folded = text.casefold()
        if folded in seen:
            continue
        seen.add(folded)
        texts.append(text)
    return [
        SearchQuery(claim_id=claim.id, text=text, rank=rank)
        for rank, text in enumerate(texts[:MAX_QUERIES_PER_CLAIM])
    ]


def execute_query(
    query: SearchQuery, backend: SearchBackend, policy: FilterPolicy
) -> list[SearchResult]:
    """Run one query against one backend, applying the filter policy.

    Blocked documents are dropped before the per-query cap so they never
    consume result slots.
    """
    timestamp = backend.result_timestamp()
    results: list[SearchResult] = []
    for doc in backend.search(query.text):
        url = doc["url"]
        if not policy.allows(url):
            continue
        body = doc.get("body", "") or doc.get("snippet_or_body", "")
        results.append(
            SearchResult(
                id=str(doc["id"]),
                query_rank=query.rank,
                url=url,
                domain=registrable_domain(url),
                title=doc.get("title", ""),
                snippet_or_body=body,
                retrieved_at=timestamp,
            )
        )
        if len(results) >= policy.max_results_per_query:
            break
    return results


def gather_evidence_pool(
    queries: list[SearchQuery],
    backends: list[SearchBackend],
    policy: FilterPolicy,
    min_relevant: int = 8,
) -> list[SearchResult]:
    """Execute queries in rank order and pool distinct results.

    Stops early once the pool holds min_relevant distinct results (the
    shortest query sequence that gathers enough material). Deduplicates by
    URL, then by (domain, case-folded title). Backend failures on one query
    only abort the run when no query succeeded at all.
    """
    pool: list[SearchResult] = []
    seen_urls: set[str] = set()
    seen_titles: set[tuple[str, str]] = set()
    errors: list[Exception] = []
    any_success = False
    for query in sorted(queries, key=lambda q: q.rank):
        if len(pool) >= min_relevant:
            break
        for backend in backends:
            try:
                results = execute_query(query, backend, policy)
                any_success = True
            except RetrievalError as exc:
                logger.warning("query %r failed on backend %s: %s", query.text, backend.name, exc)
                errors.append(exc)
                continue
            for result in results:
                if result.url in seen_urls:
                    continue
                title_key = (result.domain, result.title.casefold())
                if result.title and title_key in seen_titles:
                    continue
                seen_urls.add(result.url)
                seen_titles.add(title_key)
                pool.append(result)
    if errors and not any_success:
        raise BackendUnreachableError(f"all queries failed: {errors[0]}")
    return pool
