"""Uniform gateway to chat-completion providers.

Carries the frozen prompt templates, parses their declared output schemas,
and supports three provider kinds: a live HTTP provider (OpenAI-style chat
completions, deterministic decoding), a replay provider that answers from a
recorded transcript keyed by request digest, and a recording wrapper that
captures transcripts. Replay makes the whole pipeline run offline and
byte-for-byte reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol

import httpx

from . import prompts
from .models import Confidence, VerdictLabel
from .prompts import PromptTemplate, get_template


class GatewayError(Exception):
    """Base class for gateway failures."""


class MissingPlaceholderError(GatewayError):
    def __init__(self, placeholder: str):
        super().__init__(f"missing placeholder binding: {placeholder!r}")
        self.placeholder = placeholder


class TransientProviderError(GatewayError):
    """Transport-level failure worth retrying (timeouts, 5xx, 429)."""


class TransportExhaustedError(GatewayError):
    def __init__(self, attempts: int, last_error: Exception | None = None):
        super().__init__(f"provider failed after {attempts} attempts: {last_error}")
        self.attempts = attempts
        self.last_error = last_error


class TranscriptMissError(GatewayError):
    def __init__(self, digest: str):
        super().__init__(f"no transcript entry for request digest {digest}")
        self.digest = digest


@dataclass
class LlmResponse:
    raw_text: str
    parsed: Any = None
    parse_ok: bool = False
    parse_error: str | None = None


_PLACEHOLDER_RE = re.compile(r"\{\{|\}\}|\{(\w+)\}")


def render(template: PromptTemplate, bindings: dict[str, str]) -> str:
    """Substitute placeholder bindings into the template verbatim.

    Doubled braces in the template are literal braces in the output;
    nothing else is touched. Raises MissingPlaceholderError naming the
    first unbound placeholder.
    """

    def _sub(match: re.Match[str]) -> str:
        token = match.group(0)
        if token == "{{":
            return "{"
        if token == "}}":
            return "}"
        name = match.group(1)
        if name not in bindings:
            raise MissingPlaceholderError(name)
        return bindings[name]

    return _PLACEHOLDER_RE.sub(_sub, template.template_text)


def request_digest(template_name: str, prompt: str) -> str:
    """Stable replay key: hash of the template name and the rendered prompt."""
    h = hashlib.sha256()
    h.update(template_name.encode("utf-8"))
    h.update(b"\x00")
    h.update(prompt.encode("utf-8"))
    return h.hexdigest()


class Provider(Protocol):
    def complete_once(self, digest: str, prompt: str) -> str:
        """Single completion attempt; may raise TransientProviderError."""
        ...


@dataclass
class ProviderTranscript:
    """Ordered record of (request_digest, response_text) pairs."""

    entries: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._index = {digest: text for digest, text in self.entries}
        if len(self._index) != len(self.entries):
            raise ValueError("transcript has duplicate request digests")

    def lookup(self, digest: str) -> str:
        try:
            return self._index[digest]
        except KeyError:
            raise TranscriptMissError(digest) from None

    def append(self, digest: str, response_text: str) -> None:
        if digest in self._index:
            if self._index[digest] != response_text:
                raise ValueError(f"conflicting transcript entry for {digest}")
            return
        self.entries.append((digest, response_text))
        self._index[digest] = response_text

    @classmethod
    def load(cls, path: str | Path) -> "ProviderTranscript":
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            entries.append((row["request_digest"], row["response_text"]))
        return cls(entries=entries)

    def save(self, path: str | Path) -> None:
        lines = [
            json.dumps({"request_digest": d, "response_text": t}, ensure_ascii=False)
            for d, t in self.entries
        ]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class ReplayProvider:
    """Answers from a recorded transcript; unknown digests are hard errors."""

    def __init__(self, transcript: ProviderTranscript):
        self.transcript = transcript

    def complete_once(self, digest: str, prompt: str) -> str:
        return self.transcript.lookup(digest)


class RecordingProvider:
    """Wraps a provider and captures every exchange into a transcript."""

    def __init__(self, inner: Provider):
        self.inner = inner
        self.transcript = ProviderTranscript()
        self._lock = threading.Lock()

    def complete_once(self, digest: str, prompt: str) -> str:
        response = self.inner.complete_once(digest, prompt)
        with self._lock:
            self.transcript.append(digest, response)
        return response


class LiveHttpProvider:
    """OpenAI-style chat-completions provider.

    Decoding is pinned to temperature 0 so repeated runs are as stable as
    the upstream model allows. The API key is read from the environment,
    never from config files.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "CLAIMCHECK_API_KEY",
        timeout_s: float = 60.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s

    def complete_once(self, digest: str, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        try:
            response = httpx.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout_s)
        except httpx.HTTPError as exc:
            raise TransientProviderError(str(exc)) from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientProviderError(f"HTTP {response.status_code}")
        if response.status_code != 200:
            raise GatewayError(f"provider returned HTTP {response.status_code}: {response.text[:200]}")
        body = response.json()
        return body["choices"][0]["message"]["content"]


def complete(
    prompt: str,
    provider: Provider,
    template_name: str = "",
    max_retries: int = 3,
) -> LlmResponse:
    """Run one completion with retries on transient transport failures.

    max_retries is the total attempt budget. Transcript misses are not
    transient and propagate immediately.
    """
    digest = request_digest(template_name, prompt)
    last_error: Exception | None = None
    for _ in range(max(1, max_retries)):
        try:
            return LlmResponse(raw_text=provider.complete_once(digest, prompt))
        except TransientProviderError as exc:
            last_error = exc
    raise TransportExhaustedError(max(1, max_retries), last_error)


def _first_json_object(raw: str) -> dict[str, Any] | None:
    """Extract the first well-formed JSON object embedded in raw text.

    Providers routinely wrap output in prose or markdown fences; scanning
    for balanced candidates from each opening brace is robust to that.
    """
    decoder = json.JSONDecoder()
    idx = raw.find("{")
    while idx != -1:
        try:
            value, _ = decoder.raw_decode(raw, idx)
        except json.JSONDecodeError:
            idx = raw.find("{", idx + 1)
            continue
        if isinstance(value, dict):
            return value
        idx = raw.find("{", idx + 1)
    return None


def _parse_main_claim(obj: dict[str, Any]) -> str:
    value = obj.get("key_claim")
    if not isinstance(value, str) or not value.strip():
        raise ValueError('missing or empty "key_claim"')
    return value.strip()


def _parse_key_claims(obj: dict[str, Any]) -> list[str]:
    value = obj.get("key_claims")
    if not isinstance(value, list):
        raise ValueError('missing "key_claims" list')
    claims: list[str] = []
    for entry in value:
        if isinstance(entry, dict):
            text = entry.get("claim")
        else:
            text = entry
        if isinstance(text, str) and text.strip():
            claims.append(text.strip())
    if not claims:
        raise ValueError("no claims in output")
    return claims


def _parse_query(obj: dict[str, Any]) -> list[str]:
    value = obj.get("query", obj.get("queries"))
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list):
        raise ValueError('missing "query"')
    queries = [q.strip() for q in value if isinstance(q, str) and q.strip()]
    if not queries:
        raise ValueError("no queries in output")
    return queries


def _parse_verify(obj: dict[str, Any]) -> tuple[VerdictLabel, Confidence, str]:
    label = VerdictLabel.parse(str(obj.get("support_or_negate_or_baseless")))
    confidence = Confidence.parse(str(obj.get("confidence")))
    rationale = obj.get("rationale", "")
    if not isinstance(rationale, str):
        raise ValueError("rationale is not text")
    if label in (VerdictLabel.SUPPORT, VerdictLabel.NEGATE) and not rationale.strip():
        raise ValueError(f"empty rationale for label {label.value}")
    return label, confidence, rationale.strip()


def _parse_relevance(obj: dict[str, Any]) -> tuple[bool, bool]:
    def yes_no(key: str) -> bool:
        value = str(obj.get(key)).strip().lower()
        if value not in ("yes", "no"):
            raise ValueError(f"{key} is not yes/no")
        return value == "yes"

    return yes_no("about_the_same_news_story"), yes_no("contains_related_content")


_PARSERS = {
    prompts.MAIN_CLAIM: _parse_main_claim,
    prompts.KEY_CLAIMS: _parse_key_claims,
    prompts.QUERY_GEN: _parse_query,
    prompts.VERIFY: _parse_verify,
    prompts.RELEVANCE: _parse_relevance,
}


def parse_schema(name: str, raw: str) -> LlmResponse:
    """Validate raw model output against the template's declared schema.

    Enum fields are closed: a verdict outside support/negate/baseless or a
    confidence outside high/medium/low is a parse failure, never coerced.
    """
    parser = _PARSERS.get(name)
    if parser is None:
        raise KeyError(f"unknown prompt template: {name!r}")
    obj = _first_json_object(raw)
    if obj is None:
        return LlmResponse(raw_text=raw, parse_error="no JSON object found")
    try:
        parsed = parser(obj)
    except ValueError as exc:
        return LlmResponse(raw_text=raw, parse_error=str(exc))
    return LlmResponse(raw_text=raw, parsed=parsed, parse_ok=True)


class RateLimiter:
    """Serializes request starts to at most rate_per_s per second."""

    def __init__(self, rate_per_s: float):
        self.min_interval = 1.0 / rate_per_s if rate_per_s > 0 else 0.0
        self._lock = threading.Lock()
        self._next_start = 0.0

    def wait(self) -> None:
        if self.min_interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            start = max(now, self._next_start)
            self._next_start = start + self.min_interval
        delay = start - now
        if delay > 0:
            time.sleep(delay)


class LlmGateway:
    """Provider handle plus concurrency discipline and schema parsing.

    Safe for concurrent use: a semaphore bounds in-flight requests and an
    optional rate limiter spaces out request starts.
    """

    def __init__(
        self,
        provider: Provider,
        max_in_flight: int = 4,
        max_retries: int = 3,
        rate_limit_per_s: float = 0.0,
    ):
        self.provider = provider
        self.max_retries = max_retries
        self._slots = threading.Semaphore(max_in_flight)
        self._limiter = RateLimiter(rate_limit_per_s)

    def render(self, name: str, bindings: dict[str, str]) -> str:
        return render(get_template(name), bindings)

    def complete(self, name: str, prompt: str) -> LlmResponse:
        with self._slots:
            self._limiter.wait()
            return complete(prompt, self.provider, template_name=name, max_retries=self.max_retries)

    def ask(self, name: str, bindings: dict[str, str], reask_suffix: str = "") -> LlmResponse:
        """Render, complete, and parse in one step.

        reask_suffix lets callers issue follow-up asks that carry a distinct
        request digest (and therefore a distinct transcript entry).
        """
        prompt = self.render(name, bindings) + reask_suffix
        response = self.complete(name, prompt)
        return parse_schema(name, response.raw_text)
