"""Gateway: prompt rendering, schema parsing, replay, retries, concurrency."""

import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from claimcheck import prompts
from claimcheck.llm import (
    LlmGateway,
    MissingPlaceholderError,
    ProviderTranscript,
    ReplayProvider,
    TranscriptMissError,
    TransientProviderError,
    TransportExhaustedError,
    complete,
    parse_schema,
    render,
    request_digest,
)
from claimcheck.models import Confidence, VerdictLabel
from claimcheck.prompts import get_template

# Expected render output written out by hand from the template text, so a
# substitution bug cannot hide behind its own implementation.
VERIFY_GOLDEN = (
    "Below is one web search result\n"
    "Search Result:\n"
    "Title: Bridge shut\n"
    "Below is a claim to be verified\n"
    "Claim: The bridge closed on Monday.\n"
    "Please perform the following rules to generate an output with this json format : "
    '{"support_or_negate_or_baseless": "support" or "negate" or "baseless", '
    '"confidence": "high" or "medium" or "low", "rationale": "XXX"}\n'
    'Rule 1: if the search result content support the claim, set the "support_or_negate_or_baseless" field as "support", '
    "and offer a confident score and a rationale.\n"
    'Rule 2: if the search result content negate the claim, set the "support_or_negate_or_baseless" field as "negate", '
    "and offer a confident score and a rationale.\n"
    'Rule 3: if the search result content cannot either support or negate the claim, set the "support_or_negate_or_baseless" field as "baseless", '
    "and offer a confident score and a rationale.\n"
    "To clarify: if the content of the search results does not contradict the claim, but lacks some or all of the information "
    'presented in the claim, please use the label "baseless" rather than "negate".\n'
    "Please output now:"
)


class TestRender:
    def test_main_claim_substitution(self):
        out = render(get_template(prompts.MAIN_CLAIM), {"content": "X"})
        assert "Input content: X\n" in out
        assert out.startswith("Given the input content below, please summarize the single key claim.")
        assert '{"key_claim": XXX}' in out
        assert out.endswith("Please output now:")

    def test_missing_placeholder_names_it(self):
        with pytest.raises(MissingPlaceholderError) as err:
            render(get_template(prompts.QUERY_GEN), {"content": "X"})
        assert err.value.placeholder == "claim"

    def test_verify_render_matches_golden(self):
        out = render(
            get_template(prompts.VERIFY),
            {"search_result": "Title: Bridge shut", "claim": "The bridge closed on Monday."},
        )
        assert out == VERIFY_GOLDEN

    def test_braces_in_template_survive_verbatim(self):
        out = render(get_template(prompts.KEY_CLAIMS), {"content": "C"})
        assert '{"key_claims": [{"claim": XXX}, ...]}' in out

    @given(
        a=st.text(alphabet=st.characters(blacklist_characters="{}\n"), min_size=1, max_size=30),
        b=st.text(alphabet=st.characters(blacklist_characters="{}\n"), min_size=1, max_size=30),
    )
    def test_injective_in_bindings(self, a, b):
        template = get_template(prompts.QUERY_GEN)
        if a != b:
            assert render(template, {"claim": a}) != render(template, {"claim": b})


class TestReplay:
    def test_known_digest_returns_recorded_text(self):
        digest = request_digest("verify", "prompt text")
        provider = ReplayProvider(ProviderTranscript(entries=[(digest, "recorded")]))
        response = complete("prompt text", provider, template_name="verify")
        assert response.raw_text == "recorded"

    def test_unknown_digest_is_transcript_miss(self):
        provider = ReplayProvider(ProviderTranscript())
        with pytest.raises(TranscriptMissError):
            complete("prompt text", provider, template_name="verify")

    def test_two_runs_byte_identical(self):
        entries = [
            (request_digest("query_gen", f"p{i}"), f"resp-{i}") for i in range(5)
        ]
        provider = ReplayProvider(ProviderTranscript(entries=entries))
        run1 = [complete(f"p{i}", provider, template_name="query_gen").raw_text for i in range(5)]
        run2 = [complete(f"p{i}", provider, template_name="query_gen").raw_text for i in range(5)]
        assert run1 == run2 == [f"resp-{i}" for i in range(5)]

    def test_duplicate_digests_rejected(self):
        with pytest.raises(ValueError):
            ProviderTranscript(entries=[("d1", "a"), ("d1", "b")])

    def test_transcript_file_round_trip(self, tmp_path):
        transcript = ProviderTranscript(entries=[("d1", "a"), ("d2", "line\nbreak")])
        path = tmp_path / "t.jsonl"
        transcript.save(path)
        assert ProviderTranscript.load(path).entries == transcript.entries


class FlakyProvider:
    """Fails a fixed number of times, then succeeds; counts attempts."""

    def __init__(self, failures: int):
        self.failures = failures
        self.attempts = 0

    def complete_once(self, digest, prompt):
        self.attempts += 1
        if self.attempts <= self.failures:
            raise TransientProviderError("injected fault")
        return "ok"


class TestRetries:
    def test_two_failures_then_success_with_three_attempts(self):
        provider = FlakyProvider(failures=2)
        response = complete("p", provider, template_name="verify", max_retries=3)
        assert response.raw_text == "ok"
        assert provider.attempts == 3

    def test_exhaustion_raises(self):
        provider = FlakyProvider(failures=5)
        with pytest.raises(TransportExhaustedError):
            complete("p", provider, template_name="verify", max_retries=3)
        assert provider.attempts == 3


class TestParseSchema:
    def test_verify_happy_path(self):
        raw = '{"support_or_negate_or_baseless":"support","confidence":"high","rationale":"R"}'
        response = parse_schema(prompts.VERIFY, raw)
        assert response.parse_ok
        assert response.parsed == (VerdictLabel.SUPPORT, Confidence.HIGH, "R")

    def test_verify_label_outside_enum_fails(self):
        raw = '{"support_or_negate_or_baseless":"maybe","confidence":"high","rationale":"R"}'
        assert not parse_schema(prompts.VERIFY, raw).parse_ok

    def test_verify_confidence_outside_enum_fails(self):
        raw = '{"support_or_negate_or_baseless":"support","confidence":"sure","rationale":"R"}'
        assert not parse_schema(prompts.VERIFY, raw).parse_ok

    def test_verify_support_needs_rationale(self):
        raw = '{"support_or_negate_or_baseless":"support","confidence":"high","rationale":""}'
        assert not parse_schema(prompts.VERIFY, raw).parse_ok

    def test_key_claims_in_markdown_fence(self):
        raw = 'Here you go:\n```json\n{"key_claims":[{"claim":"A happened on Monday."},{"claim":"B happened on Tuesday."}]}\n```'
        response = parse_schema(prompts.KEY_CLAIMS, raw)
        assert response.parse_ok
        assert response.parsed == ["A happened on Monday.", "B happened on Tuesday."]

    def test_query_accepts_string_or_list(self):
        single = parse_schema(prompts.QUERY_GEN, '{"query": "bridge collapse date"}')
        assert single.parsed == ["bridge collapse date"]
        multi = parse_schema(prompts.QUERY_GEN, '{"query": ["q1", "q2", "q3", "q4", "q5"]}')
        assert multi.parsed == ["q1", "q2", "q3", "q4", "q5"]

    def test_relevance_yes_no(self):
        raw = '{"about_the_same_news_story":"yes","contains_related_content":"no"}'
        assert parse_schema(prompts.RELEVANCE, raw).parsed == (True, False)

    def test_prose_without_json_fails(self):
        assert not parse_schema(prompts.MAIN_CLAIM, "I cannot answer that.").parse_ok

    def test_first_object_wins_over_later_ones(self):
        raw = 'x {"key_claim": "First claim here today."} and {"key_claim": "Second"}'
        assert parse_schema(prompts.MAIN_CLAIM, raw).parsed == "First claim here today."


class CountingProvider:
    """Tracks peak concurrent complete_once calls."""

    def __init__(self):
        self.lock = threading.Lock()
        self.active = 0
        self.peak = 0

    def complete_once(self, digest, prompt):
        with self.lock:
            self.active += 1
            self.peak = max(self.peak, self.active)
        import time

        time.sleep(0.005)
        with self.lock:
            self.active -= 1
        return '{"query": "q"}'


def test_gateway_bounds_in_flight_requests():
    provider = CountingProvider()
    gateway = LlmGateway(provider, max_in_flight=3)
    threads = [
        threading.Thread(target=gateway.complete, args=("query_gen", f"p{i}"))
        for i in range(12)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert provider.peak <= 3


def test_rate_limiter_spaces_out_request_starts():
    import time

    from claimcheck.llm import RateLimiter

    limiter = RateLimiter(rate_per_s=200)  # 5ms spacing
    start = time.monotonic()
    for _ in range(5):
        limiter.wait()
    elapsed = time.monotonic() - start
    assert elapsed >= 4 * 0.005 * 0.9  # four gaps, small scheduling slack

    unlimited = RateLimiter(rate_per_s=0)
    start = time.monotonic()
    for _ in range(100):
        unlimited.wait()
    assert time.monotonic() - start < 0.05
