"""Prompt templates for the five model-backed tasks.

Template bodies are format strings: {name} marks a placeholder, doubled
braces are literal braces in the rendered prompt. The texts are frozen;
changing a byte changes every request digest and invalidates recorded
transcripts.
"""

from __future__ import annotations

from dataclasses import dataclass

MAIN_CLAIM = "main_claim"
KEY_CLAIMS = "key_claims"
QUERY_GEN = "query_gen"
VERIFY = "verify"
RELEVANCE = "relevance"


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    template_text: str
    placeholders: frozenset[str]


_TEMPLATE_TEXTS = {
    MAIN_CLAIM: (
        "Given the input content below, please summarize the single key claim.\n"
        "Input content: {content}\n"
        'Please output with the follow json format {{"key_claim": XXX}}.\n'
        "Please output now:"
    ),
    KEY_CLAIMS: (
        "Given the input content below, please extract distinct key claims. "
        "The key claims should be concrete enough containing clear context so that it can be efficiently verified.\n"
        "Input content: {content}\n"
        'Please output with the follow json format {{"key_claims": [{{"claim": XXX}}, ...]}}.\n'
        "Please output now:"
    ),
    QUERY_GEN: (
        "Given the claim below, please generate a Google query which can be used to search content to verify this claim.\n"
        "Claim: {claim}\n"
        'Please output with the following JSON format {{"query": "XXX"}}\n'
        "Please output now:"
    ),
    VERIFY: (
        "Below is one web search result\n"
        "Search Result:\n"
        "{search_result}\n"
        "Below is a claim to be verified\n"
        "Claim: {claim}\n"
        "Please perform the following rules to generate an output with this json format : "
        '{{"support_or_negate_or_baseless": "support" or "negate" or "baseless", '
        '"confidence": "high" or "medium" or "low", "rationale": "XXX"}}\n'
        'Rule 1: if the search result content support the claim, set the "support_or_negate_or_baseless" field as "support", '
        "and offer a confident score and a rationale.\n"
        'Rule 2: if the search result content negate the claim, set the "support_or_negate_or_baseless" field as "negate", '
        "and offer a confident score and a rationale.\n"
        'Rule 3: if the search result content cannot either support or negate the claim, set the "support_or_negate_or_baseless" field as "baseless", '
        "and offer a confident score and a rationale.\n"
        "To clarify: if the content of the search results does not contradict the claim, but lacks some or all of the information "
        'presented in the claim, please use the label "baseless" rather than "negate".\n'
        "Please output now:"
    ),
    RELEVANCE: (
        "Below is one web search result.\n"
        "Search Result: {search_result}\n"
        "Below is a claim:\n"
        "Claim: {claim}\n"
        "Please make the following two investigations:\n"
        "1. Please check if the news article and the search result is about the same news story.\n"
        "2. Please check if the search result contains content (facts, opinions, or claims) related to the news article.\n"
        "Please output with the following json format :\n"
        '{{"about_the_same_news_story": "yes" or "no", "contains_related_content": "yes" or "no"}}\n'
        "Please output now:"
    ),
}

_PLACEHOLDERS = {
    MAIN_CLAIM: frozenset({"content"}),
    KEY_CLAIMS: frozenset({"content"}),
    QUERY_GEN: frozenset({"claim"}),
    VERIFY: frozenset({"search_result", "claim"}),
    RELEVANCE: frozenset({"search_result", "claim"}),
}

TEMPLATES = {
    name: PromptTemplate(name=name, template_text=text, placeholders=_PLACEHOLDERS[name])
    for name, text in _TEMPLATE_TEXTS.items()
}


def get_template(name: str) -> PromptTemplate:
    try:
        return TEMPLATES[name]
    except KeyError:
        raise KeyError(f"unknown prompt template: {name!r}") from None
