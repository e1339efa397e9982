"""Build the frozen replay fixtures under fixtures/.

Runs the real pipeline against a scripted provider and a hand-crafted
corpus, records every model exchange, and freezes the transcript plus the
expected shape (claims, pool sizes, label histograms, verdicts) into
meta.json. Tests replay these files; regenerate with:

    python scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import re
import sys
from collections import Counter
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from claimcheck.credibility import CredibilityRegistry
from claimcheck.llm import LlmGateway, RecordingProvider
from claimcheck.models import NewsArticle, VerdictLabel
from claimcheck.pipeline import PipelineConfig, run_pipeline
from claimcheck.retrieval import FilterPolicy, FixtureCorpusBackend

FIXTURES = REPO / "fixtures"

# ---------------------------------------------------------------------------
# Choline fixture: a health-scare article whose first key claim gathers a
# pool of 18 results (10 + 10 across two queries, 2 shared) labeled
# 14 baseless / 4 support.
# ---------------------------------------------------------------------------

ARTICLE = {
    "id": "choline-scare",
    "title": "Scientists Warn Eggs Are Quietly Triggering a Surge in Dangerous Blood Clots",
    "body": (
        "Health influencers are sounding the alarm over the humble breakfast egg, "
        "claiming that a nutrient hiding in every yolk is silently thickening the blood "
        "of millions.\n\n"
        "At the center of the storm is choline. A study conducted by Cleveland Clinic "
        "suggested that choline could make the blood more prone to clotting.\n\n"
        "Choline is deemed an essential nutrient that supports various bodily functions, "
        "including cellular growth and metabolism. It is also sold in over-the-counter "
        "dietary supplements in the United States, and health authorities recommend it "
        "as part of a balanced diet for optimal health.\n\n"
        "Researchers found that consuming choline in high concentrations could lead to "
        "blood clotting. The interaction between choline and gut bacteria produces TMAO, "
        "which has been linked to an increased risk of blood clots, heart attack, and "
        "stroke.\n\n"
        "Egg yolks are among the richest dietary sources of choline in the American "
        "diet, which is why the warnings have focused on eggs specifically.\n\n"
        "The 2017 Cleveland Clinic study measured TMAO levels in participants who took "
        "choline supplements, and the numbers reportedly jumped within weeks.\n\n"
        "Skeptics note that the original research concerned concentrated supplements "
        "rather than food, but the headlines have already taken flight."
    ),
    "url": "https://wellnessbuzz.net/eggs-blood-clots-warning",
}

MAIN_CLAIM = (
    "A Cleveland Clinic study suggested that choline, a nutrient found in eggs, "
    "could make the blood more prone to clotting."
)

KEY_CLAIMS = [
    "A study conducted by Cleveland Clinic suggested that choline could make the blood more prone to clotting.",
    "Choline is deemed an essential nutrient that supports various bodily functions, including cellular growth and metabolism.",
    "Researchers found that consuming choline in high concentrations could lead to blood clotting.",
    "The interaction between choline and gut bacteria produces TMAO, which has been linked to an increased risk of blood clots, heart attack, and stroke.",
    "Choline is sold in over-the-counter dietary supplements in the United States.",
    "Health authorities recommend choline as an essential nutrient for optimal health.",
    "Egg yolks are among the richest dietary sources of choline in the American diet.",
    "The 2017 Cleveland Clinic study measured TMAO levels in participants who took choline supplements.",
]

QUERY_1 = "Cleveland Clinic study choline blood clotting"
QUERY_2 = "Researchers found that consuming choline in high concentrations could lead to blood clotting."

QUERIES = {
    0: [QUERY_1, QUERY_2],
    1: ["choline essential nutrient cellular growth metabolism"],
    2: ["high choline intake clot formation risk"],
    3: ["TMAO gut bacteria choline blood clots heart attack stroke"],
    4: ["choline over the counter dietary supplement availability"],
    5: ["choline recommendation optimal health guidance"],
    6: ["egg yolks richest dietary sources choline american diet"],
    7: ["2017 Cleveland Clinic trial TMAO levels participants choline supplements"],
}
MAIN_QUERIES = [QUERY_1]

# Vocabulary control: group A docs carry all six tokens of QUERY_1 and stay
# clear of QUERY_2's distinctive words; group B docs carry the full QUERY_2
# phrase and never say cleveland/clinic/study; the two S docs carry both and
# therefore land in both query's top-10 (union 10 + 10 - 2 = 18).

_A_BODY = (
    "A Cleveland Clinic study of choline intake reported a greater tendency "
    "toward blood clotting among supplement takers. {extra}"
)
_B_BODY = (
    "Researchers found that consuming choline in high concentrations could "
    "lead to blood clotting, according to a new paper on nutrition. {extra}"
)

CORPUS = [
    # shared docs: rank in both claim-1 queries
    {
        "id": "c1-s1",
        "url": "https://apnews.com/article/egg-choline-clots-2017",
        "title": "Old research misrepresented to tie eggs to clot surge",
        "body": (
            "A Cleveland Clinic study from 2017 on choline supplements is circulating "
            "again. Researchers found that consuming choline in high concentrations "
            "could lead to blood clotting, because supplement takers saw raised TMAO, "
            "a compound tied to clotting."
        ),
    },
    {
        "id": "c1-s2",
        "url": "https://www.clevelandclinic.org/research/choline-tmao-clotting",
        "title": "Dietary choline and a gut byproduct linked with clotting activity",
        "body": (
            "Cleveland Clinic study authors showed that dietary choline raises a gut "
            "byproduct tied to blood clotting events. Researchers found that consuming "
            "choline in high concentrations could lead to blood clotting in a "
            "controlled supplement setting."
        ),
    },
    # group A: query-1 matches
    {
        "id": "c1-a1",
        "url": "https://www.nih.gov/news/choline-clotting-platelets",
        "title": "Choline, platelets, and clot response: what the data shows",
        "body": _A_BODY.format(
            extra="Platelet response measurements backed the clotting association."
        ),
    },
    {
        "id": "c1-a2",
        "url": "https://www.medicalnewstoday.com/articles/choline-overview",
        "title": "Choline: what it is and what it does",
        "body": _A_BODY.format(extra="The nutrient supports several jobs in the body."),
    },
    {
        "id": "c1-a3",
        "url": "https://www.healthline.com/nutrition/choline-explainer",
        "title": "Everything to know about choline",
        "body": _A_BODY.format(extra="Most people get it from everyday foods."),
    },
    {
        "id": "c1-a4",
        "url": "https://www.webmd.com/diet/choline-basics",
        "title": "Choline basics for a balanced diet",
        "body": _A_BODY.format(extra="Talk to a doctor before changing your diet."),
    },
    {
        "id": "c1-a5",
        "url": "https://www.mayoclinic.org/nutrition/choline-qa",
        "title": "Questions and answers on choline",
        "body": _A_BODY.format(extra="Moderation remains the sensible approach."),
    },
    {
        "id": "c1-a6",
        "url": "https://dailyhealthwire.com/egg-scare-roundup",
        "title": "The egg scare, rounded up",
        "body": _A_BODY.format(extra="Social posts amplified the scare overnight."),
    },
    {
        "id": "c1-a7",
        "url": "https://wellnessbuzz.net/choline-panic",
        "title": "Choline panic spreads online",
        "body": _A_BODY.format(extra="Experts urge calm while the debate continues."),
    },
    {
        "id": "c1-a8",
        "url": "https://eggindustrynews.com/clot-claims-response",
        "title": "Egg producers respond to clot claims",
        "body": _A_BODY.format(extra="Producers point to decades of safe consumption."),
    },
    # group B: query-2 matches
    {
        "id": "c1-b1",
        "url": "https://www.reuters.com/fact-verify/egg-clot-posts",
        "title": "No, eggs are not suddenly causing widespread clots",
        "body": _B_BODY.format(
            extra="The viral posts about eggs leave out the supplement context entirely."
        ),
    },
    {
        "id": "c1-b2",
        "url": "https://www.sciencedaily.com/releases/choline-tmao-platelets",
        "title": "Gut microbes turn a common nutrient into a clot promoter",
        "body": _B_BODY.format(
            extra="TMAO production rose sharply in volunteers taking capsules."
        ),
    },
    {
        "id": "c1-b3",
        "url": "https://www.statnews.com/choline-supplements-report",
        "title": "Supplement science behind the egg headlines",
        "body": _B_BODY.format(extra="The report concerned capsules, not breakfast."),
    },
    {
        "id": "c1-b4",
        "url": "https://www.medpagetoday.com/cardiology/choline-brief",
        "title": "Cardiology brief: nutrient metabolites and clot signals",
        "body": _B_BODY.format(extra="Clinicians called the signal worth watching."),
    },
    {
        "id": "c1-b5",
        "url": "https://dietandheart.org/choline-capsules-analysis",
        "title": "Capsule analysis: how much is too much",
        "body": _B_BODY.format(extra="Typical meals deliver far smaller doses."),
    },
    {
        "id": "c1-b6",
        "url": "https://supplementwatch.net/choline-warning-label",
        "title": "Do choline capsules need a warning label?",
        "body": _B_BODY.format(extra="Regulators have not weighed in so far."),
    },
    {
        "id": "c1-b7",
        "url": "https://biomedwire.org/tmao-pathway-explainer",
        "title": "The TMAO pathway, explained",
        "body": _B_BODY.format(extra="The pathway runs through gut microbes."),
    },
    {
        "id": "c1-b8",
        "url": "https://heartshealth.com/nutrient-clot-news",
        "title": "Nutrient news for heart patients",
        "body": _B_BODY.format(extra="Patients were advised not to change diets yet."),
    },
    # claims 2-8: two dedicated supporting docs each
    {
        "id": "c2-d1",
        "url": "https://medlineplus.gov/choline-essential-nutrient",
        "title": "Choline: an essential nutrient",
        "body": "Choline is an essential nutrient that supports cellular growth and metabolism along with other bodily functions.",
    },
    {
        "id": "c2-d2",
        "url": "https://www.medicalnewstoday.com/articles/what-choline-does",
        "title": "What choline does in the body",
        "body": "As an essential nutrient, choline supports metabolism, cellular growth, and liver function in the body.",
    },
    {
        "id": "c3-d1",
        "url": "https://www.hopkinsmedicine.org/choline-clot-formation",
        "title": "High choline intake and clot formation",
        "body": "High choline intake raises clot formation risk, a pattern seen when intake far exceeds typical dietary levels.",
    },
    {
        "id": "c3-d2",
        "url": "https://sciencenewsroom.net/choline-dose-response",
        "title": "Dose response: choline and clots",
        "body": "A dose response analysis ties high choline intake to clot formation risk in supplement users.",
    },
    {
        "id": "c4-d1",
        "url": "https://www.nih.gov/news/gut-bacteria-tmao",
        "title": "How gut bacteria turn choline into TMAO",
        "body": "TMAO made by gut bacteria from choline has been linked to blood clots, heart attack, and stroke in multiple cohorts.",
    },
    {
        "id": "c4-d2",
        "url": "https://cardiologytoday.net/tmao-risk-overview",
        "title": "TMAO and cardiovascular risk: an overview",
        "body": "The gut bacteria metabolite TMAO, produced from choline, correlates with blood clots, heart attack, and stroke risk.",
    },
    {
        "id": "c5-d1",
        "url": "https://www.fda.gov/consumers/choline-supplement-facts",
        "title": "Supplement availability notes: choline",
        "body": "Choline is sold over the counter as a dietary supplement, and availability spans pharmacies and grocery stores.",
    },
    {
        "id": "c5-d2",
        "url": "https://consumerhealthdigest.com/choline-otc-guide",
        "title": "Buying choline over the counter",
        "body": "Shoppers will find choline sold over the counter as a dietary supplement; availability varies by retailer.",
    },
    {
        "id": "c6-d1",
        "url": "https://health.harvard.edu/choline-guidance",
        "title": "Guidance on choline for optimal health",
        "body": "Current recommendation levels list choline as part of guidance for optimal health across age groups.",
    },
    {
        "id": "c6-d2",
        "url": "https://www.eatright.org/choline-recommendation",
        "title": "Dietitian recommendation on choline",
        "body": "The recommendation from dietitians includes choline in guidance aimed at optimal health.",
    },
    {
        "id": "c7-d1",
        "url": "https://www.usda.gov/food-data/egg-yolks-choline",
        "title": "Egg yolks top the charts for choline",
        "body": "Egg yolks are among the richest dietary sources of choline in the American diet, federal food data shows.",
    },
    {
        "id": "c7-d2",
        "url": "https://nutritiondata.net/choline-food-rankings",
        "title": "Food rankings: where choline hides",
        "body": "Rankings of dietary sources put egg yolks at the top for choline in the typical American diet.",
    },
    {
        "id": "c8-d1",
        "url": "https://clinicaltrialsreview.org/tmao-2017-trial",
        "title": "Inside the 2017 TMAO measurements",
        "body": "The 2017 Cleveland Clinic trial measured TMAO levels in participants taking choline supplements over several weeks.",
    },
    {
        "id": "c8-d2",
        "url": "https://cardiohealthnews.com/tmao-participants-2017",
        "title": "Participants in the 2017 nutrient trial",
        "body": "In the 2017 Cleveland Clinic trial, TMAO levels in participants on choline supplements were measured repeatedly.",
    },
    # a blocked-source doc: matches claim-1 vocabulary but must never appear
    {
        "id": "x-blocked",
        "url": "https://www.snopes.com/fact-check/eggs-choline-clots",
        "title": "Fact check: eggs, choline, and clot claims",
        "body": "A Cleveland Clinic study of choline and blood clotting is at the heart of viral egg posts.",
    },
]

REGISTRY = {
    "apnews.com": 5,
    "reuters.com": 5,
    "nih.gov": 5,
    "harvard.edu": 5,
    "usda.gov": 5,
    "fda.gov": 5,
    "medlineplus.gov": 5,
    "clevelandclinic.org": 4,
    "mayoclinic.org": 4,
    "hopkinsmedicine.org": 4,
    "sciencedaily.com": 4,
    "statnews.com": 4,
    "medpagetoday.com": 4,
    "medicalnewstoday.com": 4,
    "webmd.com": 3,
    "healthline.com": 3,
    "eatright.org": 4,
    "dailyhealthwire.com": 2,
    "wellnessbuzz.net": 1,
    "eggindustrynews.com": 2,
}

_SUPPORT_RATIONALES = {
    "c1-s1": (
        "The search result explicitly mentions the 2017 Cleveland Clinic study finding that "
        "choline supplements raised levels of TMAO, a compound that could make the blood more "
        "prone to clotting. This directly supports the claim."
    ),
    "c1-s2": (
        "The search result states that Cleveland Clinic researchers showed dietary choline "
        "raises a gut byproduct tied to blood clotting events, which directly supports the claim."
    ),
    "c1-a1": (
        "The search result describes platelet measurements backing an association between "
        "choline intake and clotting, supporting the claim."
    ),
    "c1-b2": (
        "The search result reports that TMAO production rose in volunteers taking choline "
        "capsules and ties the metabolite to clot promotion, supporting the claim."
    ),
}

_REUTERS_RATIONALE = (
    "The provided search result does not contain information about the effect of choline "
    "intake on blood clotting. It only addresses viral posts about eggs, which is unrelated "
    "to the claim about choline."
)

_DEFAULT_BASELESS = (
    "The search result does not mention the specific content of the claim, so it can "
    "neither support nor negate it."
)

# claim-1 (and the main claim) verdicts per document; everything else defaults
# to baseless
_CLAIM1_VERDICTS = {
    "c1-s1": ("support", "high", _SUPPORT_RATIONALES["c1-s1"]),
    "c1-s2": ("support", "high", _SUPPORT_RATIONALES["c1-s2"]),
    "c1-a1": ("support", "medium", _SUPPORT_RATIONALES["c1-a1"]),
    "c1-b2": ("support", "medium", _SUPPORT_RATIONALES["c1-b2"]),
    "c1-b1": ("baseless", "medium", _REUTERS_RATIONALE),
}

# dedicated docs for claims 2-8 (key-claim index -> doc ids)
_DEDICATED = {i: (f"c{i + 1}-d1", f"c{i + 1}-d2") for i in range(1, 8)}

_TITLE_BY_ID = {doc["id"]: doc["title"] for doc in CORPUS}
_ID_BY_TITLE = {doc["title"]: doc["id"] for doc in CORPUS}


class ScriptedProvider:
    """Stands in for the live model while the transcript is recorded."""

    def complete_once(self, digest: str, prompt: str) -> str:
        if prompt.startswith("Given the input content below, please summarize"):
            return json.dumps({"key_claim": MAIN_CLAIM})
        if prompt.startswith("Given the input content below, please extract"):
            return json.dumps({"key_claims": [{"claim": c} for c in KEY_CLAIMS]})
        if prompt.startswith("Given the claim below"):
            claim_text = re.search(r"Claim: (.+)\n", prompt).group(1)
            if claim_text == MAIN_CLAIM:
                return json.dumps({"query": MAIN_QUERIES})
            idx = KEY_CLAIMS.index(claim_text)
            return json.dumps({"query": QUERIES[idx]})
        if prompt.startswith("Below is one web search result"):
            title = re.search(r"Title: (.*)\n", prompt).group(1)
            claim_text = re.search(r"Claim: (.+)\n", prompt).group(1)
            doc_id = _ID_BY_TITLE[title]
            label, confidence, rationale = self._verdict(claim_text, doc_id)
            return json.dumps(
                {
                    "support_or_negate_or_baseless": label,
                    "confidence": confidence,
                    "rationale": rationale,
                }
            )
        raise AssertionError(f"unexpected prompt: {prompt[:80]}...")

    @staticmethod
    def _verdict(claim_text: str, doc_id: str) -> tuple[str, str, str]:
        if claim_text == MAIN_CLAIM or claim_text == KEY_CLAIMS[0]:
            if doc_id in _CLAIM1_VERDICTS:
                return _CLAIM1_VERDICTS[doc_id]
            return "baseless", "medium", _DEFAULT_BASELESS
        idx = KEY_CLAIMS.index(claim_text)
        if idx in _DEDICATED and doc_id in _DEDICATED[idx]:
            return "support", "high", (
                f"The search result restates the claim's content ({_TITLE_BY_ID[doc_id]}), "
                "directly supporting it."
            )
        return "baseless", "medium", _DEFAULT_BASELESS


def build_choline() -> None:
    out = FIXTURES / "choline"
    out.mkdir(parents=True, exist_ok=True)

    corpus_path = out / "corpus.jsonl"
    corpus_path.write_text(
        "\n".join(json.dumps(doc, ensure_ascii=False) for doc in CORPUS) + "\n",
        encoding="utf-8",
    )
    (out / "article.json").write_text(
        json.dumps(ARTICLE, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    registry_path = out / "registry.tsv"
    registry_path.write_text(
        "\n".join(f"{d}\t{t}" for d, t in sorted(REGISTRY.items())) + "\n", encoding="utf-8"
    )

    recorder = RecordingProvider(ScriptedProvider())
    gateway = LlmGateway(recorder)
    backend = FixtureCorpusBackend(corpus_path)
    registry = CredibilityRegistry.load_tsv(registry_path)

    article = NewsArticle.from_dict(ARTICLE)
    policy = FilterPolicy()
    config_all = PipelineConfig(mode="all", policy=policy, min_relevant=18)
    report_all = run_pipeline(article, gateway, [backend], registry, config_all)
    config_main = PipelineConfig(mode="main", policy=policy, min_relevant=18)
    report_main = run_pipeline(article, gateway, [backend], registry, config_main)

    recorder.transcript.save(out / "transcript.jsonl")

    # shape assertions: fail loudly here rather than at replay time
    claims = [c.text for c in report_all.claims]
    assert claims == KEY_CLAIMS, f"claim drift: {claims}"
    claim1_id = report_all.claims[0].id
    claim1_evidence = [e for e in report_all.evidence if e.claim_id == claim1_id]
    labels = Counter(e.label.value for e in claim1_evidence)
    assert len(claim1_evidence) == 18, f"claim-1 pool is {len(claim1_evidence)}, wanted 18"
    assert labels == Counter({"baseless": 14, "support": 4}), f"histogram {labels}"
    claim1_verdict = next(v for v in report_all.claim_verdicts if v.claim_id == claim1_id)
    assert claim1_verdict.decision.value == "supported"
    assert report_all.article_verdict.value == "real"
    assert all(e.result.domain != "snopes.com" for e in report_all.evidence)

    per_claim_pools = {
        c.id: sum(1 for e in report_all.evidence if e.claim_id == c.id)
        for c in report_all.claims
    }
    meta = {
        "article_id": article.id,
        "mode_all": {
            "claims": claims,
            "claim1_queries": [q.text for q in report_all.queries if q.claim_id == claim1_id],
            "claim1_pool_size": 18,
            "claim1_labels": dict(labels),
            "claim1_decision": claim1_verdict.decision.value,
            "claim1_probability": claim1_verdict.truth_probability,
            "per_claim_pools": per_claim_pools,
            "article_verdict": report_all.article_verdict.value,
            "article_probability": report_all.article_probability,
            "content_hash": report_all.content_hash,
        },
        "mode_main": {
            "main_claim": report_main.claims[0].text,
            "pool_size": len(report_main.evidence),
            "article_verdict": report_main.article_verdict.value,
            "article_probability": report_main.article_probability,
            "content_hash": report_main.content_hash,
        },
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")

    config_doc = {
        "provider": {"kind": "replay", "transcript": "transcript.jsonl"},
        "backends": [{"kind": "fixture_corpus", "corpus_path": "corpus.jsonl", "name": "fixture"}],
        "registry": {"path": "registry.tsv", "default_tier": 3},
        "policy": {"max_results_per_query": 10},
        "retrieval": {"min_relevant": 18},
        "aggregation": {"mode": "all", "aggregator": "rule"},
        "data_dir": "../../data/choline",
    }
    (out / "config.json").write_text(json.dumps(config_doc, indent=2) + "\n", encoding="utf-8")
    print(f"choline fixture: {len(CORPUS)} docs, {len(recorder.transcript.entries)} transcript entries")
    print(f"  per-claim pools: {sorted(per_claim_pools.values(), reverse=True)}")


# ---------------------------------------------------------------------------
# Minimal fixture: one-sentence article, one claim, one supporting result.
# Used for the service round trip and the override-flip test.
# ---------------------------------------------------------------------------

MINIMAL_ARTICLE = {
    "id": "council-budget",
    "title": "",
    "body": "The city council approved the budget on May 2.",
}
MINIMAL_QUERY = "city council budget approval May 2"

MINIMAL_CORPUS = [
    {
        "id": "m-1",
        "url": "https://citynews.com/council-budget-vote",
        "title": "Council passes annual budget",
        "body": "The city council approved the budget on May 2 after a unanimous vote.",
    },
    {
        "id": "m-2",
        "url": "https://www.politifact.com/city-budget-check",
        "title": "Checking the council budget vote",
        "body": "The city council budget approval on May 2 drew questions.",
    },
    {
        "id": "m-3",
        "url": "https://gardennews.net/tulip-festival",
        "title": "Tulip festival dates announced",
        "body": "Organizers announced festival dates for the spring season.",
    },
]


class MinimalProvider:
    def complete_once(self, digest: str, prompt: str) -> str:
        if prompt.startswith("Given the input content below, please summarize"):
            return json.dumps({"key_claim": MINIMAL_ARTICLE["body"]})
        if prompt.startswith("Given the claim below"):
            return json.dumps({"query": MINIMAL_QUERY})
        if prompt.startswith("Below is one web search result"):
            return json.dumps(
                {
                    "support_or_negate_or_baseless": "support",
                    "confidence": "high",
                    "rationale": "The search result reports the same budget approval on the same date.",
                }
            )
        raise AssertionError(f"unexpected prompt: {prompt[:80]}...")


def build_minimal() -> None:
    out = FIXTURES / "minimal"
    out.mkdir(parents=True, exist_ok=True)
    corpus_path = out / "corpus.jsonl"
    corpus_path.write_text(
        "\n".join(json.dumps(d, ensure_ascii=False) for d in MINIMAL_CORPUS) + "\n",
        encoding="utf-8",
    )
    (out / "article.json").write_text(
        json.dumps(MINIMAL_ARTICLE, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    registry_path = out / "registry.tsv"
    registry_path.write_text("citynews.com\t4\n", encoding="utf-8")

    recorder = RecordingProvider(MinimalProvider())
    gateway = LlmGateway(recorder)
    backend = FixtureCorpusBackend(corpus_path)
    registry = CredibilityRegistry.load_tsv(registry_path)
    article = NewsArticle.from_dict(MINIMAL_ARTICLE)
    report = run_pipeline(article, gateway, [backend], registry, PipelineConfig(mode="main"))
    recorder.transcript.save(out / "transcript.jsonl")

    assert report.claims[0].text == MINIMAL_ARTICLE["body"]
    assert len(report.evidence) == 1, [e.result.id for e in report.evidence]
    assert report.evidence[0].result.id == "m-1"
    assert report.evidence[0].label is VerdictLabel.SUPPORT
    assert report.article_verdict.value == "real"

    meta = {
        "main_claim": report.claims[0].text,
        "claim_id": report.claims[0].id,
        "result_id": report.evidence[0].result.id,
        "article_verdict": report.article_verdict.value,
        "article_probability": report.article_probability,
        "content_hash": report.content_hash,
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    config_doc = {
        "provider": {"kind": "replay", "transcript": "transcript.jsonl"},
        "backends": [{"kind": "fixture_corpus", "corpus_path": "corpus.jsonl", "name": "fixture"}],
        "registry": {"path": "registry.tsv", "default_tier": 3},
        "aggregation": {"mode": "main", "aggregator": "rule"},
        "data_dir": "../../data/minimal",
    }
    (out / "config.json").write_text(json.dumps(config_doc, indent=2) + "\n", encoding="utf-8")
    print(f"minimal fixture: {len(MINIMAL_CORPUS)} docs, "
          f"{len(recorder.transcript.entries)} transcript entries, p={report.article_probability:.6f}")


if __name__ == "__main__":
    build_choline()
    build_minimal()
    print("fixtures written to", FIXTURES)
