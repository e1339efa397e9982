"""Retrieval-augmented news verification.

The pipeline extracts factual claims from an article, searches the web (or
a fixture corpus) for evidence, judges each result as support / negate /
baseless with a rationale, and combines the evidence using source
credibility into a calibrated truth verdict. Everything model- or
network-dependent can be replayed from recorded transcripts, making full
runs deterministic and offline-testable.
"""

from .credibility import (
    CredibilityRegistry,
    FeatureVector,
    assign_tiers,
    decide_article,
    featurize,
    rule_aggregate,
)
from .gbdt import GbdtModel, GbdtParams, predict, train_gbdt
from .llm import LlmGateway, ProviderTranscript, ReplayProvider, parse_schema, render
from .metrics import kfold_split, micro_f1, prf1, rouge, run_cv, success_rate
from .models import (
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
    canonical_sort,
    compute_content_hash,
    validate,
)
from .pipeline import PipelineConfig, run_pipeline
from .retrieval import (
    FilterPolicy,
    FixtureCorpusBackend,
    execute_query,
    gather_evidence_pool,
    generate_queries,
)
from .verification import relevance_check, verify_claim, verify_pair

__version__ = "0.1.0"

__all__ = [
    "ArticleVerdict",
    "Claim",
    "ClaimVerdict",
    "Confidence",
    "CredibilityRegistry",
    "Decision",
    "EvidenceItem",
    "FeatureVector",
    "FilterPolicy",
    "FixtureCorpusBackend",
    "GbdtModel",
    "GbdtParams",
    "Granularity",
    "LlmGateway",
    "NewsArticle",
    "PipelineConfig",
    "ProviderTranscript",
    "ReplayProvider",
    "SearchQuery",
    "SearchResult",
    "VerdictLabel",
    "VerificationReport",
    "assign_tiers",
    "canonical_sort",
    "compute_content_hash",
    "decide_article",
    "execute_query",
    "featurize",
    "gather_evidence_pool",
    "generate_queries",
    "kfold_split",
    "micro_f1",
    "parse_schema",
    "predict",
    "prf1",
    "relevance_check",
    "render",
    "rouge",
    "rule_aggregate",
    "run_cv",
    "run_pipeline",
    "success_rate",
    "train_gbdt",
    "validate",
    "verify_claim",
    "verify_pair",
]
