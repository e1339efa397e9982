"""Source credibility tiers, evidence featurization, and verdict aggregation.

Publishers carry a 1..5 credibility tier (5 most credible) keyed by
registrable domain. Evidence counts by (tier, label) feed either the
trained gradient-boosted classifier or the monotone rule aggregator, a
Laplace-smoothed credibility-weighted vote that needs no training data.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .models import (
    ArticleVerdict,
    ClaimVerdict,
    Decision,
    EvidenceItem,
    VerdictLabel,
    registrable_domain,
)

N_TIERS = 5
LABEL_INDEX = {VerdictLabel.SUPPORT: 0, VerdictLabel.NEGATE: 1, VerdictLabel.BASELESS: 2}
FEATURE_DIM = N_TIERS * 3 + 3 + 1  # tier x label counts, label totals, n_results

DEFAULT_TIER_WEIGHTS = {1: 0.25, 2: 0.5, 3: 1.0, 4: 1.5, 5: 2.0}


@dataclass(frozen=True)
class CredibilityRegistry:
    """Registrable domain -> tier lookup; unknown domains get default_tier."""

    entries: dict[str, int] = field(default_factory=dict)
    default_tier: int = 3

    def __post_init__(self) -> None:
        if not 1 <= self.default_tier <= 5:
            raise ValueError("default_tier must be in [1,5]")
        for domain, tier in self.entries.items():
            if not 1 <= tier <= 5:
                raise ValueError(f"tier for {domain} out of range: {tier}")

    def tier_for(self, domain_or_url: str) -> int:
        return self.entries.get(registrable_domain(domain_or_url), self.default_tier)

    @classmethod
    def load_tsv(cls, path: str | Path, default_tier: int = 3) -> "CredibilityRegistry":
        """Read a registry from TSV lines of "domain<TAB>tier"."""
        entries: dict[str, int] = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            domain, tier = line.split("\t")
            entries[registrable_domain(domain)] = int(tier)
        return cls(entries=entries, default_tier=default_tier)

    def save_tsv(self, path: str | Path) -> None:
        lines = [f"{domain}\t{tier}" for domain, tier in sorted(self.entries.items())]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class FeatureVector:
    """Evidence counts by (tier, label), plus label totals and result count.

    counts[(tier-1)*3 + label_index]; label_index is 0 support, 1 negate,
    2 baseless. Permutation-invariant in the evidence list by construction.
    """

    counts: tuple[int, ...]
    totals: tuple[int, int, int]
    n_results: int

    def __post_init__(self) -> None:
        if len(self.counts) != N_TIERS * 3:
            raise ValueError(f"counts must have {N_TIERS * 3} entries")
        if sum(self.counts) != self.n_results:
            raise ValueError("counts do not sum to n_results")
        for li in range(3):
            if self.totals[li] != sum(self.counts[li::3]):
                raise ValueError("totals inconsistent with counts")

    def count(self, tier: int, label: VerdictLabel) -> int:
        return self.counts[(tier - 1) * 3 + LABEL_INDEX[label]]

    def as_list(self) -> list[float]:
        """Flatten to the classifier's input layout (19 features)."""
        return [float(v) for v in (*self.counts, *self.totals, self.n_results)]

    @classmethod
    def from_list(cls, values: list[float]) -> "FeatureVector":
        counts = tuple(int(v) for v in values[: N_TIERS * 3])
        totals = tuple(int(v) for v in values[N_TIERS * 3 : N_TIERS * 3 + 3])
        return cls(counts=counts, totals=totals, n_results=int(values[-1]))


def assign_tiers(
    evidence: list[EvidenceItem], registry: CredibilityRegistry
) -> list[EvidenceItem]:
    """Stamp every item's source_tier from the registry."""
    return [item.with_tier(registry.tier_for(item.result.domain)) for item in evidence]


def featurize(evidence: list[EvidenceItem]) -> FeatureVector:
    """Count evidence by (tier, label); requires tiers already assigned."""
    counts = [0] * (N_TIERS * 3)
    for item in evidence:
        if item.source_tier is None:
            raise ValueError(f"evidence {item.claim_id}/{item.result.id} has no tier")
        counts[(item.source_tier - 1) * 3 + LABEL_INDEX[item.label]] += 1
    totals = (sum(counts[0::3]), sum(counts[1::3]), sum(counts[2::3]))
    return FeatureVector(counts=tuple(counts), totals=totals, n_results=len(evidence))


def most_common_domains(evidence_sets: Iterable[list[EvidenceItem]], k: int) -> list[str]:
    """The top-k registrable domains across a corpus of evidence lists."""
    counter: Counter[str] = Counter()
    for items in evidence_sets:
        counter.update(item.result.domain for item in items)
    return [domain for domain, _ in counter.most_common(k)]


def featurize_with_domains(
    evidence: list[EvidenceItem], top_domains: Sequence[str]
) -> list[float]:
    """Default 19 features plus per-domain result counts for a fixed domain list.

    The optional wide encoding for training with raw-domain signal; column
    order is the default layout followed by top_domains order. The learner
    accepts these plain vectors directly.
    """
    base = featurize(evidence).as_list()
    domain_counts = Counter(item.result.domain for item in evidence)
    return base + [float(domain_counts.get(domain, 0)) for domain in top_domains]


def evidence_counts_map(fv: FeatureVector) -> dict[tuple[int, VerdictLabel], int]:
    """Sparse (tier, label) -> count view used in claim verdicts."""
    out: dict[tuple[int, VerdictLabel], int] = {}
    for tier in range(1, N_TIERS + 1):
        for label, li in LABEL_INDEX.items():
            n = fv.counts[(tier - 1) * 3 + li]
            if n:
                out[(tier, label)] = n
    return out


def rule_aggregate(
    fv: FeatureVector, weights: dict[int, float] | None = None
) -> tuple[float, Decision]:
    """Credibility-weighted Laplace vote over support vs negate counts.

    score = (S + 1) / (S + N + 2) with S and N the tier-weighted support
    and negate masses. Monotone by construction: one more support item can
    never lower the score, one more negate can never raise it. Baseless
    evidence carries no weight; with no support and no negate at all the
    decision is insufficient_evidence at the 0.5 prior.
    """
    weights = dict(DEFAULT_TIER_WEIGHTS if weights is None else weights)
    previous = 0.0
    for tier in range(1, N_TIERS + 1):
        w = weights.get(tier, 0.0)
        if w <= 0:
            raise ValueError(f"tier {tier} weight must be positive")
        if w < previous:
            raise ValueError("tier weights must be non-decreasing in tier")
        previous = w
    support_mass = sum(weights[t] * fv.count(t, VerdictLabel.SUPPORT) for t in range(1, N_TIERS + 1))
    negate_mass = sum(weights[t] * fv.count(t, VerdictLabel.NEGATE) for t in range(1, N_TIERS + 1))
    score = (support_mass + 1.0) / (support_mass + negate_mass + 2.0)
    if support_mass == 0.0 and negate_mass == 0.0:
        return score, Decision.INSUFFICIENT
    return score, Decision.SUPPORTED if score >= 0.5 else Decision.REFUTED


def claim_verdict_from(
    claim_id: str,
    fv: FeatureVector,
    probability: float,
    decision: Decision,
) -> ClaimVerdict:
    return ClaimVerdict(
        claim_id=claim_id,
        truth_probability=probability,
        decision=decision,
        evidence_counts=evidence_counts_map(fv),
    )


def decide_article(
    claim_verdicts: list[ClaimVerdict],
    mode: str = "main_claim",
    main_claim_id: str | None = None,
) -> tuple[ArticleVerdict, float]:
    """Compose claim verdicts into the article-level call.

    main_claim mode mirrors the benchmark protocol: the main claim's verdict
    is the article's. min_over_claims takes the weakest claim: the article
    probability is the minimum truth probability, and the article is fake
    only when that minimum falls below 0.5 with at least one refuted claim.
    """
    if not claim_verdicts:
        raise ValueError("no claim verdicts to decide from")
    if mode == "main_claim":
        verdict = claim_verdicts[0]
        if main_claim_id is not None:
            matches = [v for v in claim_verdicts if v.claim_id == main_claim_id]
            if not matches:
                raise ValueError(f"main claim {main_claim_id} has no verdict")
            verdict = matches[0]
        mapping = {
            Decision.SUPPORTED: ArticleVerdict.REAL,
            Decision.REFUTED: ArticleVerdict.FAKE,
            Decision.INSUFFICIENT: ArticleVerdict.UNVERIFIED,
        }
        return mapping[verdict.decision], verdict.truth_probability
    if mode == "min_over_claims":
        p_min = min(v.truth_probability for v in claim_verdicts)
        if all(v.decision is Decision.INSUFFICIENT for v in claim_verdicts):
            return ArticleVerdict.UNVERIFIED, p_min
        if p_min < 0.5 and any(v.decision is Decision.REFUTED for v in claim_verdicts):
            return ArticleVerdict.FAKE, p_min
        return ArticleVerdict.REAL, p_min
    raise ValueError(f"unknown aggregation mode: {mode!r}")
