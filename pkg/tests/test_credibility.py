"""Tier assignment, featurization, rule aggregation, article decisions."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from claimcheck.credibility import (
    DEFAULT_TIER_WEIGHTS,
    CredibilityRegistry,
    FeatureVector,
    assign_tiers,
    decide_article,
    featurize,
    rule_aggregate,
)
from claimcheck.models import (
    ArticleVerdict,
    ClaimVerdict,
    Confidence,
    Decision,
    EvidenceItem,
    VerdictLabel,
)
from conftest import make_feature_vector, make_result

W5_ONLY = {1: 2.0, 2: 2.0, 3: 2.0, 4: 2.0, 5: 2.0}


def evidence(domain, label, tier=None, rid="r1"):
    return EvidenceItem(
        claim_id="c1",
        result=make_result(rid, f"https://{domain}/story/{rid}", f"Story {rid}"),
        label=label,
        confidence=Confidence.MEDIUM,
        rationale="Grounds." if label is not VerdictLabel.BASELESS else "",
        source_tier=tier,
    )


class TestRegistry:
    def test_known_domain_lookup(self):
        registry = CredibilityRegistry(entries={"apnews.com": 5})
        items = assign_tiers([evidence("apnews.com", VerdictLabel.SUPPORT)], registry)
        assert items[0].source_tier == 5

    def test_unknown_domain_gets_default(self):
        registry = CredibilityRegistry(entries={}, default_tier=3)
        items = assign_tiers([evidence("obscure-url.net", VerdictLabel.SUPPORT)], registry)
        assert items[0].source_tier == 3

    def test_lookup_is_total_over_random_domains(self):
        registry = CredibilityRegistry(entries={"apnews.com": 5}, default_tier=2)
        rng = random.Random(0)
        for _ in range(100):
            domain = "".join(rng.choice("abcdefgh") for _ in range(8)) + ".com"
            assert 1 <= registry.tier_for(domain) <= 5

    def test_tier_histogram_hand_tally(self):
        registry = CredibilityRegistry(
            entries={"apnews.com": 5, "reuters.com": 5, "clevelandclinic.org": 4, "webmd.com": 3},
            default_tier=2,
        )
        domains = (
            ["apnews.com"] * 3 + ["reuters.com"] * 4 + ["clevelandclinic.org"] * 5
            + ["webmd.com"] * 2 + ["unknown-one.net"] * 4
        )
        items = [
            evidence(domain, VerdictLabel.BASELESS, rid=f"r{i}")
            for i, domain in enumerate(domains)
        ]
        tiers = [item.source_tier for item in assign_tiers(items, registry)]
        assert len(tiers) == 18
        assert tiers.count(5) == 7  # apnews + reuters
        assert tiers.count(4) == 5
        assert tiers.count(3) == 2
        assert tiers.count(2) == 4

    def test_tsv_round_trip(self, tmp_path):
        registry = CredibilityRegistry(entries={"apnews.com": 5, "webmd.com": 3})
        path = tmp_path / "registry.tsv"
        registry.save_tsv(path)
        again = CredibilityRegistry.load_tsv(path, default_tier=3)
        assert again.entries == registry.entries

    def test_out_of_range_tier_rejected(self):
        with pytest.raises(ValueError):
            CredibilityRegistry(entries={"a.com": 7})
        with pytest.raises(ValueError):
            CredibilityRegistry(entries={}, default_tier=0)


class TestFeaturize:
    def test_empty_evidence_all_zero(self):
        fv = featurize([])
        assert fv.counts == (0,) * 15
        assert fv.totals == (0, 0, 0)
        assert fv.n_results == 0

    def test_four_support_t5_fourteen_baseless_t3(self):
        items = [
            evidence("apnews.com", VerdictLabel.SUPPORT, tier=5, rid=f"s{i}") for i in range(4)
        ] + [
            evidence("webmd.com", VerdictLabel.BASELESS, tier=3, rid=f"b{i}") for i in range(14)
        ]
        fv = featurize(items)
        assert fv.count(5, VerdictLabel.SUPPORT) == 4
        assert fv.counts[(5 - 1) * 3 + 0] == 4
        assert fv.counts[(3 - 1) * 3 + 2] == 14
        assert fv.totals == (4, 0, 14)
        assert fv.n_results == 18

    def test_shuffled_input_identical_vector(self):
        items = [
            evidence("apnews.com", VerdictLabel.SUPPORT, tier=5, rid="a"),
            evidence("webmd.com", VerdictLabel.NEGATE, tier=3, rid="b"),
            evidence("blog.net", VerdictLabel.BASELESS, tier=1, rid="c"),
        ]
        base = featurize(items)
        for seed in range(10):
            shuffled = items[:]
            random.Random(seed).shuffle(shuffled)
            assert featurize(shuffled) == base

    def test_missing_tier_raises(self):
        with pytest.raises(ValueError):
            featurize([evidence("apnews.com", VerdictLabel.SUPPORT, tier=None)])

    def test_inconsistent_counts_rejected(self):
        with pytest.raises(ValueError):
            FeatureVector(counts=(1,) * 15, totals=(5, 5, 5), n_results=14)

    def test_as_list_is_19_wide(self):
        fv = make_feature_vector([1] * 15)
        values = fv.as_list()
        assert len(values) == 19
        assert FeatureVector.from_list(values) == fv

    @given(st.lists(st.tuples(st.integers(1, 5),
                              st.sampled_from(list(VerdictLabel))), max_size=12),
           st.integers(0, 99))
    def test_permutation_invariance_property(self, spec, seed):
        items = [
            evidence("site.com", label, tier=tier, rid=f"r{i}")
            for i, (tier, label) in enumerate(spec)
        ]
        shuffled = items[:]
        random.Random(seed).shuffle(shuffled)
        assert featurize(shuffled) == featurize(items)


class TestRuleAggregate:
    def test_all_zero_is_insufficient_at_prior(self):
        score, decision = rule_aggregate(make_feature_vector([0] * 15))
        assert score == 0.5
        assert decision is Decision.INSUFFICIENT

    def test_four_supports_tier5_weight2(self):
        counts = [0] * 15
        counts[12] = 4  # tier-5 supports
        score, decision = rule_aggregate(make_feature_vector(counts), W5_ONLY)
        assert score == pytest.approx(0.9, abs=1e-12)  # (8+1)/(8+2)
        assert decision is Decision.SUPPORTED

    def test_single_negate_tier5_weight2(self):
        counts = [0] * 15
        counts[13] = 1  # tier-5 negate
        score, decision = rule_aggregate(make_feature_vector(counts), W5_ONLY)
        assert score == pytest.approx(0.25, abs=1e-12)  # 1/(2+2)
        assert decision is Decision.REFUTED

    def test_baseless_carries_no_weight(self):
        counts = [0] * 15
        counts[14] = 9  # tier-5 baseless
        score, decision = rule_aggregate(make_feature_vector(counts))
        assert (score, decision) == (0.5, Decision.INSUFFICIENT)

    def test_weights_must_be_positive(self):
        with pytest.raises(ValueError):
            rule_aggregate(make_feature_vector([0] * 15), {1: 0.0, 2: 1, 3: 1, 4: 1, 5: 1})

    def test_weights_must_be_non_decreasing(self):
        with pytest.raises(ValueError):
            rule_aggregate(make_feature_vector([0] * 15), {1: 2.0, 2: 1.0, 3: 1, 4: 1, 5: 1})

    def test_default_weights_are_valid(self):
        assert list(DEFAULT_TIER_WEIGHTS) == [1, 2, 3, 4, 5]
        rule_aggregate(make_feature_vector([1] * 15))  # does not raise

    @given(
        counts=st.lists(st.integers(0, 6), min_size=15, max_size=15),
        tier=st.integers(1, 5),
    )
    def test_monotone_in_support_and_negate(self, counts, tier):
        fv = make_feature_vector(counts)
        base, _ = rule_aggregate(fv)
        plus_support = list(counts)
        plus_support[(tier - 1) * 3 + 0] += 1
        up, _ = rule_aggregate(make_feature_vector(plus_support))
        assert up >= base
        plus_negate = list(counts)
        plus_negate[(tier - 1) * 3 + 1] += 1
        down, _ = rule_aggregate(make_feature_vector(plus_negate))
        assert down <= base


def verdict(claim_id, p, decision):
    return ClaimVerdict(claim_id=claim_id, truth_probability=p, decision=decision)


class TestDecideArticle:
    def test_main_mode_supported_maps_to_real(self):
        result = decide_article([verdict("c1", 0.9, Decision.SUPPORTED)], "main_claim")
        assert result == (ArticleVerdict.REAL, 0.9)

    def test_main_mode_refuted_maps_to_fake(self):
        result = decide_article([verdict("c1", 0.2, Decision.REFUTED)], "main_claim")
        assert result == (ArticleVerdict.FAKE, 0.2)

    def test_main_mode_insufficient_maps_to_unverified(self):
        result = decide_article([verdict("c1", 0.5, Decision.INSUFFICIENT)], "main_claim")
        assert result == (ArticleVerdict.UNVERIFIED, 0.5)

    def test_main_mode_selects_by_id(self):
        verdicts = [verdict("c1", 0.9, Decision.SUPPORTED), verdict("c2", 0.1, Decision.REFUTED)]
        assert decide_article(verdicts, "main_claim", main_claim_id="c2")[0] is ArticleVerdict.FAKE

    def test_min_mode_takes_weakest_claim(self):
        verdicts = [verdict("c1", 0.9, Decision.SUPPORTED), verdict("c2", 0.2, Decision.REFUTED)]
        assert decide_article(verdicts, "min_over_claims") == (ArticleVerdict.FAKE, 0.2)

    def test_min_mode_all_insufficient_is_unverified(self):
        verdicts = [verdict("c1", 0.5, Decision.INSUFFICIENT), verdict("c2", 0.5, Decision.INSUFFICIENT)]
        assert decide_article(verdicts, "min_over_claims") == (ArticleVerdict.UNVERIFIED, 0.5)

    def test_min_mode_all_supported_is_real(self):
        verdicts = [verdict("c1", 0.9, Decision.SUPPORTED), verdict("c2", 0.7, Decision.SUPPORTED)]
        assert decide_article(verdicts, "min_over_claims") == (ArticleVerdict.REAL, 0.7)

    def test_empty_verdicts_rejected(self):
        with pytest.raises(ValueError):
            decide_article([], "main_claim")

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            decide_article([verdict("c1", 0.5, Decision.SUPPORTED)], "median")


class TestDomainOneHot:
    def _evidence_sets(self):
        sets = []
        for domains in (["apnews.com", "apnews.com", "webmd.com"],
                        ["apnews.com", "blogspot.com"],
                        ["webmd.com", "apnews.com"]):
            sets.append([
                evidence(domain, VerdictLabel.BASELESS, tier=3, rid=f"r{i}")
                for i, domain in enumerate(domains)
            ])
        return sets

    def test_most_common_domains(self):
        from claimcheck.credibility import most_common_domains

        top = most_common_domains(self._evidence_sets(), k=2)
        assert top == ["apnews.com", "webmd.com"]

    def test_featurize_with_domains_widens_vector(self):
        from claimcheck.credibility import featurize_with_domains

        items = self._evidence_sets()[0]
        wide = featurize_with_domains(items, ["apnews.com", "webmd.com", "nih.gov"])
        assert len(wide) == 19 + 3
        assert wide[19:] == [2.0, 1.0, 0.0]
        assert wide[:19] == featurize(items).as_list()

    def test_learner_accepts_wide_vectors(self):
        from claimcheck.credibility import featurize_with_domains
        from claimcheck.gbdt import GbdtParams, train_gbdt

        top = ["apnews.com", "webmd.com"]
        rows = []
        for i in range(30):
            domain = "apnews.com" if i % 2 else "webmd.com"
            items = [evidence(domain, VerdictLabel.SUPPORT, tier=3, rid=f"r{i}{j}")
                     for j in range(1 + i % 3)]
            rows.append((featurize_with_domains(items, top), i % 2))
        model = train_gbdt(rows, GbdtParams(n_rounds=10, max_depth=2, min_leaf=2))
        assert model.n_features == 21
