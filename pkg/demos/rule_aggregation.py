"""How the rule aggregator combines evidence without any training data.

The score is a Laplace-smoothed, credibility-weighted vote over support
and negate counts: (S+1)/(S+N+2). Tier-5 sources move the needle four
times as much as tier-1 sources under the default weights, and baseless
evidence moves it not at all.
"""

from claimcheck.credibility import DEFAULT_TIER_WEIGHTS, FeatureVector, rule_aggregate


def vector(support_by_tier=(), negate_by_tier=(), baseless=0):
    counts = [0] * 15
    for tier in support_by_tier:
        counts[(tier - 1) * 3 + 0] += 1
    for tier in negate_by_tier:
        counts[(tier - 1) * 3 + 1] += 1
    counts[2 * 3 + 2] = baseless  # park baseless at tier 3
    totals = (sum(counts[0::3]), sum(counts[1::3]), sum(counts[2::3]))
    return FeatureVector(counts=tuple(counts), totals=totals, n_results=sum(counts))


print("default tier weights:", DEFAULT_TIER_WEIGHTS, "\n")

scenarios = [
    ("no usable evidence at all", vector()),
    ("14 baseless results, nothing else", vector(baseless=14)),
    ("one tier-1 blog supports", vector(support_by_tier=[1])),
    ("one tier-5 wire service supports", vector(support_by_tier=[5])),
    ("four tier-5 supports (healthy story)", vector(support_by_tier=[5, 5, 4, 4])),
    ("tier-5 support vs tier-5 negate", vector(support_by_tier=[5], negate_by_tier=[5])),
    ("tier-5 support vs two tier-2 negates", vector(support_by_tier=[5], negate_by_tier=[2, 2])),
    ("three tier-5 negates (debunked)", vector(negate_by_tier=[5, 5, 5])),
]

for name, fv in scenarios:
    score, decision = rule_aggregate(fv)
    print(f"{name:45s} score={score:.3f}  {decision.value}")

print("\nmonotonicity: stacking supports can only push the score up")
fv = vector()
for n in range(6):
    score, decision = rule_aggregate(vector(support_by_tier=[3] * n))
    bar = "#" * int(score * 40)
    print(f"  {n} tier-3 supports  {score:.3f} {bar}")
