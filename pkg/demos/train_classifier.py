"""Train the gradient-boosted verdict classifier on synthetic evidence.

Builds feature vectors whose label follows a hidden rule (more tier-5
support than tier-5 negate evidence), fits the boosted trees, and checks
how the learned probabilities track the rule. Saves a reliability plot
next to this script.
"""

import random
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from claimcheck.credibility import FeatureVector
from claimcheck.gbdt import GbdtParams, log_loss, predict, prior_log_loss, train_gbdt
from claimcheck.metrics import run_cv

rng = random.Random(42)


def random_vector():
    counts = [rng.randint(0, 3) for _ in range(15)]
    totals = (sum(counts[0::3]), sum(counts[1::3]), sum(counts[2::3]))
    return FeatureVector(counts=tuple(counts), totals=totals, n_results=sum(counts))


rows = []
for _ in range(200):
    fv = random_vector()
    label = 1 if fv.counts[12] > fv.counts[13] else 0  # tier-5 support vs negate
    rows.append((fv, label))

params = GbdtParams(n_rounds=50, max_depth=3, learning_rate=0.1, min_leaf=5)
model = train_gbdt(rows, params)

print(f"trained {len(model.trees)} trees on {len(rows)} rows")
print(f"prior log-loss: {prior_log_loss(rows):.4f}")
print(f"train log-loss: {log_loss(model, rows):.4f}")

preds = [1 if predict(model, fv) >= 0.5 else 0 for fv, _ in rows]
acc = sum(p == y for p, (_, y) in zip(preds, rows)) / len(rows)
print(f"training accuracy: {acc:.3f}")

report = run_cv(rows, k=5, params=params, seed=0)
print("\n5-fold cross-validation:")
print(report.format_table())

print(f"\nmodel digest (stable across runs): {model.digest()[:16]}...")

# reliability: predicted probability vs the support-negate margin
margins, probabilities = [], []
for fv, _ in rows:
    margins.append(fv.counts[12] - fv.counts[13])
    probabilities.append(predict(model, fv))
margins = np.array(margins)
probabilities = np.array(probabilities)

fig, ax = plt.subplots(figsize=(6, 4))
for margin in sorted(set(margins.tolist())):
    mask = margins == margin
    ax.scatter([margin] * mask.sum(), probabilities[mask], alpha=0.3, color="tab:blue")
ax.set_xlabel("tier-5 support minus tier-5 negate")
ax.set_ylabel("predicted truth probability")
ax.axhline(0.5, color="grey", linestyle=":")
ax.set_title("Boosted-tree probabilities track the evidence margin")
out = Path(__file__).resolve().parent / "classifier_reliability.png"
fig.tight_layout()
fig.savefig(out, dpi=120)
print(f"\nwrote {out.name}")
