"""Tour of the evaluation harness: ROUGE, per-class P/R/F1, stratified folds."""

import random

from claimcheck.metrics import (
    ConfusionCounts,
    LabeledExample,
    classification_metrics,
    kfold_split,
    micro_f1,
    prf1,
    rouge,
    success_rate,
)

print("== ROUGE ==")
candidate = "the cat"
reference = "the cat sat on the mat"
for variant in ("r1", "r2", "rl"):
    p, r, f1 = rouge(candidate, reference, variant)
    print(f"  {variant}: P={p:.4f} R={r:.4f} F1={f1:.4f}   ({candidate!r} vs {reference!r})")

print("\n== per-class precision / recall / F1 ==")
counts = ConfusionCounts(tp=3, fp=1, fn=2, tn=4)
p, r, f1 = prf1(counts)
print(f"  tp=3 fp=1 fn=2 -> P={p:.3f} R={r:.3f} F1={f1:.4f}")

print("\n== micro-F1 equals accuracy for single-label predictions ==")
preds = [1, 1, 0, 0, 1, 0]
golds = [1, 1, 0, 0, 0, 1]
print(f"  preds={preds}")
print(f"  golds={golds}")
print(f"  micro-F1 = {micro_f1(preds, golds):.6f} (4 of 6 correct)")

print("\n== detection success rate over a known-fake set ==")
print(f"  3 of 5 flagged: {success_rate([0, 0, 0, 1, 1], [0, 0, 0, 0, 0]):.2f}")

print("\n== benchmark-table layout ==")
metrics = classification_metrics(preds, golds)
header = "  " + "  ".join(f"{k:>5}" for k in metrics)
print(header)
print("  " + "  ".join(f"{v:5.3f}" for v in metrics.values()))

print("\n== stratified 5-fold split (6 fake / 4 real) ==")
examples = [LabeledExample(id=f"f{i}", article_or_claim="x", gold_label=0) for i in range(6)]
examples += [LabeledExample(id=f"r{i}", article_or_claim="x", gold_label=1) for i in range(4)]
random.Random(0).shuffle(examples)
for i, fold in enumerate(kfold_split(examples, k=5, seed=0)):
    ids = [ex.id for ex in fold]
    fakes = sum(1 for ex in fold if ex.gold_label == 0)
    print(f"  fold {i}: {ids}  ({fakes} fake)")
