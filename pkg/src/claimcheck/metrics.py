"""Evaluation harness: classification metrics, ROUGE, and cross-validation.

Conventions used throughout: gold labels are binary with real(true)=1 and
fake=0; any metric whose denominator is zero is defined as 0; ROUGE
tokenization is case-folded splitting on non-alphanumeric runs, so scores
are comparable only within this codebase.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from .credibility import FeatureVector
from .gbdt import GbdtParams, log_loss, predict, prior_log_loss, train_gbdt
from .models import tokenize

REPORT_COLUMNS = ("F1", "F1-T", "R-T", "P-T", "F1-F", "R-F", "P-F")

FAKE, REAL = 0, 1


@dataclass(frozen=True)
class LabeledExample:
    id: str
    article_or_claim: str
    gold_label: int
    split_key: str | None = None

    def __post_init__(self) -> None:
        if self.gold_label not in (FAKE, REAL):
            raise ValueError(f"gold_label must be 0 (fake) or 1 (real): {self.gold_label}")


def _coerce_label(value: Any) -> int:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, float)) and value in (0, 1):
        return int(value)
    token = str(value).strip().lower()
    if token in ("1", "real", "true"):
        return REAL
    if token in ("0", "fake", "false"):
        return FAKE
    raise ValueError(f"unrecognized label: {value!r}")


def load_examples_jsonl(path: str | Path) -> list[LabeledExample]:
    """Read the unified dataset format: JSONL of {id, text, label, source}."""
    examples = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        examples.append(
            LabeledExample(
                id=str(row["id"]),
                article_or_claim=row["text"],
                gold_label=_coerce_label(row["label"]),
                split_key=row.get("source"),
            )
        )
    return examples


def load_feature_rows(path: str | Path) -> list[tuple[FeatureVector, int]]:
    """Read classifier training data: JSONL of {features, label}."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        rows.append((FeatureVector.from_list(row["features"]), _coerce_label(row["label"])))
    return rows


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @classmethod
    def from_predictions(
        cls, preds: Sequence[int], golds: Sequence[int], positive: int
    ) -> "ConfusionCounts":
        if len(preds) != len(golds):
            raise ValueError(f"length mismatch: {len(preds)} preds vs {len(golds)} golds")
        tp = fp = fn = tn = 0
        for p, g in zip(preds, golds):
            if p == positive and g == positive:
                tp += 1
            elif p == positive:
                fp += 1
            elif g == positive:
                fn += 1
            else:
                tn += 1
        return cls(tp=tp, fp=fp, fn=fn, tn=tn)


def prf1(counts: ConfusionCounts) -> tuple[float, float, float]:
    """Precision, recall, F1; each is 0 when its denominator is 0."""
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def accuracy(preds: Sequence[int], golds: Sequence[int]) -> float:
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(golds)} golds")
    if not golds:
        return 0.0
    return sum(p == g for p, g in zip(preds, golds)) / len(golds)


def micro_f1(preds: Sequence[int], golds: Sequence[int]) -> float:
    """F1 micro-averaged over classes.

    With one predicted label per instance this equals accuracy exactly;
    that identity is cross-checked on every call.
    """
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(golds)} golds")
    if not golds:
        return 0.0
    classes = sorted(set(golds) | set(preds))
    tp_sum = fp_sum = fn_sum = 0
    for cls_label in classes:
        counts = ConfusionCounts.from_predictions(preds, golds, positive=cls_label)
        tp_sum += counts.tp
        fp_sum += counts.fp
        fn_sum += counts.fn
    # 2TP/(2TP+FP+FN), the count form of the harmonic mean: with integer
    # counts this divides out to exactly accuracy under single-label
    # prediction, keeping the identity bit-exact
    denominator = 2 * tp_sum + fp_sum + fn_sum
    score = 2 * tp_sum / denominator if denominator else 0.0
    assert score == accuracy(preds, golds), "micro-F1/accuracy identity broken"
    return score


def success_rate(preds: Sequence[int], golds: Sequence[int]) -> float:
    """Fraction of a known-fake set predicted fake."""
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(golds)} golds")
    if any(g != FAKE for g in golds):
        raise ValueError("success_rate requires an all-fake gold set")
    if not preds:
        return 0.0
    return sum(p == FAKE for p in preds) / len(preds)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for token_a in a:
        current = [0]
        for j, token_b in enumerate(b, start=1):
            if token_a == token_b:
                current.append(prev[j - 1] + 1)
            else:
                current.append(max(prev[j], current[j - 1]))
        prev = current
    return prev[-1]


def _prf_from_overlap(overlap: float, n_candidate: float, n_reference: float) -> tuple[float, float, float]:
    precision = overlap / n_candidate if n_candidate else 0.0
    recall = overlap / n_reference if n_reference else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def rouge(candidate: str, reference: str, variant: str = "r1") -> tuple[float, float, float]:
    """ROUGE-1/2 (clipped n-gram overlap) or ROUGE-L (longest common subsequence).

    Returns (precision, recall, F1). Empty candidate or reference gives
    (0, 0, 0).
    """
    cand_tokens = tokenize(candidate)
    ref_tokens = tokenize(reference)
    if not cand_tokens or not ref_tokens:
        return 0.0, 0.0, 0.0
    if variant in ("r1", "r2"):
        n = 1 if variant == "r1" else 2
        cand_grams = _ngrams(cand_tokens, n)
        ref_grams = _ngrams(ref_tokens, n)
        overlap = sum(min(count, ref_grams[gram]) for gram, count in cand_grams.items())
        return _prf_from_overlap(overlap, sum(cand_grams.values()), sum(ref_grams.values()))
    if variant == "rl":
        lcs = _lcs_length(cand_tokens, ref_tokens)
        return _prf_from_overlap(lcs, len(cand_tokens), len(ref_tokens))
    raise ValueError(f"unknown ROUGE variant: {variant!r}")


def _default_label(item: Any) -> int:
    if isinstance(item, LabeledExample):
        return item.gold_label
    if isinstance(item, tuple):
        return int(item[1])
    raise TypeError(f"cannot infer a label from {type(item).__name__}")


def kfold_split(
    examples: Sequence[Any],
    k: int,
    seed: int = 0,
    label_fn: Callable[[Any], int] | None = None,
) -> list[list[Any]]:
    """Deterministic stratified k-fold partition.

    Items are shuffled within each label class, concatenated, and dealt
    round-robin, which bounds both fold sizes and per-fold class counts to
    within 1 of proportional.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if len(examples) < k:
        raise ValueError(f"k={k} too large for {len(examples)} examples")
    label_fn = label_fn or _default_label
    rng = random.Random(seed)
    by_label: dict[int, list[Any]] = {}
    for item in examples:
        by_label.setdefault(label_fn(item), []).append(item)
    dealt: list[Any] = []
    for label in sorted(by_label):
        group = by_label[label][:]
        rng.shuffle(group)
        dealt.extend(group)
    folds: list[list[Any]] = [[] for _ in range(k)]
    for position, item in enumerate(dealt):
        folds[position % k].append(item)
    return folds


@dataclass
class CvReport:
    """Per-fold and pooled cross-validation metrics."""

    k: int
    n: int
    fold_metrics: list[dict[str, float]]
    pooled: dict[str, float]
    data_log: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "n": self.n,
            "fold_metrics": self.fold_metrics,
            "pooled": self.pooled,
            "training": self.data_log,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def format_table(self) -> str:
        header = "fold  " + "  ".join(f"{c:>6}" for c in REPORT_COLUMNS)
        lines = [header, "-" * len(header)]
        for i, metrics in enumerate(self.fold_metrics):
            cells = "  ".join(f"{metrics[c]:6.3f}" for c in REPORT_COLUMNS)
            lines.append(f"{i:>4}  {cells}")
        pooled_cells = "  ".join(f"{self.pooled[c]:6.3f}" for c in REPORT_COLUMNS)
        lines.append(f"pool  {pooled_cells}")
        return "\n".join(lines)


def classification_metrics(preds: Sequence[int], golds: Sequence[int]) -> dict[str, float]:
    """The benchmark-table layout: micro-F1 plus per-class P/R/F1."""
    p_t, r_t, f1_t = prf1(ConfusionCounts.from_predictions(preds, golds, positive=REAL))
    p_f, r_f, f1_f = prf1(ConfusionCounts.from_predictions(preds, golds, positive=FAKE))
    return {
        "F1": micro_f1(preds, golds),
        "F1-T": f1_t,
        "R-T": r_t,
        "P-T": p_t,
        "F1-F": f1_f,
        "R-F": r_f,
        "P-F": p_f,
    }


def run_cv(
    rows: Sequence[tuple[FeatureVector, int]],
    k: int = 5,
    params: GbdtParams = GbdtParams(),
    seed: int = 0,
) -> CvReport:
    """Stratified k-fold cross-validation of the boosted classifier.

    Each fold's model trains on the other k-1 folds; held-out predictions
    are pooled for the overall metrics. Training errors (e.g. a fold whose
    training split is single-class) propagate.
    """
    folds = kfold_split(list(rows), k, seed=seed)
    fold_metrics: list[dict[str, float]] = []
    pooled_preds: list[int] = []
    pooled_golds: list[int] = []
    prior_losses: list[float] = []
    train_losses: list[float] = []
    for i in range(k):
        held_out = folds[i]
        training = [row for j in range(k) if j != i for row in folds[j]]
        model = train_gbdt(training, params)
        prior_losses.append(prior_log_loss(training))
        train_losses.append(log_loss(model, training))
        preds = [1 if predict(model, fv) >= 0.5 else 0 for fv, _ in held_out]
        golds = [label for _, label in held_out]
        fold_metrics.append(classification_metrics(preds, golds))
        pooled_preds.extend(preds)
        pooled_golds.extend(golds)
    return CvReport(
        k=k,
        n=len(rows),
        fold_metrics=fold_metrics,
        pooled=classification_metrics(pooled_preds, pooled_golds),
        data_log={
            "mean_prior_log_loss": sum(prior_losses) / k,
            "mean_train_log_loss": sum(train_losses) / k,
        },
    )
