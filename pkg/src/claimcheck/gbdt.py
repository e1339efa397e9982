"""Gradient-boosted decision trees for binary truth classification.

A small, fully deterministic learner built from first principles: boosting
on logistic loss, each round fitting one exact-greedy regression tree to
first/second-order gradient statistics. No sampling, no external learner;
the same rows and params always produce the same model, down to the digest
of its serialized form.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .credibility import FeatureVector

MODEL_FORMAT_VERSION = 1
_GAIN_EPS = 1e-12
_PROB_EPS = 1e-15


class TrainingError(Exception):
    pass


class DegenerateLabelsError(TrainingError):
    """Raised when all rows carry the same label."""


class EmptyTrainingError(TrainingError):
    """Raised when no rows are given."""


@dataclass(frozen=True)
class GbdtParams:
    n_rounds: int = 100
    max_depth: int = 4
    learning_rate: float = 0.1
    min_leaf: int = 5
    reg_lambda: float = 1.0


@dataclass(frozen=True)
class TreeNode:
    """Binary regression tree node: a split or, when children are None, a leaf."""

    value: float = 0.0
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self.is_leaf:
            return np.full(X.shape[0], self.value)
        out = np.empty(X.shape[0])
        mask = X[:, self.feature] < self.threshold
        out[mask] = self.left.predict(X[mask])
        out[~mask] = self.right.predict(X[~mask])
        return out

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"leaf": repr(self.value)}
        return {
            "feature": self.feature,
            "threshold": repr(self.threshold),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TreeNode":
        if "leaf" in d:
            return cls(value=float(d["leaf"]))
        return cls(
            feature=int(d["feature"]),
            threshold=float(d["threshold"]),
            left=cls.from_dict(d["left"]),
            right=cls.from_dict(d["right"]),
        )


@dataclass(frozen=True)
class GbdtModel:
    trees: tuple[TreeNode, ...]
    learning_rate: float
    base_score: float
    n_features: int

    def margin(self, X: np.ndarray) -> np.ndarray:
        out = np.full(X.shape[0], self.base_score)
        for tree in self.trees:
            out += self.learning_rate * tree.predict(X)
        return out

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        p = 1.0 / (1.0 + np.exp(-self.margin(X)))
        return np.clip(p, _PROB_EPS, 1.0 - _PROB_EPS)

    def to_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "learning_rate": repr(self.learning_rate),
            "base_score": repr(self.base_score),
            "n_features": self.n_features,
            "trees": [tree.to_dict() for tree in self.trees],
        }

    def to_json(self) -> str:
        # repr() round-trips floats exactly, so reload is bit-stable
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def from_dict(cls, d: dict) -> "GbdtModel":
        if d.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format: {d.get('format_version')}")
        model = cls(
            trees=tuple(TreeNode.from_dict(t) for t in d["trees"]),
            learning_rate=float(d["learning_rate"]),
            base_score=float(d["base_score"]),
            n_features=int(d["n_features"]),
        )
        for i, tree in enumerate(model.trees):
            _check_feature_indices(tree, model.n_features, i)
        return model

    @classmethod
    def load(cls, path: str | Path) -> "GbdtModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _check_feature_indices(node: TreeNode, n_features: int, tree_index: int) -> None:
    if node.is_leaf:
        return
    if not 0 <= node.feature < n_features:
        raise ValueError(f"tree {tree_index}: split feature {node.feature} out of range")
    _check_feature_indices(node.left, n_features, tree_index)
    _check_feature_indices(node.right, n_features, tree_index)


Row = tuple["FeatureVector | Sequence[float]", int]


def _as_matrix(rows: Sequence[Row]) -> tuple[np.ndarray, np.ndarray]:
    # rows carry either the typed 19-dim vectors or plain wide encodings
    # (e.g. with appended per-domain counts)
    X = np.array(
        [fv.as_list() if isinstance(fv, FeatureVector) else list(fv) for fv, _ in rows],
        dtype=np.float64,
    )
    y = np.array([label for _, label in rows], dtype=np.float64)
    return X, y


def _build_tree(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    indices: np.ndarray,
    depth: int,
    params: GbdtParams,
) -> TreeNode:
    G = float(g[indices].sum())
    H = float(h[indices].sum())
    leaf = TreeNode(value=-G / (H + params.reg_lambda))
    if depth >= params.max_depth or len(indices) < 2 * params.min_leaf:
        return leaf

    parent_score = G * G / (H + params.reg_lambda)
    best_gain = _GAIN_EPS
    best: tuple[int, float] | None = None
    for feature in range(X.shape[1]):
        values = X[indices, feature]
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        g_sorted = g[indices][order]
        h_sorted = h[indices][order]
        g_prefix = np.cumsum(g_sorted)
        h_prefix = np.cumsum(h_sorted)
        for i in range(params.min_leaf - 1, len(indices) - params.min_leaf):
            if sorted_values[i] == sorted_values[i + 1]:
                continue
            GL, HL = g_prefix[i], h_prefix[i]
            GR, HR = G - GL, H - HL
            gain = 0.5 * (
                GL * GL / (HL + params.reg_lambda)
                + GR * GR / (HR + params.reg_lambda)
                - parent_score
            )
            if gain > best_gain:
                best_gain = gain
                # plain float: numpy scalars would break repr-based serialization
                best = (feature, float(sorted_values[i] + sorted_values[i + 1]) / 2.0)
    if best is None:
        return leaf

    feature, threshold = best
    mask = X[indices, feature] < threshold
    left = _build_tree(X, g, h, indices[mask], depth + 1, params)
    right = _build_tree(X, g, h, indices[~mask], depth + 1, params)
    return TreeNode(feature=feature, threshold=threshold, left=left, right=right)


def train_gbdt(rows: Sequence[Row], params: GbdtParams = GbdtParams()) -> GbdtModel:
    """Fit the boosted ensemble on (feature vector, 0/1 label) rows.

    The base score is the log-odds of the positive rate; each round fits
    one tree to the logistic-loss gradients of the current margin, with
    leaf values -sum(g)/(sum(h)+lambda) and exact greedy splits. Training
    is single-threaded and deterministic.
    """
    if not rows:
        raise EmptyTrainingError("no training rows")
    X, y = _as_matrix(rows)
    positive_rate = float(y.mean())
    if positive_rate in (0.0, 1.0):
        raise DegenerateLabelsError("all rows carry the same label")

    base_score = math.log(positive_rate / (1.0 - positive_rate))
    margins = np.full(len(y), base_score)
    trees: list[TreeNode] = []
    all_indices = np.arange(len(y))
    for _ in range(params.n_rounds):
        p = 1.0 / (1.0 + np.exp(-margins))
        g = p - y
        h = p * (1.0 - p)
        tree = _build_tree(X, g, h, all_indices, 0, params)
        trees.append(tree)
        margins += params.learning_rate * tree.predict(X)
    return GbdtModel(
        trees=tuple(trees),
        learning_rate=params.learning_rate,
        base_score=base_score,
        n_features=X.shape[1],
    )


def predict(model: GbdtModel, fv: FeatureVector) -> float:
    """Truth probability in the open interval (0, 1) for one feature vector."""
    X = np.array([fv.as_list()], dtype=np.float64)
    return float(model.predict_proba(X)[0])


def log_loss(model: GbdtModel, rows: Sequence[Row]) -> float:
    X, y = _as_matrix(rows)
    p = model.predict_proba(X)
    return float(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).mean())


def prior_log_loss(rows: Sequence[Row]) -> float:
    """Log-loss of the constant positive-rate predictor on the same rows."""
    _, y = _as_matrix(rows)
    p = min(max(float(y.mean()), _PROB_EPS), 1.0 - _PROB_EPS)
    return float(-(y * math.log(p) + (1.0 - y) * math.log(1.0 - p)).mean())
