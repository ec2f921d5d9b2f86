"""Gradient-boosted regression trees predicting sentence BLEU.

Plain squared-error boosting: the base prediction is the target mean,
each round fits one axis-aligned regression tree to the current
residuals by greedy SSE reduction, and trees are applied with shrinkage
eta. No subsampling or regularization terms, so training is fully
deterministic. Predictions are clipped to the 0-100 BLEU range.

Split candidates are midpoints between consecutive distinct feature
values, at least one sample per side; ties break toward the lowest
feature index, then the lowest threshold.
"""

import json

import numpy as np

from mtloop.qe.features import QEFeatureVector

PREDICTION_RANGE = (0.0, 100.0)

FORMAT_VERSION = 1


class TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature=None, threshold=None, left=None, right=None, value=None):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.value = value

    def is_leaf(self) -> bool:
        return self.value is not None

    def predict_one(self, x) -> float:
        node = self
        while not node.is_leaf():
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.value

    def depth(self) -> int:
        if self.is_leaf():
            return 0
        return 1 + max(self.left.depth(), self.right.depth())


def _best_split(X: np.ndarray, residuals: np.ndarray):
    """(feature, threshold, gain) of the best SSE-reducing split, or None."""
    n, n_features = X.shape
    base_sse = float(np.sum((residuals - residuals.mean()) ** 2))
    best = None  # (negative gain is never kept; ties resolved by scan order)
    for feature in range(n_features):
        order = np.argsort(X[:, feature], kind="stable")
        xs = X[order, feature]
        ys = residuals[order]
        prefix = np.cumsum(ys)
        prefix_sq = np.cumsum(ys**2)
        total, total_sq = prefix[-1], prefix_sq[-1]
        for i in range(n - 1):
            if xs[i] == xs[i + 1]:
                continue
            k = i + 1
            left_sse = prefix_sq[i] - prefix[i] ** 2 / k
            right_sum = total - prefix[i]
            right_sse = (total_sq - prefix_sq[i]) - right_sum**2 / (n - k)
            gain = base_sse - (left_sse + right_sse)
            if gain > 0 and (best is None or gain > best[2] + 1e-12):
                threshold = (xs[i] + xs[i + 1]) / 2.0
                best = (feature, float(threshold), float(gain))
    return best


def _fit_tree(X: np.ndarray, residuals: np.ndarray, max_depth: int) -> TreeNode:
    if max_depth <= 0 or len(residuals) < 2:
        return TreeNode(value=float(residuals.mean()))
    split = _best_split(X, residuals)
    if split is None:
        return TreeNode(value=float(residuals.mean()))
    feature, threshold, _ = split
    mask = X[:, feature] <= threshold
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_fit_tree(X[mask], residuals[mask], max_depth - 1),
        right=_fit_tree(X[~mask], residuals[~mask], max_depth - 1),
    )


class GradientBoostedEnsemble:
    def __init__(self, kind: str, dim: int, base: float, eta: float,
                 max_depth: int, trees: list[TreeNode], train_mse: list[float]):
        self.kind = kind
        self.dim = dim
        self.base = base
        self.eta = eta
        self.max_depth = max_depth
        self.trees = trees
        self.train_mse = train_mse  # MSE after each round, for diagnostics

    @property
    def rounds(self) -> int:
        return len(self.trees)

    def predict_values(self, values) -> float:
        x = np.asarray(values, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError("dimension mismatch")
        raw = self.base + self.eta * sum(t.predict_one(x) for t in self.trees)
        return float(min(PREDICTION_RANGE[1], max(PREDICTION_RANGE[0], raw)))


def gbt_train(data, max_depth: int, eta: float, rounds: int) -> GradientBoostedEnsemble:
    """Fit the boosted ensemble to a QEDataset (or (features, bleu) rows)."""
    rows = data.rows if hasattr(data, "rows") else list(data)
    kind = getattr(data, "kind", rows[0][0].kind if rows else "smt")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must be in (0, 1]")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if len(rows) < 1:
        raise ValueError("empty dataset")

    X = np.array([fv.values for fv, _ in rows], dtype=float)
    y = np.array([bleu for _, bleu in rows], dtype=float)
    base = float(y.mean())
    predictions = np.full(len(y), base)
    trees: list[TreeNode] = []
    mse: list[float] = []

    for _ in range(rounds):
        residuals = y - predictions
        if len(rows) == 1:
            tree = TreeNode(value=float(residuals[0]))
        else:
            tree = _fit_tree(X, residuals, max_depth)
        trees.append(tree)
        predictions = predictions + eta * np.array([tree.predict_one(x) for x in X])
        mse.append(float(np.mean((y - predictions) ** 2)))

    return GradientBoostedEnsemble(kind, X.shape[1], base, eta, max_depth, trees, mse)


def gbt_predict(model: GradientBoostedEnsemble, features: QEFeatureVector) -> float:
    if features.kind != model.kind:
        raise ValueError(f"feature kind {features.kind!r} does not match model {model.kind!r}")
    return model.predict_values(features.values)


# -- model artifact ---------------------------------------------------------

def _node_to_json(node: TreeNode):
    if node.is_leaf():
        return {"leaf": node.value}
    return {
        "f": node.feature,
        "t": node.threshold,
        "l": _node_to_json(node.left),
        "r": _node_to_json(node.right),
    }


def _node_from_json(data) -> TreeNode:
    if "leaf" in data:
        return TreeNode(value=data["leaf"])
    return TreeNode(
        feature=data["f"],
        threshold=data["t"],
        left=_node_from_json(data["l"]),
        right=_node_from_json(data["r"]),
    )


def save_gbt(model: GradientBoostedEnsemble, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "v": FORMAT_VERSION,
                "kind": model.kind,
                "dim": model.dim,
                "base": model.base,
                "eta": model.eta,
                "max_depth": model.max_depth,
                "rounds": model.rounds,
                "trees": [_node_to_json(t) for t in model.trees],
            },
            fh,
        )


def load_gbt(path) -> GradientBoostedEnsemble:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("v") != FORMAT_VERSION:
        raise ValueError("unsupported model format version")
    return GradientBoostedEnsemble(
        kind=data["kind"],
        dim=data["dim"],
        base=data["base"],
        eta=data["eta"],
        max_depth=data["max_depth"],
        trees=[_node_from_json(t) for t in data["trees"]],
        train_mse=[],
    )
