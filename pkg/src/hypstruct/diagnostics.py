"""Evaluation metrics: Gromov hyperbolicity, test-set CPCC, kNN accuracy,
Mahalanobis out-of-distribution scoring, AUROC, and Borda count."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry as geo
from . import objective as obj
from .errors import (
    DegenerateVariance,
    DimensionMismatch,
    EmptyInput,
    IndexOutOfRange,
    MissingEntry,
    SingularAfterRegularization,
    ZeroDiameter,
)
from .hierarchy import LabelTree, tree_metric

EXACT_DELTA_MAX_N = 400


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative matrix with a zero diagonal."""

    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"expected a square matrix, got {d.shape}")
        if np.max(np.abs(d - d.T), initial=0.0) > 1e-12:
            raise ValueError("distance matrix is not symmetric within 1e-12")
        if np.any(np.diag(d) != 0.0):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(d < 0.0):
            raise ValueError("distances must be nonnegative")
        object.__setattr__(self, "dist", d)
        d.setflags(write=False)

    @property
    def n(self):
        return self.dist.shape[0]

    @property
    def diameter(self):
        return float(self.dist.max(initial=0.0))


def gromov_product(dm: DistanceMatrix, x, y, z) -> float:
    """(y, z) product at basepoint x: (d(x,y) + d(x,z) - d(y,z)) / 2."""
    n = dm.n
    for i in (x, y, z):
        if not (0 <= i < n):
            raise IndexOutOfRange(f"index {i} outside [0, {n})")
    d = dm.dist
    return 0.5 * (d[x, y] + d[x, z] - d[y, z])


def _delta_exact(d: np.ndarray) -> float:
    n = d.shape[0]
    best = 0.0
    for w in range(n):
        # Gromov products at basepoint w
        g = 0.5 * (d[w, :, None] + d[w, None, :] - d)
        # max over y of min(g[x, y], g[y, z]), built one y at a time
        m = np.full((n, n), -np.inf)
        for y in range(n):
            np.maximum(m, np.minimum(g[:, y][:, None], g[y, :][None, :]), out=m)
        best = max(best, float((m - g).max()))
    return best


def _delta_sampled(d: np.ndarray, k: int, seed) -> float:
    n = d.shape[0]
    rng = np.random.default_rng(seed)
    best = 0.0
    chunk = 1_000_000
    remaining = int(k)
    while remaining > 0:
        take = min(chunk, remaining)
        remaining -= take
        w, x, y, z = rng.integers(0, n, size=(4, take))
        gxy = 0.5 * (d[w, x] + d[w, y] - d[x, y])
        gyz = 0.5 * (d[w, y] + d[w, z] - d[y, z])
        gxz = 0.5 * (d[w, x] + d[w, z] - d[x, z])
        vals = np.minimum(gxy, gyz) - gxz
        best = max(best, float(vals.max(initial=0.0)))
    return best


def delta_hyperbolicity(dm: DistanceMatrix, mode: str = "exact",
                        k: int = 2_000_000, seed: int = 0):
    """Four-point-condition slack of a metric space.

    Returns ``(delta, delta_rel)`` with ``delta_rel = 2 delta / diameter``.
    ``mode="exact"`` scans all quadruples (n <= 400); ``mode="sampled"`` draws
    ``k`` seeded quadruples and lower-bounds the exact value.
    """
    n = dm.n
    diam = dm.diameter
    if diam == 0.0:
        raise ZeroDiameter("all points coincide; delta_rel undefined")
    if n < 4:
        return 0.0, 0.0
    if mode == "exact":
        if n > EXACT_DELTA_MAX_N:
            raise ValueError(f"exact mode is capped at n <= {EXACT_DELTA_MAX_N}; "
                             "use mode='sampled'")
        delta = _delta_exact(dm.dist)
    elif mode == "sampled":
        delta = _delta_sampled(dm.dist, k, seed)
    else:
        raise ValueError("mode must be 'exact' or 'sampled'")
    return delta, 2.0 * delta / diam


def pairwise_l2(features) -> DistanceMatrix:
    x = np.asarray(features, dtype=np.float64)
    sq = np.sum(x * x, axis=1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (x @ x.T), 0.0)
    d = np.sqrt(d2)
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(0.5 * (d + d.T))


def test_cpcc(features, labels, tree: LabelTree, distance_mode: str = "l2",
              c: float = 1.0) -> float:
    """CPCC between d_T and class-prototype distances over leaf pairs.

    ``distance_mode="l2"`` uses Euclidean centroids and distances;
    ``"poincare"`` exp-maps samples, Klein-averages them per class, and uses
    the Poincare distance with curvature ``c``.
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    present_classes = np.unique(labels)
    k = present_classes.size
    if k * (k - 1) // 2 < obj.MIN_CPCC_PAIRS:
        raise DegenerateVariance(f"{k} present classes give fewer than "
                                 f"{obj.MIN_CPCC_PAIRS} pairs")
    tm = tree_metric(tree)
    leaf_ids = np.array([tree.leaf_of_class(int(kk)) for kk in present_classes])
    ii, jj = np.triu_indices(k, 1)
    tdist = tm.dist[leaf_ids[ii], leaf_ids[jj]]
    protos = []
    for kk in present_classes:
        rows = features[labels == kk]
        if distance_mode == "poincare":
            ball = geo.exp0(rows, c)
            klein = geo.to_klein(ball, c)
            protos.append(np.asarray(geo.to_poincare(geo.einstein_mid(klein, c), c)))
        elif distance_mode == "l2":
            protos.append(rows.mean(axis=0))
        else:
            raise ValueError("distance_mode must be 'l2' or 'poincare'")
    protos = np.stack(protos)
    if distance_mode == "poincare":
        fdist = np.asarray(geo.dist_rows(protos[ii], protos[jj], c))
    else:
        fdist = np.linalg.norm(protos[ii] - protos[jj], axis=1)
    return obj.cpcc(tdist, fdist)


def knn_classify(train_feats, train_labels, query_feats, k: int,
                 level: str = "fine", tree: Optional[LabelTree] = None,
                 query_labels=None):
    """k-nearest-neighbour majority vote under the L2 metric.

    ``level="coarse"`` maps fine labels to their parent vertex before voting.
    Vote ties break toward the smallest class index; neighbour-distance ties
    break toward the smallest training index.  Returns ``(predictions,
    accuracy)`` where accuracy is None unless ``query_labels`` is given.
    """
    train_feats = np.asarray(train_feats, dtype=np.float64)
    query_feats = np.asarray(query_feats, dtype=np.float64)
    train_labels = np.asarray(train_labels, dtype=np.int64)
    n = train_feats.shape[0]
    if not (1 <= k <= n):
        raise ValueError(f"k must lie in [1, {n}]")
    if level == "coarse":
        if tree is None:
            raise ValueError("coarse level needs the label tree")
        vote_labels = np.array([tree.parent[tree.leaf_of_class(int(y))]
                                for y in train_labels])
    elif level == "fine":
        vote_labels = train_labels
    else:
        raise ValueError("level must be 'fine' or 'coarse'")

    sq_t = np.sum(train_feats * train_feats, axis=1)
    preds = np.empty(query_feats.shape[0], dtype=np.int64)
    for i, q in enumerate(query_feats):
        d2 = sq_t - 2.0 * (train_feats @ q) + q @ q
        nearest = np.argsort(d2, kind="stable")[:k]
        votes = vote_labels[nearest]
        classes, counts = np.unique(votes, return_counts=True)
        preds[i] = classes[counts == counts.max()].min()
    accuracy = None
    if query_labels is not None:
        truth = np.asarray(query_labels, dtype=np.int64)
        if level == "coarse":
            truth = np.array([tree.parent[tree.leaf_of_class(int(y))] for y in truth])
        accuracy = float(np.mean(preds == truth))
    return preds, accuracy


@dataclass(frozen=True)
class GaussianFit:
    """Mean, covariance, and the ridge-regularized inverse covariance."""

    mu: np.ndarray
    sigma: np.ndarray
    sigma_inv: np.ndarray
    ridge: float


def fit_gaussian(features) -> GaussianFit:
    """Sample mean and unbiased covariance with a scale-aware ridge inverse.

    The ridge is ``1e-6 * trace(sigma) / d`` floored at 1e-12 so that a
    degenerate (zero-covariance) fit still inverts to ``(1/ridge) I``.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two feature rows")
    mu = x.mean(axis=0)
    centered = x - mu
    sigma = centered.T @ centered / (x.shape[0] - 1)
    d = sigma.shape[0]
    ridge = max(1e-6 * float(np.trace(sigma)) / d, 1e-12)
    try:
        sigma_inv = np.linalg.inv(sigma + ridge * np.eye(d))
    except np.linalg.LinAlgError as e:
        raise SingularAfterRegularization(str(e)) from None
    if not np.all(np.isfinite(sigma_inv)):
        raise SingularAfterRegularization("inverse contains non-finite entries")
    return GaussianFit(mu=mu, sigma=sigma, sigma_inv=sigma_inv, ridge=ridge)


def mahalanobis_score(x, fit: GaussianFit) -> float:
    """Quadratic-form anomaly score; higher means more out-of-distribution."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != fit.mu.shape:
        raise DimensionMismatch(f"x has shape {x.shape}, fit expects {fit.mu.shape}")
    diff = x - fit.mu
    return float(diff @ fit.sigma_inv @ diff)


def mahalanobis_scores(rows, fit: GaussianFit) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.float64)
    diff = rows - fit.mu
    return np.einsum("ij,jk,ik->i", diff, fit.sigma_inv, diff)


@dataclass(frozen=True)
class FeatureTransform:
    """Center by the training mean, then normalize rows to unit length."""

    mean: np.ndarray

    @classmethod
    def fit(cls, features):
        return cls(mean=np.asarray(features, dtype=np.float64).mean(axis=0))

    def apply(self, features):
        x = np.asarray(features, dtype=np.float64) - self.mean
        norms = np.linalg.norm(x, axis=1, keepdims=True)
        return x / np.maximum(norms, 1e-30)


def auroc(id_scores, ood_scores) -> float:
    """Rank statistic P(ood > id) + 0.5 P(tie); OOD is the positive class."""
    a = np.asarray(id_scores, dtype=np.float64)
    b = np.asarray(ood_scores, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise EmptyInput("both score lists must be nonempty")
    combined = np.concatenate([a, b])
    order = np.argsort(combined, kind="stable")
    ranks = np.empty_like(combined)
    # average ranks over ties
    sorted_vals = combined[order]
    i = 0
    n = combined.size
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    rank_sum_ood = ranks[a.size:].sum()
    u = rank_sum_ood - b.size * (b.size + 1) / 2.0
    return float(u / (a.size * b.size))


def borda_count(auroc_table) -> dict:
    """Rank-aggregation points per method across datasets.

    ``auroc_table`` maps method name -> {dataset name -> AUROC}.  Per dataset,
    rank methods descending; rank r of M earns M - r points, ties share the
    mean of the tied ranks' points.  Missing entries raise MissingEntry.
    """
    methods = list(auroc_table.keys())
    if not methods:
        raise EmptyInput("no methods")
    datasets = list(auroc_table[methods[0]].keys())
    for m in methods:
        if set(auroc_table[m].keys()) != set(datasets):
            raise MissingEntry(f"method {m!r} does not cover all datasets")
    scores = {m: 0.0 for m in methods}
    big_m = len(methods)
    for ds in datasets:
        vals = []
        for m in methods:
            v = auroc_table[m][ds]
            if v is None or not np.isfinite(v):
                raise MissingEntry(f"missing AUROC for {m!r} on {ds!r}")
            vals.append(float(v))
        order = np.argsort(np.argsort([-v for v in vals], kind="stable"), kind="stable")
        # order[i] = 0-based rank of method i before tie averaging
        vals_arr = np.asarray(vals)
        for i, m in enumerate(methods):
            tied = np.flatnonzero(vals_arr == vals_arr[i])
            tied_ranks = np.sort(order[tied])
            points = np.mean([big_m - 1 - r for r in tied_ranks])
            scores[m] += float(points)
    return scores
