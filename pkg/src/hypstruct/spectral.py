"""Hierarchical block correlation matrices and their eigenspectra.

A class-ordered similarity matrix of perfectly structured features takes the
value ``r^h`` at entry (i, j), where ``h`` is the height of the lowest common
ancestor of the two samples' leaves.  For balanced trees the spectrum has a
closed form built from two reductions:

* a constant-correlation block of size d with off-diagonal p has eigenvalues
  ``1 + p(d-1)`` (once) and ``1 - p`` (d-1 times);
* a two-level block matrix splits into within-group eigenvalues ``1 - r_ii``
  and the spectrum of a small k x k matrix with ``a_ii = 1 + (p_i - 1) r_ii``
  and ``a_ij = sqrt(p_i p_j) r_ij``.

The numerical oracle is a self-contained cyclic Jacobi eigensolver; nothing in
the closed forms feeds it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateRow,
    NotSymmetric,
    PreconditionViolated,
    TemplateMismatch,
)
from .hierarchy import LabelTree

MULTIPLICITY_RTOL = 1e-9
SYMMETRY_ATOL = 1e-12


@dataclass(frozen=True)
class BlockCorrelationSpec:
    """A label tree whose leaves are samples plus per-height entry values.

    ``r[h-1]`` is the entry for pairs whose LCA has height ``h``; the theorem
    preconditions want ``r^1 >= r^2 >= ... >= r^H >= 0`` (violations warn).
    """

    tree: LabelTree
    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(float(x) for x in self.r))
        heights = {self.tree.lca_height(u, v)
                   for u in self.tree.leaves() for v in self.tree.leaves() if u != v}
        max_h = max(heights) if heights else 0
        if len(self.r) < max_h:
            raise ValueError(f"need r values for heights 1..{max_h}, got {len(self.r)}")
        rs = self.r[:max_h]
        if any(b > a for a, b in zip(rs, rs[1:])) or (rs and rs[-1] < 0):
            warnings.warn("r values are not descending nonnegative; "
                          "closed-form preconditions may not hold", stacklevel=2)

    def entry(self, height):
        return 1.0 if height == 0 else self.r[height - 1]


@dataclass(frozen=True)
class EigenSpectrum:
    """Descending eigenvalues with multiplicities."""

    values: tuple
    multiplicities: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))
        if len(self.values) != len(self.multiplicities):
            raise ValueError("values and multiplicities must align")
        if any(m < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        if any(b > a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be sorted descending")

    @property
    def order(self):
        return sum(self.multiplicities)

    @property
    def trace(self):
        return sum(v * m for v, m in zip(self.values, self.multiplicities))

    def expand(self):
        """Full descending eigenvalue array (multiplicities unrolled)."""
        return np.concatenate([np.full(m, v) for v, m in
                               zip(self.values, self.multiplicities)])

    @classmethod
    def from_values(cls, values):
        """Group a descending value list, merging at 1e-9 relative spacing."""
        values = np.sort(np.asarray(values, dtype=np.float64))[::-1]
        groups = []
        counts = []
        for v in values:
            if groups and abs(groups[-1] - v) <= MULTIPLICITY_RTOL * max(1.0, abs(groups[-1])):
                counts[-1] += 1
            else:
                groups.append(float(v))
                counts.append(1)
        return cls(tuple(groups), tuple(counts))


def build_block_matrix(spec: BlockCorrelationSpec) -> np.ndarray:
    """K[i, j] = 1 on the diagonal, else r^(LCA height of leaves i and j)."""
    tree = spec.tree
    leaves = [tree.leaf_of_class(k) for k in range(tree.n_classes)]
    n = len(leaves)
    out = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = spec.entry(tree.lca_height(leaves[i], leaves[j]))
    return out


def balanced_eigenvalues_closed_form(level_counts, r) -> EigenSpectrum:
    """Closed-form spectrum for a balanced tree given leaf-first level counts.

    ``level_counts = (C_0, ..., C_H)`` with ``C_0`` the number of samples and
    ``C_H = 1`` the root; ``r = (r^1, ..., r^H)``.  Recurrence: ``C_0 - C_1``
    eigenvalues ``1 - r^1``; at each higher height ``h`` the value grows by
    ``(r^h - r^{h+1}) C_0 / C_h`` with multiplicity ``C_h - C_{h+1}``; the top
    eigenvalue adds ``C_0 r^H``.
    """
    counts = [int(c) for c in level_counts]
    r = [float(x) for x in r]
    if counts[-1] != 1:
        raise ValueError("level_counts must end with the root count 1 "
                         "(leaf-first ordering C_0..C_H)")
    for a, b in zip(counts, counts[1:]):
        if b < 1 or a % b != 0:
            raise ValueError(f"unbalanced level counts: {b} does not divide {a}")
    H = len(counts) - 1
    if len(r) != H:
        raise ValueError(f"need {H} r values for height {H}, got {len(r)}")
    if any(x < 0 for x in r):
        raise PreconditionViolated("closed form requires r^h >= 0 for all h")
    c0 = counts[0]
    values = []
    mults = []
    lam = 1.0 - r[0]
    values.append(lam)
    mults.append(counts[0] - counts[1])
    for h in range(1, H):
        lam = lam + (r[h - 1] - r[h]) * c0 / counts[h]
        values.append(lam)
        mults.append(counts[h] - counts[h + 1])
    lam = lam + c0 * r[H - 1]
    values.append(lam)
    mults.append(1)
    pairs = [(v, m) for v, m in zip(values, mults) if m > 0]
    pairs.sort(key=lambda t: -t[0])
    merged_v, merged_m = [], []
    for v, m in pairs:
        if merged_v and abs(merged_v[-1] - v) <= MULTIPLICITY_RTOL * max(1.0, abs(v)):
            merged_m[-1] += m
        else:
            merged_v.append(v)
            merged_m.append(m)
    return EigenSpectrum(tuple(merged_v), tuple(merged_m))


def star_matrix_eigenvalues(d: int, p: float) -> EigenSpectrum:
    """Spectrum of the d x d constant-correlation matrix with off-diagonal p."""
    if d < 2:
        raise ValueError("d must be >= 2")
    top = 1.0 + p * (d - 1)
    rest = 1.0 - p
    if abs(top - rest) <= MULTIPLICITY_RTOL * max(1.0, abs(top)):
        return EigenSpectrum((top,), (d,))
    if top > rest:
        return EigenSpectrum((top, rest), (1, d - 1))
    return EigenSpectrum((rest, top), (d - 1, 1))


def two_level_block_reduction(K, group_sizes, within, across):
    """Split a two-level block matrix into within-group eigenvalues and a
    reduced k x k matrix whose spectrum supplies the remaining eigenvalues.

    ``within[i]`` is the common correlation inside group i, ``across[i][j]``
    between groups i and j.  ``K`` must match this template within 1e-12.
    Returns ``(within_eigs, A)`` with ``within_eigs`` expanded (1 - r_ii with
    multiplicity p_i - 1).
    """
    K = np.asarray(K, dtype=np.float64)
    sizes = [int(p) for p in group_sizes]
    within = [float(w) for w in within]
    across = np.asarray(across, dtype=np.float64)
    k = len(sizes)
    n = sum(sizes)
    if K.shape != (n, n) or len(within) != k or across.shape != (k, k):
        raise TemplateMismatch("shapes disagree with the group structure")
    expected = np.zeros((n, n))
    starts = np.concatenate([[0], np.cumsum(sizes)])
    for i in range(k):
        si = slice(starts[i], starts[i + 1])
        block = np.full((sizes[i], sizes[i]), within[i])
        np.fill_diagonal(block, 1.0)
        expected[si, si] = block
        for j in range(i + 1, k):
            sj = slice(starts[j], starts[j + 1])
            expected[si, sj] = across[i, j]
            expected[sj, si] = across[i, j]
    if np.max(np.abs(K - expected)) > 1e-12:
        raise TemplateMismatch("matrix does not match the two-level template")
    within_eigs = np.concatenate([np.full(p - 1, 1.0 - w)
                                  for p, w in zip(sizes, within) if p > 1]
                                 or [np.empty(0)])
    a = np.zeros((k, k))
    for i in range(k):
        a[i, i] = 1.0 + (sizes[i] - 1) * within[i]
        for j in range(i + 1, k):
            a[i, j] = a[j, i] = np.sqrt(sizes[i] * sizes[j]) * across[i, j]
    return within_eigs, a


def generic_gap_condition(M, m, delta, p_max, C_h) -> bool:
    """Sufficient across-group smallness for the eigenvalue group separation."""
    if p_max < 1 or C_h < 2:
        raise ValueError("need p_max >= 1 and C_h >= 2")
    return m <= (M - 2.0 * delta * (p_max - 1)) / (p_max * (C_h - 1))


# numerical oracle -----------------------------------------------------------------

def jacobi_eigenvalues(K, tol=1e-12, max_sweeps=100) -> np.ndarray:
    """All eigenvalues of a symmetric matrix via cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below ``tol * ||K||_F``.
    Independent of any closed form; this is the package's numerical oracle.
    """
    a = np.array(K, dtype=np.float64)
    n = a.shape[0]
    if n == 1:
        return a[0, :1].copy()
    norm0 = np.linalg.norm(a)
    if norm0 == 0.0:
        return np.zeros(n)
    target = tol * norm0
    for _ in range(max_sweeps):
        off = np.sqrt(max(0.0, np.linalg.norm(a) ** 2 - np.sum(np.diag(a) ** 2)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
    return np.sort(np.diag(a))[::-1]


def numerical_eigenvalues(K) -> EigenSpectrum:
    """Jacobi-oracle spectrum of a symmetric matrix, multiplicities merged."""
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {K.shape}")
    if np.max(np.abs(K - K.T)) > SYMMETRY_ATOL * max(1.0, np.max(np.abs(K))):
        raise NotSymmetric("matrix is not symmetric within 1e-12")
    sym = 0.5 * (K + K.T)
    return EigenSpectrum.from_values(jacobi_eigenvalues(sym))


def class_sorted_order(labels, tree: LabelTree) -> np.ndarray:
    """Sample order sorted by (coarse group, fine class, original index)."""
    labels = np.asarray(labels, dtype=np.int64)
    coarse = np.array([tree.coarse_ancestor(tree.leaf_of_class(int(k))) for k in labels])
    return np.lexsort((np.arange(labels.size), labels, coarse))


def gram_matrix(Z, labels, tree: LabelTree) -> np.ndarray:
    """Class-ordered similarity matrix of centered, row-normalized features."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[0] < 2:
        raise ValueError("need an (n >= 2, d) feature matrix")
    order = class_sorted_order(labels, tree)
    X = Z[order] - Z.mean(axis=0)
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateRow("a row is zero after centering")
    X = X / norms[:, None]
    return X @ X.T


def phase_transition_detect(spectrum: EigenSpectrum, top_k: int):
    """Positions of the largest relative drops among the top eigenvalues.

    Returns ``[(position, drop), ...]`` sorted by descending drop, where
    ``position`` counts eigenvalues before the gap (1-based) and
    ``drop = (lam_i - lam_{i+1}) / lam_i``; drops below 1e-9 are dropped.
    """
    full = spectrum.expand()
    if full.size < 2:
        raise ValueError("need at least two eigenvalues")
    upto = min(int(top_k), full.size - 1)
    hits = []
    for i in range(upto):
        lam, nxt = full[i], full[i + 1]
        if abs(lam) < 1e-300:
            continue
        drop = (lam - nxt) / lam
        if drop > 1e-9:
            hits.append((i + 1, float(drop)))
    hits.sort(key=lambda t: (-t[1], t[0]))
    return hits
