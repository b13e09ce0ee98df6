"""Weighted rooted label trees, tree metrics, and LCA queries.

Vertices are integer ids assigned in document (preorder) order; the leaf order
induced by the document is the canonical fine-class order used everywhere
downstream (CPCC pair enumeration, block matrices, dataset labels).

The on-disk hierarchy format is JSON::

    {"name": "root", "children": [
        {"name": "fruit", "weight": 1, "children": [
            {"name": "apple", "weight": 1}, ...]},
        ...]}

``weight`` is the weight of the edge to the parent and must be absent on the
root; nodes without children are leaves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidLevelCounts, NotALeaf, ParseError, ValidationError


@dataclass(frozen=True)
class TreeMetric:
    """All-pairs shortest-path distances on a label tree (vertex-id order)."""

    dist: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dist", np.asarray(self.dist, dtype=np.float64))
        self.dist.setflags(write=False)

    def __getitem__(self, key):
        return self.dist[key]

    @property
    def n(self):
        return self.dist.shape[0]


class LabelTree:
    """Immutable weighted rooted tree over named class vertices."""

    def __init__(self, names, parent, weights, leaf_classes=None):
        """Build and validate a tree.

        names: vertex names, index = vertex id.
        parent: per-vertex parent id, None exactly on the root.
        weights: per-vertex weight of the edge to the parent (ignored on root).
        leaf_classes: optional leaf vertex ids in fine-class order; defaults to
            the leaves in vertex-id order and must cover exactly the leaves.
        """
        self.names = list(names)
        self.parent = list(parent)
        n = len(self.names)
        if len(self.parent) != n or len(weights) != n:
            raise ValidationError("names, parent and weights must have equal length")
        if len(set(self.names)) != n:
            raise ValidationError("vertex names must be unique")

        roots = [i for i, p in enumerate(self.parent) if p is None]
        if len(roots) != 1:
            raise ValidationError(f"expected a single root, found {len(roots)}")
        self.root = roots[0]

        self.weights = [0.0 if p is None else float(w) for p, w in zip(self.parent, weights)]
        for i, (p, w) in enumerate(zip(self.parent, self.weights)):
            if p is None:
                continue
            if not (0 <= p < n):
                raise ValidationError(f"orphan vertex {self.names[i]}: parent id {p} out of range")
            if not (w > 0.0):
                raise ValidationError(f"nonpositive weight {w} on edge {self.names[i]} -> parent")

        # depth computation doubles as cycle/orphan detection
        self._depth = [-1] * n
        for i in range(n):
            chain = []
            v = i
            while self._depth[v] < 0:
                chain.append(v)
                p = self.parent[v]
                if p is None:
                    self._depth[v] = 0
                    chain.pop()
                    break
                if p in chain or len(chain) > n:
                    raise ValidationError("cycle detected in parent map")
                v = p
            base = self._depth[v]
            for k, u in enumerate(reversed(chain)):
                self._depth[u] = base + k + 1

        self._children = [[] for _ in range(n)]
        for i, p in enumerate(self.parent):
            if p is not None:
                self._children[p].append(i)

        leaves = [i for i in range(n) if not self._children[i]]
        if leaf_classes is None:
            leaf_classes = leaves
        if sorted(leaf_classes) != sorted(leaves):
            raise ValidationError("leaf_classes must cover exactly the leaves")
        self.leaf_classes = list(leaf_classes)
        self._class_of_leaf = {v: k for k, v in enumerate(self.leaf_classes)}
        self._id_of_name = {nm: i for i, nm in enumerate(self.names)}

        # fine-class indices of the leaves under each vertex
        self._subtree_classes = [None] * n
        for i in range(n):
            self._subtree_classes[i] = tuple(self._collect_classes(i))

    def _collect_classes(self, v):
        stack = [v]
        out = []
        while stack:
            u = stack.pop()
            if not self._children[u]:
                out.append(self._class_of_leaf[u])
            else:
                stack.extend(reversed(self._children[u]))
        return sorted(out)

    # basic queries

    @property
    def n_vertices(self):
        return len(self.names)

    @property
    def n_classes(self):
        return len(self.leaf_classes)

    def children(self, v):
        return tuple(self._children[v])

    def is_leaf(self, v):
        return not self._children[v]

    def leaves(self):
        return [i for i in range(self.n_vertices) if self.is_leaf(i)]

    def depth(self, v):
        return self._depth[v]

    def id_of(self, name):
        try:
            return self._id_of_name[name]
        except KeyError:
            raise ValidationError(f"unknown vertex name {name!r}") from None

    def class_index(self, leaf):
        if not self.is_leaf(leaf):
            raise NotALeaf(f"{self.names[leaf]} is not a leaf")
        return self._class_of_leaf[leaf]

    def leaf_of_class(self, k):
        return self.leaf_classes[k]

    def subtree_class_indices(self, v):
        """Fine-class indices of the leaves under vertex ``v``."""
        return self._subtree_classes[v]

    def coarse_ancestor(self, v):
        """Depth-1 ancestor of ``v`` (``v`` itself if its depth is <= 1)."""
        while self._depth[v] > 1:
            v = self.parent[v]
        return v

    def lca(self, u, v):
        du, dv = self._depth[u], self._depth[v]
        while du > dv:
            u = self.parent[u]
            du -= 1
        while dv > du:
            v = self.parent[v]
            dv -= 1
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
        return u

    def lca_height(self, leaf_i, leaf_j):
        """Height (levels above the leaf layer) of the LCA of two leaves."""
        if not self.is_leaf(leaf_i):
            raise NotALeaf(f"{self.names[leaf_i]} is not a leaf")
        if not self.is_leaf(leaf_j):
            raise NotALeaf(f"{self.names[leaf_j]} is not a leaf")
        a = self.lca(leaf_i, leaf_j)
        return max(self._depth[leaf_i], self._depth[leaf_j]) - self._depth[a]

    def serialize(self):
        """JSON document whose parse yields an identical tree."""
        return json.dumps(self._nested(self.root), indent=2)

    def _nested(self, v):
        node = {"name": self.names[v]}
        if self.parent[v] is not None:
            node["weight"] = self.weights[v]
        if self._children[v]:
            node["children"] = [self._nested(u) for u in self._children[v]]
        return node


def tree_metric(tree: LabelTree) -> TreeMetric:
    """All-pairs weighted shortest-path distances, one traversal per vertex."""
    n = tree.n_vertices
    adj = [[] for _ in range(n)]
    for v in range(n):
        p = tree.parent[v]
        if p is not None:
            adj[v].append((p, tree.weights[v]))
            adj[p].append((v, tree.weights[v]))
    dist = np.zeros((n, n))
    for src in range(n):
        row = dist[src]
        seen = np.zeros(n, dtype=bool)
        seen[src] = True
        stack = [src]
        while stack:
            u = stack.pop()
            for w, edge in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    row[w] = row[u] + edge
                    stack.append(w)
    return TreeMetric(dist)


def lca_height(tree: LabelTree, leaf_i, leaf_j):
    return tree.lca_height(leaf_i, leaf_j)


def balanced_tree(level_counts) -> LabelTree:
    """Balanced tree from root-first level counts, e.g. (1, 2, 4).

    ``level_counts[0]`` must be 1 (the root) and each count must divide the
    next; edge weights are 1.
    """
    counts = [int(c) for c in level_counts]
    if len(counts) < 2:
        raise InvalidLevelCounts("need at least a root level and a leaf level")
    if counts[0] != 1:
        raise InvalidLevelCounts("the root level count must be 1")
    for a, b in zip(counts, counts[1:]):
        if a < 1 or b < 1 or b % a != 0:
            raise InvalidLevelCounts(f"{a} does not divide {b}")

    names = ["root"]
    parent = [None]
    weights = [0.0]
    level_ids = [[0]]
    n_levels = len(counts)
    for lvl in range(1, n_levels):
        fanout = counts[lvl] // counts[lvl - 1]
        ids = []
        for j in range(counts[lvl]):
            vid = len(names)
            if lvl == n_levels - 1:
                names.append(f"leaf_{j}")
            else:
                names.append(f"n{lvl}_{j}")
            parent.append(level_ids[lvl - 1][j // fanout])
            weights.append(1.0)
            ids.append(vid)
        level_ids.append(ids)
    return LabelTree(names, parent, weights)


def parse_tree(text: str, normalize: bool = False) -> LabelTree:
    """Parse the JSON hierarchy format; document order fixes the leaf order.

    With ``normalize=True`` unit-weight dummy chains are inserted so that all
    leaves share the maximum depth.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    names, parent, weights = [], [], []

    def walk(node, parent_id):
        if not isinstance(node, dict) or "name" not in node:
            raise ValidationError("every node must be an object with a 'name'")
        vid = len(names)
        names.append(str(node["name"]))
        parent.append(parent_id)
        if parent_id is None:
            if "weight" in node:
                raise ValidationError("the root must not carry a weight")
            weights.append(0.0)
        else:
            w = node.get("weight", 1.0)
            if not isinstance(w, (int, float)) or not (w > 0):
                raise ValidationError(f"nonpositive weight {w!r} on {node['name']!r}")
            weights.append(float(w))
        for child in node.get("children", []) or []:
            walk(child, vid)

    walk(doc, None)
    tree = LabelTree(names, parent, weights)
    return normalize_depths(tree) if normalize else tree


def normalize_depths(tree: LabelTree) -> LabelTree:
    """Insert unit-weight dummy chains so all leaves share the maximum depth."""
    leaves = tree.leaves()
    target = max(tree.depth(v) for v in leaves)
    if all(tree.depth(v) == target for v in leaves):
        return tree
    names = list(tree.names)
    parent = list(tree.parent)
    weights = list(tree.weights)
    for v in leaves:
        deficit = target - tree.depth(v)
        attach = parent[v]
        weight_in = weights[v]
        for k in range(deficit):
            did = len(names)
            names.append(f"{tree.names[v]}.pad{k}")
            parent.append(attach)
            weights.append(weight_in if k == 0 else 1.0)
            attach = did
        if deficit:
            parent[v] = attach
            weights[v] = 1.0
    # original leaf ids are unchanged; dummies are appended internals
    return LabelTree(names, parent, weights, leaf_classes=list(tree.leaf_classes))


def builtin_cifar10_tree() -> LabelTree:
    """The 13-vertex toy hierarchy: transportation and animal coarse groups."""
    doc = {
        "name": "root",
        "children": [
            {"name": "transportation", "weight": 1, "children": [
                {"name": "airplane", "weight": 1},
                {"name": "automobile", "weight": 1},
                {"name": "ship", "weight": 1},
                {"name": "truck", "weight": 1},
            ]},
            {"name": "animal", "weight": 1, "children": [
                {"name": "bird", "weight": 1},
                {"name": "cat", "weight": 1},
                {"name": "deer", "weight": 1},
                {"name": "dog", "weight": 1},
                {"name": "frog", "weight": 1},
                {"name": "horse", "weight": 1},
            ]},
        ],
    }
    return parse_tree(json.dumps(doc))
