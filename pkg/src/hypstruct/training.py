"""Desk-scale optimization: synthetic data, a small encoder, the training
loop, and direct free-coordinate tree embedding.

The training loop follows the reference procedure: per-epoch seeded shuffle,
per-batch forward pass, composite objective, exact tape gradient, SGD with
momentum under a constant or cosine learning-rate schedule.  Everything is
deterministic given the config seeds.
"""

from __future__ import annotations

import csv
import io
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import autodiff as ad
from . import geometry as geo
from . import objective as obj
from .errors import DivergedError, InsufficientVertices, ValidationError
from .hierarchy import LabelTree, tree_metric
from .objective import FlatInputs, ObjectiveConfig

PROJECTION_WIDTH_CAP = 128


def worker_count():
    """Parallel fan-out width; capped by the HYPSTRUCT_THREADS env var."""
    env = os.environ.get("HYPSTRUCT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class EncoderSpec:
    """A linear or one-hidden-layer tanh encoder."""

    kind: str = "mlp_1hidden"
    input_dim: int = 16
    hidden_dim: int = 32
    output_dim: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("linear", "mlp_1hidden"):
            raise ValueError("kind must be 'linear' or 'mlp_1hidden'")
        if min(self.input_dim, self.hidden_dim, self.output_dim) < 1:
            raise ValueError("dimensions must be >= 1")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 128
    lr0: float = 0.05
    momentum: float = 0.9
    schedule: str = "cosine"
    weight_decay: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if not (self.lr0 > 0):
            raise ValueError("lr0 must be positive")
        if not (0.0 <= self.momentum < 1.0):
            raise ValueError("momentum must lie in [0, 1)")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be nonnegative")
        if self.schedule not in ("constant", "cosine"):
            raise ValueError("schedule must be 'constant' or 'cosine'")


@dataclass(frozen=True)
class SyntheticSpec:
    """Hierarchical Gaussian generator: coarse directions, leaf offsets, noise.

    ``seed`` fixes the class centers; ``noise_seed`` (default: derived from
    ``seed``) fixes the sample noise, so held-out sets can share centers while
    drawing fresh noise.
    """

    tree: LabelTree
    dim: int = 16
    coarse_spread: float = 4.0
    fine_spread: float = 1.5
    noise_sigma: float = 0.5
    n_per_leaf: int = 50
    seed: int = 0
    noise_seed: Optional[int] = None

    def __post_init__(self):
        if self.dim < 1 or self.n_per_leaf < 1:
            raise ValueError("dim and n_per_leaf must be positive")
        if not (self.coarse_spread > self.fine_spread > self.noise_sigma):
            warnings.warn(
                "recommended ordering coarse_spread > fine_spread > noise_sigma "
                "does not hold; clusters may not reflect the hierarchy",
                stacklevel=2,
            )


@dataclass
class LabeledDataset:
    """Feature rows with fine-class labels; ``view2`` holds contrastive views."""

    features: np.ndarray
    labels: np.ndarray
    view2: Optional[np.ndarray] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.view2 is not None:
            self.view2 = np.asarray(self.view2, dtype=np.float64)

    @property
    def n(self):
        return self.labels.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]


def _unit(rng, dim):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def leaf_centers(spec: SyntheticSpec) -> np.ndarray:
    """Class centers: depth-1 vertices get coarse offsets, deeper ones fine."""
    tree = spec.tree
    rng = np.random.default_rng(spec.seed)
    centers = {tree.root: np.zeros(spec.dim)}
    order = sorted(range(tree.n_vertices), key=tree.depth)
    for v in order:
        if v == tree.root:
            continue
        spread = spec.coarse_spread if tree.depth(v) == 1 else spec.fine_spread
        centers[v] = centers[tree.parent[v]] + spread * _unit(rng, spec.dim)
    return np.stack([centers[tree.leaf_of_class(k)] for k in range(tree.n_classes)])


def generate_hierarchical_gaussians(spec: SyntheticSpec) -> LabeledDataset:
    """Leaf centers plus isotropic noise; two views per sample, seeded."""
    centers = leaf_centers(spec)
    # noise stream separate from the center stream so both are reproducible
    noise_seed = spec.seed if spec.noise_seed is None else spec.noise_seed
    rng = np.random.default_rng(np.random.SeedSequence([noise_seed, 1]))
    rows, rows2, labels = [], [], []
    for k in range(spec.tree.n_classes):
        noise = rng.standard_normal((spec.n_per_leaf, spec.dim))
        noise2 = rng.standard_normal((spec.n_per_leaf, spec.dim))
        rows.append(centers[k] + spec.noise_sigma * noise)
        rows2.append(centers[k] + spec.noise_sigma * noise2)
        labels.extend([k] * spec.n_per_leaf)
    return LabeledDataset(np.vstack(rows), np.array(labels), view2=np.vstack(rows2))


def save_dataset_csv(path, dataset: LabeledDataset, tree: LabelTree):
    """CSV with header label,f0,...,f{d-1}; labels are leaf names."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + [f"f{i}" for i in range(dataset.dim)])
        for row, lab in zip(dataset.features, dataset.labels):
            writer.writerow([tree.names[tree.leaf_of_class(int(lab))]] + [repr(x) for x in row])


def load_dataset_csv(path, tree: LabelTree) -> LabeledDataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "label":
            raise ValidationError(f"{path}: expected header starting with 'label'")
        rows, labels = [], []
        for rec in reader:
            if not rec:
                continue
            name = rec[0]
            leaf = tree.id_of(name)
            labels.append(tree.class_index(leaf))
            rows.append([float(x) for x in rec[1:]])
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    return LabeledDataset(np.asarray(rows), np.asarray(labels))


# encoder ------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamLayout:
    names: tuple
    shapes: tuple
    slices: tuple

    @property
    def size(self):
        return self.slices[-1].stop if self.slices else 0

    def unpack(self, vec):
        vec = np.asarray(vec)
        return {n: vec[s].reshape(sh) for n, sh, s in zip(self.names, self.shapes, self.slices)}

    def pack(self, params: dict):
        return np.concatenate([np.asarray(params[n], dtype=np.float64).ravel()
                               for n in self.names])


def _layout(shapes: dict) -> ParamLayout:
    names, shps, slices = [], [], []
    offset = 0
    for name, shape in shapes.items():
        size = int(np.prod(shape))
        names.append(name)
        shps.append(tuple(shape))
        slices.append(slice(offset, offset + size))
        offset += size
    return ParamLayout(tuple(names), tuple(shps), tuple(slices))


def build_layout(enc: EncoderSpec, cfg: ObjectiveConfig, n_classes: int) -> ParamLayout:
    shapes = {}
    if enc.kind == "linear":
        shapes["enc.w"] = (enc.input_dim, enc.output_dim)
        shapes["enc.b"] = (enc.output_dim,)
    else:
        shapes["enc.w1"] = (enc.input_dim, enc.hidden_dim)
        shapes["enc.b1"] = (enc.hidden_dim,)
        shapes["enc.w2"] = (enc.hidden_dim, enc.output_dim)
        shapes["enc.b2"] = (enc.output_dim,)
    if cfg.flat_loss == "cross_entropy":
        shapes["head.w"] = (enc.output_dim, n_classes)
        shapes["head.b"] = (n_classes,)
    else:
        proj = min(enc.output_dim, PROJECTION_WIDTH_CAP)
        shapes["proj.w"] = (enc.output_dim, proj)
        shapes["proj.b"] = (proj,)
    return _layout(shapes)


def init_params(layout: ParamLayout, seed: int) -> np.ndarray:
    """Uniform [-1/sqrt(fan_in), 1/sqrt(fan_in)] per tensor, seeded."""
    rng = np.random.default_rng(seed)
    chunks = []
    for name, shape in zip(layout.names, layout.shapes):
        fan_in = shape[0] if len(shape) == 2 else max(1, shape[0])
        bound = 1.0 / np.sqrt(fan_in)
        chunks.append(rng.uniform(-bound, bound, size=int(np.prod(shape))))
    return np.concatenate(chunks)


def _param(vec, layout, name):
    i = layout.names.index(name)
    return ad.reshape(vec[layout.slices[i]], layout.shapes[i])


def encode(vec, layout: ParamLayout, enc: EncoderSpec, x):
    """Encoder forward pass; ``vec`` may be a tape Node or a flat array."""
    x = np.asarray(x, dtype=np.float64)
    if enc.kind == "linear":
        return ad.matmul(x, _param(vec, layout, "enc.w")) + _param(vec, layout, "enc.b")
    h = ad.tanh(ad.matmul(x, _param(vec, layout, "enc.w1")) + _param(vec, layout, "enc.b1"))
    return ad.matmul(h, _param(vec, layout, "enc.w2")) + _param(vec, layout, "enc.b2")


def class_logits(vec, layout, feats):
    return ad.matmul(feats, _param(vec, layout, "head.w")) + _param(vec, layout, "head.b")


def project_embeddings(vec, layout, feats):
    y = ad.tanh(ad.matmul(feats, _param(vec, layout, "proj.w")) + _param(vec, layout, "proj.b"))
    norms = ad.sqrt(ad.maximum(geo.sq_norm(y, keepdims=True), 1e-300))
    return y / norms


# training loop --------------------------------------------------------------------

@dataclass(frozen=True)
class HistoryRow:
    epoch: int
    flat: float
    cpcc: float
    center: float
    lr: float


@dataclass
class TrainResult:
    params: dict
    layout: ParamLayout
    history: list
    skipped_cpcc_steps: int = 0


def learning_rate(tc: TrainConfig, epoch: int) -> float:
    if tc.schedule == "constant" or tc.epochs == 1:
        return tc.lr0
    return tc.lr0 * 0.5 * (1.0 + np.cos(np.pi * epoch / (tc.epochs - 1)))


def history_to_csv(history) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["epoch", "flat", "cpcc", "center", "lr"])
    for row in history:
        writer.writerow([row.epoch, repr(row.flat), repr(row.cpcc),
                         repr(row.center), repr(row.lr)])
    return buf.getvalue()


def train(dataset: LabeledDataset, tree: LabelTree, enc: EncoderSpec,
          cfg: ObjectiveConfig, tc: TrainConfig) -> TrainResult:
    """Run the composite-objective training loop; deterministic per seeds."""
    n = dataset.n
    if tc.batch_size > n:
        raise ValueError(f"batch_size {tc.batch_size} exceeds dataset size {n}")
    if cfg.flat_loss == "supcon" and dataset.view2 is None:
        raise ValueError("supcon training needs a dataset with two views per sample")
    layout = build_layout(enc, cfg, tree.n_classes)
    params = init_params(layout, enc.seed)
    velocity = np.zeros_like(params)
    metric = tree_metric(tree)
    rng = np.random.default_rng(tc.seed)
    history = []
    skipped = 0

    for epoch in range(tc.epochs):
        lr = learning_rate(tc, epoch)
        perm = rng.permutation(n)
        flat_sum = 0.0
        n_batches = 0
        for start in range(0, n, tc.batch_size):
            idx = perm[start:start + tc.batch_size]
            xb = dataset.features[idx]
            yb = dataset.labels[idx]
            if cfg.flat_loss == "supcon":
                xb = np.vstack([xb, dataset.view2[idx]])
                yb = np.concatenate([yb, yb])

            alpha_eff = cfg.alpha
            if cfg.alpha > 0:
                present = obj.present_vertices(tree, yb, cfg.tree_scope)
                k = len(present)
                if k * (k - 1) // 2 < obj.MIN_CPCC_PAIRS:
                    alpha_eff = 0.0
                    skipped += 1

            leaf = ad.Node(params)
            feats = encode(leaf, layout, enc, xb)
            if cfg.flat_loss == "cross_entropy":
                flat_term = obj.cross_entropy_core(class_logits(leaf, layout, feats), yb)
            else:
                flat_term = obj.supcon_core(project_embeddings(leaf, layout, feats), yb, cfg.tau)
            total = flat_term
            if alpha_eff > 0:
                total = total - alpha_eff * obj.cpcc_term_core(feats, yb, tree, cfg, metric)
            if cfg.beta > 0:
                total = total + cfg.beta * obj.centering_core(feats, cfg)

            value = float(ad.val(total))
            if not np.isfinite(value):
                raise DivergedError(epoch, n_batches)
            flat_sum += float(ad.val(flat_term))
            n_batches += 1

            grad = ad.grad(total, [leaf])[0]
            if tc.weight_decay > 0:
                grad = grad + tc.weight_decay * params
            velocity = tc.momentum * velocity - lr * grad
            params = params + velocity

        cpcc_val, center_val = epoch_metrics(params, layout, enc, dataset, tree, cfg, metric)
        history.append(HistoryRow(epoch, flat_sum / max(1, n_batches),
                                  cpcc_val, center_val, lr))

    return TrainResult(params=layout.unpack(params), layout=layout,
                       history=history, skipped_cpcc_steps=skipped)


def epoch_metrics(params, layout, enc, dataset, tree, cfg, metric=None):
    """Whole-dataset CPCC and centering values on the value path."""
    feats = encode(np.asarray(params), layout, enc, dataset.features)
    try:
        cpcc_val = float(ad.val(obj.cpcc_term_core(feats, dataset.labels, tree, cfg, metric)))
    except InsufficientVertices:
        cpcc_val = float("nan")
    center_val = float(ad.val(obj.centering_core(feats, cfg)))
    return cpcc_val, center_val


def encode_dataset(result: TrainResult, enc: EncoderSpec, features) -> np.ndarray:
    """Apply a trained encoder to raw input rows."""
    vec = result.layout.pack(result.params)
    return np.asarray(encode(vec, result.layout, enc, features))


# direct tree embedding ---------------------------------------------------------------

@dataclass(frozen=True)
class EmbedBudget:
    restarts: int = 8
    steps: int = 5000
    lr: float = 0.5
    init_scale: float = 0.5
    seed: int = 0


@dataclass
class EmbedResult:
    coords: dict
    cpcc: float
    per_restart: list


def embed_tree_direct(tree: LabelTree, dim: int, distance_mode: str,
                      cfg: Optional[ObjectiveConfig] = None,
                      budget: Optional[EmbedBudget] = None) -> EmbedResult:
    """Optimize free per-vertex coordinates to maximize CPCC against d_T.

    Plain gradient ascent, ``budget.restarts`` seeded restarts run as
    independent workers, best final CPCC reported.  Poincare mode optimizes
    tangent coordinates passed through the origin exponential map, so returned
    coordinates always satisfy the ball invariant.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if distance_mode not in ("l2", "poincare"):
        raise ValueError("distance_mode must be 'l2' or 'poincare'")
    cfg = cfg or ObjectiveConfig()
    budget = budget or EmbedBudget()
    vertices = obj.scope_vertices(tree, cfg.tree_scope)
    k = len(vertices)
    if k * (k - 1) // 2 < obj.MIN_CPCC_PAIRS:
        raise InsufficientVertices(f"{k} in-scope vertices cannot form 3 pairs")
    metric = tree_metric(tree)
    vids = np.asarray(vertices)
    ii, jj = np.triu_indices(k, 1)
    tdist = metric.dist[vids[ii], vids[jj]]

    def objective(leaf):
        x = ad.reshape(leaf, (k, dim))
        if distance_mode == "poincare":
            pts = geo.exp0(x, cfg.c)
            fdist = geo.dist_rows(ad.take(pts, ii), ad.take(pts, jj), cfg.c)
        else:
            diff = ad.take(x, ii) - ad.take(x, jj)
            fdist = ad.sqrt(ad.maximum(geo.sq_norm(diff), 1e-300))
        return obj.cpcc_core(tdist, fdist)

    seeds = np.random.SeedSequence(budget.seed).spawn(budget.restarts)

    def one_restart(seq):
        rng = np.random.default_rng(seq)
        x = (budget.init_scale * rng.standard_normal((k, dim))).ravel()
        final = -2.0
        for _ in range(budget.steps):
            leaf = ad.Node(x)
            out = objective(leaf)
            g = ad.grad(out, [leaf])[0]
            if not np.all(np.isfinite(g)):
                break
            x = x + budget.lr * g
            final = float(ad.val(out))
        # one more forward for the post-update value
        last = float(ad.val(objective(ad.Node(x))))
        if np.isfinite(last):
            final = last
        return final, x

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(one_restart, seeds))

    best_idx = int(np.argmax([r[0] for r in results]))
    best_cpcc, best_x = results[best_idx]
    x = best_x.reshape(k, dim)
    if distance_mode == "poincare":
        x = np.asarray(geo.exp0(x, cfg.c))
    coords = {int(v): x[i].copy() for i, v in enumerate(vertices)}
    return EmbedResult(coords=coords, cpcc=float(best_cpcc),
                       per_restart=[float(r[0]) for r in results])
