"""CPCC, flat losses, prototypes, composite objective, and gradient contracts."""

import math

import numpy as np
import pytest

from hypstruct import autodiff as ad
from hypstruct import geometry as geo
from hypstruct import hierarchy as hi
from hypstruct import objective as obj
from hypstruct.errors import (
    ClassWithoutPositive,
    DegenerateVariance,
    EmptyGroup,
    InsufficientVertices,
    LengthMismatch,
    UnnormalizedInput,
)

from conftest import central_difference


def brute_force_pearson(t, f):
    t = np.asarray(t, float)
    f = np.asarray(f, float)
    td = t - t.mean()
    fd = f - f.mean()
    return float((td * fd).sum() / math.sqrt((td ** 2).sum() * (fd ** 2).sum()))


class TestCpcc:
    def test_exact_linear_relations(self):
        assert obj.cpcc([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0, abs=1e-12)
        assert obj.cpcc([1, 2], [2, 1]) == pytest.approx(-1.0, abs=1e-12)

    def test_hand_computed_value(self):
        want = 13.0 / 14.0
        assert obj.cpcc([1, 2, 4], [1, 3, 4]) == pytest.approx(want, abs=1e-12)
        assert brute_force_pearson([1, 2, 4], [1, 3, 4]) == pytest.approx(want, abs=1e-12)

    def test_matches_brute_force_on_random(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            t = rng.uniform(1, 5, size=10)
            f = rng.uniform(0, 3, size=10)
            assert obj.cpcc(t, f) == pytest.approx(brute_force_pearson(t, f), abs=1e-12)

    def test_affine_invariance_and_symmetry(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            t = rng.uniform(1, 5, size=8)
            f = rng.uniform(0, 3, size=8)
            a = rng.uniform(0.1, 4.0)
            b = rng.uniform(-2.0, 2.0)
            base = obj.cpcc(t, f)
            assert obj.cpcc(t, a * f + b) == pytest.approx(base, abs=1e-12)
            assert obj.cpcc(t, -a * f + b) == pytest.approx(-base, abs=1e-12)
            assert obj.cpcc(f, t) == pytest.approx(base, abs=1e-12)

    def test_errors(self):
        with pytest.raises(DegenerateVariance):
            obj.cpcc([1, 1, 1], [1, 2, 3])
        with pytest.raises(DegenerateVariance):
            obj.cpcc([1, 2, 3], [2, 2, 2])
        with pytest.raises(LengthMismatch):
            obj.cpcc([1, 2, 3], [1, 2])


class TestL2DatasetDistance:
    def test_identical_groups(self):
        g = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert obj.l2_dataset_distance(g, g) == 0.0

    def test_single_points(self):
        assert obj.l2_dataset_distance([[0.0, 0.0]], [[3.0, 4.0]]) == pytest.approx(5.0)

    def test_centroids(self):
        a = [[0.0, 0.0], [2.0, 0.0]]
        b = [[5.0, 0.0], [7.0, 0.0]]
        assert obj.l2_dataset_distance(a, b) == pytest.approx(5.0)

    def test_empty(self):
        with pytest.raises(EmptyGroup):
            obj.l2_dataset_distance(np.empty((0, 2)), [[1.0, 2.0]])


class TestPrototypes:
    def setup_method(self):
        self.tree = hi.builtin_cifar10_tree()

    def test_single_sample_leaf_only(self):
        z = np.array([[0.2, 0.1]])
        batch = obj.Batch(z, [0])
        cfg = obj.ObjectiveConfig(tree_scope="leaf_only")
        protos = obj.hyp_prototypes(batch, self.tree, cfg)
        leaf = self.tree.leaf_of_class(0)
        assert protos.present == {leaf}
        np.testing.assert_allclose(protos.points[leaf].coords,
                                   geo.exp_map_origin(z[0]).coords, atol=1e-12)

    def test_euclidean_mean_of_opposites_is_origin(self):
        z = np.array([[0.4, 0.0], [-0.4, 0.0]])
        batch = obj.Batch(z, [2, 2])
        cfg = obj.ObjectiveConfig(tree_scope="leaf_only",
                                  centroid_mode="euclidean_then_map")
        protos = obj.hyp_prototypes(batch, self.tree, cfg)
        leaf = self.tree.leaf_of_class(2)
        np.testing.assert_allclose(protos.points[leaf].coords, 0.0, atol=1e-15)

    def test_klein_average_of_opposites_is_origin(self):
        z = np.array([[0.4, 0.0], [-0.4, 0.0]])
        batch = obj.Batch(z, [2, 2])
        cfg = obj.ObjectiveConfig(tree_scope="leaf_only", centroid_mode="klein_average")
        protos = obj.hyp_prototypes(batch, self.tree, cfg)
        leaf = self.tree.leaf_of_class(2)
        np.testing.assert_allclose(protos.points[leaf].coords, 0.0, atol=1e-15)

    def test_full_tree_includes_internals_and_root(self):
        rng = np.random.default_rng(2)
        batch = obj.Batch(rng.standard_normal((20, 3)) * 0.2,
                          rng.integers(0, 10, size=20))
        cfg = obj.ObjectiveConfig(tree_scope="full_tree")
        protos = obj.hyp_prototypes(batch, self.tree, cfg)
        assert self.tree.root in protos.present
        assert self.tree.id_of("animal") in protos.present

    def test_internal_prototype_aggregates_descendants(self):
        # all transportation samples sit at +v, all animal samples at -v
        z = np.array([[0.3, 0.0], [0.3, 0.0], [-0.3, 0.0], [-0.3, 0.0]])
        batch = obj.Batch(z, [0, 1, 4, 5])
        cfg = obj.ObjectiveConfig(tree_scope="full_tree")
        protos = obj.hyp_prototypes(batch, self.tree, cfg)
        trans = self.tree.id_of("transportation")
        np.testing.assert_allclose(protos.points[trans].coords,
                                   geo.exp_map_origin(np.array([0.3, 0.0])).coords,
                                   atol=1e-12)
        np.testing.assert_allclose(protos.points[self.tree.root].coords, 0.0, atol=1e-12)


class TestCpccLosses:
    def setup_method(self):
        self.tree = hi.builtin_cifar10_tree()

    def test_perfect_configuration_reaches_one(self):
        # place class prototypes exactly on a scaled tree-consistent layout
        rng = np.random.default_rng(3)
        res = None
        from hypstruct import training as tr
        res = tr.embed_tree_direct(self.tree, 4, "l2",
                                   obj.ObjectiveConfig(tree_scope="leaf_only"),
                                   tr.EmbedBudget(restarts=2, steps=500, seed=1))
        feats = np.stack([res.coords[self.tree.leaf_of_class(k)] for k in range(10)])
        batch = obj.Batch(feats * 0.05, np.arange(10))
        cfg = obj.ObjectiveConfig(tree_scope="leaf_only")
        val = obj.l2_cpcc_loss(batch, self.tree, cfg)
        assert val >= res.cpcc - 1e-6

    def test_insufficient_vertices(self):
        batch = obj.Batch(np.array([[0.1, 0.0], [0.0, 0.1]]), [0, 1])
        cfg = obj.ObjectiveConfig(tree_scope="leaf_only")
        with pytest.raises(InsufficientVertices):
            obj.hypcpcc_loss(batch, self.tree, cfg)

    def test_l2_and_hyp_agree_in_flat_limit(self):
        rng = np.random.default_rng(4)
        batch = obj.Batch(rng.standard_normal((30, 4)) * 0.3,
                          rng.integers(0, 10, size=30))
        cfg = obj.ObjectiveConfig(tree_scope="leaf_only", c=1e-8,
                                  centroid_mode="euclidean_then_map")
        hyp = obj.hypcpcc_loss(batch, self.tree, cfg)
        l2 = obj.l2_cpcc_loss(batch, self.tree, cfg)
        assert hyp == pytest.approx(l2, abs=1e-3)


class TestCenteringLoss:
    def test_zero_batch_at_origin(self):
        batch = obj.Batch(np.zeros((3, 2)), [0, 1, 2])
        tree = hi.builtin_cifar10_tree()
        for mode in ("klein_average", "euclidean_then_map"):
            cfg = obj.ObjectiveConfig(centroid_mode=mode)
            assert obj.centering_loss(batch, cfg) <= 1e-140

    def test_symmetric_pair(self):
        batch = obj.Batch(np.array([[0.5, 0.1], [-0.5, -0.1]]), [0, 1])
        for mode in ("klein_average", "euclidean_then_map"):
            cfg = obj.ObjectiveConfig(centroid_mode=mode)
            assert obj.centering_loss(batch, cfg) <= 1e-12

    def test_single_sample_euclidean(self):
        batch = obj.Batch(np.array([[0.5, 0.0]]), [0])
        cfg = obj.ObjectiveConfig(centroid_mode="euclidean_then_map")
        assert obj.centering_loss(batch, cfg) == pytest.approx(0.5, abs=1e-12)


class TestCrossEntropy:
    def test_confident_correct_is_near_zero(self):
        logits = np.array([[100.0, 0.0], [0.0, 100.0]])
        assert obj.cross_entropy(logits, [0, 1]) == pytest.approx(0.0, abs=1e-12)

    def test_uniform(self):
        assert obj.cross_entropy(np.zeros((5, 4)), [0, 1, 2, 3, 0]) == pytest.approx(
            math.log(4.0), abs=1e-12)

    def test_two_class_value(self):
        want = -math.log(math.e / (math.e + 1.0))
        assert obj.cross_entropy(np.array([[1.0, 0.0]]), [0]) == pytest.approx(want, abs=1e-12)


def brute_force_supcon_from_sims(S, labels):
    """Double-loop reference implementation over a similarity matrix."""
    n = len(labels)
    total = 0.0
    anchors = 0
    for i in range(n):
        positives = [k for k in range(n) if k != i and labels[k] == labels[i]]
        if not positives:
            continue
        num = sum(math.exp(S[i][k]) for k in positives) / len(positives)
        den = sum(math.exp(S[i][k]) for k in range(n) if k != i)
        total += -math.log(num / den)
        anchors += 1
    return total / anchors


class TestSupCon:
    def test_two_same_class_samples_zero(self):
        rng = np.random.default_rng(5)
        for tau in (0.1, 0.5, 1.0):
            u = rng.standard_normal((2, 6))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            assert obj.supcon_loss(u, [3, 3], tau) == pytest.approx(0.0, abs=1e-12)

    def test_identical_single_class_batch(self):
        # all similarities equal, so the ratio collapses to 1/(2N_y - 1) and
        # the loss is log(2N_y - 1) = log 3; cross-checked by the double loop
        u = np.tile(np.array([[0.6, 0.8]]), (4, 1))
        want = math.log(3.0)
        assert obj.supcon_loss(u, [0, 0, 0, 0], 0.7) == pytest.approx(want, abs=1e-12)
        S = (u @ u.T) / 0.7
        assert brute_force_supcon_from_sims(S, [0, 0, 0, 0]) == pytest.approx(want, abs=1e-12)

    def test_orthogonal_two_class_value(self):
        u = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        want = -math.log(math.e / (math.e + 2.0))
        assert obj.supcon_loss(u, [0, 0, 1, 1], 1.0) == pytest.approx(want, abs=1e-12)

    def test_matches_double_loop(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            n = int(rng.integers(4, 10))
            u = rng.standard_normal((n, 5))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            labels = rng.integers(0, 3, size=n)
            if all((labels == y).sum() < 2 for y in np.unique(labels)):
                labels[1] = labels[0]
            tau = float(rng.uniform(0.1, 1.0))
            S = (u @ u.T) / tau
            want = brute_force_supcon_from_sims(S, list(labels))
            assert obj.supcon_loss(u, labels, tau) == pytest.approx(want, abs=1e-9)

    def test_cross_class_similarity_direction(self):
        # the loss strictly decreases when any cross-class similarity drops
        rng = np.random.default_rng(7)
        n = 6
        u = rng.standard_normal((n, 4))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        labels = [0, 0, 1, 1, 2, 2]
        S = (u @ u.T) / 0.5
        base = brute_force_supcon_from_sims(S, labels)
        for i in range(n):
            for k in range(n):
                if k != i and labels[k] != labels[i]:
                    bumped = [row[:] for row in S.tolist()]
                    bumped[i][k] -= 1e-4
                    assert brute_force_supcon_from_sims(bumped, labels) < base

    def test_unnormalized_rejected(self):
        with pytest.raises(UnnormalizedInput):
            obj.supcon_loss(np.array([[2.0, 0.0], [1.0, 0.0]]), [0, 0], 1.0)

    def test_no_positives_raises(self):
        u = np.array([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ClassWithoutPositive):
            obj.supcon_loss(u, [0, 1], 1.0)

    def test_isolated_anchor_excluded(self):
        u = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        got = obj.supcon_loss(u, [0, 0, 9], 1.0)
        S = (u @ u.T) / 1.0
        assert got == pytest.approx(brute_force_supcon_from_sims(S, [0, 0, 9]), abs=1e-12)


class TestGramOrderReversal:
    def test_unit_rows_reverse_distance_order(self):
        # <u,v> = 1 - ||u-v||^2 / 2, so similarity order reverses distance order
        rng = np.random.default_rng(8)
        for _ in range(50):
            u = rng.standard_normal((6, 4))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            dots = u @ u.T
            ii, jj = np.triu_indices(6, 1)
            sims = dots[ii, jj]
            dists = np.linalg.norm(u[ii] - u[jj], axis=1)
            np.testing.assert_allclose(sims, 1.0 - dists ** 2 / 2.0, atol=1e-12)
            order_s = np.argsort(sims)
            order_d = np.argsort(-dists, kind="stable")
            np.testing.assert_array_equal(sims[order_s], sims[order_d])


class TestComposite:
    def setup_method(self):
        self.tree = hi.builtin_cifar10_tree()
        rng = np.random.default_rng(9)
        self.batch = obj.Batch(rng.standard_normal((20, 4)) * 0.3,
                               rng.integers(0, 10, size=20))
        self.logits = rng.standard_normal((20, 10))

    def test_alpha_beta_zero_equals_flat(self):
        cfg = obj.ObjectiveConfig(alpha=0.0, beta=0.0)
        got = obj.composite_objective(self.batch, self.tree, cfg,
                                      obj.FlatInputs(logits=self.logits))
        assert got == pytest.approx(obj.cross_entropy(self.logits, self.batch.labels),
                                    abs=1e-12)

    def test_perfect_cpcc_subtracts_alpha(self):
        cfg = obj.ObjectiveConfig(alpha=1.0, beta=0.0)
        flat = obj.cross_entropy(self.logits, self.batch.labels)
        cpcc_val = obj.hypcpcc_loss(self.batch, self.tree, cfg)
        got = obj.composite_objective(self.batch, self.tree, cfg,
                                      obj.FlatInputs(logits=self.logits))
        assert got == pytest.approx(flat - cpcc_val, abs=1e-12)

    def test_monotone_in_alpha_for_positive_cpcc(self):
        cfg1 = obj.ObjectiveConfig(alpha=0.5, beta=0.0)
        cfg2 = obj.ObjectiveConfig(alpha=1.5, beta=0.0)
        cpcc_val = obj.hypcpcc_loss(self.batch, self.tree, cfg1)
        v1 = obj.composite_objective(self.batch, self.tree, cfg1,
                                     obj.FlatInputs(logits=self.logits))
        v2 = obj.composite_objective(self.batch, self.tree, cfg2,
                                     obj.FlatInputs(logits=self.logits))
        if cpcc_val > 0:
            assert v2 < v1

    def test_default_weights(self):
        cfg = obj.ObjectiveConfig()
        assert cfg.alpha == 1.0
        assert cfg.beta == 0.01


class TestGradient:
    def test_norm_gradient(self):
        g = obj.gradient(lambda p: ad.sqrt(ad.sum(p * p)), np.array([3.0, 4.0]))
        np.testing.assert_allclose(g, [0.6, 0.8], atol=1e-12)

    def test_cpcc_scale_direction_is_flat(self):
        # Pearson is scale invariant, so the derivative along f vanishes at
        # any point, in particular at a perfectly correlated configuration
        t = np.array([1.0, 2.0, 3.0, 4.0, 2.0, 5.0])
        f = 2.0 * t + 1.0
        g = obj.gradient(lambda p: obj.cpcc_core(t, p), f)
        assert abs(float(g @ f)) <= 1e-10

    def test_random_composite_matches_finite_differences(self, fd_oracle):
        rng = np.random.default_rng(10)
        tree = hi.balanced_tree([1, 2, 4])
        for trial in range(10):
            dim = int(rng.integers(2, 6))
            n = 8
            labels = np.array([0, 0, 1, 1, 2, 2, 3, 3])
            feats0 = rng.standard_normal((n, dim)) * 0.4
            logits_w = rng.standard_normal((dim, 4)) * 0.5
            cfg = obj.ObjectiveConfig(alpha=1.0, beta=0.01,
                                      centroid_mode="klein_average")

            def closure(p):
                feats = ad.reshape(p, (n, dim))
                logits = ad.matmul(feats, logits_w)
                return obj.composite_core(feats, labels, tree, cfg,
                                          obj.FlatInputs(logits=logits))

            params = feats0.ravel()
            g, nondiff = obj.gradient(closure, params, return_nondifferentiable=True)
            assert not nondiff
            want = fd_oracle(lambda v: float(ad.val(closure(ad.Node(v)))), params)
            denom = np.maximum(np.abs(want), 1e-4)
            assert np.max(np.abs(g - want) / denom) <= 1e-4

    def test_clip_branch_sets_flag(self):
        tree = hi.balanced_tree([1, 2, 4])
        labels = np.array([0, 1, 2, 3])
        cfg = obj.ObjectiveConfig(alpha=1.0, beta=0.0,
                                  centroid_mode="euclidean_then_map", map_mode="clip")
        feats0 = np.array([[3.0, 0.0], [0.0, 3.0], [-3.0, 0.0], [0.0, -3.0]])

        def closure(p):
            feats = ad.reshape(p, (4, 2))
            logits = ad.matmul(feats, np.eye(2, 4))
            return obj.composite_core(feats, labels, tree, cfg,
                                      obj.FlatInputs(logits=logits))

        _, nondiff = obj.gradient(closure, feats0.ravel(), return_nondifferentiable=True)
        assert nondiff
