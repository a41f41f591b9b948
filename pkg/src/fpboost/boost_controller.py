"""Boosting driver: subsampling, per-depth node training, tree bookkeeping.

One tree per round: initialize an index table over the subsampled rows,
train and split nodes depth-synchronously, then refresh every sample's
score and gradients from the finished tree.  All engines share the feature
matrix and sample state; each owns an index table over its shard.
"""

from dataclasses import dataclass, field

import numpy as np

from .data_parallel import merged_node_histogram, shard
from .engine_memory import EngineMemory, init_index_table, load, node_slice
from .fixed_point import FRAC_BITS, dequantize, quantize, sigmoid
from .node_trainer import TrainConfig, find_best_split, leaf_weight, split_child_totals
from .quantizer import QuantizedMatrix
from .splitter import TreeModel, TreeNode, apply_tree_update, partition, tree_increment

BASE_SCORE = 0.0

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass
class Model:
    trees: list = field(default_factory=list)
    base_score: float = BASE_SCORE

    @property
    def n_trees(self) -> int:
        return len(self.trees)


@dataclass
class DepthLog:
    trained_sizes: list        # sample count of every node that built a histogram
    split_sizes: list          # sample count of every node that was partitioned


@dataclass
class TreeLog:
    n_subsampled: int
    depths: list
    n_leaves: int
    train_loss: float


@dataclass
class TrainingLog:
    n_samples: int
    n_features: int
    config: TrainConfig
    trees: list = field(default_factory=list)


def _mix64(x):
    """splitmix64 finalizer; elementwise on uint64 arrays."""
    z = (x + np.uint64(_GOLDEN)) & np.uint64(_MASK64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _mix64_int(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def subsample_indices(seed: int, tree_index: int, n: int, rate: float) -> np.ndarray:
    """Bernoulli row sample from a stateless counter-based generator.

    Membership of sample i depends only on (seed, tree_index, i), so the
    draw is identical under any sharding or engine count.  Output ascending.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError("rate must be in (0, 1]")
    if rate == 1.0:
        return np.arange(n, dtype=np.int64)
    stream = _mix64_int(_mix64_int(seed & _MASK64) ^ (tree_index & _MASK64))
    u = _mix64(np.uint64(stream) ^ np.arange(n, dtype=np.uint64))
    threshold = int(rate * 2.0 ** 64)
    return np.nonzero(u < np.uint64(threshold))[0].astype(np.int64)


def _log_loss(scores_raw, labels, frac_bits: int) -> float:
    p = sigmoid(np.asarray(scores_raw, dtype=np.float64) / float(1 << frac_bits))
    p = np.clip(p, 1e-15, 1.0 - 1e-15)
    y = np.asarray(labels, dtype=np.float64)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def _grow_tree(engines: list, config: TrainConfig, tree_log_depths: list) -> TreeModel:
    """Train one tree depth-synchronously over the engines' index tables."""
    tree = TreeModel()
    live = [0]
    for d in range(config.max_depth):
        if not live:
            break
        trained_sizes = []
        split_sizes = []
        next_live = []
        for node_id in live:
            ranges = [node_slice(e.table, d, node_id) for e in engines]
            hist = merged_node_histogram(engines, ranges)
            totals = hist.totals()
            decision = find_best_split(hist, totals, d, config)
            trained_sizes.append(totals[2])
            if decision.is_leaf:
                tree.put(d, node_id, TreeNode(is_leaf=True, leaf_weight_raw=decision.leaf_weight_raw))
                continue
            tree.put(d, node_id, TreeNode(
                is_leaf=False,
                feature=decision.feature,
                threshold_bin=decision.threshold_bin,
                missing_left=decision.missing_left,
            ))
            for e in engines:
                partition(e, node_slice(e.table, d, node_id), decision, depth=d, node_id=node_id)
            split_sizes.append(totals[2])
            left_tot, right_tot = split_child_totals(hist, decision, totals)
            if d + 1 == config.max_depth:
                for child, (g, h, _c) in ((2 * node_id, left_tot), (2 * node_id + 1, right_tot)):
                    w = leaf_weight(dequantize(g, config.frac_bits),
                                    dequantize(h, config.frac_bits),
                                    config.lam, config.frac_bits)
                    tree.put(d + 1, child, TreeNode(is_leaf=True, leaf_weight_raw=w))
            else:
                next_live.extend((2 * node_id, 2 * node_id + 1))
        tree_log_depths.append(DepthLog(trained_sizes, split_sizes))
        if split_sizes:
            for e in engines:
                e.table.toggle()
        live = next_live
    return tree


def train(matrix: QuantizedMatrix, labels, config: TrainConfig) -> tuple:
    """Train a boosted model; returns (Model, TrainingLog)."""
    if matrix.n_samples == 0:
        raise ValueError("empty training set")
    base = load(matrix, labels, BASE_SCORE, config.frac_bits)
    state = base.state
    model = Model(base_score=BASE_SCORE)
    log = TrainingLog(n_samples=matrix.n_samples, n_features=matrix.n_features, config=config)

    for t in range(config.n_trees):
        active = subsample_indices(config.seed, t, matrix.n_samples, config.subsample)
        engines = [
            EngineMemory(matrix, state, init_index_table(s, matrix.n_samples))
            for s in shard(active, config.n_engines)
        ]
        depths = []
        tree = _grow_tree(engines, config, depths)
        model.trees.append(tree)
        apply_tree_update(engines[0], tree, config.eta)
        log.trees.append(TreeLog(
            n_subsampled=int(active.size),
            depths=depths,
            n_leaves=tree.n_leaves(),
            train_loss=_log_loss(state.scores_raw, state.labels, config.frac_bits),
        ))
    return model, log


def predict_raw(model: Model, matrix: QuantizedMatrix, eta: float = 1.0,
                frac_bits: int = FRAC_BITS) -> np.ndarray:
    """Replay the model over a quantized matrix; raw fixed-point margins."""
    scores = np.full(matrix.n_samples, quantize(model.base_score, frac_bits), dtype=np.int64)
    for tree in model.trees:
        scores += tree_increment(tree, matrix.columns, eta, frac_bits)
    return scores
