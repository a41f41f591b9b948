"""Ranking metrics and per-tree evaluation."""

import numpy as np

from .fixed_point import FRAC_BITS, quantize
from .quantizer import QuantizedMatrix
from .splitter import tree_increment


def auc(scores, labels) -> float:
    """Rank-based AUC with midranks for tied scores."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    n_pos = int(np.count_nonzero(y == 1))
    n_neg = int(np.count_nonzero(y == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: need at least one positive and one negative label")
    order = np.argsort(s, kind="stable")
    sorted_scores = s[order]
    lo = np.searchsorted(sorted_scores, sorted_scores, side="left")
    hi = np.searchsorted(sorted_scores, sorted_scores, side="right")
    ranks = np.empty(s.size, dtype=np.float64)
    ranks[order] = (lo + hi + 1) / 2.0         # 1-based midranks
    pos_rank_sum = float(ranks[y == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def evaluate_per_tree(model, matrix: QuantizedMatrix, labels, eta: float = 1.0,
                      frac_bits: int = FRAC_BITS, bin_map=None) -> tuple:
    """AUC after each tree of a model, scored on an already-quantized set.

    Scores accumulate in fixed point exactly as during training.  Returns
    (per-tree AUC list, max AUC).  When bin_map is given it must be the one
    the matrix was quantized with.
    """
    if not model.trees:
        raise ValueError("empty model")
    if bin_map is not None and bin_map != matrix.bin_map:
        raise ValueError("validation data was quantized with a different bin map")
    scores = np.full(matrix.n_samples, quantize(model.base_score, frac_bits), dtype=np.int64)
    history = []
    for tree in model.trees:
        scores += tree_increment(tree, matrix.columns, eta, frac_bits)
        history.append(auc(scores, labels))
    return history, max(history)
