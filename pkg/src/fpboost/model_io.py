"""Model, bin-map and training-log persistence.

Everything is JSON with sorted keys, so a save -> load -> save round trip
is byte-identical and files are platform-independent.  Centroids are plain
floats (shortest round-trip decimal); leaf weights are raw fixed-point
integers next to the frac_bits that scale them.
"""

import json
from dataclasses import dataclass

import numpy as np

from .boost_controller import DepthLog, Model, TrainingLog, TreeLog
from .node_trainer import TrainConfig
from .quantizer import BinMap
from .splitter import TreeModel, TreeNode

MODEL_FORMAT = "fpboost-model"
BINMAP_FORMAT = "fpboost-binmap"
LOG_FORMAT = "fpboost-log"
FORMAT_VERSION = 1


@dataclass
class ModelBundle:
    model: Model
    bin_map: BinMap
    config: TrainConfig


def _dump(doc: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _load(path: str, expected_format: str) -> dict:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise ValueError(f"malformed document: {err}") from err
    if doc.get("format") != expected_format:
        raise ValueError(f"not a {expected_format} file: format={doc.get('format')!r}")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {doc.get('format_version')!r}")
    return doc


def _config_to_dict(config: TrainConfig, include_engines: bool) -> dict:
    # engine count is an execution knob, not a model property: identical
    # models come out of any engine count, so model files omit it and stay
    # byte-comparable across runs; training logs keep it for the cost model.
    doc = {
        "lam": config.lam,
        "gamma": config.gamma,
        "max_depth": config.max_depth,
        "n_trees": config.n_trees,
        "subsample": config.subsample,
        "eta": config.eta,
        "seed": config.seed,
        "frac_bits": config.frac_bits,
    }
    if include_engines:
        doc["n_engines"] = config.n_engines
    return doc


def _config_from_dict(doc: dict) -> TrainConfig:
    return TrainConfig(**doc)


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"is_leaf": True, "leaf_weight_raw": int(node.leaf_weight_raw)}
    return {
        "is_leaf": False,
        "feature": int(node.feature),
        "threshold_bin": int(node.threshold_bin),
        "missing_left": bool(node.missing_left),
    }


def _node_from_dict(doc: dict) -> TreeNode:
    if doc["is_leaf"]:
        return TreeNode(is_leaf=True, leaf_weight_raw=int(doc["leaf_weight_raw"]))
    return TreeNode(
        is_leaf=False,
        feature=int(doc["feature"]),
        threshold_bin=int(doc["threshold_bin"]),
        missing_left=bool(doc["missing_left"]),
    )


def _tree_to_doc(tree: TreeModel) -> list:
    return [{str(node_id): _node_to_dict(n) for node_id, n in level.items()}
            for level in tree.levels]


def _tree_from_doc(doc: list) -> TreeModel:
    return TreeModel(levels=[
        {int(node_id): _node_from_dict(n) for node_id, n in level.items()}
        for level in doc
    ])


def _bin_map_to_doc(bin_map: BinMap) -> dict:
    return {"centroids": [[float(v) for v in c] for c in bin_map.centroids]}


def _bin_map_from_doc(doc: dict) -> BinMap:
    return BinMap([np.asarray(c, dtype=np.float64) for c in doc["centroids"]])


def save_model(model: Model, bin_map: BinMap, config: TrainConfig, path: str) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "format_version": FORMAT_VERSION,
        "frac_bits": config.frac_bits,
        "base_score": float(model.base_score),
        "config": _config_to_dict(config, include_engines=False),
        "bin_map": _bin_map_to_doc(bin_map),
        "trees": [_tree_to_doc(t) for t in model.trees],
    }
    _dump(doc, path)


def load_model(path: str) -> ModelBundle:
    doc = _load(path, MODEL_FORMAT)
    config = _config_from_dict(doc["config"])
    if doc["frac_bits"] != config.frac_bits:
        raise ValueError(
            f"frac_bits mismatch: document says {doc['frac_bits']}, config says {config.frac_bits}"
        )
    model = Model(
        trees=[_tree_from_doc(t) for t in doc["trees"]],
        base_score=float(doc["base_score"]),
    )
    return ModelBundle(model=model, bin_map=_bin_map_from_doc(doc["bin_map"]), config=config)


def save_bin_map(bin_map: BinMap, path: str) -> None:
    doc = {"format": BINMAP_FORMAT, "format_version": FORMAT_VERSION}
    doc.update(_bin_map_to_doc(bin_map))
    _dump(doc, path)


def load_bin_map(path: str) -> BinMap:
    return _bin_map_from_doc(_load(path, BINMAP_FORMAT))


def save_training_log(log: TrainingLog, path: str) -> None:
    doc = {
        "format": LOG_FORMAT,
        "format_version": FORMAT_VERSION,
        "n_samples": log.n_samples,
        "n_features": log.n_features,
        "config": _config_to_dict(log.config, include_engines=True),
        "trees": [
            {
                "n_subsampled": t.n_subsampled,
                "n_leaves": t.n_leaves,
                "train_loss": t.train_loss,
                "depths": [
                    {"trained_sizes": d.trained_sizes, "split_sizes": d.split_sizes}
                    for d in t.depths
                ],
            }
            for t in log.trees
        ],
    }
    _dump(doc, path)


def load_training_log(path: str) -> TrainingLog:
    doc = _load(path, LOG_FORMAT)
    return TrainingLog(
        n_samples=int(doc["n_samples"]),
        n_features=int(doc["n_features"]),
        config=_config_from_dict(doc["config"]),
        trees=[
            TreeLog(
                n_subsampled=int(t["n_subsampled"]),
                n_leaves=int(t["n_leaves"]),
                train_loss=float(t["train_loss"]),
                depths=[
                    DepthLog(
                        trained_sizes=[int(s) for s in d["trained_sizes"]],
                        split_sizes=[int(s) for s in d["split_sizes"]],
                    )
                    for d in t["depths"]
                ],
            )
            for t in doc["trees"]
        ],
    )
