import json

import numpy as np
import pytest

from fpboost.boost_controller import Model, predict_raw, train
from fpboost.cost_model import CostParams, estimate
from fpboost.model_io import (
    load_bin_map,
    load_model,
    load_training_log,
    save_bin_map,
    save_model,
    save_training_log,
)
from fpboost.node_trainer import TrainConfig
from fpboost.quantizer import fit_bin_map, transform
from conftest import random_raw


def _trained(rng, **cfg_kwargs):
    raw = random_raw(rng, int(rng.integers(20, 200)), int(rng.integers(1, 6)))
    bins = fit_bin_map(raw)
    matrix = transform(raw, bins)
    defaults = dict(n_trees=int(rng.integers(1, 6)), max_depth=int(rng.integers(1, 4)),
                    subsample=float(rng.choice([0.5, 1.0])), n_engines=int(rng.choice([1, 2, 4])),
                    seed=int(rng.integers(0, 2**32)))
    defaults.update(cfg_kwargs)
    config = TrainConfig(**defaults)
    model, log = train(matrix, raw.labels, config)
    return model, bins, config, matrix, log


def test_empty_model_round_trip_bytes(rng, tmp_path):
    raw = random_raw(rng, 10, 2)
    bins = fit_bin_map(raw)
    config = TrainConfig(n_trees=0)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_model(Model(), bins, config, str(p1))
    bundle = load_model(str(p1))
    save_model(bundle.model, bundle.bin_map, bundle.config, str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_save_load_save_byte_identity(rng, tmp_path):
    for i in range(10):
        model, bins, config, _, _ = _trained(rng)
        p1, p2 = tmp_path / f"m{i}a.json", tmp_path / f"m{i}b.json"
        save_model(model, bins, config, str(p1))
        bundle = load_model(str(p1))
        save_model(bundle.model, bundle.bin_map, bundle.config, str(p2))
        assert p1.read_bytes() == p2.read_bytes()


def test_loaded_model_predicts_bitwise(rng, tmp_path):
    for i in range(10):
        model, bins, config, matrix, _ = _trained(rng)
        path = tmp_path / f"m{i}.json"
        save_model(model, bins, config, str(path))
        bundle = load_model(str(path))
        a = predict_raw(model, matrix, config.eta, config.frac_bits)
        b = predict_raw(bundle.model, matrix, bundle.config.eta, bundle.config.frac_bits)
        assert np.array_equal(a, b)


def test_tampered_frac_bits_rejected(rng, tmp_path):
    model, bins, config, _, _ = _trained(rng)
    path = tmp_path / "m.json"
    save_model(model, bins, config, str(path))
    doc = json.loads(path.read_text())
    doc["frac_bits"] = doc["frac_bits"] + 1
    path.write_text(json.dumps(doc, sort_keys=True))
    with pytest.raises(ValueError, match="frac_bits mismatch"):
        load_model(str(path))


def test_wrong_format_rejected(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"format": "something-else", "format_version": 1}))
    with pytest.raises(ValueError, match="not a fpboost-model"):
        load_model(str(path))


def test_wrong_version_rejected(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"format": "fpboost-model", "format_version": 99}))
    with pytest.raises(ValueError, match="format_version"):
        load_model(str(path))


def test_malformed_json_rejected(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    with pytest.raises(ValueError, match="malformed"):
        load_model(str(path))


def test_centroids_survive_full_precision(rng, tmp_path):
    model, bins, config, _, _ = _trained(rng)
    path = tmp_path / "m.json"
    save_model(model, bins, config, str(path))
    loaded = load_model(str(path)).bin_map
    for a, b in zip(bins.centroids, loaded.centroids):
        assert np.array_equal(a, b)


def test_bin_map_standalone_round_trip(rng, tmp_path):
    raw = random_raw(rng, 60, 4)
    bins = fit_bin_map(raw)
    path = tmp_path / "bins.json"
    save_bin_map(bins, str(path))
    assert load_bin_map(str(path)) == bins


def test_training_log_round_trip(rng, tmp_path):
    model, bins, config, matrix, log = _trained(rng)
    path = tmp_path / "log.json"
    save_training_log(log, str(path))
    loaded = load_training_log(str(path))
    assert loaded.n_samples == log.n_samples
    assert loaded.config == log.config
    params = CostParams()
    a = estimate(log, log.n_samples, log.config, params)
    b = estimate(loaded, loaded.n_samples, loaded.config, params)
    assert a == b
