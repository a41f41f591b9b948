import json

import numpy as np
import pytest

from fpboost.cli import main
from fpboost.model_io import load_model


@pytest.fixture
def csv_pair(tmp_path, rng):
    def write(name, n):
        lines = []
        for _ in range(n):
            x = rng.normal(size=3)
            label = int(x[0] + 0.5 * x[1] + 0.2 * rng.normal() > 0)
            cells = [str(label)] + [f"{v:.6g}" if rng.random() > 0.05 else "" for v in x]
            lines.append(",".join(cells))
        p = tmp_path / name
        p.write_text("\n".join(lines) + "\n")
        return str(p)

    return write("train.csv", 400), write("valid.csv", 200)


def _train_args(train_csv, valid_csv, tmp_path, extra=()):
    return [
        "train", "--data", train_csv, "--format", "csv", "--valid", valid_csv,
        "--trees", "8", "--max-depth", "2", "--subsample", "0.8",
        "--engines", "2", "--seed", "1",
        "--model-out", str(tmp_path / "model.json"),
        "--log-out", str(tmp_path / "log.json"),
        "--metrics-out", str(tmp_path / "metrics.csv"),
        *extra,
    ]


def test_quantize_command(tmp_path, csv_pair, capsys):
    train_csv, _ = csv_pair
    rc = main(["quantize", "--data", train_csv, "--format", "csv",
               "--out", str(tmp_path / "binned.npz"),
               "--bins-out", str(tmp_path / "bins.json")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "n_samples=400" in out and "n_features=3" in out
    with np.load(tmp_path / "binned.npz") as z:
        assert z["columns"].shape == (3, 400)
        assert z["columns"].dtype == np.uint8
        assert z["labels"].shape == (400,)
    bins_doc = json.loads((tmp_path / "bins.json").read_text())
    assert bins_doc["format"] == "fpboost-binmap"


def test_train_eval_predict_cost_pipeline(tmp_path, csv_pair, capsys):
    train_csv, valid_csv = csv_pair
    rc = main(_train_args(train_csv, valid_csv, tmp_path))
    assert rc == 0
    summary = capsys.readouterr().out
    assert "trained trees=8" in summary and "max_valid_auc=" in summary

    metrics = (tmp_path / "metrics.csv").read_text().splitlines()
    assert metrics[0] == "tree_index,train_loss,valid_auc"
    assert len(metrics) == 9
    losses = [float(line.split(",")[1]) for line in metrics[1:]]
    assert losses[-1] < losses[0]

    bundle = load_model(str(tmp_path / "model.json"))
    assert bundle.model.n_trees == 8

    rc = main(["eval", "--data", valid_csv, "--format", "csv",
               "--model", str(tmp_path / "model.json"),
               "--per-tree-out", str(tmp_path / "per_tree.csv")])
    assert rc == 0
    eval_out = capsys.readouterr().out
    assert eval_out.startswith("max_auc=")
    per_tree = (tmp_path / "per_tree.csv").read_text().splitlines()
    assert per_tree[0] == "tree_index,valid_auc" and len(per_tree) == 9

    rc = main(["predict", "--data", valid_csv, "--format", "csv",
               "--model", str(tmp_path / "model.json"),
               "--out", str(tmp_path / "margins.txt")])
    assert rc == 0
    margins = [float(v) for v in (tmp_path / "margins.txt").read_text().split()]
    assert len(margins) == 200

    rc = main(["predict", "--data", valid_csv, "--format", "csv",
               "--model", str(tmp_path / "model.json"), "--proba",
               "--out", str(tmp_path / "proba.txt")])
    assert rc == 0
    probas = [float(v) for v in (tmp_path / "proba.txt").read_text().split()]
    assert all(0.0 <= p <= 1.0 for p in probas)

    rc = main(["cost", "--log", str(tmp_path / "log.json"),
               "--out", str(tmp_path / "report.kv")])
    assert rc == 0
    cost_out = capsys.readouterr().out
    assert "total" in cost_out and "wall time" in cost_out
    kv = dict(line.split("=") for line in (tmp_path / "report.kv").read_text().strip().splitlines())
    assert int(kv["total_cycles"]) > 0


def test_train_is_deterministic_across_runs(tmp_path, csv_pair):
    train_csv, valid_csv = csv_pair
    for name in ("a", "b"):
        rc = main(["train", "--data", train_csv, "--format", "csv",
                   "--trees", "4", "--engines", "3", "--seed", "7",
                   "--model-out", str(tmp_path / f"{name}.json")])
        assert rc == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_missing_file_is_single_line_error(tmp_path, capsys):
    rc = main(["train", "--data", str(tmp_path / "nope.csv"), "--format", "csv",
               "--model-out", str(tmp_path / "m.json")])
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("error: ")
    assert len(err.strip().splitlines()) == 1


def test_bad_data_error_mentions_line(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("1,0.5\n0,zzz\n")
    rc = main(["quantize", "--data", str(p), "--format", "csv",
               "--out", str(tmp_path / "o.npz"), "--bins-out", str(tmp_path / "b.json")])
    assert rc == 1
    assert "line 2" in capsys.readouterr().err


def test_predict_without_labels(tmp_path, csv_pair, capsys):
    train_csv, valid_csv = csv_pair
    rc = main(["train", "--data", train_csv, "--format", "csv", "--trees", "2",
               "--model-out", str(tmp_path / "m.json")])
    assert rc == 0
    capsys.readouterr()
    unlabeled = tmp_path / "unlabeled.csv"
    unlabeled.write_text("0.1,0.2,0.3\n-1.0,,2.0\n")
    rc = main(["predict", "--data", str(unlabeled), "--format", "csv",
               "--label-col", "-1", "--model", str(tmp_path / "m.json")])
    assert rc == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 2
