"""Dataset ingestion: dense CSV and sparse libsvm-style text files.

In libsvm files an absent feature is treated as MISSING (it lands in the
reserved bin), not as zero.  This differs from libraries that densify
sparse inputs with zeros; callers relying on zero-fill must densify first.
"""

import gzip

import numpy as np

from .quantizer import RawDataset


def _open_text(path: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt")
    return open(path, "r")


def _parse_label(token: str, line_no: int, strict: bool) -> int:
    try:
        v = float(token)
    except ValueError:
        raise ValueError(f"line {line_no}: bad label {token!r}")
    if v in (0.0, 1.0):
        return int(v)
    if strict:
        raise ValueError(f"line {line_no}: non-binary label {token!r}")
    return 1 if v > 0 else 0


def _load_csv(path: str, label_col: int, max_rows, strict_labels: bool):
    rows = []
    labels = []
    width = None
    with _open_text(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if max_rows is not None and len(rows) >= max_rows:
                break
            cells = line.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ValueError(f"line {line_no}: expected {width} columns, got {len(cells)}")
            if label_col >= 0:
                if label_col >= len(cells):
                    raise ValueError(f"line {line_no}: no label column {label_col}")
                labels.append(_parse_label(cells[label_col], line_no, strict_labels))
                cells = cells[:label_col] + cells[label_col + 1:]
            else:
                labels.append(0)
            row = np.empty(len(cells), dtype=np.float64)
            for j, cell in enumerate(cells):
                cell = cell.strip()
                if cell == "" or cell.lower() == "nan":
                    row[j] = np.nan
                else:
                    try:
                        row[j] = float(cell)
                    except ValueError:
                        raise ValueError(f"line {line_no}: bad value {cell!r}")
            rows.append(row)
    if not rows:
        raise ValueError("no samples")
    return np.vstack(rows), np.asarray(labels, dtype=np.int8)


def _load_libsvm(path: str, n_features, max_rows):
    entries = []
    labels = []
    max_seen = 0
    with _open_text(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if max_rows is not None and len(entries) >= max_rows:
                break
            tokens = line.split()
            # libsvm labels follow the sign convention: anything > 0 is positive
            labels.append(_parse_label(tokens[0], line_no, strict=False))
            row = {}
            for token in tokens[1:]:
                try:
                    idx_str, val_str = token.split(":", 1)
                    idx = int(idx_str)      # 1-based on disk
                    val = float(val_str)
                except ValueError:
                    raise ValueError(f"line {line_no}: bad feature token {token!r}")
                if idx < 1:
                    raise ValueError(f"line {line_no}: feature index must be >= 1")
                row[idx - 1] = val
                max_seen = max(max_seen, idx)
            entries.append(row)
    if not entries:
        raise ValueError("no samples")
    width = n_features if n_features is not None else max_seen
    if width < 1:
        raise ValueError("no features present")
    if max_seen > width:
        raise ValueError(f"feature index {max_seen} exceeds n_features {width}")
    values = np.full((len(entries), width), np.nan, dtype=np.float64)
    for i, row in enumerate(entries):
        for j, v in row.items():
            values[i, j] = v
    return values, np.asarray(labels, dtype=np.int8)


def load_dataset(path: str, fmt: str, label_col: int = 0, n_features=None,
                 max_rows=None, strict_labels: bool = True) -> RawDataset:
    """Read a dataset file into a dense RawDataset (NaN marks missing).

    csv: label taken from column label_col (default first); label_col = -1
    means the file has no label column and labels are set to 0.
    libsvm: leading token is the label (any value > 0 counts as 1 when
    strict_labels is off); feature ids are 1-based; absent ids are missing.
    """
    if fmt == "csv":
        values, labels = _load_csv(path, label_col, max_rows, strict_labels)
    elif fmt == "libsvm":
        values, labels = _load_libsvm(path, n_features, max_rows)
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")
    return RawDataset(values=values, labels=labels)
