import numpy as np
import pytest

from fpboost.quantizer import RawDataset, fit_bin_map, transform


def random_raw(rng, n_samples, n_features, distinct=16, missing_frac=0.1):
    """Random dataset with few distinct values per feature and some missing."""
    pools = [np.sort(rng.normal(size=rng.integers(1, distinct + 1))) for _ in range(n_features)]
    values = np.column_stack([rng.choice(pool, size=n_samples) for pool in pools])
    if missing_frac > 0:
        mask = rng.random(size=values.shape) < missing_frac
        mask[0, :] = False          # keep every feature fittable
        values[mask] = np.nan
    labels = rng.integers(0, 2, size=n_samples)
    return RawDataset(values=values, labels=labels)


def random_quantized(rng, n_samples, n_features, distinct=16, missing_frac=0.1):
    raw = random_raw(rng, n_samples, n_features, distinct, missing_frac)
    matrix = transform(raw, fit_bin_map(raw))
    return matrix, raw.labels


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
