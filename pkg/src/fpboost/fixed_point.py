"""Signed fixed-point arithmetic shared by the training datapath.

Per-sample scores, gradients and hessians are stored as raw int64 values
scaled by 2**frac_bits.  All cross-sample accumulation happens on the raw
integers, so sums are exact and independent of summation order; only the
final gain/weight ratios are evaluated in double precision.
"""

import numpy as np

FRAC_BITS = 24


def scale(frac_bits: int = FRAC_BITS) -> float:
    return float(1 << frac_bits)


def quantize(value, frac_bits: int = FRAC_BITS):
    """Round a real value to the nearest fixed-point grid step, ties to even.

    Accepts scalars or numpy arrays; returns int64.  Multiplying by a power
    of two is exact in binary64, so the only rounding happens in rint.
    """
    raw = np.rint(np.asarray(value, dtype=np.float64) * scale(frac_bits))
    out = raw.astype(np.int64)
    return out if out.ndim else np.int64(out)


def dequantize(raw, frac_bits: int = FRAC_BITS):
    """Exact real value of a raw fixed-point integer (power-of-two scaling)."""
    return np.asarray(raw, dtype=np.float64) / scale(frac_bits) if np.ndim(raw) else float(raw) / scale(frac_bits)


def sigmoid(x):
    """Numerically stable logistic function, elementwise."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 0
    if single:
        x = x.reshape(1)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return float(out[0]) if single else out


def logistic_grad_hess(scores_raw, labels, frac_bits: int = FRAC_BITS):
    """Quantized cross-entropy gradient and hessian for raw margin scores.

    grad = p - y and hess = p * (1 - p) with p computed in double precision
    from the dequantized margin.  The hessian is floored at one fixed-point
    step before quantization so it can never round to zero; every stored
    hessian is therefore >= 1 raw unit.
    """
    p = sigmoid(np.asarray(scores_raw, dtype=np.float64) / scale(frac_bits))
    y = np.asarray(labels, dtype=np.float64)
    ulp = 1.0 / scale(frac_bits)
    grad = quantize(p - y, frac_bits)
    hess = quantize(np.maximum(p * (1.0 - p), ulp), frac_bits)
    return grad, hess
