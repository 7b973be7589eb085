"""Training losses over classifier logits, with exact logit gradients.

Each loss takes one logit vector ``(M,)`` or a batch ``(n, M)``. For a batch
the value is the mean over samples and ``grad`` is the gradient of that mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from belreg.codebook import CodeMatrix
from belreg.decoder import softmax
from belreg.errors import InvalidLevel, InvalidTarget, ShapeError


@dataclass(frozen=True)
class LossResult:
    value: float
    grad: np.ndarray


def _batch(z) -> tuple[np.ndarray, bool]:
    z = np.asarray(z, dtype=float)
    return np.atleast_2d(z), z.ndim == 1


def _out(value: float, grad: np.ndarray, single: bool) -> LossResult:
    return LossResult(float(value), grad[0] if single else grad)


def _logistic(z: np.ndarray) -> np.ndarray:
    return np.exp(-np.logaddexp(0.0, -z))


def bce_loss(z, target_bits) -> LossResult:
    """Binary cross-entropy averaged over bits (and samples)."""
    Z, single = _batch(z)
    T = np.atleast_2d(np.asarray(target_bits, dtype=float))
    if T.shape != Z.shape:
        raise ShapeError(f"logits {Z.shape} vs targets {T.shape}")
    n, M = Z.shape
    # -log s(z) = softplus(-z), -log(1 - s(z)) = softplus(z)
    per = T * np.logaddexp(0.0, -Z) + (1 - T) * np.logaddexp(0.0, Z)
    grad = (_logistic(Z) - T) / (M * n)
    return _out(per.sum() / (M * n), grad, single)


def _levels(target, n: int, L: int) -> np.ndarray:
    t = np.broadcast_to(np.asarray(target), (n,))
    if np.any(t != np.round(t)) or np.any((t < 1) | (t > L)):
        raise InvalidLevel(f"target level outside 1..{L}: {target}")
    return t.astype(np.int64)


def ce_loss(z, C: CodeMatrix, target_level) -> LossResult:
    """Cross-entropy over the level correlations ``C z``."""
    Z, single = _batch(z)
    if Z.shape[1] != C.bits:
        raise ShapeError(f"expected {C.bits} logits, got {Z.shape[1]}")
    n = Z.shape[0]
    t = _levels(target_level, n, C.levels)
    rows = C.rows.astype(float)
    u = Z @ rows.T
    m = u.max(axis=1, keepdims=True)
    lse = m[:, 0] + np.log(np.exp(u - m).sum(axis=1))
    value = np.mean(lse - u[np.arange(n), t - 1])
    p = softmax(u)
    p[np.arange(n), t - 1] -= 1.0
    return _out(value, (p @ rows) / n, single)


def regression_loss(z, C: CodeMatrix, target, norm: Literal["l1", "l2"] = "l2") -> LossResult:
    """L1 or L2 distance between the soft-argmax level and ``target``."""
    Z, single = _batch(z)
    if Z.shape[1] != C.bits:
        raise ShapeError(f"expected {C.bits} logits, got {Z.shape[1]}")
    n = Z.shape[0]
    t = np.broadcast_to(np.asarray(target, dtype=float), (n,))
    if np.any((t < 1) | (t > C.levels)):
        raise InvalidTarget(f"target outside [1, {C.levels}]: {target}")
    rows = C.rows.astype(float)
    sigma = softmax(Z @ rows.T)
    k = np.arange(1, C.levels + 1, dtype=float)
    y_hat = sigma @ k
    diff = y_hat - t
    # d y_hat / d u_j = sigma_j (j - y_hat);  d u / d z = C
    dy_dz = (sigma * (k[None, :] - y_hat[:, None])) @ rows
    norm = norm.lower()
    if norm == "l1":
        value = np.abs(diff).mean()
        outer = np.sign(diff)
    elif norm == "l2":
        value = np.mean(diff**2)
        outer = 2.0 * diff
    else:
        raise ValueError(f"norm must be 'l1' or 'l2', got {norm!r}")
    return _out(value, outer[:, None] * dy_dz / n, single)
