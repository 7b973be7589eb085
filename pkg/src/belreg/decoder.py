"""Decoders from classifier outputs back to levels.

Every decoder accepts a single vector (shape ``(M,)``) or a batch (shape
``(n, M)``); batched input returns one result per row.
"""

from __future__ import annotations

import numpy as np

from belreg.codebook import CodeMatrix
from belreg.errors import ShapeError


def _check(z: np.ndarray, C: CodeMatrix) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != C.bits:
        raise ShapeError(f"expected {C.bits} logits, got {z.shape[-1]}")
    return z


def _scalar(x, like: np.ndarray):
    return x.item() if like.ndim == 1 else x


def threshold(z) -> np.ndarray:
    return (np.asarray(z) > 0).astype(np.uint8)


def decode_unary(bits):
    """Number of ones plus one."""
    b = np.asarray(bits)
    return _scalar(b.sum(axis=-1).astype(np.int64) + 1, b)


def johnson_terms(bits) -> tuple[np.ndarray, np.ndarray, int]:
    """``(Tl, Tf, Tc)`` for bit vectors; Tl and Tf are 0 where no bit is set."""
    b = np.atleast_2d(np.asarray(bits)).astype(bool)
    M = b.shape[-1]
    any_one = b.any(axis=-1)
    first = np.argmax(b, axis=-1) + 1
    last = M - np.argmax(b[:, ::-1], axis=-1)
    Tl = np.where(any_one, -last, 0)
    Tf = np.where(any_one, M + 1 - first, 0)
    return Tl, Tf, M


def decode_johnson(bits):
    """Custom Johnson decoder ``Tl + Tf + Tc``.

    The all-zero word decodes to ``2M`` (the all-zero codeword's level when
    ``L = 2M``). Results are clamped to ``[1, 2M]``.
    """
    b = np.asarray(bits)
    Tl, Tf, M = johnson_terms(b)
    level = np.where(Tf > 0, Tl + Tf + M, 2 * M)
    level = np.clip(level, 1, 2 * M).astype(np.int64)
    return level.item() if b.ndim == 1 else level


def correlations(z, C: CodeMatrix) -> np.ndarray:
    z = _check(z, C)
    return z @ C.rows.T.astype(float)


def decode_gen(z, C: CodeMatrix):
    """Level whose codeword has the largest correlation with ``z``.

    Ties go to the smallest level.
    """
    z = _check(z, C)
    u = correlations(z, C)
    return _scalar(np.argmax(u, axis=-1) + 1, z)


def softmax(u: np.ndarray) -> np.ndarray:
    e = np.exp(u - u.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def decode_gen_ex(z, C: CodeMatrix):
    """Softmax-weighted mean level over the correlations, in ``[1, L]``."""
    z = _check(z, C)
    sigma = softmax(correlations(z, C))
    k = np.arange(1, C.levels + 1, dtype=float)
    y = sigma @ k
    return _scalar(np.clip(y, 1.0, float(C.levels)), z)
