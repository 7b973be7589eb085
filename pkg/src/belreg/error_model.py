"""Gaussian-mixture model of per-classifier misclassification probability.

Classifier ``k`` (0-based column index) errs on label ``y`` with probability
``sum_j r * pdf((y - mu_j) / sigma) / sigma`` where the centres ``mu_j`` sit
half-way between the levels at which its target bit flips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from belreg.codebook import CodeMatrix
from belreg.errors import InvalidModel, InvalidSigma

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ClassifierErrorModel:
    centers: tuple[tuple[float, ...], ...]
    sigma: float
    r: float
    levels: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidSigma(f"sigma must be positive, got {self.sigma}")
        if self.r < 0:
            raise InvalidModel(f"scale r must be non-negative, got {self.r}")

    @property
    def classifiers(self) -> int:
        return len(self.centers)

    def density(self, k: int, y) -> np.ndarray:
        """Unchecked mixture value for classifier ``k`` at ``y``."""
        y = np.asarray(y, dtype=float)
        mu = np.asarray(self.centers[k], dtype=float)
        if mu.size == 0:
            return np.zeros_like(y)
        d = (y[..., None] - mu) / self.sigma
        return self.r * _INV_SQRT_2PI / self.sigma * np.exp(-0.5 * d * d).sum(axis=-1)

    def peak(self) -> tuple[float, int, float]:
        """Largest error probability over the continuous range ``[1, levels]``.

        Returns ``(value, classifier, y)``. Evaluated at every centre inside the
        range and on a grid of spacing ``min(sigma / 10, 0.05)``.
        """
        step = min(self.sigma / 10.0, 0.05)
        grid = np.linspace(1.0, float(self.levels), int(np.ceil((self.levels - 1) / step)) + 1)
        best = (0.0, 0, 1.0)
        for k in range(self.classifiers):
            inside = [c for c in self.centers[k] if 1.0 <= c <= self.levels]
            ys = np.concatenate([grid, inside])
            vals = self.density(k, ys)
            i = int(np.argmax(vals))
            if vals[i] > best[0]:
                best = (float(vals[i]), k, float(ys[i]))
        return best

    def validate(self) -> None:
        value, k, y = self.peak()
        if value > 1.0:
            raise InvalidModel(f"error probability {value:.4g} > 1 for classifier {k} at y={y:.4g}")

    def error_matrix(self) -> np.ndarray:
        """``e[n - 1, k]`` for every label ``n`` in ``1..levels``.

        Raises InvalidModel if the error curve of any classifier exceeds one
        anywhere on ``[1, levels]``.
        """
        self.validate()
        n = np.arange(1, self.levels + 1, dtype=float)
        return np.stack([self.density(k, n) for k in range(self.classifiers)], axis=1)


def model_from_code(C: CodeMatrix, r: float, sigma: float) -> ClassifierErrorModel:
    """One Gaussian per bit transition of each column of ``C``."""
    if not sigma > 0:
        raise InvalidSigma(f"sigma must be positive, got {sigma}")
    flips = C.rows[1:] != C.rows[:-1]
    centers = tuple(
        tuple(float(q) + 1.5 for q in np.flatnonzero(flips[:, k]))
        for k in range(C.bits)
    )
    return ClassifierErrorModel(centers=centers, sigma=float(sigma), r=float(r), levels=C.levels)


def error_prob(m: ClassifierErrorModel, k: int, y: float) -> float:
    if not 0 <= k < m.classifiers:
        raise IndexError(f"classifier {k} outside 0..{m.classifiers - 1}")
    p = float(m.density(k, y))
    if p > 1.0:
        raise InvalidModel(f"error probability {p:.4g} > 1 for classifier {k} at {y}")
    return p
