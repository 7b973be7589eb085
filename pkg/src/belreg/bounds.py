"""Closed-form expected absolute error for unary and Johnson codes.

Convention: labels ``n`` run over ``1..N-1``. The unary code then has
``N - 2`` classifiers (``gen_unary(N - 1)``) and the Johnson code ``N/2``
(``gen_johnson(N - 1)``, N even). Error probabilities are passed either as a
``ClassifierErrorModel`` or directly as an array ``e[n - 1, k]`` of shape
``(N - 1, classifiers)``.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from belreg.codebook import CodeKind, gen_johnson, gen_unary
from belreg.error_model import ClassifierErrorModel, model_from_code
from belreg.errors import InvalidConvention, InvalidModel

STATUS_OK = "ok"
STATUS_INVALID = "invalid_prob"
STATUS_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class BoundReport:
    kind: CodeKind
    N: int
    per_label: np.ndarray
    aggregate: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "N": self.N,
            "per_label": [float(v) for v in self.per_label],
            "aggregate": float(self.aggregate),
        }


def error_table(m, N: int, classifiers: int) -> np.ndarray:
    """Validated ``(N - 1, classifiers)`` array of error probabilities."""
    if isinstance(m, ClassifierErrorModel):
        e = m.error_matrix()
    else:
        e = np.asarray(m, dtype=float)
        if np.any(e > 1.0) or np.any(e < 0.0):
            raise InvalidModel("error probabilities must lie in [0, 1]")
    if e.shape != (N - 1, classifiers):
        raise InvalidConvention(
            f"expected error table of shape {(N - 1, classifiers)}, got {e.shape}"
        )
    return e


def bound_unary(m, N: int) -> BoundReport:
    """Sum of per-classifier error probabilities, averaged over labels."""
    if N < 3:
        raise InvalidConvention(f"unary convention needs N >= 3, got {N}")
    e = error_table(m, N, N - 2)
    per_label = e.sum(axis=1)
    return BoundReport(CodeKind.UNARY, N, per_label, float(per_label.mean()))


def _tf(e: np.ndarray, n: int) -> float:
    # e is the length-M error vector (0-based); classifiers s-1..M-1 hold ones
    M = e.size
    s = M - n + 1
    total = 0.0
    correct_prefix = 1.0
    for k in range(1, s):
        total += (s - k) * e[k - 1] * correct_prefix
        correct_prefix *= 1.0 - e[k - 1]
    run = 1.0
    for k in range(s, M + 1):
        run *= e[k - 1]
        total += run
    return total


def _tl(e: np.ndarray, n: int) -> float:
    M = e.size
    s = M - n + 1
    total = 0.0
    run = 1.0
    for k in range(M, s - 1, -1):
        run *= e[k - 1]
        total += run
    ones_flipped = run
    tail = 0.0
    run = 1.0
    for k in range(s - 1, 0, -1):
        run *= 1.0 - e[k - 1]
        tail += run
    return total + ones_flipped * tail


def _johnson_row(m, n: int, N: int) -> np.ndarray:
    if N % 2:
        raise InvalidConvention(f"Johnson convention needs even N, got {N}")
    if not 1 <= n <= N // 2:
        raise InvalidConvention(f"label {n} outside 1..{N // 2}")
    return error_table(m, N, N // 2)[n - 1]


def expected_tf(m, n: int, N: int) -> float:
    """Expected shift of the first-one term for label ``n <= N/2``."""
    return _tf(_johnson_row(m, n, N), n)


def expected_tl(m, n: int, N: int) -> float:
    """Expected shift of the last-one term for label ``n <= N/2``."""
    return _tl(_johnson_row(m, n, N), n)


def expected_err_johnson(m, N: int) -> BoundReport:
    """Per-label ``E|dTf| + E|dTl|`` with the upper half mirrored.

    Labels above ``N/2`` are evaluated as label ``N - n`` with the classifier
    order reversed, which maps their codewords onto the lower half.
    """
    if N % 2 or N < 4:
        raise InvalidConvention(f"Johnson convention needs even N >= 4, got {N}")
    e = error_table(m, N, N // 2)
    M = N // 2
    per_label = np.empty(N - 1)
    for n in range(1, N):
        if n <= M:
            row, n_eff = e[n - 1], n
        else:
            row, n_eff = e[n - 1][::-1], N - n
        per_label[n - 1] = _tf(row, n_eff) + _tl(row, n_eff)
    return BoundReport(CodeKind.JOHNSON, N, per_label, float(per_label.mean()))


def gaussian_models(N: int, r: float, sigma: float) -> tuple[ClassifierErrorModel, ClassifierErrorModel]:
    """Unary and Johnson models for the convention size ``N``."""
    return (
        model_from_code(gen_unary(N - 1), r, sigma),
        model_from_code(gen_johnson(N - 1), r, sigma),
    )


@dataclass(frozen=True)
class SweepGrid:
    N: int
    r_values: list[float]
    sigma_values: list[float]
    pct_increase: list[list[float | None]]
    status: list[list[str]] = field(default_factory=list)

    def cells(self):
        for i, r in enumerate(self.r_values):
            for j, s in enumerate(self.sigma_values):
                yield i, j, r, s, self.pct_increase[i][j], self.status[i][j]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "sigma", "pct_increase", "status"])
        for _, _, r, s, pct, status in self.cells():
            w.writerow([repr(float(r)), repr(float(s)), "" if pct is None else repr(pct), status])
        return buf.getvalue()


def sweep_cell(N: int, r: float, sigma: float) -> tuple[float | None, str]:
    """Percentage by which the unary bound exceeds the Johnson expected error."""
    unary, johnson = gaussian_models(N, r, sigma)
    try:
        u = bound_unary(unary, N).aggregate
        j = expected_err_johnson(johnson, N).aggregate
    except InvalidModel:
        return None, STATUS_INVALID
    if j == 0.0:
        return None, STATUS_DEGENERATE
    return 100.0 * (u - j) / j, STATUS_OK


def compare_sweep(N: int, r_grid, sigma_grid, workers: int = 1) -> SweepGrid:
    r_values = [float(r) for r in r_grid]
    sigma_values = [float(s) for s in sigma_grid]
    if not r_values or not sigma_values:
        raise ValueError("sweep grids must be non-empty")
    jobs = [(r, s) for r in r_values for s in sigma_values]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda rs: sweep_cell(N, *rs), jobs))
    else:
        results = [sweep_cell(N, r, s) for r, s in jobs]
    width = len(sigma_values)
    pct = [[results[i * width + j][0] for j in range(width)] for i in range(len(r_values))]
    status = [[results[i * width + j][1] for j in range(width)] for i in range(len(r_values))]
    return SweepGrid(N, r_values, sigma_values, pct, status)


def default_grid() -> tuple[np.ndarray, np.ndarray]:
    """``r`` over [0.05, 1] (20 values), ``sigma`` over [0.25, 4] (16 values)."""
    return np.linspace(0.05, 1.0, 20), np.linspace(0.25, 4.0, 16)
