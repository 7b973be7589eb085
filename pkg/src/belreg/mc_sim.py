"""Monte-Carlo simulation of independent classifier bit flips.

Samples are split into ``streams`` partitions. Partition ``i`` draws from a
PCG64 generator seeded with ``SeedSequence(seed, spawn_key=(i,))``, so the
merged result depends on ``(seed, samples, streams)`` only, never on how many
worker threads evaluate the partitions.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from belreg import bounds
from belreg.codebook import CodeKind, CodeMatrix
from belreg.decoder import decode_gen, decode_gen_ex, decode_johnson, decode_unary
from belreg.error_model import ClassifierErrorModel
from belreg.errors import InvalidModel, ShapeError, UnsupportedDecoder

RNG_NAME = "numpy.PCG64+SeedSequence"
_CHUNK = 8192


class DecoderKind(str, enum.Enum):
    CUSTOM = "custom"
    GEN = "gen"
    GEN_EX = "gen-ex"


@dataclass(frozen=True)
class SimulationReport:
    kind: str
    decoder: str
    levels: int
    samples: int
    seed: int
    streams: int
    mean_abs_error: float
    std_error: float
    rng: str = RNG_NAME

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _error_table(C: CodeMatrix, m) -> np.ndarray:
    if isinstance(m, ClassifierErrorModel):
        if m.levels != C.levels:
            raise ShapeError(f"model covers {m.levels} levels, code has {C.levels}")
        e = m.error_matrix()
    else:
        e = np.asarray(m, dtype=float)
        if np.any(e > 1.0) or np.any(e < 0.0):
            raise InvalidModel("error probabilities must lie in [0, 1]")
    if e.shape != (C.levels, C.bits):
        raise ShapeError(f"error table shape {e.shape} does not match code {(C.levels, C.bits)}")
    return e


def _decode(bits: np.ndarray, C: CodeMatrix, decoder: DecoderKind) -> np.ndarray:
    if decoder is DecoderKind.CUSTOM:
        if C.kind is CodeKind.UNARY:
            return decode_unary(bits).astype(float)
        return decode_johnson(bits).astype(float)
    logits = 2.0 * bits - 1.0
    if decoder is DecoderKind.GEN:
        return decode_gen(logits, C).astype(float)
    return decode_gen_ex(logits, C)


def _partition(samples: int, streams: int) -> list[int]:
    base, extra = divmod(samples, streams)
    return [base + (i < extra) for i in range(streams)]


def _run_stream(C, e, decoder, count, seed, index) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
    out = np.empty(count)
    for start in range(0, count, _CHUNK):
        n = min(_CHUNK, count - start)
        levels = rng.integers(1, C.levels + 1, size=n)
        flips = rng.random((n, C.bits)) < e[levels - 1]
        bits = C.rows[levels - 1] ^ flips.astype(np.uint8)
        out[start : start + n] = np.abs(_decode(bits, C, decoder) - levels)
    return out


def simulate_errors(C: CodeMatrix, decoder, m, samples: int, seed: int, streams: int = 1, workers: int = 1) -> np.ndarray:
    """Per-sample absolute errors, concatenated in stream order."""
    decoder = DecoderKind(decoder)
    if decoder is DecoderKind.CUSTOM and C.kind not in (CodeKind.UNARY, CodeKind.JOHNSON):
        raise UnsupportedDecoder(f"custom decoder exists only for unary and johnson, not {C.kind.value}")
    if samples < 1 or streams < 1:
        raise ValueError("samples and streams must be positive")
    e = _error_table(C, m)
    counts = _partition(samples, streams)
    args = [(C, e, decoder, c, seed, i) for i, c in enumerate(counts)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _run_stream(*a), args))
    else:
        parts = [_run_stream(*a) for a in args]
    return np.concatenate(parts)


def simulate(C: CodeMatrix, decoder, m, samples: int, seed: int, streams: int = 1, workers: int = 1) -> SimulationReport:
    """Mean absolute decoding error under uniformly drawn levels."""
    err = simulate_errors(C, decoder, m, samples, seed, streams, workers)
    std = float(err.std(ddof=1)) if err.size > 1 else 0.0
    return SimulationReport(
        kind=C.kind.value,
        decoder=DecoderKind(decoder).value,
        levels=C.levels,
        samples=samples,
        seed=seed,
        streams=streams,
        mean_abs_error=float(err.mean()),
        std_error=std / np.sqrt(err.size),
    )


@dataclass(frozen=True)
class BoundValidation:
    passed: bool
    analytic: float
    mc_mean: float
    std_error: float

    @property
    def margin(self) -> float:
        """Slack left by the bound: positive when the MC mean sits below it."""
        return self.analytic + 3.0 * self.std_error - self.mc_mean


def analytic_error(C: CodeMatrix, m) -> float:
    """Closed-form aggregate for a unary or Johnson code over ``C.levels`` labels."""
    N = C.levels + 1
    if C.kind is CodeKind.UNARY:
        return bounds.bound_unary(_error_table(C, m), N).aggregate
    if C.kind is CodeKind.JOHNSON:
        return bounds.expected_err_johnson(_error_table(C, m), N).aggregate
    raise UnsupportedDecoder(f"no closed form for {C.kind.value}")


def validate_bound(C: CodeMatrix, m, samples: int = 100_000, seed: int = 0, streams: int = 1, analytic_scale: float = 1.0) -> BoundValidation:
    """Check ``MC mean <= analytic + 3 SE`` using the custom decoder.

    ``analytic_scale`` shrinks the analytic side for negative-control runs.
    """
    analytic = analytic_scale * analytic_error(C, m)
    rep = simulate(C, DecoderKind.CUSTOM, m, samples, seed, streams)
    passed = rep.mean_abs_error <= analytic + 3.0 * rep.std_error
    return BoundValidation(passed, analytic, rep.mean_abs_error, rep.std_error)
