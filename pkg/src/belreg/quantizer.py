"""Uniform quantization of real labels onto levels ``1..N``."""

from __future__ import annotations

import math
from dataclasses import dataclass

from belreg.errors import InvalidLevels, OutOfRange


@dataclass(frozen=True)
class QuantizationSpec:
    a: float
    b: float
    levels: int

    def __post_init__(self):
        if not self.a < self.b:
            raise OutOfRange(f"need a < b, got [{self.a}, {self.b}]")
        if int(self.levels) != self.levels or self.levels < 2:
            raise InvalidLevels(f"need at least 2 levels, got {self.levels}")

    @property
    def step(self) -> float:
        return (self.b - self.a) / (self.levels - 1)

    @classmethod
    def parse(cls, range_text: str, levels: int) -> "QuantizationSpec":
        """Build from the CLI form ``a:b``."""
        lo, hi = range_text.split(":")
        return cls(float(lo), float(hi), int(levels))


def coordinate(y: float, spec: QuantizationSpec) -> float:
    """Continuous level coordinate of ``y`` (before rounding)."""
    if not spec.a <= y <= spec.b:
        raise OutOfRange(f"label {y} outside [{spec.a}, {spec.b}]")
    return (y - spec.a) * (spec.levels - 1) / (spec.b - spec.a) + 1


def quantize(y: float, spec: QuantizationSpec) -> int:
    """Nearest level, halves rounded up."""
    level = math.floor(coordinate(y, spec) + 0.5)
    return min(max(level, 1), spec.levels)


def dequantize(x: float, spec: QuantizationSpec) -> float:
    if not 1 <= x <= spec.levels:
        raise OutOfRange(f"level coordinate {x} outside [1, {spec.levels}]")
    # endpoint-exact interpolation: x = 1 gives a, x = N gives b
    t = (x - 1) / (spec.levels - 1)
    return spec.a * (1 - t) + spec.b * t
