"""Binary label codes: construction and structural metrics.

A code matrix has one row per quantization level (level ``q`` lives in row
``q - 1``) and one column per binary classifier.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass

import numpy as np

from belreg.errors import InvalidLevels


class CodeKind(str, enum.Enum):
    UNARY = "unary"
    JOHNSON = "johnson"
    B1JDJ = "b1jdj"
    B2JDJ = "b2jdj"
    HEXJ = "hexj"
    HADAMARD = "hadamard"


@dataclass(frozen=True, eq=False)
class CodeMatrix:
    kind: CodeKind
    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.uint8)
        if rows.ndim != 2 or rows.shape[0] < 2 or rows.shape[1] < 1:
            raise InvalidLevels(f"code matrix needs L >= 2 rows and M >= 1 columns, got {rows.shape}")
        if np.any(rows > 1):
            raise ValueError("code matrix entries must be 0 or 1")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "kind", CodeKind(self.kind))

    @property
    def levels(self) -> int:
        return self.rows.shape[0]

    @property
    def bits(self) -> int:
        return self.rows.shape[1]

    def codeword(self, level: int) -> np.ndarray:
        """Row for a 1-based level."""
        if not 1 <= level <= self.levels:
            raise InvalidLevels(f"level {level} outside 1..{self.levels}")
        return self.rows[level - 1]

    def signed(self) -> np.ndarray:
        """Rows mapped to +/-1 (the noiseless logit image of each codeword)."""
        return 2.0 * self.rows - 1.0

    def to_csv(self) -> str:
        """Header ``kind,levels,bits`` (values), then one 0/1 row per level."""
        buf = io.StringIO()
        buf.write(f"{self.kind.value},{self.levels},{self.bits}\n")
        for row in self.rows:
            buf.write(",".join(str(int(v)) for v in row))
            buf.write("\n")
        return buf.getvalue()


@dataclass(frozen=True)
class CodeMetrics:
    transitions_per_classifier: list[int]
    adjacent_hamming: list[int]
    pairwise_hamming: np.ndarray


def _check_levels(L: int, minimum: int = 2) -> int:
    if int(L) != L or L < minimum:
        raise InvalidLevels(f"need at least {minimum} levels, got {L}")
    return int(L)


def _johnson_rows(L: int) -> np.ndarray:
    # bit k (1-based) of level Q is set iff M - Q < k <= 2M - Q
    M = -(-L // 2)
    q = np.arange(1, L + 1)[:, None]
    k = np.arange(1, M + 1)[None, :]
    return ((M - q < k) & (k <= 2 * M - q)).astype(np.uint8)


def gen_unary(L: int) -> CodeMatrix:
    """Unary (thermometer) code with ``L - 1`` bits; level Q sets bits ``k < Q``."""
    L = _check_levels(L)
    q = np.arange(1, L + 1)[:, None]
    k = np.arange(1, L)[None, :]
    return CodeMatrix(CodeKind.UNARY, (k < q).astype(np.uint8))


def gen_johnson(L: int) -> CodeMatrix:
    """Johnson (twisted ring counter) code with ``ceil(L/2)`` bits.

    Level 1 is ``0...01``; the window of ones grows leftwards, then shrinks
    from the right. For even ``L`` the last level is the all-zero word.
    """
    L = _check_levels(L)
    return CodeMatrix(CodeKind.JOHNSON, _johnson_rows(L))


def gen_base_johnson(L: int, base: int, reflect: bool = True) -> CodeMatrix:
    """Base+displacement code: ``v = base*b + d``, both parts Johnson coded.

    With ``reflect`` the displacement runs backwards on odd base terms so that
    consecutive levels differ in a single bit. ``reflect=False`` exists for
    comparison only.
    """
    if base not in (2, 4):
        raise ValueError(f"base must be 2 or 4, got {base}")
    L = _check_levels(L, minimum=base)
    base_code = _johnson_rows(-(-L // base))
    disp_code = _johnson_rows(base)
    v = np.arange(L)
    b, d = np.divmod(v, base)
    if reflect:
        d = np.where(b % 2 == 1, base - 1 - d, d)
    rows = np.hstack([base_code[b], disp_code[d]])
    kind = CodeKind.B1JDJ if base == 2 else CodeKind.B2JDJ
    return CodeMatrix(kind, rows)


def hex_digits(L: int) -> int:
    """Number of hexadecimal digits needed for values ``0..L-1``."""
    D = 1
    while 16**D < L:
        D += 1
    return D


def gen_hexj(L: int) -> CodeMatrix:
    """Each hex digit of ``Q - 1`` as an 8-bit Johnson word, most significant first."""
    L = _check_levels(L)
    D = hex_digits(L)
    digit_code = _johnson_rows(16)
    v = np.arange(L)
    parts = [digit_code[(v // 16**p) % 16] for p in reversed(range(D))]
    return CodeMatrix(CodeKind.HEXJ, np.hstack(parts))


def sylvester(M: int) -> np.ndarray:
    if M < 1 or M & (M - 1):
        raise ValueError(f"Sylvester construction needs a power of two, got {M}")
    H = np.ones((1, 1), dtype=np.int8)
    while H.shape[0] < M:
        H = np.block([[H, H], [H, -H]])
    return H


def gen_hadamard(L: int) -> CodeMatrix:
    """First ``L`` rows of the Sylvester Hadamard matrix, +1 -> 1 and -1 -> 0."""
    L = _check_levels(L)
    M = 1 << (L - 1).bit_length()
    H = sylvester(M)[:L]
    return CodeMatrix(CodeKind.HADAMARD, (H > 0).astype(np.uint8))


def make_code(kind: CodeKind | str, L: int) -> CodeMatrix:
    kind = CodeKind(kind)
    if kind is CodeKind.UNARY:
        return gen_unary(L)
    if kind is CodeKind.JOHNSON:
        return gen_johnson(L)
    if kind is CodeKind.B1JDJ:
        return gen_base_johnson(L, 2)
    if kind is CodeKind.B2JDJ:
        return gen_base_johnson(L, 4)
    if kind is CodeKind.HEXJ:
        return gen_hexj(L)
    return gen_hadamard(L)


def expected_bits(kind: CodeKind | str, L: int) -> int:
    """Closed-form bit count per kind (independent of the constructors)."""
    kind = CodeKind(kind)
    half = -(-L // 2)
    if kind is CodeKind.UNARY:
        return L - 1
    if kind is CodeKind.JOHNSON:
        return half
    if kind is CodeKind.B1JDJ:
        return -(-half // 2) + 1
    if kind is CodeKind.B2JDJ:
        quarter = -(-L // 4)
        return -(-quarter // 2) + 2
    if kind is CodeKind.HEXJ:
        return 8 * hex_digits(L)
    return 1 << (L - 1).bit_length()


def column_transitions(rows: np.ndarray) -> np.ndarray:
    return np.count_nonzero(np.diff(rows.astype(np.int8), axis=0), axis=0)


def pairwise_hamming(rows: np.ndarray) -> np.ndarray:
    r = rows.astype(np.int64)
    # |a xor b| = |a| + |b| - 2 a.b
    w = r.sum(axis=1)
    return w[:, None] + w[None, :] - 2 * (r @ r.T)


def metrics(C: CodeMatrix) -> CodeMetrics:
    adjacent = np.count_nonzero(C.rows[1:] != C.rows[:-1], axis=1)
    return CodeMetrics(
        transitions_per_classifier=[int(t) for t in column_transitions(C.rows)],
        adjacent_hamming=[int(h) for h in adjacent],
        pairwise_hamming=pairwise_hamming(C.rows),
    )
