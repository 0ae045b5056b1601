"""
Timing of field multiplication and coset encoding/decoding, and a least-squares check that
encoding cost follows k(n - k).
"""

from __future__ import annotations

import logging
import timeit
from dataclasses import asdict, dataclass
from statistics import median
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .coset import build_mds_baseline, decode, encode_batch
from .gf import ExtMatrix, ExtVector, FieldSpec

logger = logging.getLogger(__name__)

__all__ = [
    "BenchRow",
    "CostFit",
    "bench_grid",
    "bench_mul",
    "default_ks",
    "fit_cost_model",
    "time_operation",
]


def time_operation(fn: Callable[[], Any], iterations: int = 20) -> float:
    """Median wall time of one call to `fn`, in nanoseconds."""
    if iterations < 1:
        raise ValueError(f"iterations must be positive, got {iterations}")
    runs = timeit.repeat(fn, number=1, repeat=iterations)
    return median(runs) * 1e9


@dataclass(frozen=True)
class BenchRow:
    m: int
    n: int
    k: int
    encode_ns: float
    decode_ns: float
    batch: int

    @property
    def work(self) -> int:
        """Field products per encoded word in systematic form."""
        return self.k * (self.n - self.k)

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "work": self.work}


@dataclass(frozen=True)
class CostFit:
    """time ≈ slope·k(n - k) + intercept."""

    slope: float
    intercept: float
    r_squared: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def default_ks(n: int) -> Tuple[int, ...]:
    """A spread of message lengths between 1 and n - 1."""
    return tuple(sorted({k for k in (1, n // 4, n // 2, (3 * n) // 4, n - 1) if 1 <= k < n}))


def bench_grid(
    m: int = 8,
    ns: Sequence[int] = (8, 16, 32),
    *,
    ks: Optional[Callable[[int], Sequence[int]]] = None,
    iterations: int = 20,
    batch: int = 256,
    seed: int = 0,
) -> List[BenchRow]:
    """Time encoding of `batch` words and decoding of one word for every (n, k) in the grid.

    Schemes are systematic MDS coset schemes over GF(2^m), so both directions cost k(n - k)
    products per word.
    """
    field = FieldSpec.default(m)
    rng = np.random.default_rng(seed)
    pick = ks or default_ks
    rows: List[BenchRow] = []
    for n in ns:
        for k in pick(n):
            scheme = build_mds_baseline(field, n, n - k, systematic=True, verify=False)
            message = ExtVector(field, rng.integers(0, field.order, size=k, dtype=np.uint64))
            draws = ExtMatrix(field, rng.integers(0, field.order, size=(batch, n - k), dtype=np.uint64))
            words = encode_batch(scheme, message, draws)
            word = words.row(0)
            encode_ns = time_operation(lambda: encode_batch(scheme, message, draws), iterations) / batch
            decode_ns = time_operation(lambda: decode(scheme, word), iterations)
            logger.debug(f"n={n} k={k}: encode {encode_ns:.1f} ns/word, decode {decode_ns:.1f} ns/word")
            rows.append(BenchRow(m, n, k, encode_ns, decode_ns, batch))
    return rows


def bench_mul(m: int = 8, iterations: int = 20, *, size: int = 1 << 16, seed: int = 0) -> float:
    """Median nanoseconds per GF(2^m) product over a vector of `size` random pairs."""
    field = FieldSpec.default(m)
    rng = np.random.default_rng(seed)
    a = rng.integers(0, field.order, size=size, dtype=np.uint64)
    b = rng.integers(0, field.order, size=size, dtype=np.uint64)
    return time_operation(lambda: field.mul_array(a, b), iterations) / size


def fit_cost_model(rows: Sequence[BenchRow], attribute: str = "encode_ns") -> CostFit:
    """Least-squares fit of a timing column against k(n - k), with intercept.

    Raises:
        ValueError: If fewer than two distinct work values are present.
    """
    work = np.array([row.work for row in rows], dtype=float)
    times = np.array([getattr(row, attribute) for row in rows], dtype=float)
    if len(set(work.tolist())) < 2:
        raise ValueError("need at least two distinct k(n - k) values to fit")
    design = np.column_stack([work, np.ones_like(work)])
    (slope, intercept), *_ = np.linalg.lstsq(design, times, rcond=None)
    residual = times - design @ np.array([slope, intercept])
    spread = float(((times - times.mean()) ** 2).sum())
    r_squared = 1.0 - float((residual**2).sum()) / spread if spread else 1.0
    return CostFit(float(slope), float(intercept), r_squared)
