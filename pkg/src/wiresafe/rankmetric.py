"""
Rank-metric codes: rank distance, Singleton bounds, Gabidulin codes and the parity-check
criteria for minimum rank distance.

A code is held by its k x n parity-check matrix H over GF(2^m); its dimension is n - rank(H).
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from math import floor
from typing import Any, Dict, Iterator, Optional, Sequence

import numpy as np

from ._config import get_budget, require_budget
from .exceptions import DimensionMismatchError, FieldMismatchError
from .gf import (
    BaseMatrix,
    ExtMatrix,
    ExtVector,
    FieldSpec,
    enumerate_full_rank,
    matmul_words,
    nullspace,
    rank_base,
    rank_ext,
    xor_rank,
)

logger = logging.getLogger(__name__)

__all__ = [
    "GabidulinCode",
    "ParityCheckCode",
    "build_gabidulin",
    "find_theorem1_witness",
    "is_mrd",
    "min_rank_distance_bruteforce",
    "moore_matrix",
    "rank_distance",
    "singleton_bound",
    "singleton_d_bound",
    "verify_corollary1",
    "verify_theorem1",
]


class ParityCheckCode:
    """A linear code over GF(2^m) given by a parity-check matrix.

    Args:
        parity_check: The k x n matrix H; the code is {x : Hx = 0}.
    """

    def __init__(self, parity_check: ExtMatrix) -> None:
        self.H = parity_check

    @property
    def field(self) -> FieldSpec:
        return self.H.field

    @property
    def n(self) -> int:
        return self.H.cols

    @property
    def k(self) -> int:
        """Number of parity-check rows, i.e. the syndrome length."""
        return self.H.rows

    @property
    def dimension(self) -> int:
        return self.n - rank_ext(self.H)

    def generator_matrix(self) -> ExtMatrix:
        """A basis of the code, one codeword per row."""
        return nullspace(self.H)

    def contains(self, x: ExtVector) -> bool:
        return not (self.H @ x).entries.any()

    def codewords(self, *, budget: Optional[int] = None) -> Iterator[ExtVector]:
        """Every codeword, the zero word first.

        Raises:
            BudgetExceededError: If the code has more codewords than the enumeration budget.
        """
        generator = self.generator_matrix()
        limit = get_budget().enumeration if budget is None else budget
        require_budget(f"codeword enumeration of a dimension-{generator.rows} code", self.field.order**generator.rows, limit)
        coefficients = np.array(list(product(range(self.field.order), repeat=generator.rows)), dtype=np.uint64)
        count = self.field.order**generator.rows
        words = matmul_words(self.field, coefficients.reshape(count, generator.rows), generator.entries)
        for row in words:
            yield ExtVector(self.field, row)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, k={self.k}, H={self.H.to_hex()} over {self.field})"


def moore_matrix(field: FieldSpec, generators: Sequence[int], rows: int) -> ExtMatrix:
    """The matrix with entry (i, j) equal to g_j^(2^i), for i = 0 .. rows-1."""
    entries = [[field.frobenius_int(g, i) for g in generators] for i in range(rows)]
    return ExtMatrix(field, entries, cols=len(generators))


class GabidulinCode(ParityCheckCode):
    """A Gabidulin code, whose parity check is the Moore matrix of GF(2)-independent generators.

    The code has length n, dimension n - k and minimum rank distance k + 1.

    Args:
        field: The symbol field GF(2^m); requires n <= m.
        n: Code length.
        k: Number of parity-check rows.
        generators: n elements of GF(2^m), linearly independent over GF(2).
    """

    def __init__(self, field: FieldSpec, n: int, k: int, generators: Sequence[int]) -> None:
        if n > field.m:
            raise ValueError(f"Gabidulin codes need n <= m, got n={n} and m={field.m}")
        if not 0 <= k <= n:
            raise ValueError(f"k must be between 0 and n={n}, got {k}")
        if len(generators) != n:
            raise DimensionMismatchError(f"expected {n} generators, got {len(generators)}")
        if rank_base(ExtVector(field, list(generators))) != n:
            raise ValueError("generators are linearly dependent over GF(2)")
        self.generators = tuple(int(g) for g in generators)
        super().__init__(moore_matrix(field, self.generators, k))

    @property
    def designed_distance(self) -> int:
        return self.k + 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field.to_dict(),
            "n": self.n,
            "k": self.k,
            "generators": [f"{g:x}" for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> GabidulinCode:
        field = FieldSpec.from_dict(data["field"])
        return cls(field, int(data["n"]), int(data["k"]), [int(g, 16) for g in data["generators"]])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GabidulinCode):
            return NotImplemented
        return self.field == other.field and self.k == other.k and self.generators == other.generators

    def __hash__(self) -> int:
        return hash((self.field, self.k, self.generators))


def build_gabidulin(field: FieldSpec, n: int, k: int, generators: Optional[Sequence[int]] = None) -> GabidulinCode:
    """Build a Gabidulin code; the default generators are 1, α, ..., α^(n-1).

    Raises:
        ValueError: If n > m, k is out of range, or the generators are dependent over GF(2).
    """
    if generators is None:
        alpha = field.alpha
        generators = [(alpha**j).coeffs for j in range(n)]
    return GabidulinCode(field, n, k, generators)


def rank_distance(x: ExtVector, y: ExtVector) -> int:
    """Rank of x - y as an n x m matrix over GF(2).

    Raises:
        FieldMismatchError: If the vectors live over different fields.
        DimensionMismatchError: If the lengths differ.
    """
    if x.field != y.field:
        raise FieldMismatchError(f"cannot compare vectors over {x.field} and {y.field}")
    if len(x) != len(y):
        raise DimensionMismatchError(f"cannot compare vectors of lengths {len(x)} and {len(y)}")
    return rank_base(x - y)


def singleton_bound(n: int, m: int, d: int) -> int:
    """Largest log2 |C| for a rank-metric code in GF(2)^(n x m) with minimum rank distance d.

    Raises:
        ValueError: If d is not between 1 and min(n, m).
    """
    if not 1 <= d <= min(n, m):
        raise ValueError(f"d must be between 1 and {min(n, m)}, got {d}")
    return max(n, m) * (min(n, m) - d + 1)


def singleton_d_bound(n: int, m: int, k: int) -> int:
    """Largest minimum rank distance of a linear (n, k) code over GF(2^m): floor(min(1, m/n)(n-k)) + 1.

    Raises:
        ValueError: If k is not between 0 and n.
    """
    if not 0 <= k <= n:
        raise ValueError(f"k must be between 0 and n={n}, got {k}")
    return floor(min(Fraction(1), Fraction(m, n)) * (n - k)) + 1


def min_rank_distance_bruteforce(code: ParityCheckCode, *, budget: Optional[int] = None) -> int:
    """Minimum rank over the nonzero codewords, found by enumerating the whole code.

    By linearity this equals the minimum pairwise rank distance.

    Raises:
        ValueError: If the code has no nonzero codeword.
        BudgetExceededError: If the code is larger than the enumeration budget.
    """
    best: Optional[int] = None
    for word in code.codewords(budget=budget):
        values = word.to_list()
        if not any(values):
            continue
        rank = xor_rank(values)
        if best is None or rank < best:
            best = rank
            if best == 1:
                break
    if best is None:
        raise ValueError("the zero code has no minimum distance")
    return best


def is_mrd(code: ParityCheckCode, *, budget: Optional[int] = None) -> bool:
    """Whether the brute-force minimum rank distance meets the Singleton bound n - dim + 1."""
    dimension = code.dimension
    if dimension == 0:
        return True
    bound = singleton_d_bound(code.n, code.field.m, dimension)
    return min_rank_distance_bruteforce(code, budget=budget) == bound


def _full_rank_columns(n: int, cols: int, budget: Optional[int]) -> Iterator[BaseMatrix]:
    """Every full-rank n x cols matrix over GF(2), cols <= n."""
    for transposed in enumerate_full_rank(cols, n, budget=budget):
        yield transposed.T


def find_theorem1_witness(code: ParityCheckCode, d: int, *, budget: Optional[int] = None) -> Optional[BaseMatrix]:
    """Search for a full-rank T0 in GF(2)^(n x d) with rank(H T0) < d.

    Returns:
        The first such T0 in enumeration order, or None if there is none.
    """
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if d > code.n:
        return None
    for t in _full_rank_columns(code.n, d, budget):
        if rank_ext(code.H @ t) < d:
            return t
    return None


def verify_theorem1(code: ParityCheckCode, d: int, *, budget: Optional[int] = None) -> bool:
    """Check the parity-check characterization of minimum rank distance d.

    True iff rank(H T) = d - 1 for every full-rank T in GF(2)^(n x (d-1)), and rank(H T0) < d
    for some full-rank T0 in GF(2)^(n x d). For d = 1 the first condition is vacuous.
    """
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if d - 1 > code.n:
        return False
    for t in _full_rank_columns(code.n, d - 1, budget):
        if rank_ext(code.H @ t) != d - 1:
            return False
    witness = find_theorem1_witness(code, d, budget=budget)
    if witness is None:
        return False
    logger.info(f"Minimum rank distance {d} witnessed by T0={witness.to_lists()}")
    return True


def verify_corollary1(code: ParityCheckCode, *, budget: Optional[int] = None) -> bool:
    """Check the parity-check characterization of MRD codes (requires n <= m).

    True iff rank(H T) equals the number of rows r of H for every full-rank T in GF(2)^(n x r).
    """
    if code.n > code.field.m:
        raise ValueError(f"the MRD criterion needs n <= m, got n={code.n} and m={code.field.m}")
    r = code.k
    for t in _full_rank_columns(code.n, r, budget):
        if rank_ext(code.H @ t) != r:
            return False
    return True
