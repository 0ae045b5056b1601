"""
Arithmetic in GF(2) and GF(2^m), and matrices over both.

Elements of GF(2^m) are bit-packed in the polynomial basis {1, α, ..., α^(m-1)}: bit i of an
element is the coefficient of α^i. Matrices are numpy arrays of such words (`uint64`) for
GF(2^m), and of bits (`uint8`) for GF(2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from ._config import get_budget, require_budget
from ._constants import DEFAULT_MODULI, IRREDUCIBILITY_CHECK_MAX_DEGREE, MAX_EXTENSION_DEGREE
from .exceptions import DimensionMismatchError, FieldMismatchError, SingularMatrixError

logger = logging.getLogger(__name__)

UIntArray = npt.NDArray[np.uint64]
BitArray = npt.NDArray[np.uint8]

__all__ = [
    "GF2",
    "BaseMatrix",
    "ExtMatrix",
    "ExtVector",
    "FieldElement",
    "FieldSpec",
    "add",
    "enumerate_full_rank",
    "enumerate_full_rank_ext",
    "expand",
    "flatten",
    "frobenius",
    "inv",
    "invert",
    "matmul_words",
    "mul",
    "nullspace",
    "rank_base",
    "rank_base_matrix",
    "rank_ext",
    "row_reduce",
    "solve",
    "xor_rank",
]

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


def _poly_mod(a: int, b: int) -> int:
    """Remainder of carry-less division of `a` by `b`."""
    while a.bit_length() >= b.bit_length():
        a ^= b << (a.bit_length() - b.bit_length())
    return a


def _is_irreducible(modulus: int) -> bool:
    """Trial division by every polynomial of degree 1 to deg/2."""
    degree = modulus.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if _poly_mod(modulus, divisor) == 0:
            return False
    return True


def xor_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of bit-packed rows."""
    basis: List[int] = []
    for row in rows:
        for vector in basis:
            row = min(row, row ^ vector)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return len(basis)


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(2^m) defined by an irreducible modulus.

    Only the base field GF(2) is supported; every extension is taken over it.

    Args:
        m: Extension degree, 1 to 63.
        modulus: Irreducible polynomial of degree m, bit i = coefficient of x^i.
    """

    m: int
    modulus: int

    def __post_init__(self) -> None:
        if not 1 <= self.m <= MAX_EXTENSION_DEGREE:
            raise ValueError(f"extension degree must be between 1 and {MAX_EXTENSION_DEGREE}, got {self.m}")
        if self.modulus.bit_length() - 1 != self.m:
            raise ValueError(f"modulus 0x{self.modulus:x} does not have degree {self.m}")
        if self.m <= IRREDUCIBILITY_CHECK_MAX_DEGREE and not _is_irreducible(self.modulus):
            raise ValueError(f"modulus 0x{self.modulus:x} is not irreducible over GF(2)")
        if self.m > IRREDUCIBILITY_CHECK_MAX_DEGREE:
            logger.warning(f"Modulus 0x{self.modulus:x} of degree {self.m} is used without an irreducibility check")

    @classmethod
    def default(cls, m: int) -> FieldSpec:
        """Build GF(2^m) from the built-in modulus table.

        Raises:
            ValueError: If no built-in modulus exists for `m`.
        """
        if m not in DEFAULT_MODULI:
            raise ValueError(f"no built-in modulus for m={m}; pass one explicitly")
        return cls(m, DEFAULT_MODULI[m])

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> FieldSpec:
        return cls(int(data["m"]), int(str(data["modulus"]), 16))

    def to_dict(self) -> Dict[str, Any]:
        return {"m": self.m, "modulus": f"{self.modulus:x}"}

    @property
    def order(self) -> int:
        return 1 << self.m

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    @property
    def alpha(self) -> FieldElement:
        """The class of x modulo the modulus."""
        return FieldElement(self, _poly_mod(0b10, self.modulus))

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def elements(self) -> Iterator[FieldElement]:
        for value in range(self.order):
            yield FieldElement(self, value)

    def from_hex(self, text: str) -> FieldElement:
        return FieldElement(self, int(text, 16))

    def mul_int(self, a: int, b: int) -> int:
        """Shift-and-reduce product of two bit-packed elements."""
        result = 0
        top = 1 << self.m
        while b:
            if b & 1:
                result ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.modulus
        return result

    def pow_int(self, a: int, exponent: int) -> int:
        result = 1
        while exponent:
            if exponent & 1:
                result = self.mul_int(result, a)
            a = self.mul_int(a, a)
            exponent >>= 1
        return result

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self.pow_int(a, self.order - 2)

    def frobenius_int(self, a: int, i: int) -> int:
        """a^(2^i); the Frobenius map has order m."""
        if i < 0:
            raise ValueError("Frobenius power must be non-negative")
        for _ in range(i % self.m):
            a = self.mul_int(a, a)
        return a

    def mul_array(self, a: npt.ArrayLike, b: npt.ArrayLike) -> UIntArray:
        """Elementwise product of two broadcastable arrays of bit-packed elements."""
        x, y = np.broadcast_arrays(np.asarray(a, dtype=np.uint64), np.asarray(b, dtype=np.uint64))
        x = x.copy()
        y = y.copy()
        result = np.zeros(x.shape, dtype=np.uint64)
        modulus = np.uint64(self.modulus)
        degree = np.uint64(self.m)
        for _ in range(self.m):
            result ^= np.where((y & _ONE).astype(bool), x, _ZERO)
            y >>= _ONE
            x <<= _ONE
            x ^= np.where(((x >> degree) & _ONE).astype(bool), modulus, _ZERO)
        return result

    def __str__(self) -> str:
        return f"GF(2^{self.m})"


GF2 = FieldSpec(1, 0b11)
"""The prime field, viewed as GF(2^1) with modulus x + 1."""


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(2^m).

    Args:
        field: The field the element belongs to.
        coeffs: Bit-packed polynomial-basis coordinates, below 2^m.
    """

    field: FieldSpec
    coeffs: int

    def __post_init__(self) -> None:
        if not 0 <= self.coeffs < self.field.order:
            raise ValueError(f"value 0x{self.coeffs:x} is not an element of {self.field}")

    def hex(self) -> str:
        return f"{self.coeffs:x}"

    @property
    def is_zero(self) -> bool:
        return self.coeffs == 0

    def __bool__(self) -> bool:
        return self.coeffs != 0

    def __int__(self) -> int:
        return self.coeffs

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    __sub__ = __add__

    def __neg__(self) -> FieldElement:
        return self

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return mul(self, inv(other))

    def __pow__(self, exponent: int) -> FieldElement:
        if exponent < 0:
            return inv(self) ** (-exponent)
        return FieldElement(self.field, self.field.pow_int(self.coeffs, exponent))

    def __repr__(self) -> str:
        return f"FieldElement(0x{self.coeffs:x} in {self.field})"


def _same_field(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.field != b.field:
        raise FieldMismatchError(f"cannot combine elements of {a.field} and {b.field}")
    return a.field


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Sum (equivalently difference) of two field elements.

    Raises:
        FieldMismatchError: If the elements belong to different fields.
    """
    field = _same_field(a, b)
    return FieldElement(field, a.coeffs ^ b.coeffs)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Product of two field elements, reduced modulo the field's modulus.

    Raises:
        FieldMismatchError: If the elements belong to different fields.
    """
    field = _same_field(a, b)
    return FieldElement(field, field.mul_int(a.coeffs, b.coeffs))


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse.

    Raises:
        ZeroDivisionError: If `a` is zero.
    """
    return FieldElement(a.field, a.field.inv_int(a.coeffs))


def frobenius(a: FieldElement, i: int) -> FieldElement:
    """Apply the Frobenius map `i` times, giving a^(2^i)."""
    return FieldElement(a.field, a.field.frobenius_int(a.coeffs, i))


def _as_words(field: FieldSpec, entries: Any) -> UIntArray:
    if isinstance(entries, np.ndarray):
        words = entries.astype(np.uint64, copy=True)
    else:
        items = list(entries)
        if items and isinstance(items[0], (list, tuple, np.ndarray)):
            items = [[_as_int(field, x) for x in row] for row in items]
        else:
            items = [_as_int(field, x) for x in items]
        words = np.array(items, dtype=np.uint64)
    if words.size and int(words.max()) >= field.order:
        raise ValueError(f"entries are not all elements of {field}")
    return words


def _as_int(field: FieldSpec, value: Any) -> int:
    if isinstance(value, FieldElement):
        if value.field != field:
            raise FieldMismatchError(f"element of {value.field} used in a {field} container")
        return value.coeffs
    return int(value)


def _freeze(array: np.ndarray) -> Any:
    array.setflags(write=False)
    return array


class ExtVector:
    """A vector over GF(2^m).

    Args:
        field: The field of the entries.
        entries: Field elements or their bit-packed values.
    """

    __slots__ = ("field", "entries")

    def __init__(self, field: FieldSpec, entries: Union[Sequence[Any], npt.ArrayLike] = ()) -> None:
        words = _as_words(field, entries).reshape(-1)
        self.field = field
        self.entries: UIntArray = _freeze(words)

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> ExtVector:
        return cls(field, np.zeros(n, dtype=np.uint64))

    @classmethod
    def from_hex(cls, field: FieldSpec, values: Sequence[str]) -> ExtVector:
        return cls(field, [int(v, 16) for v in values])

    def to_list(self) -> List[int]:
        return [int(v) for v in self.entries]

    def to_hex(self) -> List[str]:
        return [f"{int(v):x}" for v in self.entries]

    def __len__(self) -> int:
        return int(self.entries.shape[0])

    def __iter__(self) -> Iterator[FieldElement]:
        for value in self.entries:
            yield FieldElement(self.field, int(value))

    def __getitem__(self, index: int) -> FieldElement:
        return FieldElement(self.field, int(self.entries[index]))

    def __add__(self, other: ExtVector) -> ExtVector:
        if self.field != other.field:
            raise FieldMismatchError(f"cannot add vectors over {self.field} and {other.field}")
        if len(self) != len(other):
            raise DimensionMismatchError(f"cannot add vectors of lengths {len(self)} and {len(other)}")
        return ExtVector(self.field, self.entries ^ other.entries)

    __sub__ = __add__

    def scale(self, factor: FieldElement) -> ExtVector:
        return ExtVector(self.field, self.field.mul_array(self.entries, _as_int(self.field, factor)))

    def concat(self, other: ExtVector) -> ExtVector:
        return ExtVector(self.field, np.concatenate([self.entries, other.entries]))

    def take(self, indices: Sequence[int]) -> ExtVector:
        return ExtVector(self.field, self.entries[list(indices)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtVector):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.field, tuple(self.to_list())))

    def __repr__(self) -> str:
        return f"ExtVector({self.to_hex()} over {self.field})"


class ExtMatrix:
    """A matrix over GF(2^m).

    Args:
        field: The field of the entries.
        entries: Rows of field elements or bit-packed values, or a 2-D array.
        cols: Column count, needed only to shape a matrix with no rows.
    """

    __slots__ = ("field", "entries")

    def __init__(self, field: FieldSpec, entries: Any = (), cols: Optional[int] = None) -> None:
        words = _as_words(field, entries)
        if words.ndim != 2:
            if words.size:
                raise DimensionMismatchError("matrix entries must be two-dimensional")
            words = words.reshape(0, cols or 0)
        self.field = field
        self.entries: UIntArray = _freeze(words)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> ExtMatrix:
        return cls(field, np.zeros((rows, cols), dtype=np.uint64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> ExtMatrix:
        return cls(field, np.eye(n, dtype=np.uint64))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[ExtVector], cols: int) -> ExtMatrix:
        if not rows:
            return cls.zeros(field, 0, cols)
        return cls(field, np.stack([row.entries for row in rows]))

    @classmethod
    def from_hex(cls, field: FieldSpec, rows: Sequence[Sequence[str]], cols: Optional[int] = None) -> ExtMatrix:
        return cls(field, [[int(v, 16) for v in row] for row in rows], cols=cols)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.entries.shape[0]), int(self.entries.shape[1])

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def T(self) -> ExtMatrix:
        return ExtMatrix(self.field, self.entries.T.copy())

    def row(self, i: int) -> ExtVector:
        return ExtVector(self.field, self.entries[i])

    def column(self, j: int) -> ExtVector:
        return ExtVector(self.field, self.entries[:, j])

    def take_columns(self, indices: Sequence[int]) -> ExtMatrix:
        return ExtMatrix(self.field, self.entries[:, list(indices)].reshape(self.rows, len(indices)))

    def vstack(self, other: Union[ExtMatrix, BaseMatrix]) -> ExtMatrix:
        below = other.embed(self.field) if isinstance(other, BaseMatrix) else other
        if below.field != self.field:
            raise FieldMismatchError(f"cannot stack matrices over {self.field} and {below.field}")
        if below.cols != self.cols:
            raise DimensionMismatchError(f"cannot stack {self.shape} on {below.shape}")
        return ExtMatrix(self.field, np.vstack([self.entries, below.entries]))

    def hstack(self, other: ExtMatrix) -> ExtMatrix:
        if other.rows != self.rows:
            raise DimensionMismatchError(f"cannot place {other.shape} beside {self.shape}")
        return ExtMatrix(self.field, np.hstack([self.entries, other.entries]))

    def __getitem__(self, index: Tuple[int, int]) -> FieldElement:
        return FieldElement(self.field, int(self.entries[index]))

    def __matmul__(self, other: Any) -> Any:
        if isinstance(other, BaseMatrix):
            other = other.embed(self.field)
        if isinstance(other, ExtMatrix):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot multiply matrices over {self.field} and {other.field}")
            return ExtMatrix(self.field, matmul_words(self.field, self.entries, other.entries))
        if isinstance(other, ExtVector):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot multiply a {self.field} matrix by a {other.field} vector")
            return ExtVector(self.field, matmul_words(self.field, self.entries, other.entries[:, None])[:, 0])
        return NotImplemented

    def to_lists(self) -> List[List[int]]:
        return [[int(v) for v in row] for row in self.entries]

    def to_hex(self) -> List[List[str]]:
        return [[f"{int(v):x}" for v in row] for row in self.entries]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"ExtMatrix({self.to_hex()} over {self.field})"


class BaseMatrix:
    """A matrix over GF(2).

    Args:
        entries: Rows of 0/1 values, or a 2-D array.
        cols: Column count, needed only to shape a matrix with no rows.
    """

    __slots__ = ("bits",)

    def __init__(self, entries: Any = (), cols: Optional[int] = None) -> None:
        bits = np.array(entries, dtype=np.uint8)
        if bits.ndim != 2:
            if bits.size:
                raise DimensionMismatchError("matrix entries must be two-dimensional")
            bits = bits.reshape(0, cols or 0)
        if bits.size and int(bits.max()) > 1:
            raise ValueError("GF(2) matrix entries must be 0 or 1")
        self.bits: BitArray = _freeze(bits)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BaseMatrix:
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> BaseMatrix:
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_row_ints(cls, rows: Sequence[int], cols: int) -> BaseMatrix:
        """Build a matrix whose row i has column j equal to bit j of `rows[i]`."""
        if not rows:
            return cls.zeros(0, cols)
        shifts = np.arange(cols, dtype=np.uint64)
        packed = np.array(rows, dtype=np.uint64)[:, None]
        return cls(((packed >> shifts) & _ONE).astype(np.uint8))

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.bits.shape[0]), int(self.bits.shape[1])

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def T(self) -> BaseMatrix:
        return BaseMatrix(self.bits.T.copy())

    def row_ints(self) -> Tuple[int, ...]:
        weights = [1 << j for j in range(self.cols)]
        return tuple(sum(w for w, bit in zip(weights, row) if bit) for row in self.bits.tolist())

    def take_rows(self, indices: Sequence[int]) -> BaseMatrix:
        return BaseMatrix(self.bits[list(indices)].reshape(len(indices), self.cols))

    def vstack(self, other: BaseMatrix) -> BaseMatrix:
        if other.cols != self.cols:
            raise DimensionMismatchError(f"cannot stack {self.shape} on {other.shape}")
        return BaseMatrix(np.vstack([self.bits, other.bits]))

    def embed(self, field: FieldSpec) -> ExtMatrix:
        """View the matrix over GF(2^m) through the prime subfield (bit b maps to element b)."""
        return ExtMatrix(field, self.bits.astype(np.uint64))

    def __getitem__(self, index: Tuple[int, int]) -> int:
        return int(self.bits[index])

    def __matmul__(self, other: Any) -> Any:
        if isinstance(other, BaseMatrix):
            if self.cols != other.rows:
                raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
            product = self.bits.astype(np.int64) @ other.bits.astype(np.int64)
            return BaseMatrix((product % 2).astype(np.uint8))
        if isinstance(other, ExtVector):
            if self.cols != len(other):
                raise DimensionMismatchError(f"cannot apply {self.shape} to a vector of length {len(other)}")
            if self.rows == 0 or self.cols == 0:
                return ExtVector.zeros(other.field, self.rows)
            masked = np.where(self.bits.astype(bool), other.entries[None, :], _ZERO)
            return ExtVector(other.field, np.bitwise_xor.reduce(masked, axis=1))
        if isinstance(other, ExtMatrix):
            return self.embed(other.field) @ other
        return NotImplemented

    def to_lists(self) -> List[List[int]]:
        return [[int(b) for b in row] for row in self.bits]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BaseMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.shape, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"BaseMatrix({self.to_lists()})"


Matrix = Union[ExtMatrix, BaseMatrix]


def matmul_words(field: FieldSpec, a: UIntArray, b: UIntArray) -> UIntArray:
    """Product of two arrays of bit-packed GF(2^m) words."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint64)
    products = field.mul_array(a[:, :, None], b[None, :, :])
    return np.bitwise_xor.reduce(products, axis=1)


def expand(v: ExtVector) -> BaseMatrix:
    """View a length-n vector over GF(2^m) as an n x m matrix over GF(2).

    Row i holds the polynomial-basis coordinates of v_i, coefficient of α^j in column j.
    """
    shifts = np.arange(v.field.m, dtype=np.uint64)
    return BaseMatrix(((v.entries[:, None] >> shifts) & _ONE).astype(np.uint8).reshape(len(v), v.field.m))


def flatten(matrix: BaseMatrix, field: FieldSpec) -> ExtVector:
    """Inverse of `expand`: read each row as the coordinates of one element."""
    if matrix.cols != field.m:
        raise DimensionMismatchError(f"a {matrix.shape} matrix does not describe vectors over {field}")
    return ExtVector(field, list(matrix.row_ints()))


def rank_base(v: ExtVector) -> int:
    """Rank of `v` as an n x m matrix over GF(2)."""
    return xor_rank(v.to_list())


def rank_base_matrix(matrix: BaseMatrix) -> int:
    """Rank of a GF(2) matrix."""
    return xor_rank(matrix.row_ints())


def _row_reduce(field: FieldSpec, entries: UIntArray) -> Tuple[UIntArray, List[int]]:
    """Gauss-Jordan elimination to reduced row echelon form."""
    work = entries.astype(np.uint64, copy=True)
    rows, cols = work.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.nonzero(work[r:, c])[0]
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        work[r] = field.mul_array(work[r], field.inv_int(int(work[r, c])))
        factors = work[:, c].copy()
        factors[r] = 0
        if factors.any():
            work ^= field.mul_array(factors[:, None], work[r][None, :])
        pivots.append(c)
        r += 1
    return work, pivots


def row_reduce(matrix: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns, over the matrix's own field."""
    if isinstance(matrix, BaseMatrix):
        reduced, pivots = _row_reduce(GF2, matrix.bits.astype(np.uint64))
        return BaseMatrix(reduced.astype(np.uint8)), tuple(pivots)
    reduced, pivots = _row_reduce(matrix.field, matrix.entries)
    return ExtMatrix(matrix.field, reduced), tuple(pivots)


def rank_ext(matrix: ExtMatrix) -> int:
    """Rank over GF(2^m)."""
    return len(_row_reduce(matrix.field, matrix.entries)[1])


def invert(matrix: Matrix) -> Matrix:
    """Inverse of a square matrix over its own field.

    Raises:
        DimensionMismatchError: If the matrix is not square.
        SingularMatrixError: If the matrix is singular.
    """
    rows, cols = matrix.shape
    if rows != cols:
        raise DimensionMismatchError(f"cannot invert a {rows}x{cols} matrix")
    if isinstance(matrix, BaseMatrix):
        field, entries = GF2, matrix.bits.astype(np.uint64)
    else:
        field, entries = matrix.field, matrix.entries
    augmented = np.hstack([entries, np.eye(rows, dtype=np.uint64)])
    reduced, pivots = _row_reduce(field, augmented)
    if pivots[:rows] != list(range(rows)):
        raise SingularMatrixError("matrix is singular")
    inverse = reduced[:, rows:]
    if isinstance(matrix, BaseMatrix):
        return BaseMatrix(inverse.astype(np.uint8))
    return ExtMatrix(field, inverse)


def solve(a: Matrix, b: ExtVector) -> ExtVector:
    """One solution x of a·x = b, with free variables set to zero.

    A GF(2) matrix is embedded into the field of `b`.

    Raises:
        DimensionMismatchError: If `b` does not have one entry per row of `a`.
        SingularMatrixError: If the system is inconsistent.
    """
    coefficients = a.embed(b.field) if isinstance(a, BaseMatrix) else a
    if coefficients.field != b.field:
        raise FieldMismatchError(f"cannot solve a {coefficients.field} system for a {b.field} right-hand side")
    if coefficients.rows != len(b):
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {coefficients.rows} equations")
    cols = coefficients.cols
    augmented = np.hstack([coefficients.entries, b.entries[:, None]])
    reduced, pivots = _row_reduce(b.field, augmented)
    if cols in pivots:
        raise SingularMatrixError("system is inconsistent")
    solution = np.zeros(cols, dtype=np.uint64)
    for i, p in enumerate(pivots):
        solution[p] = reduced[i, cols]
    return ExtVector(b.field, solution)


def nullspace(matrix: ExtMatrix) -> ExtMatrix:
    """Basis of {x : matrix·x = 0}, one basis vector per row."""
    reduced, pivots = _row_reduce(matrix.field, matrix.entries)
    free = [c for c in range(matrix.cols) if c not in pivots]
    basis = np.zeros((len(free), matrix.cols), dtype=np.uint64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            basis[i, p] = reduced[r, f]
    return ExtMatrix(matrix.field, basis.reshape(len(free), matrix.cols))


def enumerate_full_rank(rows: int, cols: int, *, budget: Optional[int] = None) -> Iterator[BaseMatrix]:
    """Every full-rank `rows` x `cols` matrix over GF(2), each exactly once.

    Rows are chosen in increasing integer order (bit j = column j), skipping rows already in
    the span of the previous ones.

    Raises:
        ValueError: If `rows` > `cols`.
        BudgetExceededError: If 2^(rows*cols) exceeds the enumeration budget.
    """
    if rows > cols:
        raise ValueError(f"a {rows}x{cols} matrix cannot have full row rank")
    limit = get_budget().enumeration if budget is None else budget
    require_budget(f"full-rank {rows}x{cols} enumeration over GF(2)", 1 << (rows * cols), limit)

    def extend(prefix: List[int], span: frozenset[int]) -> Iterator[BaseMatrix]:
        if len(prefix) == rows:
            yield BaseMatrix.from_row_ints(prefix, cols)
            return
        for row in range(1, 1 << cols):
            if row not in span:
                yield from extend(prefix + [row], span | {s ^ row for s in span})

    return extend([], frozenset({0}))


def enumerate_full_rank_ext(
    field: FieldSpec, rows: int, cols: int, *, budget: Optional[int] = None
) -> Iterator[ExtMatrix]:
    """Every full-rank `rows` x `cols` matrix over GF(2^m), each exactly once.

    Raises:
        ValueError: If `rows` > `cols`.
        BudgetExceededError: If (2^m)^(rows*cols) exceeds the enumeration budget.
    """
    if rows > cols:
        raise ValueError(f"a {rows}x{cols} matrix cannot have full row rank")
    limit = get_budget().enumeration if budget is None else budget
    require_budget(f"full-rank {rows}x{cols} enumeration over {field}", field.order ** (rows * cols), limit)
    scalars = range(field.order)
    candidates = [tuple(v) for v in product(scalars, repeat=cols)][1:]

    def combine(span_vector: Tuple[int, ...], scalar: int, row: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(s ^ field.mul_int(scalar, x) for s, x in zip(span_vector, row))

    def extend(prefix: List[Tuple[int, ...]], span: frozenset[Tuple[int, ...]]) -> Iterator[ExtMatrix]:
        if len(prefix) == rows:
            yield ExtMatrix(field, [list(r) for r in prefix], cols=cols)
            return
        for row in candidates:
            if row not in span:
                grown = frozenset(combine(s, c, row) for s in span for c in scalars)
                yield from extend(prefix + [row], grown)

    return extend([], frozenset({(0,) * cols}))
