"""
Coset coding: a message is the syndrome S = HX, and the transmitted word X is drawn uniformly
from the coset of the code with that syndrome.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from math import comb
from typing import Iterator, Optional, Tuple

import numpy as np

from ._config import get_budget, require_budget
from .exceptions import DimensionMismatchError, FieldMismatchError, SingularMatrixError
from .gf import ExtMatrix, ExtVector, FieldSpec, invert, matmul_words, rank_ext, row_reduce
from .rankmetric import ParityCheckCode

logger = logging.getLogger(__name__)

__all__ = [
    "CosetScheme",
    "SystematicForm",
    "build_mds_baseline",
    "clear_scheme",
    "coset_members",
    "decode",
    "encode",
    "encode_batch",
    "encode_with",
    "is_mds",
    "message_space",
    "syndrome",
    "systematize",
]


@dataclass(frozen=True)
class SystematicForm:
    """H brought to the form [I P] by row operations and a column permutation.

    Attributes:
        permutation: Column `permutation[i]` of H becomes column i of [I P].
        P: The k x (n - k) block.
        reduced: E·H, the row-reduced parity check in the original column order.
        pivot_block: H restricted to the pivot columns; it maps [I P]-syndromes back to H-syndromes.
    """

    permutation: Tuple[int, ...]
    P: ExtMatrix
    reduced: ExtMatrix
    pivot_block: ExtMatrix

    @property
    def is_identity_transform(self) -> bool:
        return self.pivot_block == ExtMatrix.identity(self.P.field, self.P.rows)


def systematize(H: ExtMatrix) -> SystematicForm:
    """Bring a full-row-rank parity check to systematic form.

    Raises:
        SingularMatrixError: If H does not have full row rank.
    """
    reduced, pivots = row_reduce(H)
    assert isinstance(reduced, ExtMatrix)
    if len(pivots) < H.rows:
        raise SingularMatrixError(f"parity-check matrix has rank {len(pivots)} < {H.rows} rows")
    free = [c for c in range(H.cols) if c not in pivots]
    return SystematicForm(
        permutation=tuple(pivots) + tuple(free),
        P=reduced.take_columns(free),
        reduced=reduced,
        pivot_block=H.take_columns(pivots),
    )


def syndrome(H: ExtMatrix, x: ExtVector) -> ExtVector:
    """S = HX, computed directly."""
    return H @ x


class CosetScheme:
    """Coset encoder/decoder for a code given by a full-row-rank parity check.

    Args:
        code: The code whose cosets carry messages; its k parity rows fix the message length.
        systematic: If True, messages are syndromes for the systematic parity check [I P]
            (same code, so the same security) and both directions cost k(n-k) products.
            If False, messages are syndromes for the code's own H.
    """

    def __init__(self, code: ParityCheckCode, systematic: bool = False) -> None:
        if rank_ext(code.H) != code.k:
            raise ValueError("rows of the parity-check matrix must be linearly independent")
        self.code = code
        self.systematic = systematic
        logger.debug(f"Coset scheme over {code.field}: n={code.n}, k={code.k}, systematic={systematic}")

    @property
    def field(self) -> FieldSpec:
        return self.code.field

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def mu(self) -> int:
        return self.n - self.k

    @cached_property
    def form(self) -> SystematicForm:
        return systematize(self.code.H)

    @cached_property
    def _transform(self) -> Optional[ExtMatrix]:
        """E with E·H = reduced H, or None when E is the identity or unused."""
        if self.systematic or self.form.is_identity_transform:
            return None
        inverse = invert(self.form.pivot_block)
        assert isinstance(inverse, ExtMatrix)
        return inverse

    @property
    def parity_check(self) -> ExtMatrix:
        """The matrix H with decode(X) = HX under this scheme's message convention."""
        return self.form.reduced if self.systematic else self.code.H

    def __repr__(self) -> str:
        return f"CosetScheme(n={self.n}, k={self.k}, mu={self.mu}, systematic={self.systematic}, code={self.code!r})"


def _check_vector(scheme: CosetScheme, v: ExtVector, length: int, what: str) -> None:
    if v.field != scheme.field:
        raise FieldMismatchError(f"{what} over {v.field} for a scheme over {scheme.field}")
    if len(v) != length:
        raise DimensionMismatchError(f"{what} must have length {length}, got {len(v)}")


def _systematic_syndromes(scheme: CosetScheme, messages: ExtMatrix) -> ExtMatrix:
    """Messages (one per row) rewritten as syndromes of [I P]."""
    transform = scheme._transform
    if transform is None:
        return messages
    return messages @ transform.T


def encode_batch(scheme: CosetScheme, message: ExtVector, randomness: ExtMatrix) -> ExtMatrix:
    """Coset members for one message, one per row of `randomness` (each row is an X_R draw)."""
    _check_vector(scheme, message, scheme.k, "message")
    if randomness.cols != scheme.mu:
        raise DimensionMismatchError(f"randomness rows must have length {scheme.mu}, got {randomness.cols}")
    field, form = scheme.field, scheme.form
    s = _systematic_syndromes(scheme, ExtMatrix(field, message.entries[None, :], cols=scheme.k))
    x_s = matmul_words(field, randomness.entries, form.P.entries.T) ^ s.entries
    permuted = np.hstack([x_s, randomness.entries])
    words = np.empty_like(permuted)
    words[:, list(form.permutation)] = permuted
    return ExtMatrix(field, words)


def encode_with(scheme: CosetScheme, message: ExtVector, randomness: ExtVector) -> ExtVector:
    """The coset member of `message` selected by the draw X_R = `randomness`.

    With [I P] and X = [X_S; X_R] (columns permuted), X_S = S - P X_R.
    """
    _check_vector(scheme, randomness, scheme.mu, "randomness")
    return encode_batch(scheme, message, ExtMatrix(scheme.field, randomness.entries[None, :], cols=scheme.mu)).row(0)


def encode(scheme: CosetScheme, message: ExtVector, rng: np.random.Generator) -> ExtVector:
    """Encode `message` into a uniformly random member of its coset.

    All randomness comes from `rng`, so the result is a deterministic function of its state.
    """
    draw = rng.integers(0, scheme.field.order, size=scheme.mu, dtype=np.uint64)
    return encode_with(scheme, message, ExtVector(scheme.field, draw))


def decode(scheme: CosetScheme, codeword: ExtVector) -> ExtVector:
    """Recover the message as the syndrome of `codeword`, S = X_S + P X_R."""
    _check_vector(scheme, codeword, scheme.n, "codeword")
    form = scheme.form
    permuted = codeword.take(form.permutation)
    x_s = permuted.entries[: scheme.k]
    x_r = permuted.entries[scheme.k :]
    s = ExtVector(scheme.field, x_s ^ matmul_words(scheme.field, form.P.entries, x_r[:, None])[:, 0])
    if scheme._transform is None:
        return s
    return form.pivot_block @ s


def coset_members(scheme: CosetScheme, message: ExtVector, *, budget: Optional[int] = None) -> Iterator[ExtVector]:
    """Every member of the coset of `message`, once each, in randomness order.

    Raises:
        BudgetExceededError: If the coset is larger than the enumeration budget.
    """
    limit = get_budget().enumeration if budget is None else budget
    size = scheme.field.order**scheme.mu
    require_budget(f"coset of size (2^{scheme.field.m})^{scheme.mu}", size, limit)
    draws = np.array(list(product(range(scheme.field.order), repeat=scheme.mu)), dtype=np.uint64)
    words = encode_batch(scheme, message, ExtMatrix(scheme.field, draws.reshape(size, scheme.mu)))
    for i in range(words.rows):
        yield words.row(i)


def is_mds(H: ExtMatrix, *, budget: Optional[int] = None) -> bool:
    """Whether every k x k minor of the k x n matrix H is nonsingular."""
    k, n = H.shape
    limit = get_budget().enumeration if budget is None else budget
    require_budget(f"{k}x{k} minor check over {n} columns", comb(n, k), limit)
    return all(rank_ext(H.take_columns(cols)) == k for cols in combinations(range(n), k))


def build_mds_baseline(
    field: FieldSpec, n: int, mu: int, *, systematic: bool = False, verify: bool = True
) -> CosetScheme:
    """Coset scheme over a single field from a generalized Reed-Solomon parity check.

    H has entries a_j^(i+1) for i < k = n - mu and evaluation points a_j = α^j, which must be
    distinct and nonzero. With `verify` every k x k minor is checked, which is only practical at
    small n.

    Raises:
        ValueError: If mu is out of range or the field has fewer than n nonzero elements.
    """
    if not 0 <= mu <= n:
        raise ValueError(f"mu must be between 0 and n={n}, got {mu}")
    k = n - mu
    if k == 0:
        return CosetScheme(ParityCheckCode(ExtMatrix.zeros(field, 0, n)), systematic=systematic)
    if n > field.order - 1:
        raise ValueError(f"{field} is too small for an MDS parity check of length {n}")
    alpha = field.alpha
    points = [alpha**j for j in range(n)]
    if len(set(points)) < n:
        raise ValueError(f"α has multiplicative order below {n} in {field}")
    H = ExtMatrix(field, [[(a ** (i + 1)).coeffs for a in points] for i in range(k)])
    if verify and not is_mds(H):
        raise ValueError(f"parity check over {field} is not MDS")
    return CosetScheme(ParityCheckCode(H), systematic=systematic)


def clear_scheme(field: FieldSpec, n: int, k: int) -> CosetScheme:
    """A scheme that sends S in the clear on the first k packets: H = [I_k 0]."""
    if not 0 <= k <= n:
        raise ValueError(f"k must be between 0 and n={n}, got {k}")
    H = ExtMatrix.identity(field, k).hstack(ExtMatrix.zeros(field, k, n - k))
    return CosetScheme(ParityCheckCode(H))


def message_space(field: FieldSpec, k: int) -> Iterator[ExtVector]:
    """Every message of length k."""
    for values in product(range(field.order), repeat=k):
        yield ExtVector(field, list(values))
