"""
Exact secrecy audits.

Every message S and every randomness draw is enumerated, the wiretapper's observation W = BX is
tabulated as integer counts, and entropies are derived from those counts. Independence is an
integer identity, N(s, w)·N = N(s)·N(w), never a floating-point comparison.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import partial
from itertools import combinations, product
from math import comb, log2
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import anyio
import numpy as np
from anyio import to_thread

from ._config import get_budget, require_budget
from .coset import CosetScheme, encode_batch
from .exceptions import DimensionMismatchError, FieldMismatchError
from .gf import (
    GF2,
    BaseMatrix,
    ExtMatrix,
    ExtVector,
    FieldSpec,
    Matrix,
    enumerate_full_rank,
    enumerate_full_rank_ext,
    matmul_words,
    rank_ext,
    row_reduce,
)
from .netsim import LinearNetworkCode, wiretap_matrix
from .rankmetric import ParityCheckCode

logger = logging.getLogger(__name__)

__all__ = [
    "SecrecyReport",
    "Verdict",
    "WiretapRecord",
    "audit_network",
    "audit_network_async",
    "audit_wiretap_channel",
    "check_lemma1",
    "check_rouayheb_condition",
    "exhaustive_secrecy",
    "find_rouayheb_counterexample",
    "reduce_rank_deficient",
    "stack_full_rank",
    "stacked_matrix",
]


class Verdict(str, Enum):
    SECURE = "SECURE"
    INSECURE = "INSECURE"


def stacked_matrix(H: ExtMatrix, B: Matrix) -> ExtMatrix:
    """M = [H; B], with a GF(2) matrix B embedded into the field of H.

    Raises:
        FieldMismatchError: If B is over a field other than GF(2) or that of H.
        DimensionMismatchError: If the column counts differ.
    """
    return H.vstack(B)


def stack_full_rank(H: ExtMatrix, B: Matrix) -> bool:
    """Whether [H; B] has full row rank over the field of H."""
    M = stacked_matrix(H, B)
    return rank_ext(M) == M.rows


def check_rouayheb_condition(H: ExtMatrix, B: Matrix) -> bool:
    """Whether the square matrix [H; B] is nonsingular.

    Raises:
        DimensionMismatchError: If B is not (n - k) x n for the k x n matrix H.
    """
    k, n = H.shape
    if B.shape != (n - k, n):
        raise DimensionMismatchError(f"observation matrix must be {n - k}x{n}, got {B.rows}x{B.cols}")
    return stack_full_rank(H, B)


def check_lemma1(code: ParityCheckCode, B: Matrix) -> bool:
    """Whether [H; B] is nonsingular for the code's parity check H and a mu x n matrix B, mu = n - k.

    For an MRD code and full-rank binary B this always holds.

    Raises:
        DimensionMismatchError: If B is not (n - k) x n.
    """
    return check_rouayheb_condition(code.H, B)


def _full_rank_observations(coefficient_field: FieldSpec, rows: int, cols: int, budget: Optional[int]) -> Iterable[Matrix]:
    if coefficient_field == GF2:
        return enumerate_full_rank(rows, cols, budget=budget)
    return enumerate_full_rank_ext(coefficient_field, rows, cols, budget=budget)


def find_rouayheb_counterexample(
    H: ExtMatrix, coefficient_field: FieldSpec = GF2, *, budget: Optional[int] = None
) -> Optional[Matrix]:
    """Search full-rank (n - k) x n matrices over `coefficient_field` for one making [H; B] singular.

    Returns:
        The first such B in enumeration order, or None if every stack is nonsingular.

    Raises:
        FieldMismatchError: If the coefficient field is neither GF(2) nor the field of H.
    """
    if coefficient_field not in (GF2, H.field):
        raise FieldMismatchError(f"observations over {coefficient_field} cannot be stacked under {H.field}")
    k, n = H.shape
    for B in _full_rank_observations(coefficient_field, n - k, n, budget):
        if not check_rouayheb_condition(H, B):
            logger.info(f"Singular stack found for B={_matrix_payload(B)}")
            return B
    return None


def reduce_rank_deficient(B: Matrix) -> Tuple[Matrix, int]:
    """Replace B by rank(B) independent rows spanning the same row space.

    Returns:
        The reduced matrix (same type as B) and its row count, the effective mu.
    """
    reduced, pivots = row_reduce(B)
    r = len(pivots)
    if isinstance(reduced, BaseMatrix):
        return reduced.take_rows(range(r)), r
    return ExtMatrix(reduced.field, reduced.entries[:r], cols=reduced.cols), r


def _is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def _entropy(counts: Iterable[int], total: int) -> Tuple[Fraction, bool]:
    """Entropy in bits of the distribution N(x)/total; exact when every count is a power of two."""
    values = list(counts)
    if _is_power_of_two(total) and all(_is_power_of_two(c) for c in values):
        weighted = sum(c * (c.bit_length() - 1) for c in values)
        return Fraction(total.bit_length() - 1) - Fraction(weighted, total), True
    approx = log2(total) - sum(c * log2(c) for c in values) / total
    return Fraction(approx), False


def _matrix_payload(B: Matrix) -> List[List[Any]]:
    return B.to_lists() if isinstance(B, BaseMatrix) else B.to_hex()


@dataclass(frozen=True)
class WiretapRecord:
    """Outcome of one exhaustive audit against a fixed observation matrix B.

    Entropies are in bits. `stack_nonsingular` means [H; B_full] has full row rank, where B_full
    is the rank reduction of B; it is nonsingularity proper when k + rank(B) = n.
    """

    label: str
    B: Matrix
    rank_b: int
    stack_nonsingular: bool
    h_s: Fraction
    h_s_given_w: Fraction
    h_w: Fraction
    h_x: Fraction
    h_s_given_x: Fraction
    independent: bool
    pr_w_given_s: Optional[Fraction]
    total: int
    exact: bool = True
    edges: Tuple[str, ...] = ()

    @property
    def leaked_bits(self) -> Fraction:
        return self.h_s - self.h_s_given_w

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "label": self.label,
            "edges": list(self.edges),
            "B": _matrix_payload(self.B),
            "B_cols": self.B.cols,
            "rank_B": self.rank_b,
            "stack_nonsingular": self.stack_nonsingular,
            "H_S": str(self.h_s),
            "H_S_given_W": str(self.h_s_given_w),
            "H_W": str(self.h_w),
            "H_X": str(self.h_x),
            "H_S_given_X": str(self.h_s_given_x),
            "independent": self.independent,
            "Pr_W_given_S": None if self.pr_w_given_s is None else str(self.pr_w_given_s),
            "total": self.total,
            "exact": self.exact,
        }
        if isinstance(self.B, ExtMatrix):
            data["B_field"] = self.B.field.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> WiretapRecord:
        B: Matrix
        if "B_field" in data:
            B = ExtMatrix.from_hex(FieldSpec.from_dict(data["B_field"]), data["B"], cols=data.get("B_cols"))
        else:
            B = BaseMatrix(data["B"], cols=data.get("B_cols"))
        pr = data.get("Pr_W_given_S")
        return cls(
            label=data["label"],
            B=B,
            rank_b=int(data["rank_B"]),
            stack_nonsingular=bool(data["stack_nonsingular"]),
            h_s=Fraction(data["H_S"]),
            h_s_given_w=Fraction(data["H_S_given_W"]),
            h_w=Fraction(data["H_W"]),
            h_x=Fraction(data["H_X"]),
            h_s_given_x=Fraction(data["H_S_given_X"]),
            independent=bool(data["independent"]),
            pr_w_given_s=None if pr is None else Fraction(pr),
            total=int(data["total"]),
            exact=bool(data.get("exact", True)),
            edges=tuple(data.get("edges", ())),
        )


def _observe(field: FieldSpec, words: np.ndarray, B: Matrix) -> np.ndarray:
    """W = B·X for every row X of `words`."""
    if isinstance(B, BaseMatrix):
        Bt = B.bits.T.astype(np.uint64)
    else:
        if B.field != field:
            raise FieldMismatchError(f"observation matrix over {B.field} for a scheme over {field}")
        Bt = B.entries.T
    return matmul_words(field, words, Bt.reshape(B.cols, B.rows))


def _constant_ratio(joint: Counter[Tuple[int, Hashable]], marginal_s: Counter[int], support_w: int) -> Optional[Fraction]:
    """The common value of N(s, w)/N(s) over every (s, w) pair, or None if it varies."""
    if len(joint) != len(marginal_s) * support_w:
        return None
    ratios = {Fraction(count, marginal_s[s]) for (s, _), count in joint.items()}
    return ratios.pop() if len(ratios) == 1 else None


def exhaustive_secrecy(
    scheme: CosetScheme, B: Matrix, *, label: str = "", edges: Sequence[str] = (), budget: Optional[int] = None
) -> WiretapRecord:
    """Audit `scheme` against the observation W = BX by enumerating every (S, randomness) pair.

    S and the randomness are uniform, so each pair has weight 1 and all probabilities are
    count ratios.

    Raises:
        DimensionMismatchError: If B does not have n columns.
        BudgetExceededError: If (2^m)^(k + mu) exceeds the joint budget.
    """
    f, n, k, mu = scheme.field, scheme.n, scheme.k, scheme.mu
    if B.cols != n:
        raise DimensionMismatchError(f"observation matrix needs {n} columns, got {B.cols}")
    limit = get_budget().joint if budget is None else budget
    total = f.order ** (k + mu)
    require_budget(f"joint enumeration over (2^{f.m})^{k + mu} pairs", total, limit)

    B_full, rank_b = reduce_rank_deficient(B)
    draws = np.array(list(product(range(f.order), repeat=mu)), dtype=np.uint64)
    randomness = ExtMatrix(f, draws.reshape(f.order**mu, mu))

    joint_sw: Counter[Tuple[int, Hashable]] = Counter()
    joint_sx: Counter[Tuple[int, Hashable]] = Counter()
    marginal_s: Counter[int] = Counter()
    marginal_w: Counter[Hashable] = Counter()
    marginal_x: Counter[Hashable] = Counter()
    for s_index, values in enumerate(product(range(f.order), repeat=k)):
        words = encode_batch(scheme, ExtVector(f, list(values)), randomness).entries
        observations = _observe(f, words, B)
        for x, w in zip(map(tuple, words.tolist()), map(tuple, observations.tolist())):
            joint_sw[(s_index, w)] += 1
            joint_sx[(s_index, x)] += 1
            marginal_w[w] += 1
            marginal_x[x] += 1
        marginal_s[s_index] += len(words)

    h_s, exact_s = _entropy(marginal_s.values(), total)
    h_w, exact_w = _entropy(marginal_w.values(), total)
    h_x, exact_x = _entropy(marginal_x.values(), total)
    h_sw, exact_sw = _entropy(joint_sw.values(), total)
    h_sx, exact_sx = _entropy(joint_sx.values(), total)

    independent = len(joint_sw) == len(marginal_s) * len(marginal_w) and all(
        count * total == marginal_s[s] * marginal_w[w] for (s, w), count in joint_sw.items()
    )
    record = WiretapRecord(
        label=label,
        B=B,
        rank_b=rank_b,
        stack_nonsingular=stack_full_rank(scheme.code.H, B_full),
        h_s=h_s,
        h_s_given_w=h_sw - h_w,
        h_w=h_w,
        h_x=h_x,
        h_s_given_x=h_sx - h_x,
        independent=independent,
        pr_w_given_s=_constant_ratio(joint_sw, marginal_s, len(marginal_w)),
        total=total,
        exact=all((exact_s, exact_w, exact_x, exact_sw, exact_sx)),
        edges=tuple(edges),
    )
    logger.debug(f"Audited {label or 'observation'}: rank(B)={rank_b}, independent={independent}")
    return record


@dataclass(frozen=True)
class SecrecyReport:
    """Per-observation records of an audit, in enumeration order."""

    records: Tuple[WiretapRecord, ...]
    n: int
    k: int
    mu: int
    field: FieldSpec
    network: Optional[str] = None

    @property
    def sets_audited(self) -> int:
        return len(self.records)

    @property
    def failures(self) -> List[str]:
        return [r.label for r in self.records if not r.independent]

    @property
    def secure(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> Verdict:
        return Verdict.SECURE if self.secure else Verdict.INSECURE

    @property
    def stacks_nonsingular(self) -> int:
        return sum(r.stack_nonsingular for r in self.records)

    def summary(self) -> Dict[str, Any]:
        return {
            "sets_audited": self.sets_audited,
            "stacks_nonsingular": self.stacks_nonsingular,
            "secure": self.secure,
            "verdict": self.verdict.value,
            "failures": self.failures,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme": {"field": self.field.to_dict(), "n": self.n, "k": self.k, "mu": self.mu},
            "network": self.network,
            "records": [r.to_dict() for r in self.records],
            "summary": self.summary(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> SecrecyReport:
        scheme = data["scheme"]
        return cls(
            records=tuple(WiretapRecord.from_dict(r) for r in data["records"]),
            n=int(scheme["n"]),
            k=int(scheme["k"]),
            mu=int(scheme["mu"]),
            field=FieldSpec.from_dict(scheme["field"]),
            network=data.get("network"),
        )


WorkItem = Tuple[str, Tuple[str, ...], Matrix]


async def _audit_items(scheme: CosetScheme, items: Sequence[WorkItem], workers: int, joint: int) -> List[WiretapRecord]:
    """Audit every item on up to `workers` threads and return the records in item order."""
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    f = scheme.field
    require_budget(f"joint enumeration over (2^{f.m})^{scheme.n} pairs", f.order**scheme.n, joint)
    results: List[Optional[WiretapRecord]] = [None] * len(items)
    limiter = anyio.CapacityLimiter(workers)

    def run_share(share: int) -> None:
        for i in range(share, len(items), workers):
            label, edges, B = items[i]
            results[i] = exhaustive_secrecy(scheme, B, label=label, edges=edges, budget=joint)

    async with anyio.create_task_group() as tg:
        for share in range(min(workers, len(items))):
            tg.start_soon(partial(to_thread.run_sync, run_share, share, limiter=limiter))

    return [r for r in results if r is not None]


async def audit_network_async(
    code: LinearNetworkCode, scheme: CosetScheme, mu: int, *, workers: int = 1, budget: Optional[int] = None
) -> SecrecyReport:
    """Audit `scheme` over `code` against every set of `mu` tapped edges.

    Wiretap sets are enumerated as edge-id combinations in declaration order; the report lists
    them in that order whatever the number of workers.

    Raises:
        DimensionMismatchError: If the scheme length differs from the number of source packets.
        BudgetExceededError: If there are more wiretap sets than the budget allows, or a single
            set needs more pairs than the joint budget.
    """
    if scheme.n != code.n:
        raise DimensionMismatchError(f"scheme of length {scheme.n} over a network code with n={code.n}")
    net = code.network
    if not 0 <= mu <= net.edge_count:
        raise ValueError(f"mu must be between 0 and {net.edge_count}, got {mu}")
    current = get_budget()
    limit = current.wiretap_sets if budget is None else budget
    require_budget(f"{mu}-edge wiretap sets of a {net.edge_count}-edge network", comb(net.edge_count, mu), limit)
    if scheme.k > scheme.n - mu:
        logger.warning(f"{scheme.k} message symbols exceed the secure rate n - mu = {scheme.n - mu}")

    items: List[WorkItem] = []
    for edges in combinations(net.edge_ids, mu):
        items.append((",".join(edges), edges, wiretap_matrix(code, edges)))
    logger.debug(f"Auditing {len(items)} wiretap sets of network '{net.name}' on {workers} worker(s)")
    records = await _audit_items(scheme, items, workers, current.joint)
    return SecrecyReport(tuple(records), scheme.n, scheme.k, mu, scheme.field, network=net.name)


def audit_network(
    code: LinearNetworkCode, scheme: CosetScheme, mu: int, *, workers: int = 1, budget: Optional[int] = None
) -> SecrecyReport:
    """Synchronous form of `audit_network_async`."""
    return anyio.run(partial(audit_network_async, code, scheme, mu, workers=workers, budget=budget))


def audit_wiretap_channel(
    scheme: CosetScheme,
    mu: Optional[int] = None,
    *,
    coefficient_field: FieldSpec = GF2,
    workers: int = 1,
    budget: Optional[int] = None,
) -> SecrecyReport:
    """Audit `scheme` against every full-rank mu x n observation matrix over `coefficient_field`.

    Over GF(2) this covers every wiretap set of every feasible binary network code, so a SECURE
    verdict is the universal guarantee. `mu` defaults to the scheme's own n - k.

    Raises:
        BudgetExceededError: If the observation enumeration or a joint enumeration is too large.
    """
    mu = scheme.mu if mu is None else mu
    if not 0 <= mu <= scheme.n:
        raise ValueError(f"mu must be between 0 and n={scheme.n}, got {mu}")
    if coefficient_field not in (GF2, scheme.field):
        raise FieldMismatchError(f"observations over {coefficient_field} for a scheme over {scheme.field}")
    items: List[WorkItem] = [
        (f"B{i}", (), B) for i, B in enumerate(_full_rank_observations(coefficient_field, mu, scheme.n, budget))
    ]
    joint = get_budget().joint
    records = anyio.run(_audit_items, scheme, items, workers, joint)
    return SecrecyReport(tuple(records), scheme.n, scheme.k, mu, scheme.field)
