"""
Unit tests for rank-metric codes and the parity-check criteria for minimum rank distance.
"""

from itertools import product

import pytest

from wiresafe.exceptions import BudgetExceededError, DimensionMismatchError, FieldMismatchError
from wiresafe.gf import ExtMatrix, ExtVector, FieldElement, FieldSpec, frobenius, rank_ext
from wiresafe.rankmetric import (
    GabidulinCode,
    ParityCheckCode,
    build_gabidulin,
    find_theorem1_witness,
    is_mrd,
    min_rank_distance_bruteforce,
    moore_matrix,
    rank_distance,
    singleton_bound,
    singleton_d_bound,
    verify_corollary1,
    verify_theorem1,
)


def test_moore_matrix_rows_are_frobenius_powers(gf8: FieldSpec):
    """Test that row i holds g_j^(2^i)."""
    M = moore_matrix(gf8, [1, 2, 4], 2)
    # α² squared is α⁴ = α² + α
    assert M.to_lists() == [[1, 2, 4], [1, 4, 6]]


def test_example_parity_check(example_code: GabidulinCode):
    """Test the default generators give H = [1 α α²]."""
    assert example_code.H.to_lists() == [[1, 2, 4]]
    assert example_code.n == 3
    assert example_code.k == 1
    assert example_code.dimension == 2
    assert example_code.designed_distance == 2


def test_gabidulin_requires_n_at_most_m(gf4: FieldSpec):
    """Test that length beyond the extension degree is rejected."""
    with pytest.raises(ValueError, match="n <= m"):
        build_gabidulin(gf4, 3, 1)


def test_gabidulin_rejects_dependent_generators(gf8: FieldSpec):
    """Test that generators must be independent over GF(2)."""
    with pytest.raises(ValueError, match="linearly dependent"):
        build_gabidulin(gf8, 3, 1, [1, 2, 3])
    with pytest.raises(DimensionMismatchError):
        build_gabidulin(gf8, 3, 1, [1, 2])


def test_gabidulin_k_out_of_range(gf8: FieldSpec):
    """Test the bounds on the number of parity rows."""
    with pytest.raises(ValueError):
        build_gabidulin(gf8, 3, 4)


def test_gabidulin_dict_round_trip(gf8: FieldSpec):
    """Test serialization with custom generators."""
    code = build_gabidulin(gf8, 3, 2, [1, 3, 4])
    data = code.to_dict()
    assert data == {"field": {"m": 3, "modulus": "b"}, "n": 3, "k": 2, "generators": ["1", "3", "4"]}
    restored = GabidulinCode.from_dict(data)
    assert restored == code
    assert restored.H == code.H


def test_rank_distance_examples(gf8: FieldSpec):
    """Test rank distances of simple vectors."""
    x = ExtVector(gf8, [1, 2, 4])
    assert rank_distance(x, ExtVector.zeros(gf8, 3)) == 3
    assert rank_distance(x, x) == 0
    assert rank_distance(ExtVector(gf8, [1, 1, 0]), ExtVector.zeros(gf8, 3)) == 1


def test_rank_distance_is_a_metric(gf4: FieldSpec):
    """Test the metric axioms on every triple of length-2 vectors over GF(4)."""
    vectors = [ExtVector(gf4, list(values)) for values in product(range(4), repeat=2)]
    for x, y in product(vectors, repeat=2):
        d = rank_distance(x, y)
        assert (d == 0) == (x == y)
        assert d == rank_distance(y, x)
        assert 0 <= d <= 2
    for x, y, z in product(vectors, repeat=3):
        assert rank_distance(x, z) <= rank_distance(x, y) + rank_distance(y, z)


def test_rank_distance_errors(gf4: FieldSpec, gf8: FieldSpec):
    """Test mismatched fields and lengths."""
    with pytest.raises(FieldMismatchError):
        rank_distance(ExtVector(gf4, [1]), ExtVector(gf8, [1]))
    with pytest.raises(DimensionMismatchError):
        rank_distance(ExtVector(gf8, [1]), ExtVector(gf8, [1, 2]))


def test_singleton_bounds():
    """Test both forms of the rank-metric Singleton bound."""
    assert singleton_bound(3, 3, 2) == 6
    assert singleton_bound(3, 3, 1) == 9
    assert singleton_d_bound(3, 3, 1) == 3
    assert singleton_d_bound(3, 3, 2) == 2
    # n > m: the distance bound scales by m / n
    assert singleton_d_bound(4, 2, 2) == 2
    with pytest.raises(ValueError):
        singleton_bound(3, 3, 4)
    with pytest.raises(ValueError):
        singleton_d_bound(3, 3, 4)


def test_codeword_enumeration(example_code: GabidulinCode):
    """Test that the kernel of H is enumerated completely."""
    words = list(example_code.codewords())
    assert len(words) == 64
    assert len(set(words)) == 64
    assert not any(words[0].to_list())
    assert all(example_code.contains(w) for w in words)


def test_min_rank_distance_of_example_code(example_code: GabidulinCode):
    """Test the brute-force minimum distance meets n - dim + 1 = 2."""
    assert min_rank_distance_bruteforce(example_code) == 2
    assert is_mrd(example_code)
    assert verify_corollary1(example_code)


def test_min_rank_distance_of_higher_redundancy_code(gf8: FieldSpec):
    """Test the one-dimensional Gabidulin code has distance 3."""
    code = build_gabidulin(gf8, 3, 2)
    assert min_rank_distance_bruteforce(code) == 3
    assert is_mrd(code)
    assert verify_corollary1(code)


def test_non_mrd_code(gf8: FieldSpec):
    """Test a parity check whose code contains the rank-1 word (1, 1, 0)."""
    code = ParityCheckCode(ExtMatrix(gf8, [[1, 1, 0]]))
    assert min_rank_distance_bruteforce(code) == 1
    assert not is_mrd(code)
    assert not verify_corollary1(code)


def test_min_rank_distance_of_zero_code_raises(gf8: FieldSpec):
    """Test that a code with only the zero word has no minimum distance."""
    with pytest.raises(ValueError):
        min_rank_distance_bruteforce(ParityCheckCode(ExtMatrix.identity(gf8, 2)))


def test_min_rank_distance_respects_budget(example_code: GabidulinCode):
    """Test that enumeration beyond the budget is refused."""
    with pytest.raises(BudgetExceededError):
        min_rank_distance_bruteforce(example_code, budget=10)


def test_theorem1_characterizes_distance(example_code: GabidulinCode):
    """Test the parity-check characterization for d = 1, 2, 3."""
    assert verify_theorem1(example_code, 2)
    assert not verify_theorem1(example_code, 3)
    # No nonzero binary word lies in the code, so d = 1 fails the second condition.
    assert not verify_theorem1(example_code, 1)


def test_theorem1_on_rank_one_codeword(gf8: FieldSpec):
    """Test that a code containing (1, 1, 0) has distance 1 by the characterization."""
    code = ParityCheckCode(ExtMatrix(gf8, [[1, 1, 0]]))
    assert verify_theorem1(code, 1)
    assert not verify_theorem1(code, 2)


def test_theorem1_witness(example_code: GabidulinCode):
    """Test the witness is full rank and collapses the rank of H T0."""
    witness = find_theorem1_witness(example_code, 2)
    assert witness is not None
    assert witness.shape == (3, 2)
    assert rank_ext(example_code.H @ witness) < 2
    assert find_theorem1_witness(example_code, 4) is None


def test_corollary_requires_n_at_most_m(gf4: FieldSpec):
    """Test that the MRD criterion rejects n > m."""
    code = ParityCheckCode(ExtMatrix(gf4, [[1, 2, 3]]))
    with pytest.raises(ValueError):
        verify_corollary1(code)


def test_every_small_gabidulin_code_is_mrd():
    """Test every Gabidulin code with m <= 4: Moore structure, distance k + 1 and the MRD criterion."""
    for m in range(1, 5):
        field = FieldSpec.default(m)
        for n in range(1, m + 1):
            for k in range(1, n + 1):
                code = build_gabidulin(field, n, k)
                expected = [
                    [frobenius(FieldElement(field, g), i).coeffs for g in code.generators] for i in range(k)
                ]
                assert code.H.to_lists() == expected, (m, n, k)
                assert verify_corollary1(code), (m, n, k)
                if k < n:
                    assert min_rank_distance_bruteforce(code) == k + 1, (m, n, k)
                    assert is_mrd(code), (m, n, k)
