"""
Unit tests for the exact secrecy audits.
"""

import json
from fractions import Fraction
from itertools import product

import pytest

from wiresafe import configure_budget, override_budget
from wiresafe.audit import (
    SecrecyReport,
    Verdict,
    audit_network,
    audit_network_async,
    audit_wiretap_channel,
    check_lemma1,
    check_rouayheb_condition,
    exhaustive_secrecy,
    find_rouayheb_counterexample,
    reduce_rank_deficient,
    stacked_matrix,
)
from wiresafe.coset import CosetScheme, build_mds_baseline, clear_scheme, decode, encode_with, message_space
from wiresafe.exceptions import BudgetExceededError, DimensionMismatchError, FieldMismatchError
from wiresafe.gf import BaseMatrix, ExtMatrix, ExtVector, FieldSpec, enumerate_full_rank
from wiresafe.netsim import assign_random_code, butterfly, butterfly_xor_code, is_feasible, sink_decode, transmit
from wiresafe.rankmetric import GabidulinCode, ParityCheckCode, build_gabidulin


def test_worked_example_is_perfectly_secret(example_scheme: CosetScheme, example_b: BaseMatrix):
    """Test H = [1 α α²] against B = [[1,0,1],[0,1,1]]: every W is equally likely given S."""
    record = exhaustive_secrecy(example_scheme, example_b, label="example")
    assert record.stack_nonsingular
    assert record.rank_b == 2
    assert record.total == 512
    assert record.pr_w_given_s == Fraction(1, 64)
    assert record.h_s == 3
    assert record.h_s_given_w == 3
    assert record.h_w == 6
    assert record.h_x == 9
    assert record.h_s_given_x == 0
    assert record.independent
    assert record.exact
    assert record.leaked_bits == 0


def test_stacked_matrix_embeds_binary_rows(example_code: GabidulinCode, example_b: BaseMatrix):
    """Test that [H; B] keeps H on top and B as 0/1 field elements."""
    M = stacked_matrix(example_code.H, example_b)
    assert M.to_lists() == [[1, 2, 4], [1, 0, 1], [0, 1, 1]]


def test_every_binary_observation_gives_nonsingular_stack(example_code: GabidulinCode):
    """Test all 42 full-rank 2 x 3 binary matrices against the MRD parity check."""
    observations = list(enumerate_full_rank(2, 3))
    assert len(observations) == 42
    assert all(check_lemma1(example_code, B) for B in observations)
    assert find_rouayheb_counterexample(example_code.H) is None


def test_non_mrd_parity_check_has_singular_stack(gf8: FieldSpec):
    """Test that H = [1 1 0] is defeated by a wiretapper seeing x1 + x2."""
    code = ParityCheckCode(ExtMatrix(gf8, [[1, 1, 0]]))
    B = BaseMatrix([[1, 1, 0], [0, 0, 1]])
    assert not check_lemma1(code, B)
    assert find_rouayheb_counterexample(code.H) is not None
    record = exhaustive_secrecy(CosetScheme(code), B)
    assert not record.independent
    assert record.h_s_given_w == 0


def test_condition_requires_square_stack(example_code: GabidulinCode):
    """Test B must have n - k rows."""
    with pytest.raises(DimensionMismatchError):
        check_rouayheb_condition(example_code.H, BaseMatrix([[1, 0, 0]]))
    with pytest.raises(DimensionMismatchError):
        check_lemma1(example_code, BaseMatrix([[1, 0], [0, 1]]))


def test_stack_check_over_every_small_gabidulin_code():
    """Test that no full-rank binary observation makes [H; B] singular for m <= 4."""
    for m in range(1, 5):
        field = FieldSpec.default(m)
        for n in range(1, m + 1):
            for k in range(1, n):
                code = build_gabidulin(field, n, k)
                assert find_rouayheb_counterexample(code.H) is None, (m, n, k)


def test_gabidulin_schemes_are_universally_secure():
    """Test exhaustive audits of every Gabidulin scheme with m <= 3 and 1 <= k < n."""
    for m in range(1, 4):
        field = FieldSpec.default(m)
        for n in range(2, m + 1):
            for k in range(1, n):
                report = audit_wiretap_channel(CosetScheme(build_gabidulin(field, n, k)))
                assert report.verdict is Verdict.SECURE, (m, n, k)
                assert report.stacks_nonsingular == report.sets_audited


@pytest.mark.parametrize(
    "scheme_factory",
    [
        lambda f: CosetScheme(build_gabidulin(f, 3, 1)),
        lambda f: clear_scheme(f, 3, 1),
        lambda f: CosetScheme(ParityCheckCode(ExtMatrix(f, [[1, 1, 0]]))),
        lambda f: CosetScheme(build_gabidulin(f, 3, 2)),
    ],
)
def test_independence_matches_stack_rank(gf8: FieldSpec, scheme_factory):
    """Test that S and W are independent exactly when [H; B] has full rank."""
    report = audit_wiretap_channel(scheme_factory(gf8))
    for record in report.records:
        assert record.independent == record.stack_nonsingular
        assert record.exact
        assert (record.h_s_given_w == record.h_s) == record.independent


def test_entropy_bookkeeping(example_scheme: CosetScheme):
    """Test H(X) = H(S) + mu·m and H(S|X) = 0 for every observation."""
    report = audit_wiretap_channel(example_scheme)
    for record in report.records:
        assert record.h_x == record.h_s + example_scheme.mu * example_scheme.field.m
        assert record.h_s_given_x == 0
        assert record.h_w <= record.h_x


def test_rate_above_secure_capacity_leaks(gf8: FieldSpec):
    """Test k = 2 message symbols against mu = 2 tapped links."""
    scheme = CosetScheme(build_gabidulin(gf8, 3, 2))
    report = audit_wiretap_channel(scheme, mu=2)
    assert report.sets_audited == 42
    assert report.verdict is Verdict.INSECURE
    assert len(report.failures) == 42
    assert report.stacks_nonsingular == 0


def test_reduce_rank_deficient():
    """Test duplicate and zero rows collapse to a basis of the row space."""
    reduced, r = reduce_rank_deficient(BaseMatrix([[1, 0, 1], [1, 0, 1]]))
    assert r == 1
    assert reduced.to_lists() == [[1, 0, 1]]
    reduced, r = reduce_rank_deficient(BaseMatrix.zeros(2, 3))
    assert r == 0
    assert reduced.shape == (0, 3)


@pytest.mark.parametrize(
    "rows",
    [
        [[1, 1], [1, 1], [0, 0]],
        [[1, 0], [0, 0], [1, 0]],
        [[0, 1], [1, 1], [1, 0]],
    ],
)
@pytest.mark.parametrize("scheme_name", ["gabidulin", "clear"])
def test_reducing_observation_keeps_the_verdict(gf4: FieldSpec, rows, scheme_name: str):
    """Test an observation with duplicate or zero rows leaks exactly what its reduced basis leaks."""
    scheme = CosetScheme(build_gabidulin(gf4, 2, 1)) if scheme_name == "gabidulin" else clear_scheme(gf4, 2, 1)
    B = BaseMatrix(rows)
    reduced, r = reduce_rank_deficient(B)
    assert r < B.rows
    full = exhaustive_secrecy(scheme, B)
    basis = exhaustive_secrecy(scheme, reduced)
    assert full.independent == basis.independent
    assert full.h_s_given_w == basis.h_s_given_w
    assert full.h_w == basis.h_w


def test_rank_deficient_observation_is_audited_on_its_span(example_scheme: CosetScheme):
    """Test repeated rows leak no more than a single row."""
    record = exhaustive_secrecy(example_scheme, BaseMatrix([[1, 1, 0], [1, 1, 0]]))
    assert record.rank_b == 1
    assert record.independent
    assert record.stack_nonsingular
    assert record.h_w == 3


def test_zero_taps_are_secure(example_scheme: CosetScheme):
    """Test mu = 0: the empty observation reveals nothing."""
    report = audit_wiretap_channel(example_scheme, mu=0)
    assert report.sets_audited == 1
    record = report.records[0]
    assert record.independent
    assert record.h_w == 0
    assert record.pr_w_given_s == 1


def test_full_observation_reveals_message(example_scheme: CosetScheme):
    """Test B = I: the wiretapper sees X and decodes S."""
    record = exhaustive_secrecy(example_scheme, BaseMatrix.identity(3))
    assert record.rank_b == 3
    assert record.h_s_given_w == 0
    assert not record.independent
    assert not record.stack_nonsingular
    assert record.pr_w_given_s is None


def test_mds_baseline_fails_extension_field_observations(gf4: FieldSpec):
    """Test an MDS code secure against binary taps but not against GF(4) combinations."""
    scheme = build_mds_baseline(gf4, 2, 1)
    assert scheme.code.H.to_lists() == [[1, 2]]
    assert find_rouayheb_counterexample(scheme.code.H) is None
    B = find_rouayheb_counterexample(scheme.code.H, gf4)
    assert isinstance(B, ExtMatrix)
    assert not check_rouayheb_condition(scheme.code.H, B)
    record = exhaustive_secrecy(scheme, ExtMatrix(gf4, [[1, 2]]))
    assert record.h_s_given_w == 0
    assert audit_wiretap_channel(scheme, coefficient_field=gf4).verdict is Verdict.INSECURE


def test_mds_baseline_fails_binary_observation_beyond_m(gf4: FieldSpec):
    """Test an MDS code of length 3 over GF(4) against B = [[1,0,1],[0,1,1]]."""
    scheme = build_mds_baseline(gf4, 3, 2)
    assert scheme.code.H.to_lists() == [[1, 2, 3]]
    B = BaseMatrix([[1, 0, 1], [0, 1, 1]])
    assert not check_rouayheb_condition(scheme.code.H, B)
    assert find_rouayheb_counterexample(scheme.code.H) is not None
    assert not exhaustive_secrecy(scheme, B).independent
    assert audit_wiretap_channel(scheme).verdict is Verdict.INSECURE


def test_counterexample_field_must_match(example_code: GabidulinCode, gf4: FieldSpec):
    """Test observations over an unrelated field are refused."""
    with pytest.raises(FieldMismatchError):
        find_rouayheb_counterexample(example_code.H, gf4)
    with pytest.raises(FieldMismatchError):
        audit_wiretap_channel(CosetScheme(example_code), coefficient_field=gf4)


def test_butterfly_audit_is_secure(gf4: FieldSpec):
    """Test an MRD scheme over the XOR butterfly code against every single tapped edge."""
    report = audit_network(butterfly_xor_code(), CosetScheme(build_gabidulin(gf4, 2, 1)), 1)
    assert report.sets_audited == 7
    assert report.stacks_nonsingular == 7
    assert report.verdict is Verdict.SECURE
    assert report.network == "butterfly"
    assert [r.label for r in report.records] == ["e1", "e2", "e3", "e4", "e5", "e6", "e7"]
    assert report.records[5].edges == ("e6",)


def test_clear_scheme_leaks_on_source_edges(gf4: FieldSpec):
    """Test sending S on packet 1 is caught on the edges that carry it."""
    report = audit_network(butterfly_xor_code(), clear_scheme(gf4, 2, 1), 1)
    assert report.verdict is Verdict.INSECURE
    assert report.failures == ["e1", "e3"]


def test_two_taps_on_butterfly_leak(gf4: FieldSpec, caplog: pytest.LogCaptureFixture):
    """Test mu = 2 exceeds what a k = 1 scheme of length 2 can hide."""
    report = audit_network(butterfly_xor_code(), CosetScheme(build_gabidulin(gf4, 2, 1)), 2)
    assert report.sets_audited == 21
    assert report.verdict is Verdict.INSECURE
    assert "exceed the secure rate" in caplog.text


def test_worker_count_does_not_change_report(gf4: FieldSpec):
    """Test the report is the same whatever the number of workers."""
    code, scheme = butterfly_xor_code(), clear_scheme(gf4, 2, 1)
    single = audit_network(code, scheme, 1, workers=1)
    pooled = audit_network(code, scheme, 1, workers=3)
    assert pooled.to_dict() == single.to_dict()
    with pytest.raises(ValueError):
        audit_network(code, scheme, 1, workers=0)


@pytest.mark.anyio
async def test_audit_network_async(gf4: FieldSpec):
    """Test the awaitable form inside a running event loop."""
    report = await audit_network_async(butterfly_xor_code(), CosetScheme(build_gabidulin(gf4, 2, 1)), 1, workers=2)
    assert report.secure


def test_audit_network_input_errors(gf4: FieldSpec, gf8: FieldSpec):
    """Test length and mu validation."""
    code = butterfly_xor_code()
    with pytest.raises(DimensionMismatchError):
        audit_network(code, CosetScheme(build_gabidulin(gf8, 3, 1)), 1)
    with pytest.raises(ValueError):
        audit_network(code, clear_scheme(gf4, 2, 1), 8)


def test_budgets_are_enforced(example_scheme: CosetScheme, example_b: BaseMatrix, gf4: FieldSpec):
    """Test each cap refuses oversized audits before doing the work."""
    with pytest.raises(BudgetExceededError) as exc_info:
        exhaustive_secrecy(example_scheme, example_b, budget=100)
    assert exc_info.value.required == 512
    with pytest.raises(BudgetExceededError):
        audit_network(butterfly_xor_code(), clear_scheme(gf4, 2, 1), 2, budget=10)
    with pytest.raises(BudgetExceededError):
        audit_wiretap_channel(example_scheme, budget=10)
    configure_budget(joint=100)
    with pytest.raises(BudgetExceededError):
        audit_wiretap_channel(example_scheme)


def test_override_budget_applies_to_audits(example_scheme: CosetScheme):
    """Test that a temporary cap is honoured and then lifted."""
    with override_budget(enumeration=10):
        with pytest.raises(BudgetExceededError):
            audit_wiretap_channel(example_scheme)
    assert audit_wiretap_channel(example_scheme).secure


def test_report_round_trip(gf4: FieldSpec):
    """Test that reports survive JSON serialization, including GF(4) observations."""
    scheme = build_mds_baseline(gf4, 2, 1)
    for report in (
        audit_network(butterfly_xor_code(), clear_scheme(gf4, 2, 1), 1),
        audit_wiretap_channel(scheme, coefficient_field=gf4),
        audit_wiretap_channel(scheme, mu=0),
    ):
        data = json.loads(json.dumps(report.to_dict()))
        restored = SecrecyReport.from_dict(data)
        assert restored == report
        assert data["summary"]["verdict"] == report.verdict.value


def test_report_summary(gf4: FieldSpec):
    """Test the summary keys."""
    report = audit_network(butterfly_xor_code(), clear_scheme(gf4, 2, 1), 1)
    assert report.summary() == {
        "sets_audited": 7,
        "stacks_nonsingular": 5,
        "secure": False,
        "verdict": "INSECURE",
        "failures": ["e1", "e3"],
    }


@pytest.mark.slow
def test_random_feasible_codes_are_secure_and_decodable(gf4: FieldSpec):
    """Test an MRD scheme over 20 feasible random binary codes on the butterfly."""
    scheme = CosetScheme(build_gabidulin(gf4, 2, 1))
    net = butterfly()
    codes = []
    for seed in range(3000):
        code = assign_random_code(net, 2, seed=seed)
        if is_feasible(code):
            codes.append(code)
        if len(codes) == 20:
            break
    assert len(codes) == 20
    for code in codes:
        assert audit_network(code, scheme, 1).verdict is Verdict.SECURE
        for message in message_space(gf4, 1):
            for draw in product(range(4), repeat=1):
                x = encode_with(scheme, message, ExtVector(gf4, list(draw)))
                received = transmit(code, x)
                for sink in net.sinks:
                    assert decode(scheme, sink_decode(code, sink, received[sink])) == message
