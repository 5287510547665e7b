"""Verification suites: report structure, frozen values, and error paths."""

from fractions import Fraction

import pytest

from treegrp.errors import EnumerationCapExceeded
from treegrp.verify import (
    VERDICT_NOT_TOP_FG,
    VERDICT_UNKNOWN,
    classify_maximal,
    verify_auxiliary,
    verify_new_relation,
    verify_no_adad,
    verify_not_top_fg,
)


def test_classify_depth2_rows():
    report = classify_maximal(2)
    assert len(report.rows) == 3
    assert report.max_dimension_count == 2
    by_J = {row.J: row for row in report.rows}
    assert by_J[(0,)].essential is False
    assert by_J[(0,)].dimension == 0
    assert by_J[(0,)].top_fg_verdict == VERDICT_UNKNOWN
    for J in [(1,), (0, 1)]:
        row = by_J[J]
        assert row.essential and row.is_max_dimension
        assert row.dimension == Fraction(1, 2)
        assert not row.contains_a_dminus1
        assert row.contains_derived_of_Gd
        assert row.bs_premise_fails
        assert row.top_fg_verdict == VERDICT_NOT_TOP_FG


def test_classify_depth3_counts():
    report = classify_maximal(3)
    assert len(report.rows) == 7
    assert report.max_dimension_count == 4
    for row in report.rows:
        if row.is_max_dimension:
            assert row.dimension == Fraction(3, 4)
        else:
            assert row.dimension < Fraction(3, 4)


def test_classify_depth5_needs_gf2_flag():
    with pytest.raises(EnumerationCapExceeded):
        classify_maximal(5)
    report = classify_maximal(5, use_gf2=True)
    assert report.used_gf2
    assert len(report.rows) == 31
    assert report.max_dimension_count == 16
    for row in report.rows:
        if row.is_max_dimension:
            assert row.dimension == Fraction(15, 16)
            assert row.top_fg_verdict == VERDICT_NOT_TOP_FG


def test_classify_depth_out_of_range():
    with pytest.raises(ValueError):
        classify_maximal(1)
    with pytest.raises(EnumerationCapExceeded):
        classify_maximal(9)


def test_classify_report_roundtrips_to_dict():
    doc = classify_maximal(2).to_dict()
    assert doc["passed"] is True
    assert doc["expected_max_count"] == 2
    assert {tuple(r["J"]) for r in doc["rows"]} == {(0,), (1,), (0, 1)}
    assert all(set(r["dimension"]) == {"num", "den"} for r in doc["rows"])


def test_no_adad_both_arms_small_depths():
    for d in (2, 3):
        report = verify_no_adad(d)
        assert report.passed
        assert len(report.cases) == 1 << (d - 1)
        for case in report.cases:
            assert case.certificate_verdict == "NOT_IN_DERIVED"
            assert case.enumerated_checked and case.enumerated_excluded


def test_no_adad_certificate_only_at_depth6():
    report = verify_no_adad(6)
    assert report.passed
    assert len(report.cases) == 32
    for case in report.cases:
        assert not case.enumerated_checked


def test_not_top_fg_small_depths():
    for d in (2, 3):
        report = verify_not_top_fg(d)
        assert report.passed
        assert len(report.cases) == 1 << (d - 1)
        for case in report.cases:
            assert case.in_top_stabilizer and case.enumerated_excluded
            assert case.verdict == VERDICT_NOT_TOP_FG
    with pytest.raises(ValueError):
        verify_not_top_fg(5)


def test_new_relation_frozen_values():
    rep2 = verify_new_relation(2)
    assert rep2.passed
    by_label = {c.label: c for c in rep2.cases}
    c = by_label["P_J, J=[1]"]
    assert (c.order_p, c.order_stab, c.psi_index) == (4, 2, 2)
    full = by_label["full pattern group"]
    assert (full.order_p, full.order_stab, full.psi_index) == (8, 4, 1)

    rep3 = verify_new_relation(3)
    assert rep3.passed
    c3 = {c.label: c for c in rep3.cases}["P_J, J=[2]"]
    assert (c3.order_p, c3.order_stab, c3.psi_index) == (64, 8, 2)
    with pytest.raises(ValueError):
        verify_new_relation(4)


def test_new_relation_stabilization_evidence():
    for case in verify_new_relation(3).cases:
        assert case.stabilized
        assert len(case.psi_depths) >= 2
        assert case.psi_depths[-1][1] == case.psi_depths[-2][1]


def test_auxiliary_suite():
    for d in (2, 3):
        report = verify_auxiliary(d, samples=500)
        assert report.passed
        assert report.sweep_groups_processed == 10
        assert report.conjugation_failures == 0
        assert report.allowed_set_violations == 0
    report4 = verify_auxiliary(4, samples=500, seed=3)
    assert report4.passed
    assert report4.conjugation_pairs_checked == 500


def test_reports_serialize():
    import json

    for doc in (
        verify_no_adad(2).to_dict(),
        verify_not_top_fg(2).to_dict(),
        verify_new_relation(2).to_dict(),
        verify_auxiliary(2, samples=50).to_dict(),
    ):
        json.dumps(doc)
        assert doc["passed"] is True


def test_classification_deterministic():
    a = classify_maximal(3).to_dict()
    b = classify_maximal(3).to_dict()
    assert a == b
