import pytest

from tricap import SELFTEST_SEED, criterion_ids, run_criterion, run_selftest


def test_criterion_catalog():
    ids = criterion_ids()
    assert ids == list(range(1, 12))


def test_run_criterion_shape():
    rep = run_criterion(8, SELFTEST_SEED)
    assert rep["id"] == 8
    assert rep["name"] == "selection-combinatorics"
    assert rep["pass"] is True
    assert isinstance(rep["details"], dict)


def test_unknown_criterion_rejected():
    with pytest.raises(ValueError):
        run_criterion(12, SELFTEST_SEED)


def test_run_selftest_subset_report():
    lines = []
    report, ok = run_selftest(SELFTEST_SEED, [8], log=lines.append)
    assert ok is True
    assert report["all_pass"] is True
    assert report["command"] == "selftest"
    assert report["seed"] == SELFTEST_SEED
    assert [c["id"] for c in report["criteria"]] == [8]
    assert any("criterion 8" in ln for ln in lines)
    # no timing chatter may leak into the canonical report
    assert "elapsed" not in str(report)
