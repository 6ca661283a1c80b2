import pytest

from conemetric.suites import SUITE_NAMES, run_suite, summarize


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suites_run_clean_at_small_n(name):
    reports = run_suite(name, n=8, seed=7, dims=(2, 3))
    assert reports
    certified = [r for r in reports if r.certified_failure]
    assert not certified, [r.line() for r in certified]


def test_suites_deterministic():
    a = run_suite("fidelity", n=5, seed=3, dims=(2,))
    b = run_suite("fidelity", n=5, seed=3, dims=(2,))
    assert [(r.context, r.lhs, r.rhs) for r in a] == [(r.context, r.lhs, r.rhs) for r in b]


def test_summarize_groups():
    reports = run_suite("spectral", n=5, seed=3, dims=(2,))
    groups = summarize(reports)
    assert all(g["count"] >= 1 for g in groups.values())
    assert sum(g["count"] for g in groups.values()) == len(reports)


def test_unknown_suite_raises():
    with pytest.raises(KeyError):
        run_suite("bogus")
