"""Verification suites: corpus-wide sweep and witness behaviour."""

import pathlib

import pytest

from taudiff.checks import SUITE_ORDER, run_all, run_check
from taudiff.textio import load_problem_file

PROBLEMS = pathlib.Path(__file__).resolve().parent.parent / "problems"


@pytest.mark.parametrize(
    "path", sorted(PROBLEMS.glob("*.prob")), ids=lambda p: p.stem
)
def test_no_suite_fails_anywhere_in_corpus(path):
    prob = load_problem_file(path)
    for res in run_all(prob):
        assert res.passed, "%s failed on %s: %s" % (res.name, path.name, res.lines)


@pytest.mark.parametrize("name", ["circle_t", "hyperbola_t", "ci_line_t"])
def test_suites_hold_under_lex_order(name):
    prob = load_problem_file(PROBLEMS / ("%s.prob" % name), order="lex")
    for res in run_all(prob):
        assert res.passed, "%s failed under lex on %s: %s" % (res.name, name, res.lines)


def test_suite_order_is_fixed():
    prob = load_problem_file(PROBLEMS / "affine_line.prob")
    assert [r.name for r in run_all(prob)] == list(SUITE_ORDER)


def test_split_witness_at_low_bound():
    prob = load_problem_file(PROBLEMS / "circle_t.prob")
    res = run_check("split", prob, degree_bound=0)
    assert not res.passed
    assert any("witness" in line for line in res.lines)


def test_torsor_skips_without_points():
    # x^2 + y^2 = t has no Q(t)-points, so the suite must skip, not fail
    prob = load_problem_file(PROBLEMS / "circle_t.prob")
    res = run_check("torsor", prob)
    assert res.skipped and res.passed


def test_split_skips_without_smoothness():
    prob = load_problem_file(PROBLEMS / "nonreduced.prob")
    res = run_check("split", prob)
    assert res.skipped

    res = run_check("sequences", prob)
    assert res.passed  # membership part still runs

    res = run_check("slices", prob)
    assert res.passed


def test_kernel_counts_match_field_size():
    for name, expected in (("circle_t", 0), ("field_tu", 1), ("field_tuw", 2)):
        prob = load_problem_file(PROBLEMS / ("%s.prob" % name))
        res = run_check("kernel", prob)
        assert res.passed
        assert ("%d kernel vectors" % expected) in res.lines[0]


def test_torsor_counts_points_on_hyperbola():
    prob = load_problem_file(PROBLEMS / "hyperbola_t.prob")
    res = run_check("torsor", prob)
    assert res.passed and not res.skipped
    assert "3 base points" in res.lines[0]


def test_lift_equivariance_uses_declared_chain():
    prob = load_problem_file(PROBLEMS / "chain_maps.prob")
    res = run_check("lift-equivariance", prob)
    assert res.passed and not res.skipped
    assert any("functoriality" in line for line in res.lines)


def test_unknown_suite_raises():
    prob = load_problem_file(PROBLEMS / "affine_line.prob")
    with pytest.raises(KeyError):
        run_check("nope", prob)
