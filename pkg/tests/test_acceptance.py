"""Acceptance criteria, one test per criterion.

Each result line is printed as the check runs and repeated in the terminal summary,
so the pass/fail list shows up with or without ``-s``.
"""
import pytest

from crgnla.suite import CHECKS, run_check

RESULTS = []

THRESHOLD_CONFLICT = (
    "the stated boundaries |a| = 3/2 and a^2 + b^2 = 9/4 disagree with the brackets of the "
    "listed fields, which put them at |a| = 3/4 and a^2 + b^2 = 9/16"
)


def _param(cid, name):
    marks = [pytest.mark.xfail(strict=True, reason=THRESHOLD_CONFLICT)] if cid == 9 else []
    return pytest.param(cid, id=f"{cid:02d}-{name.replace(' ', '_')}", marks=marks)


@pytest.mark.parametrize("cid", [_param(cid, name) for cid, name, _ in CHECKS])
def test_criterion(cid):
    result = run_check(cid)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.detail


def test_computed_thresholds_are_reported():
    detail = run_check(9).detail
    assert detail["computed_boundaries"] == {"2121": "|a| = 3/4", "2122": "a^2 + b^2 = 9/16"}
