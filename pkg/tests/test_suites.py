import pytest

from gradedreg.errors import UnknownSuite
from gradedreg.suites import SUITES, verify_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    rep = verify_suite(name)
    failed = [c for c in rep.checks if c.certified and not c.passed]
    assert rep.passed, failed


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        verify_suite("nope")


def test_sandwich_example_values():
    rep = verify_suite("sandwich")
    lower, upper = rep.checks[0], rep.checks[1]
    assert (lower.lhs, lower.rhs, upper.rhs) == (0, pytest.approx(0.5), pytest.approx(0.5))
    assert str(upper.rhs) == "1/2" and str(lower.rhs) == "1/2"
