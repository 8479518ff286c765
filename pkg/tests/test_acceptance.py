"""One test per acceptance criterion; each prints its own PASS/FAIL line."""
import pytest

from markoffbm.acceptance import CRITERIA, PASS, SuiteOptions


@pytest.fixture(scope="module")
def options():
    return SuiteOptions()


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, options, capsys):
    result = CRITERIA[number](options)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.status == PASS, result.detail
