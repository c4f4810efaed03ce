"""One test per acceptance criterion; each prints a PASS/FAIL line.

The lines are gathered again in the terminal summary.  Run this file directly
(``python3 tests/test_acceptance.py``) for the table without pytest.
"""

import pytest

from lenslab.acceptance import CRITERIA, run_criterion

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover
    ACCEPTANCE_LINES = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = run_criterion(number)
    ACCEPTANCE_LINES[number] = result.line
    print(result.line)
    assert result.runtime < result.budget, result.line
    assert result.passed, result.line


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        res = run_criterion(k)
        print(res.line, flush=True)
        failed += not res.passed
    raise SystemExit(1 if failed else 0)
