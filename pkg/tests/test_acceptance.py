"""The ten numbered acceptance criteria, checked exactly.

Each criterion prints one ``[PASS]``/``[FAIL]`` line whether or not output
capture is on, and fails the test when the computed values differ from the
published ones.
"""

from __future__ import annotations

import pytest

from fibersum.checks import CHECKS, CheckResult


@pytest.mark.parametrize("index,check", list(enumerate(CHECKS, start=1)),
                         ids=[f"{i:02d}-{c.__name__}" for i, c in enumerate(CHECKS, start=1)])
def test_criterion(index, check, capsys):
    try:
        result = check()
    except Exception as exc:  # report a crash as a failing line, then re-raise
        result = CheckResult(index, check.__name__, False, f"error: {type(exc).__name__}: {exc}")
        with capsys.disabled():
            print("\n" + result.line())
        raise
    with capsys.disabled():
        print("\n" + result.line())
    assert result.index == index
    assert result.passed, result.line()
