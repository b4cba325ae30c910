"""Acceptance battery: one PASS/FAIL line per criterion, printed to the terminal."""

from __future__ import annotations

import pytest

from cpfactor.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number, "full")
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.line()
