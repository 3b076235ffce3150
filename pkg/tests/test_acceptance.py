"""Every acceptance criterion at its stated size; one pass/fail line each."""

import pytest

from tambara.selftest import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"{n}-{name.replace(' ', '_')}" for n, name, _ in CRITERIA])
def test_criterion(number, acceptance_log):
    r = run_criterion(number)
    acceptance_log.append(r.line())
    print(r.line())
    assert r.ok, r.detail
