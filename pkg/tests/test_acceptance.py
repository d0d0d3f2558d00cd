"""Acceptance criteria at their stated tolerances, one line of output each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the table.
"""

import pytest

from pathgroup import cli
from pathgroup.checks import SUITES, run_check

SEED = 0


@pytest.mark.parametrize("number", [s[0] for s in SUITES], ids=[f"{s[0]:02d}-{s[1]}" for s in SUITES])
def test_criterion(number, capsys):
    result = run_check(number, SEED)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


def test_verify_command_seed_42(capsys):
    code = cli.run(["verify", "--seed", "42"])
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    with capsys.disabled():
        print("\n" + out)
    assert len(lines) == len(SUITES) + 1
    assert all(line.startswith("[PASS]") for line in lines[:-1])
    assert lines[-1] == f"{len(SUITES)}/{len(SUITES)} passed"
    assert code == 0
