import time

import pytest

from graphfree.cli import main
from graphfree.verification import run_verification


def test_all_suites_pass_fast():
    t0 = time.time()
    rep = run_verification("all", fast=True, seed=1)
    elapsed = time.time() - t0
    failed = [r for r in rep.results if not r.passed]
    assert rep.ok, [f"{r.check_id}: {r.witness}" for r in failed]
    assert elapsed < 240.0


def test_suite_names_are_runnable():
    for s in ("combinatorics", "factor"):
        assert run_verification(s).ok
    with pytest.raises(ValueError):
        run_verification("no-such-suite")


def test_report_ordering_deterministic():
    a = run_verification("factor", seed=3)
    b = run_verification("factor", seed=3)
    assert [r.check_id for r in a.results] == [r.check_id for r in b.results]
    assert [r.witness for r in a.results] == [r.witness for r in b.results]


def test_verification_failure_exit_code(capsys):
    # an absurd tolerance forces the trace comparison to fail with code 1
    code = main(["trace", "--named", "a3", "--all-loops", "--max-len", "4",
                 "--tol", "1e-30"])
    capsys.readouterr()
    assert code == 1
