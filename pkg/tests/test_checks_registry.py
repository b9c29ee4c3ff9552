"""Run the full verification-suite registry at every supported small q,
exactly as the command-line selftest does.  Each suite asserts one
structural fact by direct computation; any failure message names it."""

import pytest

from spreadsmith.checks import run_selftest
from spreadsmith.spreads import geometry_for_q


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_all_applicable_suites_pass(q):
    results = run_selftest(geometry_for_q(q))
    assert results, "no suites ran"
    failed = [r.line() for r in results if not r.ok]
    assert not failed, "\n".join(failed)


def test_selftest_output_independent_of_worker_count():
    geo = geometry_for_q(3)
    lines1 = [r.line() for r in run_selftest(geo, jobs=1)]
    lines2 = [r.line() for r in run_selftest(geo, jobs=2)]
    assert lines1 == lines2


def test_sample_seed_override_threads_through():
    geo = geometry_for_q(3)
    base = run_selftest(geo)
    seeded = run_selftest(geo, sample_seed=999)
    assert [r.name for r in base] == [r.name for r in seeded]
    assert all(r.ok for r in seeded)
