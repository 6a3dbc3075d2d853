"""Tests for fixtures module."""

from mpmath import mp

from jacobi_weierstrass.fixtures import cm_point, run_fixtures
from jacobi_weierstrass.numeric import PrecisionContext


def test_cm_point():
    """Test the CM point (1 + i sqrt 7) / 2."""
    with mp.workdps(30):
        tau = cm_point()
        assert tau.real == mp.mpf(1) / 2
        assert mp.fabs(tau.imag**2 - mp.mpf(7) / 4) < 1e-25


def test_golden_suite():
    """Test every golden check of both worked examples passes at 30 digits."""
    report = run_fixtures(PrecisionContext(digits=30, guard=10), max_workers=2)

    failed = [r.name for r in report.results if not r.passed]
    assert failed == [], report.table()
    assert len(report.results) >= 15
    names = {r.name for r in report.results}
    for name in (
        "delta laurent z",
        "delta q-expansion",
        "delta lattice correction",
        "eta3p8 p1",
        "eta3p8 p2",
    ):
        assert name in names
