"""Acceptance criteria A1-A11 at their full bounds on the A2 Cartan matrix
(plus the rank-2 family the suite sweeps).  Every check is exact; the
runtime ceilings are asserted as well."""

import pytest

from qloop.cartan import preset
from qloop.suite import SuiteConfig, run_check

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance

LIMITS = {
    "A1": 10, "A2": 300, "A3": 120, "A4": 30, "A5": 120, "A6": 180,
    "A7": 180, "A8": 300, "A9": 120, "A10": 1, "A11": 10,
}

_CACHE: dict = {}


def result(check_id):
    if check_id not in _CACHE:
        r = run_check(check_id, SuiteConfig(preset("A2")))
        _CACHE[check_id] = r
        ACCEPTANCE_LINES[check_id] = r.line()
        print(r.line())
    return _CACHE[check_id]


@pytest.mark.parametrize("check_id", ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A9", "A10", "A11"])
def test_criterion(check_id):
    r = result(check_id)
    assert r.ok, r.line()
    assert r.count > 0
    assert r.seconds < LIMITS[check_id], f"{check_id} took {r.seconds:.1f}s"


@pytest.mark.parametrize("part", ["i_zeta_identity", "ii_omega_homomorphism", "iii_geometric_wheel", "iv_modified_vanishes"])
def test_A8_parts(part):
    r = result("A8")
    assert r.parts[part]["ok"], r.parts[part]
    assert r.parts[part]["count"] > 0
    assert r.seconds < LIMITS["A8"]


@pytest.mark.xfail(
    strict=True,
    reason="the trigonometric quadratic relation is also killed by the geometric map, "
    "since both kernels have the same exchange ratio; see notes/decisions.md",
)
def test_A8_original_relation_survives():
    r = result("A8")
    assert r.parts["iv_original_not_all_zero"]["ok"]


def test_A8_line_is_honest():
    # the criterion as a whole fails because of the part above
    r = result("A8")
    assert not r.ok
    assert ACCEPTANCE_LINES["A8"].startswith("A8 FAIL")
