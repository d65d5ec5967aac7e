import pytest

from confhom.models import CheckResult
from confhom.services.verify import SUITES, UnknownSuiteError, _guard, brute_force_shuffle_sum, run_suite
from confhom.umor import signed_shuffle_coeff


def test_brute_force_shuffles():
    assert brute_force_shuffle_sum(1, 1) == 0
    assert brute_force_shuffle_sum(2, 1) == 1
    assert brute_force_shuffle_sum(2, 2) == 2
    assert brute_force_shuffle_sum(0, 4) == 1
    for m in range(5):
        for n in range(5):
            assert signed_shuffle_coeff(m, n) == brute_force_shuffle_sum(m, n)


def test_suites():
    assert set(SUITES) == {"fast", "full"}
    fast, full = SUITES["fast"], SUITES["full"]
    assert fast.slice_n <= full.slice_n
    assert fast.oracle_u <= full.oracle_u
    assert full.primes == (3, 5)


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError):
        run_suite("nope")


def test_guard_turns_errors_into_failures():
    def boom():
        raise RuntimeError("kaput")

    [result] = _guard("boom", boom)
    assert not result.ok
    assert "kaput" in result.detail
    ok = CheckResult(name="x", ok=True)
    assert _guard("x", lambda: ok) == [ok]


@pytest.mark.slow
def test_fast_suite_passes(container):
    checks = run_suite("fast", 2, container)
    assert all(c.ok for c in checks), [c.name for c in checks if not c.ok]
