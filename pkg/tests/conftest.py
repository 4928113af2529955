import importlib

import pytest

from pkreps import _fallback, arith, circle, reps, series

BACKENDS = {"python": _fallback}
try:
    BACKENDS["cython"] = importlib.import_module("pkreps._core")
except ImportError:
    pass

_USERS = (arith, series, reps, circle)


def _clear_caches():
    for fn in (arith._cached_table, circle._j_powers, circle._prime_window, circle.coefficients,
               circle.prime_count_coefficients, circle.l_coefficients):
        fn.cache_clear()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = BACKENDS[request.param]
    _clear_caches()
    for user in _USERS:
        monkeypatch.setattr(user, "kernels", mod)
    yield mod
    _clear_caches()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} {detail}")
