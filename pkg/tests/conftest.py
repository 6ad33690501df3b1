from functools import lru_cache

import pytest

from abspectral import sharpconst, spectra

_CRITERIA = {}


@pytest.fixture(scope="session")
def r_table():
    """Canonical 5x5 table of R_gamma(alpha): rows gamma, columns alpha."""
    return sharpconst.r_constant_table(sharpconst.CANONICAL_ALPHAS, sharpconst.CANONICAL_GAMMAS)


@lru_cache(maxsize=None)
def _spectrum(key, alpha, lambda_max):
    return spectra.spectrum(spectra.PRESETS[key], alpha, lambda_max)


@pytest.fixture(scope="session")
def preset_spectrum():
    return _spectrum


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        previous = _CRITERIA.get(number, (text, True))
        _CRITERIA[number] = (text, previous[1] and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        text, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {text}")
