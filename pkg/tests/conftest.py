import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fingeo import egg as eg  # noqa: E402


@pytest.fixture(scope="session")
def ovoid72():
    """Classical pseudo-ovoid of PG(7,2): 17 lines."""
    return eg.classical_pseudo_ovoid(2, 2)


@pytest.fixture(scope="session")
def ovoid73():
    """Classical pseudo-ovoid of PG(7,3): 82 lines."""
    return eg.classical_pseudo_ovoid(2, 3)


@pytest.fixture(scope="session")
def conic52():
    """Pseudo-conic of PG(5,2): 5 lines."""
    return eg.pseudo_conic(2, 2)


# ---------------------------------------------------------------- acceptance report

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Records one PASS/FAIL line per acceptance criterion.

    Usage: ``with criterion(3, "label", limit=300): ...``.  The block fails
    if it raises or runs past ``limit`` seconds.
    """
    import contextlib
    import time

    lines = request.config.stash.setdefault(_LINES, [])

    @contextlib.contextmanager
    def record(number, label, limit):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < limit
            verdict = "PASS" if ok and within else "FAIL"
            note = "" if within else " (over time limit)"
            line = f"criterion {number:2d} {verdict}  {elapsed:7.2f}s / {limit}s  {label}{note}"
            lines.append(line)
            print(line)
        assert within, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
