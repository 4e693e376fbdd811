import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "deterministic",
    derandomize=True,
    deadline=None,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("QECLAB_HYPOTHESIS_PROFILE", "deterministic"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# Acceptance results, printed as one line per criterion at the end of the run.
ACCEPTANCE: dict = {}


@pytest.fixture
def report():
    def record(criterion: int, ok: bool, detail: str):
        ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        entries = ACCEPTANCE[crit]
        ok = all(e[0] for e in entries)
        shown = [d for good, d in entries if not good] if not ok else [d for _, d in entries]
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}  " + "; ".join(shown))
