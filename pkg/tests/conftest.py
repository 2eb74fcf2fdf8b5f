import math

import numpy as np
import pytest

from octwalk.octagon import ModuleParams, admissibility_bound, build
from octwalk.walks import WalkPolicy, enumerate_spectrum

REGULAR = (2 ** -0.25, math.pi / 4)
SKEWED = (0.8, math.pi / 3)
NARROW = (0.9, math.pi / 8)
LATTICES = {"regular": REGULAR, "skewed": SKEWED, "narrow": NARROW}


def random_modules(count, seed=20240611):
    """Admissible ``(a, alpha)`` pairs drawn away from the degenerate edges."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        alpha = rng.uniform(0.2, math.pi / 2 - 0.2)
        lo = admissibility_bound(alpha) + 1e-3
        if lo >= 0.995:
            continue
        out.append((float(rng.uniform(lo, 0.995)), float(alpha)))
    return out


_geoms = {}
_spectra = {}


def geometry(a, alpha):
    key = (a, alpha)
    if key not in _geoms:
        _geoms[key] = build(ModuleParams(a, alpha))
    return _geoms[key]


def spectrum(a, alpha, n):
    key = (a, alpha, n)
    if key not in _spectra:
        _spectra[key] = enumerate_spectrum(geometry(a, alpha), WalkPolicy(n))
    return _spectra[key]


@pytest.fixture
def skewed():
    return geometry(*SKEWED)


@pytest.fixture
def regular():
    return geometry(*REGULAR)


# one PASS/FAIL line per acceptance criterion in the terminal summary
_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        name = report.nodeid.split("::")[-1]
        lines = [ln for ln in report.capstdout.splitlines() if ln.startswith(("PASS ", "FAIL "))]
        status = "PASS" if report.passed else "FAIL"
        _acceptance[name] = lines[-1] if lines else f"{status} {name}"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(_acceptance[name])
