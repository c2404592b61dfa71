"""Shared fixtures: seeded potentials, common configurations, and the
acceptance summary hook that prints one PASS/FAIL line per criterion."""

import numpy as np
import pytest

from frozen_spectral import PI, Potential, ProblemConfig, potential_from_samples

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one summary line per acceptance criterion, then assert it.

    Usage: acceptance(n, "description", ok, detail="...").  The collected
    lines are printed after the test session in criterion order.
    """

    def record(number: int, description: str, ok: bool, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        line = f"[ACCEPTANCE {number}] {status} - {description}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE_LINES.append((number, line))
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


def make_band_limited(seed: int, M: int = 256, kmax: int = 4,
                      sup: float = 1.0) -> Potential:
    """Random trigonometric polynomial scaled to the requested sup norm."""
    g = np.random.default_rng(seed)
    xs = np.linspace(0.0, PI, M + 1)
    vals = np.zeros(M + 1)
    for k in range(kmax + 1):
        vals += g.normal() * np.cos(k * xs)
        if k:
            vals += g.normal() * np.sin(k * xs)
    peak = float(np.max(np.abs(vals)))
    if peak == 0.0:
        peak = 1.0
    return potential_from_samples(vals * (sup / peak), M)


def random_config(seed: int, n_max: int = 5) -> ProblemConfig:
    g = np.random.default_rng(seed)
    n = int(g.integers(1, n_max + 1))
    pts = np.sort(g.uniform(0.15, PI - 0.15, size=n))
    while np.any(np.diff(pts) < 0.05):
        pts = np.sort(g.uniform(0.15, PI - 0.15, size=n))
    alpha = int(g.integers(0, 2))
    beta = int(g.integers(0, 2))
    return ProblemConfig(tuple(float(p) for p in pts), alpha, beta)


@pytest.fixture
def band_limited():
    return make_band_limited


@pytest.fixture
def zero_q():
    return potential_from_samples(np.zeros(65), 64)


@pytest.fixture
def one_q():
    return potential_from_samples(np.ones(65), 64)


@pytest.fixture
def cos_q():
    xs = np.linspace(0.0, PI, 257)
    return potential_from_samples(np.cos(xs), 256)


@pytest.fixture
def cfg_half():
    """One frozen point at the midpoint, Dirichlet-Dirichlet."""
    return ProblemConfig((PI / 2.0,), 0, 0)


@pytest.fixture
def cfg_two():
    """Two frozen points at 1 and 2, Dirichlet-Dirichlet."""
    return ProblemConfig((1.0, 2.0), 0, 0)
