import numpy as np
import pytest

from fracstar.model import BondSpec, forcing_exponent, solution_exponent
from fracstar.specfun import gamma_ratio

_ACCEPTANCE = pytest.StashKey[list]()


def _m_draw(rng, forced):
    # |m - 1| >= 0.5 keeps a 1% amplitude error visible above the 1e-3 bar
    if rng.random() < 0.5:
        return rng.uniform(0.05, 0.5) if forced else rng.uniform(-2.0, 0.5)
    return rng.uniform(1.5, 3.0)


def draw_homogeneous(rng):
    """One admissible unforced bond and its alpha.

    alpha ~ U(1.05, 1.95), gamma_star - alpha ~ U(0.05, 0.95), lambda
    log-uniform on [0.1, 10], L ~ U(0.5, 2); beta follows from the others.
    """
    alpha = rng.uniform(1.05, 1.95)
    m = _m_draw(rng, forced=False)
    gstar = alpha + rng.uniform(0.05, 0.95)
    beta = gstar * (1.0 - m) - m * alpha
    lam = 10.0 ** rng.uniform(-1.0, 1.0)
    length = rng.uniform(0.5, 2.0)
    return BondSpec(length, beta, m, lam), alpha


def draw_forced(rng, b=None):
    """Admissible forced bond (m > 0); ``b=None`` plants the root A = 1."""
    alpha = rng.uniform(1.05, 1.95)
    m = _m_draw(rng, forced=True)
    gstar = alpha + rng.uniform(0.05, 0.95)
    beta = gstar * (1.0 - m) - m * alpha
    lam = 10.0 ** rng.uniform(-1.0, 1.0)
    length = rng.uniform(0.5, 2.0)
    nu = forcing_exponent(beta, m, alpha)
    if b is None:
        probe = BondSpec(length, beta, m, lam)
        p = solution_exponent(probe, alpha)
        b = gamma_ratio(p + 1.0, p + 1.0 - alpha) - lam
    return BondSpec(length, beta, m, lam, b, nu), alpha


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def p_star():
    """The reference bond beta=1, m=1/3, L=1, lambda=2 at alpha=1.5."""
    return BondSpec(1.0, 1.0, 1.0 / 3.0, 2.0), 1.5


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion and assert it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(label, ok, detail=""):
        lines.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        print(lines[-1])
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

