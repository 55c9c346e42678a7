import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fracstar.errors import PoleError
from fracstar.specfun import gamma, gamma_ratio, is_pole, log_gamma, sinpi

SQRT_PI = math.sqrt(math.pi)


def mp_gamma(x):
    with mpmath.workdps(40):
        return float(mpmath.gamma(mpmath.mpf(x)))


@pytest.mark.parametrize(
    "x, expected",
    [
        (1.0, 1.0),
        (2.5, 3.0 * SQRT_PI / 4.0),
        (-1.5, 4.0 * SQRT_PI / 3.0),
        (0.5, SQRT_PI),
        (5.0, 24.0),
    ],
)
def test_gamma_known_values(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0, -1e-13, -7.0 + 5e-13])
def test_gamma_poles(x):
    assert is_pole(x)
    with pytest.raises(PoleError):
        gamma(x)
    with pytest.raises(PoleError):
        log_gamma(x)


def test_near_pole_is_not_a_pole():
    x = -2.0 + 1e-9
    assert not is_pole(x)
    assert gamma(x) == pytest.approx(mp_gamma(x), rel=1e-6)


def test_gamma_against_mpmath(rng):
    xs = rng.uniform(-50.0, 50.0, 3000)
    xs = xs[np.abs(xs - np.round(xs)) > 1e-6]
    worst = max(abs(gamma(x) - mp_gamma(x)) / abs(mp_gamma(x)) for x in xs)
    assert worst <= 1e-12


def test_negative_sign_pattern():
    # Gamma alternates sign on (-k-1, -k)
    for k in range(8):
        assert math.copysign(1.0, gamma(-k - 0.5)) == (-1.0) ** (k + 1)


def test_recurrence(rng):
    xs = rng.uniform(0.5, 40.0, 1000)
    rel = [abs(gamma(x + 1) - x * gamma(x)) / gamma(x + 1) for x in xs]
    assert max(rel) <= 1e-11


def test_reflection(rng):
    xs = rng.uniform(-10.0, 0.0, 1000)
    xs = xs[np.abs(xs - np.round(xs)) > 1e-6]
    vals = [gamma(x) * gamma(1 - x) * math.sin(math.pi * x) / math.pi for x in xs]
    assert np.allclose(vals, 1.0, rtol=0, atol=1e-9)


@given(st.floats(-49.9, 49.9))
def test_signed_log_gamma_matches_gamma(x):
    assume(not is_pole(x) and abs(x - round(x)) > 1e-9)
    lg = log_gamma(x)
    if x > 0:
        assert lg.sign == 1
    assert lg.value == pytest.approx(gamma(x), rel=1e-11)


def test_sinpi_exact_at_integers():
    assert sinpi(3.0) == 0.0
    assert sinpi(-4.0) == 0.0
    assert sinpi(0.5) == 1.0
    assert sinpi(-0.5) == -1.0


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (5.0, 3.0, 12.0),
        (2.5, 2.5, 1.0),
        # mpmath, 40 digits
        (4.75, 3.25, 6.506290560647615516581183964956505327265),
    ],
)
def test_gamma_ratio_examples(a, b, expected):
    assert gamma_ratio(a, b) == pytest.approx(expected, rel=1e-12)


def test_gamma_ratio_pole_conventions():
    assert gamma_ratio(1.5, 0.0) == 0.0
    assert gamma_ratio(1.5, -2.0) == 0.0
    with pytest.raises(PoleError):
        gamma_ratio(-1.0, 2.5)
    with pytest.raises(PoleError):
        gamma_ratio(0.0, 0.0)


def test_gamma_ratio_against_mpmath(rng):
    ab = rng.uniform(-50, 50, (2000, 2))
    ab = ab[np.all(np.abs(ab - np.round(ab)) > 1e-6, axis=1)]
    with mpmath.workdps(40):
        for a, b in ab:
            ref = float(mpmath.gamma(a) / mpmath.gamma(b))
            assert gamma_ratio(a, b) == pytest.approx(ref, rel=1e-11)


nonpole = st.floats(-49.9, 49.9).filter(lambda x: abs(x - round(x)) > 1e-9 or x > 0.5)


@given(nonpole, nonpole)
def test_gamma_ratio_reciprocal(a, b):
    assert gamma_ratio(a, b) * gamma_ratio(b, a) == pytest.approx(1.0, rel=1e-10)
