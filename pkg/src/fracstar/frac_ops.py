r"""Left-sided Riemann-Liouville operators on :math:`[0, x]`.

Two routes are provided and kept deliberately independent:

* the exact power rule on monomials,

  .. math::

      I^q t^p = \frac{\Gamma(p + 1)}{\Gamma(p + 1 + q)} x^{p + q},
      \qquad
      D^q t^p = \frac{\Gamma(p + 1)}{\Gamma(p + 1 - q)} x^{p - q},

* numerical schemes (Grünwald-Letnikov for :math:`D^q`, product trapezoidal
  quadrature on a graded mesh for :math:`I^q`) used to check the former.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fracstar.errors import DomainError
from fracstar.specfun import gamma, gamma_ratio

__all__ = [
    "GridSpec",
    "Monomial",
    "gl_weights",
    "power_derivative",
    "power_integral",
    "rl_derivative_numeric",
    "rl_integral_numeric",
]


@dataclass(frozen=True)
class Monomial:
    """``coef * x**expo`` on :math:`x > 0`."""

    coef: float
    expo: float

    def __call__(self, x):
        return self.coef * np.asarray(x, dtype=float) ** self.expo

    @property
    def is_zero(self) -> bool:
        return self.coef == 0.0


@dataclass(frozen=True)
class GridSpec:
    """Graded mesh ``x_k = L * (k / n)**grading`` for ``k = 0..n``."""

    n: int = 4096
    grading: float = 2.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8:
            raise DomainError(f"grid needs an integer n >= 8, got {self.n!r}")
        if not self.grading >= 1.0:
            raise DomainError(f"grid grading must be >= 1, got {self.grading!r}")

    def nodes(self, length: float) -> np.ndarray:
        k = np.arange(self.n + 1, dtype=float)
        x = length * (k / self.n) ** self.grading
        x[-1] = length
        return x

    def step(self, length: float) -> float:
        """Uniform step used by the Grünwald-Letnikov scheme on ``[0, length]``."""
        return length / self.n


def _check_expo(mono: Monomial) -> None:
    if not mono.expo > -1.0:
        raise DomainError(f"monomial exponent must exceed -1, got {mono.expo!r}")


def power_integral(q: float, mono: Monomial) -> Monomial:
    if not q > 0:
        raise DomainError(f"integral order must be positive, got {q!r}")
    _check_expo(mono)
    p = mono.expo
    return Monomial(mono.coef * gamma_ratio(p + 1.0, p + 1.0 + q), p + q)


def power_derivative(q: float, mono: Monomial) -> Monomial:
    """Exact RL derivative of a monomial.

    When ``expo + 1 - q`` is a non-positive integer the result is the zero
    monomial (``x**(q-1)``, ``x**(q-2)``, ... span the kernel of :math:`D^q`).
    """
    if not q > 0:
        raise DomainError(f"derivative order must be positive, got {q!r}")
    _check_expo(mono)
    p = mono.expo
    return Monomial(mono.coef * gamma_ratio(p + 1.0, p + 1.0 - q), p - q)


def gl_weights(q: float, n: int) -> np.ndarray:
    """Grünwald-Letnikov weights ``(-1)**k * binom(q, k)`` for ``k = 0..n``."""
    k = np.arange(1, n + 1, dtype=float)
    w = np.empty(n + 1)
    w[0] = 1.0
    w[1:] = np.cumprod(1.0 - (q + 1.0) / k)
    return w


def rl_derivative_numeric(
    f: Callable[[np.ndarray], np.ndarray],
    q: float,
    x: float,
    step: float,
) -> float:
    """First-order Grünwald-Letnikov approximation of :math:`(D^q f)(x)`.

    *f* must accept a numpy array. The sum runs over ``floor(x / step) + 1``
    samples ``f(x - k * step)``, so it reaches back to (close to) the origin.
    """
    if not 0.0 < q < 2.0:
        raise DomainError(f"derivative order must lie in (0, 2), got {q!r}")
    if not step > 0:
        raise DomainError(f"step must be positive, got {step!r}")
    # tiny slack so x = n * step does not lose its last node to rounding
    nsteps = int(math.floor(x / step * (1.0 + 1.0e-12)))
    if nsteps < 8:
        raise DomainError(f"need x/step >= 8, got {x / step:.3g}")

    k = np.arange(nsteps + 1, dtype=float)
    samples = np.asarray(f(np.maximum(x - k * step, 0.0)), dtype=float)
    return float(np.dot(gl_weights(q, nsteps), samples) / step**q)


def rl_integral_numeric(
    nodes: np.ndarray,
    samples: np.ndarray,
    q: float,
    x: float,
) -> float:
    """Product-trapezoidal value of :math:`(I^q f)(x)` at a mesh node *x*.

    The kernel :math:`(x - t)^{q - 1}` is integrated exactly against the
    piecewise-linear interpolant of *samples*, so linear data is reproduced to
    rounding error.
    """
    if not q > 0:
        raise DomainError(f"integral order must be positive, got {q!r}")
    nodes = np.asarray(nodes, dtype=float)
    samples = np.asarray(samples, dtype=float)
    hits = np.flatnonzero(np.isclose(nodes, x, rtol=1.0e-13, atol=0.0))
    if hits.size == 0:
        raise DomainError(f"x={x!r} is not a mesh node")
    i = int(hits[0])
    if i == 0:
        return 0.0

    x = nodes[i]
    u = x - nodes[: i + 1]
    u0, u1 = u[:-1], u[1:]
    h = u0 - u1
    # moments of (x - t)**(q - 1) against 1 and (t - t_j) on each panel
    m0 = (u0**q - u1**q) / q
    m1 = u0 * m0 - (u0 ** (q + 1.0) - u1 ** (q + 1.0)) / (q + 1.0)
    right = m1 / h
    left = m0 - right
    total = np.dot(left, samples[:i]) + np.dot(right, samples[1 : i + 1])
    return float(total / gamma(q))
