"""Numerical checks of closed-form solutions, independent of the power rule.

The bond equation is re-evaluated with the Grünwald-Letnikov scheme at check
points away from the free end, and the free-end limits are classified from the
exponents of ``I^(2-alpha) y`` and ``D^(alpha-1) y``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from fracstar.closed_form import PowerSolution
from fracstar.errors import DegenerateError, DomainError
from fracstar.frac_ops import (
    GridSpec,
    Monomial,
    power_derivative,
    power_integral,
    rl_derivative_numeric,
    rl_integral_numeric,
)
from fracstar.model import BondSpec

__all__ = [
    "CHECK_POINTS",
    "NOISE_FLOOR",
    "RESIDUAL_TOL",
    "LeftEnd",
    "Limit",
    "ResidualReport",
    "convergence_order",
    "gl_extrapolated",
    "integral_decay_near_zero",
    "left_end_conditions",
    "ode_residual",
]

#: Certification threshold on the relative ODE residual.
RESIDUAL_TOL = 1.0e-3
CHECK_POINTS = 16
#: Check points live in ``[CHECK_START * L, L]``.
CHECK_START = 0.25
NOISE_FLOOR = 1.0e-13


class Limit(enum.Enum):
    Vanishes = "vanishes"
    Finite = "finite"
    Divergent = "divergent"


def _classify(exponent: float) -> Limit:
    if exponent > 0.0:
        return Limit.Vanishes
    if exponent == 0.0:
        return Limit.Finite
    return Limit.Divergent


@dataclass(frozen=True)
class LeftEnd:
    integral_limit_exponent: float
    derivative_limit_exponent: float
    integral_limit: Limit
    derivative_limit: Limit

    @property
    def both_vanish(self) -> bool:
        return self.integral_limit is Limit.Vanishes and self.derivative_limit is Limit.Vanishes


@dataclass(frozen=True)
class ResidualReport:
    bond_index: int
    max_rel_residual: float
    #: ``(x, numeric D^alpha y, right-hand side)`` triples.
    check_points: tuple[tuple[float, float, float], ...]
    left_end: LeftEnd

    @property
    def certified(self) -> bool:
        return self.max_rel_residual <= RESIDUAL_TOL


def left_end_conditions(solution: PowerSolution, alpha: float) -> LeftEnd:
    """Behaviour of ``I^(2-alpha) y`` and ``D^(alpha-1) y`` as ``x -> 0+``."""
    p = solution.exponent
    e_int = p + 2.0 - alpha
    e_der = p + 1.0 - alpha
    return LeftEnd(e_int, e_der, _classify(e_int), _classify(e_der))


def gl_extrapolated(f, q: float, x: float, step: float) -> float:
    """One Richardson step on Grünwald-Letnikov: ``2 D_{h/2} - D_h``."""
    coarse = rl_derivative_numeric(f, q, x, step)
    fine = rl_derivative_numeric(f, q, x, 0.5 * step)
    return 2.0 * fine - coarse


def _signed_pow(y: np.ndarray, m: float) -> np.ndarray:
    if np.all(y >= 0.0):
        return y**m
    r = round(m)
    if abs(m - r) < 1.0e-12:
        return y ** int(r)
    return np.full_like(y, np.nan)


def _rhs(bond: BondSpec, solution: PowerSolution, x: np.ndarray) -> np.ndarray:
    out = bond.lam * x**bond.beta * _signed_pow(solution(x), bond.m)
    if bond.forcing_b is not None:
        out = out + bond.forcing_b * x**bond.forcing_nu
    return out


def ode_residual(
    solution: PowerSolution,
    bond: BondSpec,
    alpha: float,
    grid: GridSpec | None = None,
) -> ResidualReport:
    """Relative residual of the bond equation at 16 points in ``[L/4, L]``.

    The left-hand side is the Richardson-extrapolated GL derivative with base
    step ``L / grid.n``; the right-hand side is evaluated pointwise. The
    residual at each point is normalised by ``max(|rhs|, 1e-30)``.
    """
    grid = grid or GridSpec()
    L = bond.length
    xs = np.linspace(CHECK_START * L, L, CHECK_POINTS)
    step = grid.step(L)
    rhs = _rhs(bond, solution, xs)

    points = []
    worst = 0.0
    for x, r in zip(xs, rhs):
        lhs = gl_extrapolated(solution, alpha, float(x), step)
        rel = float(abs(lhs - r) / max(abs(r), 1.0e-30))
        if not math.isfinite(rel):
            rel = math.inf
        worst = max(worst, rel)
        points.append((float(x), float(lhs), float(r)))
    return ResidualReport(
        bond_index=solution.bond_index,
        max_rel_residual=worst,
        check_points=tuple(points),
        left_end=left_end_conditions(solution, alpha),
    )


def integral_decay_near_zero(
    solution: PowerSolution,
    alpha: float,
    length: float,
    levels: int = 3,
    n: int = 256,
) -> list[float]:
    """Numeric ``|I^(2-alpha) y|`` at ``x = L/256, L/512, ...`` (``levels`` values).

    Each value uses its own graded mesh on ``[0, x]`` so *x* is a node.
    """
    grid = GridSpec(n=n, grading=2.0)
    out = []
    for k in range(levels):
        x = length / (256.0 * 2.0**k)
        nodes = grid.nodes(x)
        out.append(abs(rl_integral_numeric(nodes, solution(nodes), 2.0 - alpha, x)))
    return out


def _scheme_error(scheme: str, target: Monomial, q: float, x: float, level: int, base: int) -> tuple[float, float]:
    n = base * 2**level
    if scheme == "gl":
        h = x / n
        approx = rl_derivative_numeric(target, q, x, h)
        exact = power_derivative(q, target)(x)
    elif scheme == "trapezoid":
        h = x / n
        nodes = GridSpec(n=n, grading=1.0).nodes(x)
        approx = rl_integral_numeric(nodes, target(nodes), q, x)
        exact = power_integral(q, target)(x)
    elif scheme == "exact":
        h = x / n
        approx = exact = power_derivative(q, target)(x)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return h, abs(float(approx) - float(exact))


def convergence_order(
    scheme: str,
    target: Monomial,
    q: float,
    levels: int = 4,
    x: float = 1.0,
    base: int = 32,
) -> float:
    """Least-squares slope of ``log(error)`` against ``log(step)``.

    *scheme* is ``"gl"`` (derivative), ``"trapezoid"`` (integral) or
    ``"exact"`` (the power rule against itself, which always hits the noise
    floor). The step halves at each level starting from ``x / base``.
    """
    if levels < 3:
        raise DomainError("need at least 3 levels")
    if target.expo < q:
        raise DomainError(f"target exponent {target.expo!r} is below the order {q!r}")
    steps, errors = [], []
    for level in range(levels):
        h, err = _scheme_error(scheme, target, q, x, level, base)
        if err < NOISE_FLOOR:
            raise DegenerateError(f"error {err:.2e} at level {level} is at the noise floor")
        steps.append(h)
        errors.append(err)
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)
