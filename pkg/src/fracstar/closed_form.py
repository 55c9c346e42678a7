r"""Exact power-law solutions ``y(x) = A x**p`` on a single bond.

With ``p = (beta + alpha) / (1 - m)`` the power rule turns the bond equation
into an algebraic one for the amplitude ``A``. Without forcing it is solved
explicitly,

.. math::

    A = \left[\frac{\Gamma(p + 1)}{\lambda\,\Gamma(p + 1 - \alpha)}\right]^{1/(m - 1)},

and with forcing ``b x**nu`` (``nu = p - alpha``) ``A`` is a root of

.. math::

    \Gamma(p + 1 - \alpha)(\lambda A^m + b) - \Gamma(p + 1) A = 0 .
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import brentq

from fracstar.errors import BranchError, DomainError, NoRootError
from fracstar.frac_ops import Monomial, power_derivative
from fracstar.model import BondSpec, StarGraphProblem, gamma_star, solution_exponent
from fracstar.specfun import gamma, gamma_ratio

__all__ = [
    "DEFAULT_BRACKET",
    "DEFAULT_PANELS",
    "PowerSolution",
    "amplitude_forced",
    "amplitude_homogeneous",
    "build_solution",
    "build_solutions",
    "frac_derivative_of_solution",
    "real_power",
    "treq_residual",
]

DEFAULT_BRACKET = (1.0e-8, 1.0e8)
DEFAULT_PANELS = 256
_INT_TOL = 1.0e-12

#: ``"smallest"``, ``"largest"`` or an index into the ascending root list.
AmplitudeChoice = Union[str, int]


@dataclass(frozen=True)
class PowerSolution:
    amplitude: float
    exponent: float
    bond_index: int = 1

    def __post_init__(self):
        if not self.exponent > -1.0:
            raise DomainError(f"solution exponent must exceed -1, got {self.exponent!r}")

    def __call__(self, x):
        return self.amplitude * np.asarray(x, dtype=float) ** self.exponent

    def as_monomial(self) -> Monomial:
        return Monomial(self.amplitude, self.exponent)


def _integer_or_none(e: float) -> int | None:
    r = round(e)
    return int(r) if abs(e - r) < _INT_TOL else None


def real_power(base: float, exponent: float) -> float:
    """Real principal value of ``base**exponent``.

    Negative bases are accepted only for integer exponents.
    """
    if base > 0.0:
        return base**exponent
    k = _integer_or_none(exponent)
    if base == 0.0:
        if exponent > 0.0:
            return 0.0
        raise BranchError(f"0 ** {exponent!r} is not finite")
    if k is None:
        raise BranchError(f"no real value for ({base!r}) ** {exponent!r}")
    return (-1.0) ** (k % 2) * abs(base) ** k


def amplitude_homogeneous(bond: BondSpec, alpha: float) -> float:
    p = solution_exponent(bond, alpha)
    base = gamma_ratio(p + 1.0, gamma_star(bond, alpha) + 1.0) / bond.lam
    return real_power(base, 1.0 / (bond.m - 1.0))


def _forcing(bond: BondSpec) -> float:
    if bond.forcing_b is None:
        raise DomainError("bond has no forcing term")
    return bond.forcing_b


def _amp_pow(a: np.ndarray, m: float) -> np.ndarray:
    if np.any(a < 0.0):
        k = _integer_or_none(m)
        if k is None:
            raise DomainError(f"negative amplitude with non-integer m={m!r}")
        return a**k
    return a**m


def treq_residual(A: float, bond: BondSpec, alpha: float) -> float:
    """Amplitude equation residual ``G(p+1-a) (lam A^m + b) - G(p+1) A``."""
    return float(_treq(np.asarray(A, dtype=float), bond, alpha))


def _treq(a: np.ndarray, bond: BondSpec, alpha: float) -> np.ndarray:
    b = _forcing(bond)
    p = solution_exponent(bond, alpha)
    g_low = gamma(p + 1.0 - alpha)
    g_high = gamma(p + 1.0)
    return g_low * (bond.lam * _amp_pow(a, bond.m) + b) - g_high * a


def amplitude_forced(
    bond: BondSpec,
    alpha: float,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
    panels: int = DEFAULT_PANELS,
) -> list[float]:
    """All sign-change roots of the amplitude equation in *bracket*, ascending.

    The bracket is cut into *panels* log-spaced subintervals; every sign
    change is refined with Brent's method.

    :raises NoRootError: no sign change anywhere in the bracket; the scan is
        attached as ``trace``.
    """
    lo, hi = bracket
    if not 0.0 < lo < hi:
        raise DomainError(f"bracket must satisfy 0 < lo < hi, got {bracket!r}")
    grid = np.geomspace(lo, hi, panels + 1)
    vals = _treq(grid, bond, alpha)

    roots = _scan(grid, vals, bond, alpha, depth=_REFINE_DEPTH)
    if not roots:
        raise NoRootError(
            f"no sign change of the amplitude equation on [{lo:g}, {hi:g}]",
            trace=list(zip(grid.tolist(), vals.tolist())),
        )
    return sorted(set(roots))


_REFINE_DEPTH = 2
_REFINE_PANELS = 64


def _scan(grid: np.ndarray, vals: np.ndarray, bond: BondSpec, alpha: float, depth: int) -> list[float]:
    def f(a):
        return float(_treq(np.float64(a), bond, alpha))

    roots = [float(a) for a, v in zip(grid, vals) if v == 0.0]
    for i in range(len(grid) - 1):
        if vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=1.0e-300, rtol=4.0 * np.finfo(float).eps, maxiter=500))
    if depth == 0:
        return roots

    # a dip of |f| without a sign change may hide a pair of close roots
    mag = np.abs(vals)
    for i in range(1, len(grid) - 1):
        if vals[i - 1] * vals[i + 1] > 0.0 and vals[i] * vals[i - 1] > 0.0 and mag[i] < mag[i - 1] and mag[i] < mag[i + 1]:
            sub = np.geomspace(grid[i - 1], grid[i + 1], 2 * _REFINE_PANELS + 1)
            roots += _scan(sub, _treq(sub, bond, alpha), bond, alpha, depth - 1)
    return roots


def _select(roots: list[float], choice: AmplitudeChoice) -> float:
    if choice == "smallest":
        return roots[0]
    if choice == "largest":
        return roots[-1]
    if isinstance(choice, int):
        return roots[choice]
    raise ValueError(f"unknown amplitude choice {choice!r}")


def build_solution(
    bond: BondSpec,
    alpha: float,
    amplitude_choice: AmplitudeChoice = "smallest",
    bond_index: int = 1,
    bracket: tuple[float, float] = DEFAULT_BRACKET,
) -> PowerSolution:
    p = solution_exponent(bond, alpha)
    if bond.is_forced:
        amp = _select(amplitude_forced(bond, alpha, bracket), amplitude_choice)
    else:
        amp = amplitude_homogeneous(bond, alpha)
    return PowerSolution(amp, p, bond_index)


def build_solutions(
    problem: StarGraphProblem,
    amplitude_choice: AmplitudeChoice = "smallest",
) -> list[PowerSolution]:
    return [
        build_solution(bond, problem.alpha, amplitude_choice, bond_index=j)
        for j, bond in enumerate(problem.bonds, start=1)
    ]


def frac_derivative_of_solution(sol: PowerSolution, q: float) -> Monomial:
    return power_derivative(q, sol.as_monomial())

