r"""Matching conditions at the branch vertex.

For solutions ``y_j = A_j x**p_j`` the vertex conditions are written through
the weighted traces and fluxes

.. math::

    c_j = \lambda_j^{1/(m_j - 1)} y_j(L_j), \qquad
    k_j = \lambda_j^{m_j/(m_j - 1)} (D^{\alpha - 1} y_j)(L_j),

and require ``c_1 = c_2 = ... = c_N`` and ``k_1 = k_2 + ... + k_N``. The flux
is taken from the power rule applied to ``y_j`` directly. A commonly quoted
closed form of these coefficients carries different powers of ``L_j``;
:func:`kirchhoff_coefficients` evaluates it too (``form="printed"``) so the
two can be compared.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from fracstar.closed_form import (
    AmplitudeChoice,
    PowerSolution,
    build_solution,
    build_solutions,
    real_power,
)
from fracstar.errors import (
    BranchError,
    CompatibilityError,
    DegenerateError,
    DomainError,
    FracStarError,
    NoRootError,
)
from fracstar.model import BondSpec, Kind, StarGraphProblem, gamma_star, solution_exponent
from fracstar.specfun import gamma_ratio

__all__ = [
    "CLOSED_FORM_TOL",
    "SOLVED_TOL",
    "ForcedStatus",
    "ForcedVertexResult",
    "LambdaAssignment",
    "VertexResiduals",
    "continuity_values",
    "kirchhoff_coefficients",
    "kirchhoff_terms",
    "solve_lambdas_homogeneous",
    "solve_lengths_homogeneous",
    "solve_vertex_forced",
    "vertex_residuals",
    "with_lambdas",
    "with_lengths",
]

#: Relative tolerance for closed-form vertex constructions.
CLOSED_FORM_TOL = 1.0e-12
#: Relative tolerance for declaring a root-found vertex system solved.
SOLVED_TOL = 1.0e-9


@dataclass(frozen=True)
class VertexResiduals:
    #: ``c_j - c_1`` for ``j = 2..N``.
    continuity_gaps: tuple[float, ...]
    #: ``k_1 - (k_2 + ... + k_N)``.
    kirchhoff_gap: float
    #: ``max |c_j|``.
    scale: float
    #: ``max |k_j|``.
    flux_scale: float = 1.0

    @property
    def max_rel_continuity(self) -> float:
        if not self.continuity_gaps:
            return 0.0
        return max(abs(g) for g in self.continuity_gaps) / (self.scale or 1.0)

    @property
    def rel_kirchhoff(self) -> float:
        return abs(self.kirchhoff_gap) / (self.flux_scale or 1.0)

    def satisfied(self, rtol: float = SOLVED_TOL) -> bool:
        return self.max_rel_continuity <= rtol and self.rel_kirchhoff <= rtol


def continuity_values(problem: StarGraphProblem, solutions: list[PowerSolution]) -> list[float]:
    if len(solutions) != problem.n_bonds:
        raise ValueError("need exactly one solution per bond")
    return [
        real_power(b.lam, 1.0 / (b.m - 1.0)) * s.amplitude * b.length**s.exponent
        for b, s in zip(problem.bonds, solutions)
    ]


def _flux(bond: BondSpec, sol: PowerSolution, alpha: float) -> float:
    p = sol.exponent
    weight = real_power(bond.lam, bond.m / (bond.m - 1.0))
    return weight * sol.amplitude * gamma_ratio(p + 1.0, p + 2.0 - alpha) * bond.length ** (p + 1.0 - alpha)


def kirchhoff_terms(problem: StarGraphProblem, solutions: list[PowerSolution]) -> list[float]:
    """Weighted fluxes ``k_j`` from ``D^(alpha-1)`` of each solution at ``L_j``."""
    if len(solutions) != problem.n_bonds:
        raise ValueError("need exactly one solution per bond")
    return [_flux(b, s, problem.alpha) for b, s in zip(problem.bonds, solutions)]


def _residuals(c: list[float], k: list[float]) -> VertexResiduals:
    return VertexResiduals(
        continuity_gaps=tuple(cj - c[0] for cj in c[1:]),
        kirchhoff_gap=k[0] - math.fsum(k[1:]),
        scale=max(abs(v) for v in c),
        flux_scale=max(abs(v) for v in k),
    )


def vertex_residuals(
    problem: StarGraphProblem,
    solutions: list[PowerSolution] | None = None,
    amplitude_choice: AmplitudeChoice = "smallest",
) -> VertexResiduals:
    if solutions is None:
        solutions = build_solutions(problem, amplitude_choice)
    return _residuals(continuity_values(problem, solutions), kirchhoff_terms(problem, solutions))


def with_lengths(problem: StarGraphProblem, lengths) -> StarGraphProblem:
    return problem.with_bonds(
        BondSpec(L, b.beta, b.m, b.lam, b.forcing_b, b.forcing_nu) for b, L in zip(problem.bonds, lengths)
    )


def with_lambdas(problem: StarGraphProblem, lambdas) -> StarGraphProblem:
    return problem.with_bonds(
        BondSpec(b.length, b.beta, b.m, lam, b.forcing_b, b.forcing_nu) for b, lam in zip(problem.bonds, lambdas)
    )


def _trace_factor(bond: BondSpec, alpha: float) -> float:
    # lambda-free part of c_j in the unforced case
    p = solution_exponent(bond, alpha)
    return real_power(gamma_ratio(p + 1.0, gamma_star(bond, alpha) + 1.0), 1.0 / (bond.m - 1.0))


def solve_lengths_homogeneous(problem: StarGraphProblem, length_1: float | None = None) -> list[float]:
    """Lengths ``L_2..L_N`` that make the weighted traces continuous.

    Without forcing ``c_j = C_j L_j**p_j`` does not depend on ``lambda_j``, so
    ``L_j = (c_1 / C_j)**(1/p_j)``. Bond 1 keeps *length_1* (default: its
    current length).
    """
    if problem.kind is not Kind.Homogeneous:
        raise DomainError("length solve applies to the unforced equation only")
    alpha = problem.alpha
    first = problem.bonds[0]
    L1 = first.length if length_1 is None else float(length_1)
    c1 = _trace_factor(first, alpha) * L1 ** solution_exponent(first, alpha)

    lengths = [L1]
    for j, bond in enumerate(problem.bonds[1:], start=2):
        p = solution_exponent(bond, alpha)
        if p == 0.0:
            raise DegenerateError(f"bond {j}: exponent 0, trace does not depend on length")
        ratio = c1 / _trace_factor(bond, alpha)
        if not ratio > 0.0:
            raise BranchError(f"bond {j}: trace ratio {ratio!r} is not positive")
        lengths.append(ratio ** (1.0 / p))
    return lengths


@dataclass(frozen=True)
class LambdaAssignment:
    #: ``lambda_1..lambda_N``, with ``lambda_1`` as given.
    lambdas: tuple[float, ...]
    #: ``K_j = k_j / lambda_j``; any ``lambda`` with ``K_1 l_1 = sum K_j l_j`` works.
    flux_coefficients: tuple[float, ...]


def solve_lambdas_homogeneous(problem: StarGraphProblem, lam_1: float | None = None) -> LambdaAssignment:
    """Solve the Kirchhoff rule for ``lambda_2..lambda_N``.

    Fluxes are linear in ``lambda_j``, ``k_j = K_j lambda_j``, so the rule
    is a single hyperplane. With more than one unknown the flux of bond 1 is
    split equally among the others.
    """
    if problem.kind is not Kind.Homogeneous:
        raise DomainError("linear lambda solve applies to the unforced equation only")
    solutions = build_solutions(problem)
    res = vertex_residuals(problem, solutions)
    if res.max_rel_continuity > SOLVED_TOL:
        raise CompatibilityError(
            f"weighted continuity gap {res.max_rel_continuity:.3e} (relative) exceeds {SOLVED_TOL:g}; "
            "adjust the lengths first (see solve_lengths_homogeneous)"
        )

    fluxes = kirchhoff_terms(problem, solutions)
    K = [k / b.lam for k, b in zip(fluxes, problem.bonds)]
    for j, Kj in enumerate(K, start=1):
        if Kj == 0.0 or not math.isfinite(Kj):
            raise DegenerateError(f"bond {j}: flux coefficient {Kj!r}")

    lam1 = problem.bonds[0].lam if lam_1 is None else float(lam_1)
    share = K[0] * lam1 / (problem.n_bonds - 1)
    lambdas = (lam1, *(share / Kj for Kj in K[1:]))
    return LambdaAssignment(lambdas=lambdas, flux_coefficients=tuple(K))


def kirchhoff_coefficients(problem: StarGraphProblem, form: str = "derived") -> list[float]:
    """Per-bond flux coefficients, derived or in the alternative printed form.

    ``"derived"`` returns ``k_j`` exactly as :func:`kirchhoff_terms`. The
    ``"printed"`` form uses ``L**(p+1)`` in place of ``L**(p+1-alpha)`` for the
    unforced case, and ``Gamma(p+1)/Gamma(p+1-alpha) * L**(p-alpha)`` (the
    coefficient of ``D^alpha``) for the forced one. They coincide up to a
    factor common to all bonds when every bond shares ``(alpha, beta, m, L)``.
    """
    solutions = build_solutions(problem)
    if form == "derived":
        return kirchhoff_terms(problem, solutions)
    if form != "printed":
        raise ValueError(f"unknown form {form!r}")

    alpha = problem.alpha
    out = []
    for b, s in zip(problem.bonds, solutions):
        p = s.exponent
        weight = real_power(b.lam, b.m / (b.m - 1.0))
        if problem.kind is Kind.Homogeneous:
            out.append(weight * s.amplitude * gamma_ratio(p + 1.0, p + 2.0 - alpha) * b.length ** (p + 1.0))
        else:
            out.append(weight * s.amplitude * gamma_ratio(p + 1.0, p + 1.0 - alpha) * b.length ** (p - alpha))
    return out


class ForcedStatus(enum.Enum):
    Solved = "solved"
    Incompatible = "incompatible"
    Failed = "failed"


@dataclass(frozen=True)
class ForcedVertexResult:
    lambdas: tuple[float, ...]
    status: ForcedStatus
    residuals: VertexResiduals | None = None
    solutions: tuple[PowerSolution, ...] = ()
    failures: tuple[str, ...] = field(default=())


def _trace_at(bond: BondSpec, lam: float, alpha: float, choice: AmplitudeChoice) -> float:
    trial = BondSpec(bond.length, bond.beta, bond.m, lam, bond.forcing_b, bond.forcing_nu)
    sol = build_solution(trial, alpha, choice)
    return real_power(lam, 1.0 / (bond.m - 1.0)) * sol.amplitude * bond.length**sol.exponent


def _continuity_root(
    j: int,
    bond: BondSpec,
    alpha: float,
    target: float,
    guess: float,
    choice: AmplitudeChoice,
    decades: float,
    points: int,
) -> float:
    def g(lam: float) -> float:
        try:
            return _trace_at(bond, lam, alpha, choice) - target
        except FracStarError:
            return math.nan

    sign = 1.0 if guess > 0 else -1.0
    mags = np.geomspace(abs(guess) * 10.0**-decades, abs(guess) * 10.0**decades, points)
    lams = sign * mags
    vals = [g(lam) for lam in lams]
    tol = SOLVED_TOL * max(abs(target), np.finfo(float).tiny)

    candidates = []
    for i in range(points - 1):
        v0, v1 = vals[i], vals[i + 1]
        if not (math.isfinite(v0) and math.isfinite(v1)):
            continue
        if v0 == 0.0:
            candidates.append(lams[i])
        elif v0 * v1 < 0.0:
            try:
                root = brentq(g, lams[i], lams[i + 1], xtol=1.0e-300, rtol=4.0 * np.finfo(float).eps, maxiter=500)
            except ValueError:
                continue
            # a sign flip across a jump between amplitude branches is not a root
            if abs(g(root)) <= tol:
                candidates.append(root)
    if math.isfinite(vals[-1]) and vals[-1] == 0.0:
        candidates.append(lams[-1])
    if not candidates:
        raise NoRootError(
            f"bond {j}: no lambda in +-{decades:g} decades of {guess:g} matches the weighted trace {target:g}",
            trace=[(float(x), float(v)) for x, v in zip(lams, vals)],
        )
    return float(min(candidates, key=lambda lam: abs(math.log(abs(lam) / abs(guess)))))


def solve_vertex_forced(
    problem: StarGraphProblem,
    lam_1: float | None = None,
    initial_guesses: list[float] | None = None,
    amplitude_choice: AmplitudeChoice = "smallest",
    decades: float = 3.0,
    points: int = 121,
) -> ForcedVertexResult:
    """Solve the vertex conditions of the forced problem for ``lambda_2..lambda_N``.

    Each ``lambda_j`` is fixed by continuity alone (a scalar root search in
    which the amplitude is re-solved at every trial value). The Kirchhoff rule
    is then only checked: the system is overdetermined, so a generic problem
    comes back ``Incompatible`` with its gap.
    """
    if problem.kind is not Kind.Forced:
        raise DomainError("forced vertex solve needs a forced problem")
    alpha = problem.alpha
    first = problem.bonds[0]
    lam1 = first.lam if lam_1 is None else float(lam_1)
    guesses = list(initial_guesses) if initial_guesses is not None else [b.lam for b in problem.bonds[1:]]
    if len(guesses) != problem.n_bonds - 1:
        raise ValueError("need one initial guess per bond 2..N")

    try:
        target = _trace_at(first, lam1, alpha, amplitude_choice)
    except FracStarError as exc:
        return ForcedVertexResult(lambdas=(lam1,), status=ForcedStatus.Failed, failures=(f"bond 1: {exc}",))

    lambdas = [lam1]
    failures = []
    for j, (bond, guess) in enumerate(zip(problem.bonds[1:], guesses), start=2):
        try:
            lambdas.append(_continuity_root(j, bond, alpha, target, guess, amplitude_choice, decades, points))
        except NoRootError as exc:
            failures.append(str(exc))
            lambdas.append(math.nan)
    if failures:
        return ForcedVertexResult(lambdas=tuple(lambdas), status=ForcedStatus.Failed, failures=tuple(failures))

    solved = with_lambdas(problem, lambdas)
    solutions = build_solutions(solved, amplitude_choice)
    res = vertex_residuals(solved, solutions)
    status = ForcedStatus.Solved if res.satisfied(SOLVED_TOL) else ForcedStatus.Incompatible
    return ForcedVertexResult(
        lambdas=tuple(lambdas),
        status=status,
        residuals=res,
        solutions=tuple(solutions),
    )
