"""Problem description for a fractional equation on a metric star graph.

Every bond ``j`` carries a coordinate ``x in [0, L_j]`` with the free end at
``x = 0`` and the shared branch vertex at ``x = L_j``. Bond 1 is the
incoming side of the Kirchhoff balance, ``k_1 = k_2 + ... + k_N``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from fracstar.errors import DomainError

__all__ = [
    "BondSpec",
    "Kind",
    "Severity",
    "StarGraphProblem",
    "Violation",
    "forcing_exponent",
    "has_errors",
    "gamma_star",
    "solution_exponent",
    "validate",
]

#: Tolerance on the forcing-exponent constraint.
NU_TOL = 1.0e-12


class Kind(enum.Enum):
    #: ``D^a y = lam x^beta y^m``
    Homogeneous = "homogeneous"
    #: ``D^a y = lam x^beta y^m + b x^nu``
    Forced = "forced"


class Severity(enum.Enum):
    Warning = "warning"
    Error = "error"


@dataclass(frozen=True)
class BondSpec:
    length: float
    beta: float
    m: float
    lam: float
    forcing_b: float | None = None
    forcing_nu: float | None = None

    @property
    def is_forced(self) -> bool:
        return self.forcing_b is not None


@dataclass(frozen=True)
class StarGraphProblem:
    alpha: float
    bonds: tuple[BondSpec, ...]
    kind: Kind = Kind.Homogeneous

    def __post_init__(self):
        object.__setattr__(self, "bonds", tuple(self.bonds))

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    def with_bonds(self, bonds) -> "StarGraphProblem":
        return StarGraphProblem(self.alpha, tuple(bonds), self.kind)


@dataclass(frozen=True)
class Violation:
    #: 1-based bond index, or ``None`` for problem-level constraints.
    bond_index: int | None
    constraint: str
    value: object
    severity: Severity = field(default=Severity.Error)

    def __str__(self) -> str:
        where = "problem" if self.bond_index is None else f"bond {self.bond_index}"
        return f"{self.severity.value}: {where}: {self.constraint} (got {self.value!r})"


def gamma_star(bond: BondSpec, alpha: float) -> float:
    """``(beta + m * alpha) / (1 - m)``, the weight index of the solution space."""
    if bond.m == 1.0:
        raise DomainError("m must differ from 1")
    return (bond.beta + bond.m * alpha) / (1.0 - bond.m)


def solution_exponent(bond: BondSpec, alpha: float) -> float:
    """Exponent ``p = (beta + alpha) / (1 - m)`` of the power-law solution."""
    if bond.m == 1.0:
        raise DomainError("m must differ from 1")
    return (bond.beta + alpha) / (1.0 - bond.m)


def forcing_exponent(beta: float, m: float, alpha: float) -> float:
    """Forcing exponent for which a pure power solves the forced equation."""
    if m == 1.0:
        raise DomainError("m must differ from 1")
    return (beta + m * alpha) / (1.0 - m)


def _finite(*values) -> bool:
    return all(isinstance(v, (int, float)) and math.isfinite(v) for v in values)


def _bond_violations(j: int, bond: BondSpec, alpha: float, kind: Kind) -> list[Violation]:
    out = []
    err = Severity.Error

    if not _finite(bond.length, bond.beta, bond.m, bond.lam):
        out.append(Violation(j, "bond parameters must be finite numbers", bond, err))
        return out
    if not bond.length > 0:
        out.append(Violation(j, "length > 0", bond.length, err))
    if bond.m == 1.0:
        out.append(Violation(j, "m != 1", bond.m, err))
    if bond.lam == 0.0:
        out.append(Violation(j, "lambda != 0", bond.lam, err))

    if kind is Kind.Forced:
        if not bond.m > 0:
            out.append(Violation(j, "forced equation needs m > 0", bond.m, err))
        if bond.forcing_b is None or bond.forcing_nu is None:
            out.append(Violation(j, "forced equation needs both b and nu", (bond.forcing_b, bond.forcing_nu), err))
        elif not _finite(bond.forcing_b, bond.forcing_nu):
            out.append(Violation(j, "b and nu must be finite", (bond.forcing_b, bond.forcing_nu), err))
        elif bond.m != 1.0 and _finite(alpha):
            nu = forcing_exponent(bond.beta, bond.m, alpha)
            if abs(bond.forcing_nu - nu) > NU_TOL * max(1.0, abs(nu)):
                out.append(Violation(j, f"nu = (beta + m*alpha)/(1 - m) = {nu!r}", bond.forcing_nu, err))
    elif bond.forcing_b is not None or bond.forcing_nu is not None:
        out.append(Violation(j, "b and nu are only valid for a forced problem", (bond.forcing_b, bond.forcing_nu), err))

    if bond.m != 1.0 and _finite(alpha):
        excess = gamma_star(bond, alpha) - alpha
        if not 0.0 < excess < 1.0:
            out.append(Violation(j, "0 < gamma_star - alpha < 1", excess, Severity.Warning))
    return out


def validate(problem: StarGraphProblem) -> list[Violation]:
    """Check every invariant; an empty list means the problem is admissible.

    Only the admissibility window ``0 < gamma_star - alpha < 1`` is reported as
    a warning, since the closed-form construction still goes through outside
    it. Everything else is an error.
    """
    out = []
    alpha = problem.alpha
    if not _finite(alpha) or not 1.0 < alpha < 2.0:
        out.append(Violation(None, "alpha out of (1,2)", alpha))
    if not isinstance(problem.kind, Kind):
        out.append(Violation(None, "kind must be homogeneous or forced", problem.kind))
        return out
    if len(problem.bonds) < 2:
        out.append(Violation(None, "a star graph needs at least 2 bonds", len(problem.bonds)))
    for j, bond in enumerate(problem.bonds, start=1):
        out.extend(_bond_violations(j, bond, alpha, problem.kind))
    return out


def has_errors(violations: list[Violation]) -> bool:
    return any(v.severity is Severity.Error for v in violations)
