"""validate / solve / verify / sweep / demo workflows behind the CLI.

Each workflow returns an :class:`Outcome`: a JSON-ready document, a CSV table,
diagnostics for the error stream and an exit code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from fracstar.closed_form import build_solutions
from fracstar.errors import CompatibilityError, FracStarError
from fracstar.frac_ops import GridSpec
from fracstar.model import (
    BondSpec,
    Kind,
    StarGraphProblem,
    forcing_exponent,
    has_errors,
    validate,
)
from fracstar.verify import integral_decay_near_zero, ode_residual
from fracstar.vertex import (
    CLOSED_FORM_TOL,
    SOLVED_TOL,
    ForcedStatus,
    continuity_values,
    kirchhoff_terms,
    solve_lambdas_homogeneous,
    solve_vertex_forced,
    vertex_residuals,
    with_lambdas,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4

#: Fixed column order of the per-bond CSV table.
BOND_COLUMNS = ("bond_index", "A", "p", "lambda", "c_value", "k_value", "max_rel_residual")
SWEEP_COLUMNS = ("value", "status", "max_rel_continuity", "rel_kirchhoff", "lambdas")
SAMPLE_COLUMNS = ("bond_index", "x", "y")
SAMPLES_PER_BOND = 65
BOND_FIELDS = {"length": "length", "beta": "beta", "m": "m", "lambda": "lam", "b": "forcing_b", "nu": "forcing_nu"}


@dataclass
class Outcome:
    exit_code: int
    document: dict
    tables: list[tuple[tuple[str, ...], list[list]]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


def _clean(x):
    """Map non-finite floats to ``None`` so documents stay valid JSON."""
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _violations_doc(violations) -> list[dict]:
    return [
        {
            "bond_index": v.bond_index,
            "constraint": v.constraint,
            "value": _clean(v.value) if isinstance(v.value, (int, float)) else repr(v.value),
            "severity": v.severity.value,
        }
        for v in violations
    ]


def _residuals_doc(res) -> dict:
    return {
        "continuity_gaps": [_clean(g) for g in res.continuity_gaps],
        "kirchhoff_gap": _clean(res.kirchhoff_gap),
        "scale": _clean(res.scale),
        "max_rel_continuity": _clean(res.max_rel_continuity),
        "rel_kirchhoff": _clean(res.rel_kirchhoff),
    }


def run_validate(problem: StarGraphProblem) -> Outcome:
    violations = validate(problem)
    doc = {"command": "validate", "valid": not has_errors(violations), "violations": _violations_doc(violations)}
    rows = [[v.bond_index, v.severity.value, v.constraint, repr(v.value)] for v in violations]
    code = EXIT_INVALID if has_errors(violations) else EXIT_OK
    return Outcome(code, doc, [(("bond_index", "severity", "constraint", "value"), rows)])


def _solve_core(problem: StarGraphProblem) -> tuple[StarGraphProblem | None, dict, int, list[str]]:
    """Solve the vertex system.

    Returns the problem with solved lambdas (``None`` when there is nothing to
    report), extra document fields, the exit code and diagnostics.
    """
    if problem.kind is Kind.Homogeneous:
        try:
            assignment = solve_lambdas_homogeneous(problem)
        except CompatibilityError as exc:
            return None, {"status": "incompatible"}, EXIT_SOLVER, [f"CompatibilityError: {exc}"]
        solved = with_lambdas(problem, assignment.lambdas)
        return solved, {"status": "solved", "flux_coefficients": list(assignment.flux_coefficients)}, EXIT_OK, []

    result = solve_vertex_forced(problem)
    extra = {"status": result.status.value}
    if result.status is ForcedStatus.Failed:
        return None, extra, EXIT_SOLVER, [f"NoRootError: {msg}" for msg in result.failures]
    solved = with_lambdas(problem, result.lambdas)
    if result.status is ForcedStatus.Incompatible:
        return solved, extra, EXIT_SOLVER, [
            f"Kirchhoff rule not met after continuity solve: relative gap {result.residuals.rel_kirchhoff:.3e}"
        ]
    return solved, extra, EXIT_OK, []


def _bond_rows(problem, solutions, residual_by_bond=None) -> list[list]:
    c = continuity_values(problem, solutions)
    k = kirchhoff_terms(problem, solutions)
    rows = []
    for j, (bond, sol) in enumerate(zip(problem.bonds, solutions), start=1):
        resid = None if residual_by_bond is None else residual_by_bond[j - 1]
        rows.append([j, sol.amplitude, sol.exponent, bond.lam, c[j - 1], k[j - 1], resid])
    return rows


def _rows_doc(rows) -> list[dict]:
    return [{col: _clean(v) for col, v in zip(BOND_COLUMNS, row)} for row in rows]


def run_solve(problem: StarGraphProblem) -> Outcome:
    violations = validate(problem)
    if has_errors(violations):
        return Outcome(
            EXIT_INVALID,
            {"command": "solve", "violations": _violations_doc(violations)},
            diagnostics=[str(v) for v in violations],
        )
    try:
        solved, extra, code, diags = _solve_core(problem)
        doc = {"command": "solve", "alpha": problem.alpha, "kind": problem.kind.value, **extra}
        if solved is not None:
            solutions = build_solutions(solved)
            rows = _bond_rows(solved, solutions)
            doc["lambdas"] = [b.lam for b in solved.bonds]
            doc["bonds"] = _rows_doc(rows)
            doc["vertex"] = _residuals_doc(vertex_residuals(solved, solutions))
            return Outcome(code, doc, [(BOND_COLUMNS, rows)], diags)
        return Outcome(code, doc, diagnostics=diags)
    except FracStarError as exc:
        return Outcome(EXIT_SOLVER, {"command": "solve", "status": "failed"}, diagnostics=[f"{type(exc).__name__}: {exc}"])


def run_verify(problem: StarGraphProblem, grid: GridSpec | None = None) -> Outcome:
    """Verify *problem* exactly as given: bond equations, free ends, vertex."""
    grid = grid or GridSpec()
    violations = validate(problem)
    if has_errors(violations):
        return Outcome(
            EXIT_INVALID,
            {"command": "verify", "violations": _violations_doc(violations)},
            diagnostics=[str(v) for v in violations],
        )
    try:
        solutions = build_solutions(problem)
        res = vertex_residuals(problem, solutions)
    except FracStarError as exc:
        return Outcome(EXIT_SOLVER, {"command": "verify", "status": "failed"}, diagnostics=[f"{type(exc).__name__}: {exc}"])

    reports = [ode_residual(s, b, problem.alpha, grid) for s, b in zip(solutions, problem.bonds)]
    diags = []
    report_docs = []
    sample_rows = []
    for bond, sol, rep in zip(problem.bonds, solutions, reports):
        decay = integral_decay_near_zero(sol, problem.alpha, bond.length)
        le = rep.left_end
        report_docs.append(
            {
                "bond_index": rep.bond_index,
                "max_rel_residual": _clean(rep.max_rel_residual),
                "certified": rep.certified,
                "left_end": {
                    "integral_limit_exponent": le.integral_limit_exponent,
                    "derivative_limit_exponent": le.derivative_limit_exponent,
                    "integral_limit": le.integral_limit.value,
                    "derivative_limit": le.derivative_limit.value,
                    "both_vanish": le.both_vanish,
                    "integral_near_zero": [_clean(v) for v in decay],
                },
                "check_points": [[_clean(v) for v in pt] for pt in rep.check_points],
            }
        )
        if not rep.certified:
            diags.append(f"bond {rep.bond_index}: residual {rep.max_rel_residual:.3e} above tolerance")
        if not le.both_vanish:
            diags.append(f"bond {rep.bond_index}: free-end conditions do not both vanish")
        xs = np.linspace(0.0, bond.length, SAMPLES_PER_BOND)
        sample_rows += [[rep.bond_index, float(x), float(y)] for x, y in zip(xs, sol(xs))]

    if not res.satisfied(SOLVED_TOL):
        diags.append(
            f"vertex conditions not met: continuity {res.max_rel_continuity:.3e}, Kirchhoff {res.rel_kirchhoff:.3e}"
        )
    passed = not diags
    rows = _bond_rows(problem, solutions, [r.max_rel_residual for r in reports])
    doc = {
        "command": "verify",
        "alpha": problem.alpha,
        "kind": problem.kind.value,
        "passed": passed,
        "bonds": _rows_doc(rows),
        "vertex": _residuals_doc(res),
        "reports": report_docs,
        "samples": [
            {
                "bond_index": j,
                "x": [r[1] for r in sample_rows if r[0] == j],
                "y": [_clean(r[2]) for r in sample_rows if r[0] == j],
            }
            for j in range(1, problem.n_bonds + 1)
        ],
    }
    return Outcome(EXIT_OK if passed else EXIT_VERIFY, doc, [(BOND_COLUMNS, rows), (SAMPLE_COLUMNS, sample_rows)], diags)


def parse_sweep(text: str) -> tuple[str, float, float, int]:
    """``key:lo:hi:count`` where key is ``alpha`` or ``<field>.<bond>`` (e.g. ``lambda.1``)."""
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(f"sweep must look like key:lo:hi:count, got {text!r}")
    key, lo, hi, count = parts
    if key != "alpha":
        name, _, idx = key.partition(".")
        if name not in BOND_FIELDS or not idx.isdigit() or int(idx) < 1:
            raise ValueError(f"sweep key must be 'alpha' or '<field>.<bond>' with field in {sorted(BOND_FIELDS)}")
    n = int(count)
    if n < 1:
        raise ValueError("sweep count must be >= 1")
    return key, float(lo), float(hi), n


def _apply(problem: StarGraphProblem, key: str, value: float) -> StarGraphProblem:
    alpha = problem.alpha
    bonds = list(problem.bonds)
    if key == "alpha":
        alpha = value
    else:
        name, _, idx = key.partition(".")
        j = int(idx) - 1
        if j >= len(bonds):
            raise ValueError(f"problem has no bond {j + 1}")
        bonds[j] = replace(bonds[j], **{BOND_FIELDS[name]: value})
    if problem.kind is Kind.Forced and not key.startswith("nu."):
        # keep the forcing exponent on its constraint while alpha, beta or m move
        bonds = [
            replace(b, forcing_nu=forcing_exponent(b.beta, b.m, alpha)) if b.m != 1.0 else b for b in bonds
        ]
    return StarGraphProblem(alpha, tuple(bonds), problem.kind)


def run_sweep(problem: StarGraphProblem, key: str, lo: float, hi: float, count: int) -> Outcome:
    values = np.linspace(lo, hi, count)
    rows = []
    for value in values:
        value = float(value)
        try:
            trial = _apply(problem, key, value)
        except (ValueError, FracStarError) as exc:
            rows.append([value, f"invalid: {exc}", None, None, ""])
            continue
        out = run_solve(trial)
        vertex = out.document.get("vertex")
        status = out.document.get("status", "invalid" if out.exit_code == EXIT_INVALID else "failed")
        rows.append(
            [
                value,
                status,
                vertex["max_rel_continuity"] if vertex else None,
                vertex["rel_kirchhoff"] if vertex else None,
                ";".join(repr(float(v)) for v in out.document.get("lambdas", [])),
            ]
        )
    doc = {
        "command": "sweep",
        "parameter": key,
        "rows": [{col: _clean(v) for col, v in zip(SWEEP_COLUMNS, row)} for row in rows],
    }
    return Outcome(EXIT_OK, doc, [(SWEEP_COLUMNS, rows)])


def symmetric_problems(lam_1: float = 3.0) -> tuple[StarGraphProblem, StarGraphProblem]:
    """Three identical bonds (alpha=1.5, beta=1, m=1/3, L=1), unforced and forced.

    In the forced copy ``b_j`` is scaled so ``b_j * lambda_j**(1/(m-1))`` is
    common to all bonds at ``lambda_2 = lambda_3 = lambda_1 / 2``; only then do
    the bonds share a weighted trace.
    """
    alpha, beta, m, L = 1.5, 1.0, 1.0 / 3.0, 1.0
    homo = StarGraphProblem(alpha, tuple(BondSpec(L, beta, m, lam) for lam in (lam_1, 1.0, 1.0)))
    nu = forcing_exponent(beta, m, alpha)
    b_1 = 1.0
    half = 0.5 * lam_1
    b_j = b_1 * (lam_1 / half) ** (1.0 / (m - 1.0))
    forced = StarGraphProblem(
        alpha,
        (BondSpec(L, beta, m, lam_1, b_1, nu), BondSpec(L, beta, m, 1.0, b_j, nu), BondSpec(L, beta, m, 1.0, b_j, nu)),
        Kind.Forced,
    )
    return homo, forced


def run_demo_symmetric(grid: GridSpec | None = None) -> Outcome:
    homo, forced = symmetric_problems()
    report = []
    checks = []

    assignment = solve_lambdas_homogeneous(homo)
    solved = with_lambdas(homo, assignment.lambdas)
    l1, l2, l3 = assignment.lambdas
    res = vertex_residuals(solved)
    ok_h = abs(l1 - (l2 + l3)) <= CLOSED_FORM_TOL * abs(l1) and res.satisfied(CLOSED_FORM_TOL)
    checks.append(("homogeneous", ok_h, (l1, l2, l3), res))

    fres = solve_vertex_forced(forced)
    ok_f = fres.status is ForcedStatus.Solved
    if ok_f:
        f1, f2, f3 = fres.lambdas
        ok_f = abs(f1 - (f2 + f3)) <= SOLVED_TOL * abs(f1)
    checks.append(("forced", ok_f, fres.lambdas, fres.residuals))

    for label, ok, lams, r in checks:
        verdict = "PASS" if ok else "FAIL"
        report.append(
            f"lambda1 = lambda2 + lambda3: {verdict} [{label}] "
            + " ".join(f"lambda{j}={v!r}" for j, v in enumerate(lams, start=1))
        )

    verified = []
    for problem in (solved, with_lambdas(forced, fres.lambdas) if ok_f else None):
        if problem is None:
            continue
        sols = build_solutions(problem)
        worst = max(ode_residual(s, b, problem.alpha, grid).max_rel_residual for s, b in zip(sols, problem.bonds))
        verified.append((problem.kind.value, worst))
        report.append(f"bond equations ({problem.kind.value}): max relative residual {worst:.3e}")

    all_ok = all(ok for _, ok, _, _ in checks)
    resid_ok = all(w <= 1.0e-3 for _, w in verified)
    doc = {
        "command": "demo-symmetric",
        "passed": all_ok and resid_ok,
        "report": report,
        "checks": [
            {
                "case": label,
                "passed": ok,
                "lambdas": [_clean(v) for v in lams],
                "vertex": _residuals_doc(r) if r is not None else None,
            }
            for label, ok, lams, r in checks
        ],
    }
    code = EXIT_OK if all_ok and resid_ok else (EXIT_SOLVER if not all_ok else EXIT_VERIFY)
    return Outcome(code, doc, [(("report",), [[line] for line in report])])
