"""Plain-text problem files.

Top-level ``key = value`` lines come first, followed by one ``[bond]``
section per bond::

    # three identical bonds
    alpha = 1.5
    kind = homogeneous

    [bond]
    length = 1
    beta = 1
    m = 1/3
    lambda = 3

Top-level keys: ``alpha`` (required), ``kind`` (``homogeneous`` or
``forced``, default ``homogeneous``). Bond keys: ``length``, ``beta``, ``m``,
``lambda`` (all required) and, for forced problems, ``b`` (required) and
``nu`` (filled from ``(beta + m*alpha)/(1 - m)`` when omitted). Numbers may be
written as decimals or as ``p/q`` fractions. ``#`` starts a comment.
"""

from __future__ import annotations

import logging
import math
import re
from fractions import Fraction

from fracstar.errors import ParseError
from fracstar.model import BondSpec, Kind, StarGraphProblem, forcing_exponent

__all__ = ["emit_problem_file", "parse_problem_file", "read_problem_file"]

log = logging.getLogger(__name__)

_TOP_KEYS = ("alpha", "kind")
_BOND_REQUIRED = ("length", "beta", "m", "lambda")
_BOND_OPTIONAL = ("b", "nu")
_SECTION = re.compile(r"^\[\s*(\w+)\s*\]$")
_FRACTION = re.compile(r"^[+-]?\d+\s*/\s*\d+$")


def _number(text: str, line: int, key: str) -> float:
    text = text.strip()
    try:
        if _FRACTION.match(text):
            return float(Fraction(text.replace(" ", "")))
        value = float(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {text!r}", line, key) from None
    if not math.isfinite(value):
        raise ParseError(f"not a finite number: {text!r}", line, key)
    return value


def parse_problem_file(text: str) -> StarGraphProblem:
    top: dict[str, tuple[str, int]] = {}
    bonds: list[dict[str, tuple[float, int]]] = []
    bond_lines: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sec = _SECTION.match(line)
        if sec:
            if sec.group(1) != "bond":
                raise ParseError(f"unknown section [{sec.group(1)}]", lineno)
            bonds.append({})
            bond_lines.append(lineno)
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))

        if not bonds:
            if key not in _TOP_KEYS:
                raise ParseError("unknown top-level key", lineno, key)
            if key in top:
                raise ParseError("duplicate key", lineno, key)
            top[key] = (value, lineno)
        else:
            current = bonds[-1]
            if key in _TOP_KEYS:
                raise ParseError("top-level keys must precede the first [bond] section", lineno, key)
            if key not in _BOND_REQUIRED + _BOND_OPTIONAL:
                raise ParseError("unknown bond key", lineno, key)
            if key in current:
                raise ParseError("duplicate key", lineno, key)
            current[key] = (_number(value, lineno, key), lineno)

    if "alpha" not in top:
        raise ParseError("missing required key", None, "alpha")
    alpha = _number(top["alpha"][0], top["alpha"][1], "alpha")
    kind_text, kind_line = top.get("kind", ("homogeneous", None))
    try:
        kind = Kind(kind_text.lower())
    except ValueError:
        raise ParseError(f"kind must be 'homogeneous' or 'forced', got {kind_text!r}", kind_line, "kind") from None
    if not bonds:
        raise ParseError("no [bond] sections")

    specs = []
    for j, (fields, start) in enumerate(zip(bonds, bond_lines), start=1):
        for key in _BOND_REQUIRED:
            if key not in fields:
                raise ParseError(f"bond {j} is missing a required key", start, key)
        m, m_line = fields["m"]
        if m == 1.0:
            raise ParseError(f"bond {j}: m ≠ 1 is required", m_line, "m")
        b = fields.get("b", (None, None))[0]
        nu = fields.get("nu", (None, None))[0]

        if kind is Kind.Homogeneous:
            for key in _BOND_OPTIONAL:
                if key in fields:
                    raise ParseError(f"bond {j}: {key!r} is only allowed when kind = forced", fields[key][1], key)
        else:
            if b is None:
                raise ParseError(f"bond {j}: forced problems need 'b'", start, "b")
            if nu is None:
                nu = forcing_exponent(fields["beta"][0], m, alpha)
                log.warning("bond %d: nu omitted, set to (beta + m*alpha)/(1 - m) = %r", j, nu)

        specs.append(
            BondSpec(
                length=fields["length"][0],
                beta=fields["beta"][0],
                m=m,
                lam=fields["lambda"][0],
                forcing_b=b,
                forcing_nu=nu,
            )
        )
    return StarGraphProblem(alpha=alpha, bonds=tuple(specs), kind=kind)


def read_problem_file(path) -> StarGraphProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem_file(fh.read())


def _fmt(x: float) -> str:
    # repr of a builtin float round-trips exactly
    return repr(float(x))


def emit_problem_file(problem: StarGraphProblem) -> str:
    """Serialise *problem*; :func:`parse_problem_file` reads it back unchanged."""
    lines = [f"alpha = {_fmt(problem.alpha)}", f"kind = {problem.kind.value}"]
    for bond in problem.bonds:
        lines += [
            "",
            "[bond]",
            f"length = {_fmt(bond.length)}",
            f"beta = {_fmt(bond.beta)}",
            f"m = {_fmt(bond.m)}",
            f"lambda = {_fmt(bond.lam)}",
        ]
        if bond.forcing_b is not None:
            lines.append(f"b = {_fmt(bond.forcing_b)}")
        if bond.forcing_nu is not None:
            lines.append(f"nu = {_fmt(bond.forcing_nu)}")
    return "\n".join(lines) + "\n"
