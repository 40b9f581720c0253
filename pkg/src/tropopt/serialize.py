"""JSON problem, result and project files.

``null`` encodes the semifield's zero everywhere.  Numbers are rounded to nine
fractional digits and written in shortest round-trip form, integers without a
decimal point, so identical inputs always give byte-identical output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .ineq import Infeasible, SolutionSet, minimal_solution
from .linalg import Mat
from .optimizer import Degenerate, OptResult
from .scheduling import ProjectSpec, ScheduleResult
from .semifield import Semifield

__all__ = [
    "FormatError",
    "ProblemFile",
    "dumps",
    "format_number",
    "parse_problem",
    "parse_project",
    "parse_result",
    "result_to_json",
    "schedule_to_json",
]


class FormatError(ValueError):
    """Malformed input file."""


def format_number(x: float | None) -> int | float | None:
    if x is None:
        return None
    r = round(float(x), 9)
    if r == int(r):
        return int(r)
    return r


def _fmt_rows(m: Mat) -> list[list]:
    return [[format_number(v) for v in row] for row in m.to_rows()]


def _fmt_vec(m: Mat) -> list:
    return [format_number(v) for v in m.to_list()]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


@dataclass(frozen=True, eq=False)
class ProblemFile:
    field: Semifield
    A: Mat
    C: Mat | None = None
    g: Mat | None = None
    b: Mat | None = None

    @property
    def n(self) -> int:
        return self.A.rows


def _number(v, where: str):
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FormatError(f"{where}: expected a number or null, got {v!r}")
    return float(v)


def _matrix(field: Semifield, raw, name: str, n: int | None) -> Mat:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise FormatError(f"{name} must be a non-empty array of arrays")
    rows = [[_number(v, f"{name}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(raw)]
    size = len(rows) if n is None else n
    if len(rows) != size or any(len(r) != size for r in rows):
        raise FormatError(f"{name} must be a square {size}x{size} array")
    try:
        return Mat.from_rows(field, rows)
    except ValueError as exc:
        raise FormatError(f"{name}: {exc}") from exc


def _vector(field: Semifield, raw, name: str, n: int) -> Mat:
    if not isinstance(raw, list) or len(raw) != n:
        raise FormatError(f"{name} must be an array of length {n}")
    try:
        return Mat.column(field, [_number(v, f"{name}[{i}]") for i, v in enumerate(raw)])
    except ValueError as exc:
        raise FormatError(f"{name}: {exc}") from exc


def parse_problem(obj: Any, semifield: str | None = None) -> ProblemFile:
    if not isinstance(obj, dict):
        raise FormatError("problem file must be a JSON object")
    try:
        field = Semifield.parse(semifield or obj.get("semifield", "max-plus"))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if "A" not in obj:
        raise FormatError("problem file has no 'A' matrix")
    A = _matrix(field, obj["A"], "A", None)
    n = A.rows
    C = _matrix(field, obj["C"], "C", n) if obj.get("C") is not None else None
    g = _vector(field, obj["g"], "g", n) if obj.get("g") is not None else None
    b = _vector(field, obj["b"], "b", n) if obj.get("b") is not None else None
    return ProblemFile(field, A, C, g, b)


def result_to_json(result: OptResult | SolutionSet | Infeasible | Degenerate) -> dict:
    if isinstance(result, (Infeasible, Degenerate)):
        out = {"status": result.status}
        if result.reason:
            out["reason"] = result.reason
        return out
    if isinstance(result, OptResult):
        ss, theta, minimal = result.solutions, format_number(result.theta.value), result.minimal
    else:
        ss, theta = result, None
        minimal = None if ss.lower.null_mask.any() else minimal_solution(ss)
    out = {
        "status": "ok",
        "semifield": ss.field.value,
        "theta": theta,
        "generator": _fmt_rows(ss.generator),
        "lower": _fmt_vec(ss.lower),
    }
    if minimal is not None:
        out["minimal"] = _fmt_vec(minimal)
    return out


def parse_result(obj: Any) -> OptResult | SolutionSet | Infeasible | Degenerate:
    """Inverse of :func:`result_to_json`."""
    status = obj.get("status")
    if status == "infeasible":
        return Infeasible(obj.get("reason", ""))
    if status == "degenerate":
        return Degenerate(obj.get("reason", ""))
    if status != "ok":
        raise FormatError(f"unknown status {status!r}")
    field = Semifield.parse(obj.get("semifield", "max-plus"))
    S = _matrix(field, obj["generator"], "generator", None)
    ss = SolutionSet(S, _vector(field, obj["lower"], "lower", S.rows))
    if obj.get("theta") is None:
        return ss
    minimal = _vector(field, obj["minimal"], "minimal", S.rows) if "minimal" in obj else None
    return OptResult(field.scalar(obj["theta"]), ss, minimal)


# -- project files --------------------------------------------------------------


def _lags(raw, name: str) -> dict[tuple[str, str], float]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise FormatError(f"{name} must be an object keyed by activity")
    out = {}
    for i, inner in raw.items():
        if not isinstance(inner, dict):
            raise FormatError(f"{name}[{i!r}] must be an object keyed by activity")
        for j, v in inner.items():
            val = _number(v, f"{name}[{i!r}][{j!r}]")
            if val is not None:
                out[(str(i), str(j))] = val
    return out


def parse_project(obj: Any) -> ProjectSpec:
    """Project JSON: ``activities``, ``sfLags``/``ssLags`` as ``{i: {j: lag}}``,
    ``earlyStarts`` as ``{i: time}``."""
    if not isinstance(obj, dict):
        raise FormatError("project file must be a JSON object")
    acts = obj.get("activities")
    if not isinstance(acts, list) or not acts:
        raise FormatError("'activities' must be a non-empty array of names")
    early_raw = obj.get("earlyStarts") or {}
    if not isinstance(early_raw, dict):
        raise FormatError("earlyStarts must be an object keyed by activity")
    early = {}
    for k, v in early_raw.items():
        val = _number(v, f"earlyStarts[{k!r}]")
        if val is not None:
            early[str(k)] = val
    try:
        return ProjectSpec(
            activities=tuple(str(a) for a in acts),
            sf_lags=_lags(obj.get("sfLags"), "sfLags"),
            ss_lags=_lags(obj.get("ssLags"), "ssLags"),
            early_starts=early,
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def schedule_to_json(result: ScheduleResult | Infeasible | Degenerate) -> dict:
    if isinstance(result, (Infeasible, Degenerate)):
        return result_to_json(result)

    def fmt(d):
        return {k: format_number(v) for k, v in d.items()}

    return {
        "status": "ok",
        "initiation": fmt(result.initiation),
        "completion": fmt(result.completion),
        "flowTimes": fmt(result.flow_times),
        "maxFlowTime": format_number(result.max_flow_time),
        "anchored": list(result.anchored),
    }
