"""Project scheduling with Start-to-Finish, Start-to-Start and Early Start constraints.

Activity ``i`` completes at ``y_i = max_j (x_j + a_ij)`` where ``x_j`` are the
initiation times and ``a_ij`` the Start-to-Finish lags.  Start-to-Start lags
``c_ij`` require ``x_j + c_ij <= x_i``; early starts require ``g_i <= x_i``.
The schedule minimises the maximum flow time ``max_i (y_i - x_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .ineq import Infeasible
from .linalg import Mat, mat_mul
from .optimizer import Degenerate, OptProblem, minimize
from .semifield import Semifield

__all__ = [
    "ProjectSpec",
    "ScheduleReport",
    "ScheduleResult",
    "build_matrices",
    "schedule",
    "validate_schedule",
]

FIELD = Semifield.MAX_PLUS
TOL = 1e-9

Lags = Mapping[tuple[str, str], float]


@dataclass(frozen=True)
class ProjectSpec:
    """Lags are keyed ``(i, j)``: activity ``j`` constrains activity ``i``."""

    activities: tuple[str, ...]
    sf_lags: Lags
    ss_lags: Lags = field(default_factory=dict)
    early_starts: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "activities", tuple(self.activities))
        names = self.activities
        if not names:
            raise ValueError("project has no activities")
        if len(set(names)) != len(names):
            dupes = sorted({a for a in names if names.count(a) > 1})
            raise ValueError(f"duplicate activity names: {dupes}")
        known = set(names)
        for label, lags in (("sfLags", self.sf_lags), ("ssLags", self.ss_lags)):
            for i, j in lags:
                for name in (i, j):
                    if name not in known:
                        raise ValueError(f"{label} references unknown activity {name!r}")
        for name in self.early_starts:
            if name not in known:
                raise ValueError(f"earlyStarts references unknown activity {name!r}")

    @property
    def index(self) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.activities)}


@dataclass(frozen=True)
class ScheduleResult:
    initiation: dict[str, float]
    # None where an activity has no Start-to-Finish lag (completion undefined)
    completion: dict[str, float | None]
    flow_times: dict[str, float | None]
    max_flow_time: float
    anchored: tuple[str, ...] = ()

    status = "ok"


@dataclass(frozen=True)
class ScheduleReport:
    violations: list[str]
    max_flow_time: float | None

    @property
    def ok(self) -> bool:
        return not self.violations


def _lag_matrix(spec: ProjectSpec, lags: Lags) -> Mat:
    n = len(spec.activities)
    idx = spec.index
    rows: list[list[float | None]] = [[None] * n for _ in range(n)]
    for (i, j), v in lags.items():
        rows[idx[i]][idx[j]] = float(v)
    return Mat.from_rows(FIELD, rows)


def build_matrices(spec: ProjectSpec) -> tuple[Mat, Mat, Mat]:
    """Max-plus ``(A, C, g)``; absent lags and early starts become null."""
    A = _lag_matrix(spec, spec.sf_lags)
    C = _lag_matrix(spec, spec.ss_lags)
    g = Mat.column(FIELD, [spec.early_starts.get(a) for a in spec.activities])
    return A, C, g


def _times(spec: ProjectSpec, x: Mat) -> dict[str, float | None]:
    return dict(zip(spec.activities, x.to_list()))


def schedule(spec: ProjectSpec) -> ScheduleResult | Infeasible | Degenerate:
    """Earliest schedule with the least maximum flow time.

    Activities without an early start are anchored at time 0 so that a least
    schedule exists; their names are listed in ``anchored``.
    """
    A, C, g = build_matrices(spec)
    anchored = tuple(a for a in spec.activities if a not in spec.early_starts)
    if anchored:
        g = Mat.column(FIELD, [spec.early_starts.get(a, 0.0) for a in spec.activities])
    res = minimize(OptProblem(A, C, g))
    if isinstance(res, (Infeasible, Degenerate)):
        return res
    x0 = res.minimal
    y = mat_mul(A, x0)
    start = _times(spec, x0)
    finish = _times(spec, y)
    flow = {a: None if finish[a] is None else finish[a] - start[a] for a in spec.activities}
    return ScheduleResult(start, finish, flow, float(res.theta.value), anchored)


def validate_schedule(spec: ProjectSpec, initiation: Mapping[str, float]) -> ScheduleReport:
    """Check Start-to-Start and Early Start constraints by substitution."""
    for name in initiation:
        if name not in spec.index:
            raise ValueError(f"unknown activity {name!r}")
    missing = [a for a in spec.activities if a not in initiation]
    if missing:
        raise ValueError(f"no initiation time for {missing}")
    x = {a: float(initiation[a]) for a in spec.activities}

    violations = []
    for (i, j), c in sorted(spec.ss_lags.items()):
        if x[j] + c > x[i] + TOL:
            violations.append(f"start-to-start {j}->{i}: x[{j}] + {c:g} = {x[j] + c:g} > x[{i}] = {x[i]:g}")
    for a, ga in spec.early_starts.items():
        if ga > x[a] + TOL:
            violations.append(f"early start {a}: x[{a}] = {x[a]:g} < {ga:g}")

    completion: dict[str, float] = {}
    for (i, j), lag in spec.sf_lags.items():
        completion[i] = max(completion.get(i, float("-inf")), x[j] + lag)
    flows = [completion[a] - x[a] for a in completion]
    return ScheduleReport(violations, max(flows) if flows else None)
