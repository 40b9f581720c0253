"""Minimisation of ``x^- A x`` subject to ``C x <= x`` and ``g <= x``.

The minimum ``theta`` is computed in closed form and the minimisers are the
regular solutions of ``(theta^-1 A + C) x + g <= x``, i.e. the set
``(theta^-1 A + C)* u`` with ``u >= g``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import semifield as sf
from .ineq import Infeasible, SolutionSet, is_feasible, minimal_solution
from .linalg import (
    Mat,
    conjugate,
    is_regular,
    mat_add,
    mat_mul,
    mat_pow,
    scalar_mul,
    spectral_radius,
    star,
    tr_sum,
    trace,
)
from .semifield import Scalar, Semifield

__all__ = [
    "Degenerate",
    "OptProblem",
    "OptResult",
    "OracleConfig",
    "brute_force_min",
    "compute_theta",
    "minimize",
    "minimize_linear_constrained",
    "minimize_lower_bounded",
    "minimize_unconstrained",
    "objective",
    "theta_by_enumeration",
]


@dataclass(frozen=True)
class Degenerate:
    reason: str = ""

    status = "degenerate"


@dataclass(frozen=True, eq=False)
class OptProblem:
    A: Mat
    C: Mat | None = None
    g: Mat | None = None

    def __post_init__(self):
        A = self.A
        if not A.is_square:
            raise ValueError(f"A must be square, got shape {A.shape}")
        n = A.rows
        if self.C is None:
            object.__setattr__(self, "C", Mat.zeros(A.field, n))
        if self.g is None:
            object.__setattr__(self, "g", Mat.zeros(A.field, n, 1))
        if self.C.shape != (n, n) or self.g.shape != (n, 1):
            raise ValueError(f"C {self.C.shape} / g {self.g.shape} do not conform to A {A.shape}")
        if not (A.field is self.C.field is self.g.field):
            raise sf.SemifieldMismatch("A, C and g must share a semifield")

    @property
    def field(self) -> Semifield:
        return self.A.field

    @property
    def n(self) -> int:
        return self.A.rows


@dataclass(frozen=True, eq=False)
class OptResult:
    theta: Scalar
    solutions: SolutionSet
    minimal: Mat | None = None

    status = "ok"


def compute_theta(A: Mat, C: Mat) -> Scalar:
    """Minimum of the objective under ``C x <= x``.

    ``P[k][s]`` accumulates every product ``A C^i1 ... A C^ik`` with
    ``i1 + ... + ik = s``; only traces of those are needed.
    """
    if not A.is_square or C.shape != A.shape:
        raise ValueError(f"A {A.shape} and C {C.shape} must be square of equal order")
    if A.field is not C.field:
        raise sf.SemifieldMismatch(f"{A.field.value} vs {C.field.value}")
    n = A.rows
    field = A.field
    theta = spectral_radius(A)
    if n == 1:
        return theta

    AC = [mat_mul(A, mat_pow(C, j)) for j in range(n)]  # A C^j
    prev = {s: AC[s] for s in range(n)}  # k = 1
    for k in range(1, n):
        if k > 1:
            cur = {}
            for s in range(n - k + 1):
                acc = Mat.zeros(field, n)
                for j in range(s + 1):
                    acc = mat_add(acc, mat_mul(prev[s - j], AC[j]))
                cur[s] = acc
            prev = cur
        for s in range(1, n - k + 1):
            theta = sf.add(field, theta, sf.pow(field, trace(prev[s]), Fraction(1, k)))
    return theta


def theta_by_enumeration(A: Mat, C: Mat) -> Scalar:
    """Same quantity as :func:`compute_theta`, by listing every composition."""
    n = A.rows
    field = A.field
    theta = spectral_radius(A)
    for k in range(1, n):
        for idx in itertools.product(range(n - k + 1), repeat=k):
            if not 1 <= sum(idx) <= n - k:
                continue
            P = Mat.identity(field, n)
            for i in idx:
                P = mat_mul(mat_mul(P, A), mat_pow(C, i))
            theta = sf.add(field, theta, sf.pow(field, trace(P), Fraction(1, k)))
    return theta


def _with_minimal(theta: Scalar, ss: SolutionSet) -> OptResult:
    minimal = minimal_solution(ss) if is_regular(ss.lower) else None
    return OptResult(theta, ss, minimal)


def minimize(p: OptProblem) -> OptResult | Infeasible | Degenerate:
    A, C, g = p.A, p.C, p.g
    field = p.field
    lam = spectral_radius(A)
    if lam.is_null:
        return Degenerate("spectral radius of A is null")
    if not is_feasible(C):
        return Infeasible(f"Tr(C) = {tr_sum(C).value} exceeds the identity")
    theta = compute_theta(A, C)
    S = star(mat_add(scalar_mul(sf.inv(field, theta), A), C))
    return _with_minimal(theta, SolutionSet(S, g))


def minimize_lower_bounded(A: Mat, g: Mat) -> OptResult | Degenerate:
    """Problem with ``x >= g`` only: minimum ``lambda``, set ``(A / lambda)* u``."""
    lam = spectral_radius(A)
    if lam.is_null:
        return Degenerate("spectral radius of A is null")
    S = star(scalar_mul(sf.inv(A.field, lam), A))
    return _with_minimal(lam, SolutionSet(S, g))


def minimize_linear_constrained(A: Mat, C: Mat) -> OptResult | Infeasible | Degenerate:
    return minimize(OptProblem(A, C, Mat.zeros(A.field, A.rows, 1)))


def minimize_unconstrained(A: Mat) -> OptResult | Degenerate:
    return minimize_lower_bounded(A, Mat.zeros(A.field, A.rows, 1))


def objective(A: Mat, x: Mat) -> Scalar:
    """``x^- A x`` for a regular column ``x``."""
    if not is_regular(x):
        raise ValueError("objective is defined for regular vectors only")
    return mat_mul(mat_mul(conjugate(x), A), x)[0, 0]


@dataclass(frozen=True)
class OracleConfig:
    grid_radius: float = 30.0
    grid_step: float = 0.25
    max_points: int = 5_000_000
    chunk: int = 250_000
    feas_tol: float = 1e-9


def _axis(lo_bound: float | None, radius: float, step: float, is_max: bool) -> np.ndarray:
    if lo_bound is None:
        return np.arange(-radius, radius + step / 2, step)
    if is_max:
        # feasible points satisfy x_i >= g_i; start the lattice at g_i
        count = int(np.floor((radius - lo_bound) / step + 1e-9)) + 1
        return lo_bound + step * np.arange(max(count, 0))
    count = int(np.floor((lo_bound + radius) / step + 1e-9)) + 1
    return lo_bound - step * np.arange(max(count, 0))


def brute_force_min(
    p: OptProblem,
    grid_radius: float = 30.0,
    grid_step: float = 0.25,
    config: OracleConfig | None = None,
) -> Scalar | None:
    """Exhaustive grid search for the minimum; ``None`` if no grid point is feasible.

    Works on plain reals (max-plus or min-plus only) without the matrix
    machinery, so it stays independent of :func:`minimize`.
    """
    cfg = config or OracleConfig(grid_radius=grid_radius, grid_step=grid_step)
    field = p.field
    if not field.is_additive:
        raise ValueError("brute-force oracle supports max-plus and min-plus only")
    n = p.n
    if n > 3:
        raise ValueError("brute-force oracle is limited to n <= 3")
    is_max = field.is_max
    A, C = p.A.data, p.C.data
    g = p.g.to_list()

    axes = [_axis(gi, cfg.grid_radius, cfg.grid_step, is_max) for gi in g]
    total = int(np.prod([len(a) for a in axes]))
    if total > cfg.max_points:
        raise ValueError(f"grid of {total} points exceeds cap {cfg.max_points}")
    if total == 0:
        return None

    grid = np.stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")], axis=1)
    best = None
    reduce = np.max if is_max else np.min
    for start in range(0, total, cfg.chunk):
        X = grid[start:start + cfg.chunk]  # (N, n)
        # (C x)_i = reduce_j (c_ij + x_j)
        Cx = reduce(C[None, :, :] + X[:, None, :], axis=2)
        ok = np.all(Cx <= X + cfg.feas_tol, axis=1) if is_max else np.all(Cx >= X - cfg.feas_tol, axis=1)
        if not ok.any():
            continue
        Xf = X[ok]
        # x^- A x = reduce_{i,j} (a_ij + x_j - x_i)
        terms = A[None, :, :] + Xf[:, None, :] - Xf[:, :, None]
        obj = reduce(terms.reshape(len(Xf), -1), axis=1)
        cand = obj.min() if is_max else obj.max()
        if best is None or (cand < best if is_max else cand > best):
            best = cand
    if best is None:
        return None
    return field.from_repr(float(best))
