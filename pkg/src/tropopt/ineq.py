"""Regular solutions of the inequality ``A x + b <= x``.

For a square ``A`` with ``Tr(A) <= 1`` every regular solution has the form
``x = A* u`` with ``u`` regular and ``u >= b``; otherwise none exists.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import semifield as sf
from .linalg import (
    Mat,
    is_regular,
    mat_add,
    mat_leq,
    mat_mul,
    normal_form,
    power_sum,
    star,
    tr_sum,
)
from .semifield import Semifield

__all__ = [
    "FEAS_TOL",
    "Infeasible",
    "SolutionSet",
    "UnboundedBelow",
    "is_feasible",
    "minimal_solution",
    "sample",
    "solve_inequality",
    "star_by_decomposition",
    "verify_inequality",
]

# Ties at Tr(A) == 1 count as feasible.
FEAS_TOL = 1e-9


class UnboundedBelow(ValueError):
    """The solution set has no least regular element."""


@dataclass(frozen=True)
class Infeasible:
    reason: str = ""

    status = "infeasible"


@dataclass(frozen=True, eq=False)
class SolutionSet:
    """All vectors ``generator @ u`` with ``u`` regular and ``u >= lower``.

    Null entries of ``lower`` leave the matching component of ``u`` free.
    """

    generator: Mat
    lower: Mat

    def __post_init__(self):
        n = self.generator.rows
        if not self.generator.is_square or self.lower.shape != (n, 1):
            raise ValueError(f"generator {self.generator.shape} and lower {self.lower.shape} do not conform")
        if self.generator.field is not self.lower.field:
            raise sf.SemifieldMismatch("generator and lower bound in different semifields")

    @property
    def field(self) -> Semifield:
        return self.generator.field

    @property
    def n(self) -> int:
        return self.generator.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, SolutionSet):
            return NotImplemented
        return self.generator == other.generator and self.lower == other.lower


def is_feasible(A: Mat, tol: float = FEAS_TOL) -> bool:
    """``Tr(A) <= 1`` with ties resolved toward feasibility."""
    field = A.field
    return bool(field.leq_repr(field.to_repr(tr_sum(A)), field.one_repr, tol))


def solve_inequality(A: Mat, b: Mat) -> SolutionSet | Infeasible:
    if not A.is_square:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    if b.shape != (A.rows, 1):
        raise ValueError(f"b must be a column of length {A.rows}, got shape {b.shape}")
    if A.field is not b.field:
        raise sf.SemifieldMismatch(f"{A.field.value} vs {b.field.value}")
    if not is_feasible(A):
        return Infeasible(f"Tr(A) = {tr_sum(A).value} exceeds the identity")
    return SolutionSet(star(A), b)


def minimal_solution(ss: SolutionSet) -> Mat:
    """Least element ``generator @ lower`` of the set."""
    if not is_regular(ss.lower):
        raise UnboundedBelow("lower bound has null entries; no least regular solution")
    return mat_mul(ss.generator, ss.lower)


def sample(ss: SolutionSet, u: Mat) -> Mat:
    if u.shape != (ss.n, 1):
        raise ValueError(f"u must be a column of length {ss.n}, got shape {u.shape}")
    if not is_regular(u):
        raise ValueError("u must be regular")
    if not mat_leq(ss.lower, u):
        raise ValueError("u violates the lower bound")
    return mat_mul(ss.generator, u)


def verify_inequality(A: Mat, b: Mat, x: Mat, tol: float = 0.0) -> bool:
    """Direct substitution: ``x`` regular and ``A x + b <= x`` entrywise."""
    if x.shape != b.shape or A.cols != x.rows:
        raise ValueError(f"shapes do not conform: A {A.shape}, b {b.shape}, x {x.shape}")
    if not is_regular(x):
        return False
    return mat_leq(mat_add(mat_mul(A, x), b), x, tol)


def star_by_decomposition(A: Mat) -> Mat:
    """Closure of ``A`` assembled from its normal form as ``(D* T)* D*``.

    ``D`` keeps the diagonal blocks, ``T`` the entries below them; ``D*`` is
    built block by block from the closures of the irreducible (or zero)
    diagonal blocks.  Agrees with :func:`star` whenever ``Tr(A) <= 1``.
    """
    n = A.rows
    field = A.field
    nf = normal_form(A)
    label = np.array(nf.block_index())
    same = label[:, None] == label[None, :]
    null = field.null_repr
    D = Mat(field, np.where(same, A.data, null), validate=False)
    T = Mat(field, np.where(same, null, A.data), validate=False)

    dstar = Mat.identity(field, n).data.copy()
    for members in nf.blocks:
        idx = list(members)
        dstar[np.ix_(idx, idx)] = star(D.submatrix(idx, idx)).data
    Dstar = Mat(field, dstar, validate=False)
    return mat_mul(power_sum(mat_mul(Dstar, T), n - 1), Dstar)
