"""Dense matrix algebra over an idempotent semifield.

Matrices are immutable wrappers around a float array in the semifield's
representation (see :mod:`tropopt.semifield`).  Column vectors are ``n x 1``
matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import semifield as sf
from .semifield import Scalar, Semifield, SemifieldMismatch

__all__ = [
    "Mat",
    "NormalForm",
    "allclose",
    "conjugate",
    "is_irreducible",
    "is_regular",
    "mat_add",
    "mat_leq",
    "mat_mul",
    "mat_pow",
    "normal_form",
    "power_sum",
    "scalar_mul",
    "spectral_radius",
    "star",
    "tr_sum",
    "trace",
]

TOL = 1e-9


class Mat:
    __slots__ = ("field", "data")

    def __init__(self, field: Semifield, data, *, validate: bool = True):
        arr = np.array(data, dtype=float, copy=True)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError(f"matrix must be a non-empty 2-D array, got shape {arr.shape}")
        if validate:
            field.validate_repr(arr)
        arr.flags.writeable = False
        self.field = field
        self.data = arr

    @classmethod
    def from_rows(cls, field: Semifield | str, rows: Sequence[Sequence[float | None]]) -> Mat:
        """Build from nested lists; ``None`` entries are the null element."""
        field = Semifield.parse(field)
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("rows must be non-empty and of equal length")
        data = [[field.null_repr if v is None else float(v) for v in r] for r in rows]
        return cls(field, data)

    @classmethod
    def column(cls, field: Semifield | str, values: Iterable[float | None]) -> Mat:
        return cls.from_rows(field, [[v] for v in values])

    @classmethod
    def zeros(cls, field: Semifield, rows: int, cols: int | None = None) -> Mat:
        cols = rows if cols is None else cols
        return cls(field, np.full((rows, cols), field.null_repr), validate=False)

    @classmethod
    def identity(cls, field: Semifield, n: int) -> Mat:
        data = np.full((n, n), field.null_repr)
        np.fill_diagonal(data, field.one_repr)
        return cls(field, data, validate=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def null_mask(self) -> np.ndarray:
        return self.data == self.field.null_repr

    def __getitem__(self, idx: tuple[int, int]) -> Scalar:
        return self.field.from_repr(self.data[idx])

    def to_rows(self) -> list[list[float | None]]:
        null = self.field.null_repr
        return [[None if v == null else float(v) for v in row] for row in self.data]

    def to_list(self) -> list[float | None]:
        """Flatten a row or column vector."""
        if 1 not in self.shape:
            raise ValueError(f"not a vector: shape {self.shape}")
        null = self.field.null_repr
        return [None if v == null else float(v) for v in self.data.ravel()]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Mat:
        return Mat(self.field, self.data[np.ix_(rows, cols)], validate=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field is other.field and np.array_equal(self.data, other.data)

    __hash__ = None

    def __matmul__(self, other: Mat) -> Mat:
        return mat_mul(self, other)

    def __repr__(self) -> str:
        return f"Mat({self.field.value}, {self.to_rows()})"


def _same_field(*mats: Mat) -> Semifield:
    field = mats[0].field
    for m in mats[1:]:
        if m.field is not field:
            raise SemifieldMismatch(f"{field.value} vs {m.field.value}")
    return field


def _square(A: Mat) -> int:
    if not A.is_square:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    return A.rows


def mat_add(A: Mat, B: Mat) -> Mat:
    field = _same_field(A, B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return Mat(field, field.plus_repr(A.data, B.data), validate=False)


def mat_mul(A: Mat, B: Mat) -> Mat:
    field = _same_field(A, B)
    if A.cols != B.rows:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    prod = field.times_repr(A.data[:, :, None], B.data[None, :, :])
    return Mat(field, field.sum_repr(prod, axis=1), validate=False)


def scalar_mul(x: Scalar, A: Mat) -> Mat:
    field = A.field
    field.check(x)
    return Mat(field, field.times_repr(field.to_repr(x), A.data), validate=False)


def trace(A: Mat) -> Scalar:
    _square(A)
    return A.field.from_repr(A.field.sum_repr(np.diagonal(A.data)))


def mat_pow(A: Mat, p: int) -> Mat:
    n = _square(A)
    if p < 0:
        raise ValueError("negative matrix power")
    result = Mat.identity(A.field, n)
    base = A
    while p:
        if p & 1:
            result = mat_mul(result, base)
        p >>= 1
        if p:
            base = mat_mul(base, base)
    return result


def power_sum(A: Mat, k: int) -> Mat:
    """``I + A + ... + A^k`` accumulated term by term."""
    n = _square(A)
    total = Mat.identity(A.field, n)
    term = total
    for _ in range(k):
        term = mat_mul(term, A)
        total = mat_add(total, term)
    return total


def star(A: Mat) -> Mat:
    """Bounded Kleene star ``I + A + ... + A^(n-1)``.

    Computed as ``(I + A)^(n-1)`` by binary powering; idempotent addition makes
    the two equal.  The exponent must be exact: overshooting would add higher
    powers, which matters whenever ``Tr(A) > 1``.
    """
    n = _square(A)
    return mat_pow(mat_add(Mat.identity(A.field, n), A), n - 1)


def tr_sum(A: Mat) -> Scalar:
    """``tr A + tr A^2 + ... + tr A^n``."""
    n = _square(A)
    field = A.field
    acc = field.null()
    P = A
    for m in range(1, n + 1):
        if m > 1:
            P = mat_mul(P, A)
        acc = sf.add(field, acc, trace(P))
    return acc


def spectral_radius(A: Mat) -> Scalar:
    """``sum_m tr(A^m)^(1/m)`` for ``m = 1..n``; null when no cycle exists."""
    n = _square(A)
    field = A.field
    acc = field.null()
    P = A
    for m in range(1, n + 1):
        if m > 1:
            P = mat_mul(P, A)
        acc = sf.add(field, acc, sf.pow(field, trace(P), Fraction(1, m)))
    return acc


def conjugate(x: Mat) -> Mat:
    """Multiplicative conjugate transpose of a nonzero column vector."""
    if x.cols != 1:
        raise ValueError(f"column vector required, got shape {x.shape}")
    if x.null_mask.all():
        raise ValueError("conjugate of the zero vector is undefined")
    return Mat(x.field, x.field.inv_repr(x.data).T, validate=False)


def is_regular(x: Mat) -> bool:
    return not x.null_mask.any()


def mat_leq(A: Mat, B: Mat, tol: float = 0.0) -> bool:
    """Entrywise ``A <= B`` in the semifield order."""
    field = _same_field(A, B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return bool(field.leq_repr(A.data, B.data, tol).all())


def allclose(A: Mat, B: Mat, tol: float = TOL) -> bool:
    """Same null pattern and finite entries within ``tol``."""
    field = _same_field(A, B)
    if A.shape != B.shape:
        return False
    na, nb = A.null_mask, B.null_mask
    if not np.array_equal(na, nb):
        return False
    fin = ~na
    return bool(np.all(np.abs(A.data[fin] - B.data[fin]) <= tol)) if fin.any() else True


@dataclass(frozen=True)
class NormalForm:
    """Lower block-triangular arrangement of a square matrix.

    ``permutation[k]`` is the original index placed at position ``k``; blocks
    occupy consecutive positions with sizes ``block_sizes``.
    """

    permutation: tuple[int, ...]
    block_sizes: tuple[int, ...]
    block_is_zero: tuple[bool, ...]

    @property
    def blocks(self) -> list[tuple[int, ...]]:
        out, start = [], 0
        for size in self.block_sizes:
            out.append(self.permutation[start:start + size])
            start += size
        return out

    def block_index(self) -> list[int]:
        """Block number of every original index."""
        label = [0] * len(self.permutation)
        for b, members in enumerate(self.blocks):
            for i in members:
                label[i] = b
        return label

    def apply(self, A: Mat) -> Mat:
        """Permute rows and columns of ``A`` into the normal form."""
        p = list(self.permutation)
        return A.submatrix(p, p)


def normal_form(A: Mat) -> NormalForm:
    """Strongly connected components of the support digraph, sinks first.

    An arc ``i -> j`` exists when ``a_ij`` is non-null.  Components are placed
    so that every arc points to an earlier (or the same) block, which makes the
    permuted matrix lower block-triangular.  Ties go to the component holding
    the smallest original index.
    """
    n = _square(A)
    G = nx.DiGraph()
    G.add_nodes_from(range(n))
    rows, cols = np.nonzero(~A.null_mask)
    G.add_edges_from(zip(rows.tolist(), cols.tolist()))
    cond = nx.condensation(G)
    members = {c: sorted(cond.nodes[c]["members"]) for c in cond.nodes}
    order = nx.lexicographical_topological_sort(cond.reverse(copy=True), key=lambda c: members[c][0])

    perm: list[int] = []
    sizes: list[int] = []
    zero: list[bool] = []
    for c in order:
        idx = members[c]
        perm.extend(idx)
        sizes.append(len(idx))
        zero.append(len(idx) == 1 and bool(A.null_mask[idx[0], idx[0]]))
    return NormalForm(tuple(perm), tuple(sizes), tuple(zero))


def is_irreducible(A: Mat) -> bool:
    nf = normal_form(A)
    return len(nf.block_sizes) == 1 and not nf.block_is_zero[0]
