from __future__ import annotations

import itertools
import json

import numpy as np
import pytest
from hypothesis import strategies as st

from tropopt.linalg import Mat, scalar_mul, spectral_radius
from tropopt import semifield as sf
from tropopt.semifield import Semifield

MP = Semifield.MAX_PLUS
FIELDS = list(Semifield)
TOL = 1e-9

# Worked examples in R_max,+ (irreducible and reducible cases).
IRRED = {
    "A": [[0, -2], [-7, -3]],
    "C": [[0, -10], [4, -3]],
    "g": [-9, 6],
}
RED = {
    "A": [[-2, None], [-4, 0]],
    "C": [[0, -6], [None, -4]],
    "g": [3, 4],
}


def mp(rows):
    return Mat.from_rows(MP, rows)


def col(values, field=MP):
    return Mat.column(field, values)


@pytest.fixture
def irreducible():
    return mp(IRRED["A"]), mp(IRRED["C"]), col(IRRED["g"])


@pytest.fixture
def reducible():
    return mp(RED["A"]), mp(RED["C"]), col(RED["g"])


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / "irreducible.json"
    path.write_text(json.dumps({"semifield": "max-plus", **IRRED}))
    return path


# -- random generation ----------------------------------------------------------


def value_repr(field: Semifield, k: int) -> float:
    """Integer exponent ``k`` mapped into the carrier (exact in binary floats)."""
    return float(k) if field.is_additive else 2.0 ** k


def random_mat(rng: np.random.Generator, field: Semifield, n: int, m: int | None = None,
               null_p: float = 0.25, lo: int = -9, hi: int = 9) -> Mat:
    m = n if m is None else m
    if not field.is_additive:
        lo, hi = max(lo, -3), min(hi, 3)
    ks = rng.integers(lo, hi + 1, size=(n, m))
    data = np.vectorize(lambda k: value_repr(field, int(k)))(ks).astype(float)
    data[rng.random((n, m)) < null_p] = field.null_repr
    return Mat(field, data)


def random_regular(rng, field: Semifield, n: int, lo: int = -9, hi: int = 9) -> Mat:
    return random_mat(rng, field, n, 1, null_p=0.0, lo=lo, hi=hi)


def normalized(*mats: Mat, by: Mat | None = None) -> list[Mat]:
    """Scale every matrix by the inverse spectral radius of ``by`` so Tr(by) <= 1."""
    lam = spectral_radius(by if by is not None else mats[0])
    if lam.is_null:
        return list(mats)
    s = sf.inv(lam.field, lam)
    return [scalar_mul(s, M) for M in mats]


def compositions(total: int, parts: int):
    """Tuples of ``parts`` non-negative integers summing to ``total``."""
    for idx in itertools.product(range(total + 1), repeat=parts):
        if sum(idx) == total:
            yield idx


@st.composite
def matrices(draw, field: Semifield | None = None, n: int | None = None, null_p: float = 0.25):
    field = field or draw(st.sampled_from(FIELDS))
    n = n or draw(st.integers(1, 4))
    lo, hi = (-9, 9) if field.is_additive else (-3, 3)
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if draw(st.floats(0, 1)) < null_p:
                row.append(None)
            else:
                row.append(value_repr(field, draw(st.integers(lo, hi))))
        rows.append(row)
    return Mat.from_rows(field, rows)
