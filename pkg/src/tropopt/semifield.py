"""Linearly ordered radicable idempotent semifields.

Four concrete instances are provided: max-plus, min-plus, max-times and
min-times.  Scalars carry their semifield tag and an explicit null element
(``value is None``); mixing tags raises :class:`SemifieldMismatch`.

Matrix code in :mod:`tropopt.linalg` works on plain float arrays instead, where
the null element is stored as the semifield's own extended-real zero
(``-inf``, ``+inf`` or ``0``).  The ``*_repr`` helpers on :class:`Semifield`
implement the array-level arithmetic for that encoding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

import numpy as np

__all__ = [
    "DomainError",
    "Scalar",
    "Semifield",
    "SemifieldMismatch",
    "add",
    "inv",
    "leq",
    "mul",
    "pow",
]

Exponent = Union[int, Fraction]


class SemifieldMismatch(ValueError):
    """Operands belong to different semifields."""


class DomainError(ValueError):
    """Operation undefined for the null element (e.g. inverting zero)."""


class Semifield(Enum):
    MAX_PLUS = "max-plus"
    MIN_PLUS = "min-plus"
    MAX_TIMES = "max-times"
    MIN_TIMES = "min-times"

    @classmethod
    def parse(cls, tag: str | Semifield) -> Semifield:
        if isinstance(tag, Semifield):
            return tag
        try:
            return cls(tag.strip().lower().replace("_", "-"))
        except ValueError:
            known = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown semifield {tag!r} (expected one of {known})") from None

    @property
    def is_max(self) -> bool:
        """True when addition is ``max`` (order agrees with the real order)."""
        return self in (Semifield.MAX_PLUS, Semifield.MAX_TIMES)

    @property
    def is_additive(self) -> bool:
        """True when multiplication is conventional ``+``."""
        return self in (Semifield.MAX_PLUS, Semifield.MIN_PLUS)

    # -- scalar constructors -------------------------------------------------

    def null(self) -> Scalar:
        return Scalar(self, None)

    def one(self) -> Scalar:
        return Scalar(self, self.one_repr)

    def scalar(self, value: float | None) -> Scalar:
        """Wrap a real (or ``None`` for null) as a scalar of this semifield."""
        if value is None:
            return Scalar(self, None)
        return self.from_repr(float(value))

    # -- representation helpers ----------------------------------------------

    @property
    def null_repr(self) -> float:
        if self is Semifield.MAX_PLUS:
            return -math.inf
        if self is Semifield.MAX_TIMES:
            return 0.0
        return math.inf

    @property
    def one_repr(self) -> float:
        return 0.0 if self.is_additive else 1.0

    def from_repr(self, r: float) -> Scalar:
        if r == self.null_repr:
            return Scalar(self, None)
        return Scalar(self, float(r))

    def to_repr(self, a: Scalar) -> float:
        self.check(a)
        return self.null_repr if a.value is None else a.value

    def check(self, *scalars: Scalar) -> None:
        for a in scalars:
            if a.field is not self:
                raise SemifieldMismatch(f"expected {self.value} scalar, got {a.field.value}")

    def validate_repr(self, data: np.ndarray) -> None:
        """Reject arrays that contain values outside the semifield carrier."""
        if np.isnan(data).any():
            raise ValueError("NaN is not a semifield element")
        if self is Semifield.MAX_PLUS:
            bad = data == math.inf
        elif self is Semifield.MIN_PLUS:
            bad = data == -math.inf
        elif self is Semifield.MAX_TIMES:
            bad = (data < 0) | (data == math.inf)
        else:
            bad = data <= 0
        if bad.any():
            raise ValueError(f"value outside the {self.value} carrier: {data[bad][0]!r}")

    def plus_repr(self, a, b):
        return np.maximum(a, b) if self.is_max else np.minimum(a, b)

    def times_repr(self, a, b):
        return np.add(a, b) if self.is_additive else np.multiply(a, b)

    def sum_repr(self, a, axis=None):
        """Idempotent sum (``max`` or ``min``) along ``axis``."""
        return np.max(a, axis=axis) if self.is_max else np.min(a, axis=axis)

    def leq_repr(self, a, b, tol: float = 0.0):
        """Semifield order on representations; ``tol`` slackens toward true."""
        if self.is_max:
            return np.asarray(a) <= np.asarray(b) + tol
        return np.asarray(a) >= np.asarray(b) - tol

    def inv_repr(self, a):
        """Entrywise inverse with the null element passed through unchanged."""
        a = np.asarray(a, dtype=float)
        null = a == self.null_repr
        with np.errstate(divide="ignore"):
            out = -a if self.is_additive else 1.0 / a
        return np.where(null, self.null_repr, out)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Scalar:
    """Semifield element; ``value is None`` encodes the null element."""

    field: Semifield
    value: float | None = None

    def __post_init__(self):
        v = self.value
        if v is None:
            return
        if not math.isfinite(v):
            raise ValueError(f"finite scalar expected, got {v!r}; use None for null")
        if not self.field.is_additive and v <= 0:
            raise ValueError(f"{self.field.value} scalars must be positive, got {v!r}")

    @property
    def is_null(self) -> bool:
        return self.value is None

    def __repr__(self) -> str:
        return f"{self.field.value}:{'null' if self.value is None else self.value!r}"


def _check(s: Semifield, *scalars: Scalar) -> None:
    s.check(*scalars)


def add(s: Semifield, a: Scalar, b: Scalar) -> Scalar:
    _check(s, a, b)
    if a.value is None:
        return b
    if b.value is None:
        return a
    return Scalar(s, max(a.value, b.value) if s.is_max else min(a.value, b.value))


def mul(s: Semifield, a: Scalar, b: Scalar) -> Scalar:
    _check(s, a, b)
    if a.value is None or b.value is None:
        return Scalar(s, None)
    return Scalar(s, a.value + b.value if s.is_additive else a.value * b.value)


def inv(s: Semifield, a: Scalar) -> Scalar:
    _check(s, a)
    if a.value is None:
        raise DomainError("the null element has no inverse")
    return Scalar(s, -a.value if s.is_additive else 1.0 / a.value)


def pow(s: Semifield, a: Scalar, q: Exponent) -> Scalar:  # noqa: A001 - mirrors the algebra
    """Rational power ``a**q``; ``q`` is kept exact until the final evaluation."""
    _check(s, a)
    q = Fraction(q)
    if a.value is None:
        if q > 0:
            return a
        raise DomainError(f"null element raised to non-positive power {q}")
    if q == 0:
        return s.one()
    if s.is_additive:
        return Scalar(s, a.value * q.numerator / q.denominator)
    if q.denominator == 1:
        return Scalar(s, a.value ** q.numerator)
    return Scalar(s, a.value ** (q.numerator / q.denominator))


def leq(s: Semifield, a: Scalar, b: Scalar) -> bool:
    """``a <= b`` in the order induced by idempotent addition (``a + b == b``)."""
    _check(s, a, b)
    if a.value is None:
        return True
    if b.value is None:
        return False
    return a.value <= b.value if s.is_max else a.value >= b.value
