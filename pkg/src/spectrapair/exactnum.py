"""Exact rationals, roots of unity and closed-form exponential integrals.

Rationals are plain :class:`fractions.Fraction` objects. Complex values are
Python ``complex`` (double precision); every phase ``e^{2 pi i q}`` with
rational ``q`` is reduced modulo 1 *exactly* before touching floats, so large
numerators never cost accuracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

import numpy as np

Real = Union[int, float, Fraction]

# |t| * (b - a) below this uses the series for sin(pi x) / (pi x)
SMALL_ARG = 1e-6

_QUARTER_TURNS = {
    Fraction(0): complex(1.0, 0.0),
    Fraction(1, 4): complex(0.0, 1.0),
    Fraction(1, 2): complex(-1.0, 0.0),
    Fraction(3, 4): complex(0.0, -1.0),
}


def as_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction.

    Accepts ints, Fractions and strings such as ``"3/8"`` or ``"-2"``.
    Floats are rejected: every rational datum in this package is meant to
    be exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def frac_part(q: Fraction) -> Fraction:
    """``q mod 1`` in ``[0, 1)``, exactly."""
    return q - math.floor(q)


def cis(x: Real) -> complex:
    """``e^{2 pi i x}``.

    Exact rationals are reduced mod 1 without rounding; quarter turns come
    back as exact ``+-1`` / ``+-i``. Floats are reduced to ``[-1/2, 1/2]``
    first.
    """
    if is_exact(x):
        r = frac_part(Fraction(x))
        hit = _QUARTER_TURNS.get(r)
        if hit is not None:
            return hit
        angle = 2.0 * math.pi * float(r)
    else:
        xf = float(x)
        if not math.isfinite(xf):
            raise ValueError(f"non-finite phase {x!r}")
        angle = 2.0 * math.pi * (xf - round(xf))
    return complex(math.cos(angle), math.sin(angle))


def unit_exp(q) -> complex:
    """``e^{2 pi i q}`` for a rational ``q``."""
    return cis(as_rational(q))


def cis_array(x: np.ndarray) -> np.ndarray:
    """Vectorised :func:`cis` for float arrays."""
    x = np.asarray(x, dtype=float)
    r = x - np.round(x)
    return np.exp(2j * np.pi * r)


def _sin_pi(x: Real) -> float:
    # sin(pi x) = Im e^{2 pi i x/2}; cis does the range reduction
    if is_exact(x):
        return cis(Fraction(x) / 2).imag
    return cis(float(x) / 2.0).imag


def sinc(x: Real) -> float:
    """Normalised sinc ``sin(pi x) / (pi x)`` with a series near 0."""
    if is_exact(x):
        q = Fraction(x)
        if q == 0:
            return 1.0
        if q.denominator == 1:
            return 0.0
    xf = float(x)
    if abs(xf) < SMALL_ARG:
        y = (math.pi * xf) ** 2
        return 1.0 - y / 6.0 + y * y / 120.0
    return _sin_pi(x) / (math.pi * xf)


def sinc_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SMALL_ARG
    y = (np.pi * x) ** 2
    series = 1.0 - y / 6.0 + y * y / 120.0
    safe = np.where(small, 1.0, x)
    return np.where(small, series, np.sin(np.pi * safe) / (np.pi * safe))


def interval_exp_integral(a, b, t: Real) -> complex:
    """``int_a^b e^{2 pi i t x} dx``.

    Evaluated as ``h * sinc(t h) * e^{2 pi i t m}`` with ``h = b - a`` and
    midpoint ``m``; this is the closed-form antiderivative difference
    rewritten so that nothing cancels near ``t = 0``.
    """
    a, b = as_rational(a), as_rational(b)
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b})")
    h = b - a
    if t == 0:
        return complex(float(h), 0.0)
    m = (a + b) / 2
    if is_exact(t):
        t = Fraction(t)
        return float(h) * sinc(t * h) * cis(t * m)
    t = float(t)
    return float(h) * sinc(t * float(h)) * cis(t * float(m))


@dataclass(frozen=True)
class RationalBox:
    """Half-open axis-aligned box ``prod_i [a_i, b_i)`` with rational corners."""

    intervals: tuple

    def __init__(self, intervals: Iterable[Sequence]):
        ivs = []
        for iv in intervals:
            lo, hi = (as_rational(v) for v in iv)
            if not lo < hi:
                raise ValueError(f"degenerate interval [{lo}, {hi})")
            ivs.append((lo, hi))
        if not ivs:
            raise ValueError("a box needs at least one dimension")
        object.__setattr__(self, "intervals", tuple(ivs))

    @classmethod
    def cube(cls, dim: int) -> "RationalBox":
        """The unit cube ``[0, 1)^dim``."""
        return cls([(0, 1)] * dim)

    @property
    def dim(self) -> int:
        return len(self.intervals)

    @property
    def lower(self) -> tuple:
        return tuple(lo for lo, _ in self.intervals)

    @property
    def upper(self) -> tuple:
        return tuple(hi for _, hi in self.intervals)

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for lo, hi in self.intervals:
            v *= hi - lo
        return v

    def shift(self, k: Sequence) -> "RationalBox":
        return RationalBox([(lo + s, hi + s) for (lo, hi), s in zip(self.intervals, k)])

    def intersect(self, other: "RationalBox"):
        """Intersection box, or ``None`` when it has zero volume."""
        ivs = []
        for (a, b), (c, d) in zip(self.intervals, other.intervals):
            lo, hi = max(a, c), min(b, d)
            if not lo < hi:
                return None
            ivs.append((lo, hi))
        return RationalBox(ivs)

    def overlaps(self, other: "RationalBox") -> bool:
        return all(max(a, c) < min(b, d) for (a, b), (c, d) in zip(self.intervals, other.intervals))

    def contains(self, x: Sequence) -> bool:
        return all(lo <= xi < hi for (lo, hi), xi in zip(self.intervals, x))

    def contains_box(self, other: "RationalBox") -> bool:
        return all(a <= c and d <= b for (a, b), (c, d) in zip(self.intervals, other.intervals))

    def interior_point(self) -> tuple:
        return tuple((lo + hi) / 2 for lo, hi in self.intervals)

    def __str__(self) -> str:
        return " x ".join(f"[{lo}, {hi})" for lo, hi in self.intervals)


def as_vector(t, dim: int) -> tuple:
    """Accept a scalar (for ``dim == 1``) or a length-``dim`` sequence."""
    if isinstance(t, (int, float, Fraction, np.number)) and not isinstance(t, bool):
        if dim != 1:
            raise ValueError(f"scalar argument given for dimension {dim}")
        return (t,)
    vec = tuple(t)
    if len(vec) != dim:
        raise ValueError(f"expected a {dim}-vector, got length {len(vec)}")
    return vec


def box_exp_integral(box: RationalBox, t) -> complex:
    """``int_box e^{2 pi i t.x} dx`` as a product of 1-d integrals."""
    t = as_vector(t, box.dim)
    out = complex(1.0, 0.0)
    for (lo, hi), ti in zip(box.intervals, t):
        out *= interval_exp_integral(lo, hi, ti)
        if out == 0:
            break
    return out


def box_exp_integral_many(box: RationalBox, T: np.ndarray) -> np.ndarray:
    """Vectorised :func:`box_exp_integral` over the rows of ``T`` (shape ``(m, d)``)."""
    T = np.asarray(T, dtype=float).reshape(-1, box.dim)
    out = np.ones(T.shape[0], dtype=complex)
    for i, (lo, hi) in enumerate(box.intervals):
        h = float(hi - lo)
        mid = float((lo + hi) / 2)
        ti = T[:, i]
        out *= h * sinc_array(ti * h) * cis_array(ti * mid)
    return out
