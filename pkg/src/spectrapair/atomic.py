"""Equal-weight atomic measures and finite spectra.

A measure ``delta_A = (1/N) sum_{a in A} delta_a`` has the finite frequency
set ``Lambda`` (``|Lambda| = N``) as spectrum iff the exponential matrix
``(1/sqrt N)(e^{2 pi i a.lambda})`` is unitary.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import PreconditionError
from .exactnum import as_rational, as_vector, cis, frac_part

DEFAULT_TOL = 1e-10


def _point(p) -> tuple:
    if isinstance(p, (list, tuple)):
        return tuple(as_rational(c) for c in p)
    return (as_rational(p),)


@dataclass(frozen=True)
class AtomicMeasure:
    """Distinct rational atoms, each of weight ``1/N``.

    1-d atoms may be given as bare rationals: ``AtomicMeasure([0, "1/8"])``.
    """

    points: tuple
    dim: int

    def __init__(self, points: Iterable):
        pts = tuple(_point(p) for p in points)
        if not pts:
            raise ValueError("an atomic measure needs at least one atom")
        dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise ValueError("atoms of mixed dimension")
        if len(set(pts)) != len(pts):
            raise ValueError("atoms must be pairwise distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dim", dim)

    @property
    def N(self) -> int:
        return len(self.points)

    def shift(self, s) -> "AtomicMeasure":
        s = tuple(as_rational(c) for c in as_vector(s, self.dim))
        return AtomicMeasure([tuple(a + c for a, c in zip(p, s)) for p in self.points])

    def contains(self, x) -> bool:
        x = tuple(as_rational(c) for c in as_vector(x, self.dim))
        return x in self.points


@dataclass(frozen=True)
class FrequencySet:
    """Distinct integer frequency vectors."""

    frequencies: tuple
    dim: int

    def __init__(self, frequencies: Iterable):
        fs = []
        for f in frequencies:
            vec = tuple(f) if isinstance(f, (list, tuple)) else (f,)
            if any(int(c) != c for c in vec):
                raise ValueError(f"frequency {f} is not an integer vector")
            fs.append(tuple(int(c) for c in vec))
        if len(set(fs)) != len(fs):
            raise ValueError("frequencies must be pairwise distinct")
        dim = len(fs[0]) if fs else 1
        object.__setattr__(self, "frequencies", tuple(fs))
        object.__setattr__(self, "dim", dim)

    @classmethod
    def range(cls, N: int) -> "FrequencySet":
        """``{0, 1, ..., N-1}``."""
        return cls(range(N))

    def __len__(self) -> int:
        return len(self.frequencies)

    def __iter__(self):
        return iter(self.frequencies)


def _dot(p, q):
    return sum(a * b for a, b in zip(p, q))


def exp_matrix(A: AtomicMeasure, freqs) -> np.ndarray:
    """The normalised matrix ``(1/sqrt N)(e^{2 pi i a.lambda})``, rows ``a``, columns ``lambda``."""
    if not isinstance(freqs, FrequencySet):
        freqs = FrequencySet(freqs)
    if len(freqs) != A.N:
        raise PreconditionError(f"{A.N} atoms but {len(freqs)} frequencies")
    M = np.array([[cis(_dot(a, lam)) for lam in freqs] for a in A.points], dtype=complex)
    return M / math.sqrt(A.N)


def unitarity_defect(M: np.ndarray) -> float:
    """``max |M* M - I|``."""
    G = M.conj().T @ M
    return float(np.max(np.abs(G - np.eye(M.shape[0]))))


def is_spectrum_atomic(A: AtomicMeasure, freqs, tol: float = DEFAULT_TOL) -> bool:
    if not isinstance(freqs, FrequencySet):
        freqs = FrequencySet(freqs)
    if len(freqs) != A.N:
        return False
    return unitarity_defect(exp_matrix(A, freqs)) < tol


@dataclass(frozen=True)
class ResidueForm:
    """Outcome of :func:`residue_form`: ``A = shift + (1/N) representatives``."""

    holds: bool
    shift: Optional[Fraction] = None
    representatives: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.holds


def residue_form(A: AtomicMeasure, N: Optional[int] = None) -> ResidueForm:
    """Check that ``N (A - min A)`` is a complete residue system mod ``N``.

    Only the differences between atoms matter for the spectrum, so the
    characterisation is tested after translating the smallest atom to 0.
    """
    if A.dim != 1:
        raise PreconditionError("residue_form is one-dimensional")
    N = A.N if N is None else N
    if A.N != N:
        return ResidueForm(False)
    xs = [p[0] for p in A.points]
    s = min(xs)
    scaled = [N * (x - s) for x in xs]
    if any(q.denominator != 1 for q in scaled):
        return ResidueForm(False, s)
    reps = tuple(sorted(int(q) for q in scaled))
    if len({r % N for r in reps}) != N:
        return ResidueForm(False, s, reps)
    return ResidueForm(True, s, reps)


@dataclass(frozen=True)
class AtomicEquivalence:
    """Outcome of :func:`translation_equivalent_atomic`.

    ``bijection`` lists ``(a, a2, k)`` with ``a + k = a2`` and ``k`` integral.
    """

    equivalent: bool
    bijection: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.equivalent


def _residue(p) -> tuple:
    return tuple(frac_part(c) for c in p)


def translation_equivalent_atomic(A: AtomicMeasure, B: AtomicMeasure) -> AtomicEquivalence:
    """Atoms can be matched by integer shifts iff their residues mod 1 coincide."""
    if A.N != B.N or A.dim != B.dim:
        return AtomicEquivalence(False)
    if Counter(map(_residue, A.points)) != Counter(map(_residue, B.points)):
        return AtomicEquivalence(False)
    src = sorted(A.points, key=lambda p: (_residue(p), p))
    dst = sorted(B.points, key=lambda p: (_residue(p), p))
    pairs = tuple(
        (a, b, tuple(int(bc - ac) for ac, bc in zip(a, b))) for a, b in zip(src, dst)
    )
    return AtomicEquivalence(True, pairs)


def atomic_fourier_transform(A: AtomicMeasure, t) -> complex:
    """``(1/N) sum_a e^{2 pi i a.t}``."""
    t = as_vector(t, A.dim)
    return sum((cis(_dot(a, t)) for a in A.points), complex(0.0)) / A.N


def atomic_fourier_transform_many(A: AtomicMeasure, T) -> np.ndarray:
    T = np.asarray(T, dtype=float).reshape(-1, A.dim)
    P = np.array([[float(c) for c in p] for p in A.points])
    phase = T @ P.T
    return np.mean(np.exp(2j * np.pi * (phase - np.round(phase))), axis=1)
