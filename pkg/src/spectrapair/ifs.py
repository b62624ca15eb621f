"""One-dimensional affine iterated function systems ``tau_b(x) = (x + b) / R``.

Covers Hadamard-pair checks, the exact extreme-cycle search on the lattice
where ``|m_B| = 1``, the infinite-product Fourier transform of the invariant
measure, truncated spectral (Bessel) sums over the candidate spectrum
``{sum_k R^k l_k}``, and support covers used to certify that two invariant
measures are not translation equivalent.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import PreconditionError
from .exactnum import cis, frac_part

DEFAULT_FACTORS = 40
HADAMARD_TOL = 1e-10

Interval = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class AffineIFS:
    """Scale ``R >= 2`` and distinct integer digits ``B`` (at least two)."""

    R: int
    B: tuple

    def __init__(self, R: int, B: Iterable[int]):
        B = tuple(sorted(int(b) for b in B))
        if int(R) != R or R < 2:
            raise ValueError(f"scale must be an integer >= 2, got {R}")
        if len(B) < 2 or len(set(B)) != len(B):
            raise ValueError(f"need at least two distinct digits, got {B}")
        object.__setattr__(self, "R", int(R))
        object.__setattr__(self, "B", B)

    def tau(self, b: int, x):
        return (x + b) / Fraction(self.R)

    def fixed_points(self) -> list:
        """Fixed points ``b / (R - 1)`` of the maps, in digit order."""
        return [Fraction(b, self.R - 1) for b in self.B]


@dataclass(frozen=True)
class Cycle:
    """A closed orbit ``x_{i+1} = (x_i + l_i) / R`` (indices mod ``p``), smallest point first."""

    points: tuple
    digits: tuple

    @property
    def period(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SpectrumSlice:
    R: int
    L: tuple
    depth: int
    frequencies: tuple

    def __len__(self) -> int:
        return len(self.frequencies)


def _digits(D: Iterable[int]) -> tuple:
    D = tuple(sorted(int(d) for d in D))
    if len(set(D)) != len(D):
        raise ValueError(f"digits must be distinct, got {D}")
    return D


def hadamard_matrix(R: int, B: Sequence[int], L: Sequence[int]) -> np.ndarray:
    B, L = _digits(B), _digits(L)
    if len(B) != len(L):
        raise PreconditionError(f"|B| = {len(B)} but |L| = {len(L)}")
    M = np.array([[cis(Fraction(b * l, R)) for l in L] for b in B], dtype=complex)
    return M / math.sqrt(len(B))


def is_hadamard_pair(R: int, B: Sequence[int], L: Sequence[int], tol: float = HADAMARD_TOL) -> bool:
    M = hadamard_matrix(R, B, L)
    G = M.conj().T @ M
    return bool(np.max(np.abs(G - np.eye(len(M)))) < tol)


def m_B(B: Sequence[int], x) -> complex:
    """The digit filter ``(1/|B|) sum_b e^{2 pi i b x}``."""
    return sum((cis(b * x) for b in B), complex(0.0)) / len(B)


def attractor_interval(R: int, L: Sequence[int]) -> Interval:
    """Convex hull of the attractor of ``x -> (x + l) / R``."""
    return Fraction(min(L), R - 1), Fraction(max(L), R - 1)


def digit_gcd(B: Sequence[int]) -> int:
    """gcd of all pairwise digit differences; ``|m_B(x)| = 1`` iff ``gcd * x`` is an integer."""
    b0 = min(B)
    return reduce(math.gcd, (b - b0 for b in B), 0)


def cycle_candidates(R: int, B: Sequence[int], L: Sequence[int]) -> list:
    """All ``k / g`` inside the attractor hull of the dual system."""
    g = digit_gcd(B)
    lo, hi = attractor_interval(R, L)
    return [Fraction(k, g) for k in range(math.ceil(lo * g), math.floor(hi * g) + 1)]


def _cycle_graph(R: int, L: Sequence[int], candidates: Sequence[Fraction]) -> nx.DiGraph:
    nodes = set(candidates)
    G = nx.DiGraph()
    G.add_nodes_from(candidates)
    for x in candidates:
        for l in L:
            y = (x + l) / R
            if y in nodes:
                G.add_edge(x, y, digit=l)
    return G


def extreme_cycles(R: int, B: Sequence[int], L: Sequence[int]) -> List[Cycle]:
    """Every nontrivial cycle of the dual maps on the ``|m_B| = 1`` lattice.

    The fixed point ``{0}`` (present when ``0 in L``) is left out.  Cycles
    are ordered by their smallest point, then by period.
    """
    B, L = _digits(B), _digits(L)
    if not is_hadamard_pair(R, B, L):
        raise PreconditionError(f"({R}, {B}, {L}) is not a Hadamard pair")
    G = _cycle_graph(R, L, cycle_candidates(R, B, L))
    cycles = []
    for nodes in nx.simple_cycles(G):
        i = nodes.index(min(nodes))
        pts = tuple(nodes[i:] + nodes[:i])
        if pts == (Fraction(0),):
            continue
        digits = tuple(G.edges[pts[j], pts[(j + 1) % len(pts)]]["digit"] for j in range(len(pts)))
        cycles.append(Cycle(pts, digits))
    cycles.sort(key=lambda c: (c.points[0], c.period, c.points))
    return cycles


def gamma_slice(R: int, L: Sequence[int], n: int) -> SpectrumSlice:
    """``{sum_{k<n} R^k l_k : l_k in L}``, ascending."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    L = _digits(L)
    freqs = {0}
    for k in range(n):
        freqs = {f + R**k * l for f in freqs for l in L}
    return SpectrumSlice(R, L, n, tuple(sorted(freqs)))


def mu_hat_ifs(R: int, B: Sequence[int], t, K: int = DEFAULT_FACTORS):
    """``prod_{k=1}^K m_B(t / R^k)``; ``t`` may be a scalar or a float array."""
    if K < 1:
        raise ValueError("need at least one factor")
    arr = np.asarray(t, dtype=float)
    out = np.ones(arr.shape, dtype=complex)
    Bf = np.asarray(B, dtype=float)
    for k in range(1, K + 1):
        s = arr / float(R) ** k
        phase = np.multiply.outer(s, Bf)
        out *= np.mean(np.exp(2j * np.pi * (phase - np.round(phase))), axis=-1)
    if np.ndim(t) == 0:
        return complex(out)
    return out


def spectral_sum(R: int, B: Sequence[int], gamma, t: float, K: int = DEFAULT_FACTORS) -> float:
    """``sum_{lambda in Gamma_n} |mu_hat(t - lambda)|^2``."""
    freqs = gamma.frequencies if isinstance(gamma, SpectrumSlice) else tuple(gamma)
    lam = np.asarray(freqs, dtype=float)
    vals = mu_hat_ifs(R, B, float(t) - lam, K)
    return float(np.sum(np.abs(vals) ** 2))


def merge_intervals(intervals: Iterable[Interval]) -> List[Interval]:
    """Union of closed intervals, sorted, touching ones joined."""
    out: List[list] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def support_cover(R: int, B: Sequence[int], depth: int) -> List[Interval]:
    """``union_{|w| = depth} tau_w([min B/(R-1), max B/(R-1)])``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    B = _digits(B)
    pieces = [attractor_interval(R, B)]
    for _ in range(depth):
        pieces = merge_intervals(
            ((lo + b) / R, (hi + b) / R) for lo, hi in pieces for b in B
        )
    return merge_intervals(pieces)


def _mod_one(intervals: Sequence[Interval]) -> List[Interval]:
    out = []
    for lo, hi in intervals:
        if hi - lo >= 1:
            return [(Fraction(0), Fraction(1))]
        a, b = frac_part(lo), frac_part(lo) + (hi - lo)
        if b <= 1:
            out.append((a, b))
        else:
            out.extend([(a, Fraction(1)), (Fraction(0), b - 1)])
    return merge_intervals(out)


def circle_distance(p: Fraction, intervals: Sequence[Interval]) -> Fraction:
    """Distance on ``R / Z`` from ``p`` to the union of ``intervals`` (already reduced to ``[0, 1]``)."""
    best = None
    for lo, hi in intervals:
        if lo <= p <= hi:
            return Fraction(0)
        d = min(abs(p - lo), abs(p - hi), 1 - abs(p - lo), 1 - abs(p - hi))
        best = d if best is None else min(best, d)
    return best if best is not None else Fraction(1, 2)


def non_equivalence_certificate(
    first: AffineIFS, second: AffineIFS, depth: int
) -> Optional[Tuple[Fraction, Fraction]]:
    """A fixed point of ``second`` whose class mod 1 avoids the depth-``depth`` cover of ``first``.

    Returns ``(point, distance)``.  A fixed point carries positive mass of
    ``second``'s measure in every neighbourhood, so positive distance rules
    out any piecewise integer translation onto ``first``'s measure.  ``None``
    proves nothing.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    cover = _mod_one(support_cover(first.R, first.B, depth))
    for p in second.fixed_points():
        dist = circle_distance(frac_part(p), cover)
        if dist > 0:
            return p, dist
    return None
