"""Step densities ``d mu = phi dx`` and their integer-lattice spectral theory.

Every ``a.e.`` statement is decided exactly: densities live on half-open
rational boxes, and integer periodisation is handled by folding each box
onto a *residue grid* of ``[0, 1)^d``.  On a residue cell ``c`` the density
restricted to the translates ``c + k`` is constant for each ``k``; the map
``k -> phi(c + k)`` is the *fiber* of ``c``.
"""
from __future__ import annotations

import itertools
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidPartitionError, PreconditionError
from .exactnum import (
    RationalBox,
    as_rational,
    as_vector,
    box_exp_integral,
    box_exp_integral_many,
    cis,
    frac_part,
)

ORTHONORMAL_AND_COMPLETE = "orthonormal_and_complete"
ORTHONORMAL_INCOMPLETE = "orthonormal_incomplete"
NOT_ORTHONORMAL = "not_orthonormal"

FLOAT_TOL = 1e-9


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class StepDensity:
    """Finitely many disjoint boxes carrying nonnegative rational values.

    Zero-valued cells are dropped on construction.  The density need not be
    a probability density (``fold_to_cube`` may return a subprobability);
    check :attr:`is_probability` where it matters.
    """

    cells: tuple
    dim: int

    def __init__(self, cells: Iterable, dim: Optional[int] = None):
        norm = []
        for box, value in cells:
            if not isinstance(box, RationalBox):
                box = RationalBox(box)
            value = as_rational(value)
            if value < 0:
                raise ValueError(f"negative density value {value} on {box}")
            if value == 0:
                continue
            norm.append((box, value))
        if dim is None:
            if not norm:
                raise ValueError("cannot infer the dimension of an empty density")
            dim = norm[0][0].dim
        for box, _ in norm:
            if box.dim != dim:
                raise ValueError(f"box {box} is not {dim}-dimensional")
        clash = _first_overlap([b for b, _ in norm])
        if clash:
            raise ValueError("overlapping cells {} and {}".format(*clash))
        norm.sort(key=lambda c: (c[0].intervals, c[1]))
        object.__setattr__(self, "cells", tuple(norm))
        object.__setattr__(self, "dim", dim)

    @classmethod
    def indicator(cls, boxes: Iterable, dim: Optional[int] = None) -> "StepDensity":
        return cls([(b, 1) for b in boxes], dim)

    @classmethod
    def unit_cube(cls, dim: int = 1) -> "StepDensity":
        return cls([(RationalBox.cube(dim), 1)], dim)

    @property
    def mass(self) -> Fraction:
        return sum((b.volume * v for b, v in self.cells), Fraction(0))

    @property
    def is_probability(self) -> bool:
        return self.mass == 1

    def value_at(self, x: Sequence) -> Fraction:
        for box, v in self.cells:
            if box.contains(x):
                return v
        return Fraction(0)

    def shift(self, k: Sequence[int]) -> "StepDensity":
        return StepDensity([(b.shift(k), v) for b, v in self.cells], self.dim)


@dataclass(frozen=True)
class CongruencePartition:
    """Pieces ``E_k`` of ``[0, 1)^d`` together with their integer shifts ``k``.

    ``pieces`` is a tuple of ``(shift, boxes)``; validation happens on
    construction and raises :class:`InvalidPartitionError` naming the
    violated invariant.
    """

    pieces: tuple
    dim: int

    def __init__(self, pieces: Iterable, dim: Optional[int] = None):
        grouped: dict = {}
        for shift, boxes in pieces:
            shift = tuple(int(s) for s in shift)
            if isinstance(boxes, RationalBox):
                boxes = [boxes]
            boxes = [b if isinstance(b, RationalBox) else RationalBox(b) for b in boxes]
            grouped.setdefault(shift, []).extend(boxes)
        if not grouped:
            raise InvalidPartitionError("nonempty", "no pieces")
        if dim is None:
            dim = len(next(iter(grouped)))
        cube = RationalBox.cube(dim)
        flat = []
        for shift, boxes in grouped.items():
            if len(shift) != dim:
                raise InvalidPartitionError("dimension", f"shift {shift} is not {dim}-dimensional")
            for b in boxes:
                if b.dim != dim:
                    raise InvalidPartitionError("dimension", f"box {b}")
                if not cube.contains_box(b):
                    raise InvalidPartitionError("pieces inside Q", f"{b} leaves [0,1)^{dim}")
                flat.append((shift, b))
        clash = _first_overlap([b for _, b in flat])
        if clash:
            raise InvalidPartitionError("pieces pairwise disjoint", "{} meets {}".format(*clash))
        total = sum((b.volume for _, b in flat), Fraction(0))
        if total != 1:
            raise InvalidPartitionError("pieces cover Q", f"total volume {total}")
        ordered = tuple(
            (shift, tuple(sorted(merge_boxes(grouped[shift]), key=lambda b: b.intervals)))
            for shift in sorted(grouped)
        )
        object.__setattr__(self, "pieces", ordered)
        object.__setattr__(self, "dim", dim)

    @classmethod
    def trivial(cls, dim: int = 1) -> "CongruencePartition":
        return cls([((0,) * dim, [RationalBox.cube(dim)])], dim)

    def volumes(self) -> dict:
        """Piece volume per shift."""
        return {k: sum((b.volume for b in boxes), Fraction(0)) for k, boxes in self.pieces}


@dataclass(frozen=True)
class UnityCheck:
    """Outcome of :func:`verify_partition_of_unity`; truthy iff it holds."""

    holds: bool
    witness: Optional[RationalBox] = None
    witness_sum: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class SpectrumVerdict:
    status: str
    witness: object = None
    certificate: Optional[CongruencePartition] = None

    def __post_init__(self):
        if self.status == ORTHONORMAL_AND_COMPLETE and self.certificate is None:
            raise ValueError("a complete verdict needs a certificate")
        if self.status == NOT_ORTHONORMAL and self.witness is None:
            raise ValueError("a failed verdict needs a witness")

    @property
    def complete(self) -> bool:
        return self.status == ORTHONORMAL_AND_COMPLETE


@dataclass(frozen=True)
class DensityEquivalence:
    """Outcome of :func:`translation_equivalent_density`.

    When ``equivalent`` holds, ``moves`` lists ``(residue_box, k, k2)``:
    the translate ``residue_box + k`` of the first measure is carried onto
    ``residue_box + k2`` of the second.
    """

    equivalent: bool
    moves: tuple = field(default=())
    witness: Optional[RationalBox] = None

    def __bool__(self) -> bool:
        return self.equivalent


# --------------------------------------------------------------------------
# box bookkeeping


def _first_overlap(boxes: Sequence[RationalBox]):
    """Some pair of overlapping boxes, or ``None`` (sweep along the first axis)."""
    active: list = []
    for box in sorted(boxes, key=lambda b: b.intervals[0]):
        lo = box.intervals[0][0]
        active = [a for a in active if a.intervals[0][1] > lo]
        for a in active:
            if a.overlaps(box):
                return a, box
        active.append(box)
    return None


def merge_boxes(boxes: Iterable[RationalBox]) -> list:
    """Greedily merge boxes that are adjacent along one axis and agree on the rest."""
    boxes = list(boxes)
    if not boxes:
        return []
    dim = boxes[0].dim
    changed = True
    while changed:
        changed = False
        for axis in reversed(range(dim)):
            groups: dict = {}
            for b in boxes:
                key = b.intervals[:axis] + b.intervals[axis + 1:]
                groups.setdefault(key, []).append(b)
            merged = []
            for group in groups.values():
                group.sort(key=lambda b: b.intervals[axis])
                cur = group[0]
                for nxt in group[1:]:
                    if cur.intervals[axis][1] == nxt.intervals[axis][0]:
                        ivs = list(cur.intervals)
                        ivs[axis] = (cur.intervals[axis][0], nxt.intervals[axis][1])
                        cur = RationalBox(ivs)
                        changed = True
                    else:
                        merged.append(cur)
                        cur = nxt
                merged.append(cur)
            boxes = merged
    return sorted(boxes, key=lambda b: b.intervals)


def _residue_breaks(boxes: Iterable[RationalBox], dim: int, extra=None) -> list:
    br = [{Fraction(0), Fraction(1)} for _ in range(dim)]
    for src in (boxes, extra or ()):
        for box in src:
            for i, (lo, hi) in enumerate(box.intervals):
                br[i].add(frac_part(lo))
                br[i].add(frac_part(hi))
    return [sorted(s) for s in br]


def _fold_interval(lo: Fraction, hi: Fraction, breaks: list) -> list:
    """Split ``[lo, hi)`` into ``(k, j)``: integer translate ``k`` of residue interval ``j``."""
    out = []
    for k in range(math.floor(lo), math.ceil(hi)):
        a = max(lo, Fraction(k)) - k
        b = min(hi, Fraction(k + 1)) - k
        if a < b:
            j0 = bisect_left(breaks, a)
            j1 = bisect_left(breaks, b)
            out.extend((k, j) for j in range(j0, j1))
    return out


def _fibers(cells, dim: int, breaks: list) -> dict:
    """Map residue-cell index tuple -> {shift tuple: value}."""
    fib: dict = {}
    for box, value in cells:
        per_axis = [_fold_interval(lo, hi, breaks[i]) for i, (lo, hi) in enumerate(box.intervals)]
        for combo in itertools.product(*per_axis):
            js = tuple(j for _, j in combo)
            ks = tuple(k for k, _ in combo)
            slot = fib.setdefault(js, {})
            slot[ks] = slot.get(ks, Fraction(0)) + value
    return fib


def _residue_cells(breaks: list):
    for js in itertools.product(*(range(len(b) - 1) for b in breaks)):
        yield js, RationalBox([(breaks[i][j], breaks[i][j + 1]) for i, j in enumerate(js)])


def _density_fibers(phi: StepDensity, other: Optional[StepDensity] = None):
    extra = [b for b, _ in other.cells] if other is not None else None
    breaks = _residue_breaks((b for b, _ in phi.cells), phi.dim, extra)
    return breaks, _fibers(phi.cells, phi.dim, breaks)


# --------------------------------------------------------------------------
# operations


def refine_to_grid(phi: StepDensity, periodic: bool = False) -> StepDensity:
    """Rewrite ``phi`` on the coarsest common rational grid of its breakpoints.

    With ``periodic=True`` the grid is the union of all integer translates of
    the residue grid, so that every refined cell is an integer translate of a
    residue cell of ``[0, 1)^d``.
    """
    d = phi.dim
    if periodic:
        breaks, fib = _density_fibers(phi)
        cells = []
        for js, kv in fib.items():
            for ks, v in kv.items():
                box = RationalBox(
                    [(breaks[i][j] + ks[i], breaks[i][j + 1] + ks[i]) for i, j in enumerate(js)]
                )
                cells.append((box, v))
        return StepDensity(cells, d)
    axes = [sorted({e for b, _ in phi.cells for e in b.intervals[i]}) for i in range(d)]
    cells = []
    for box, v in phi.cells:
        ranges = []
        for i, (lo, hi) in enumerate(box.intervals):
            j0, j1 = bisect_left(axes[i], lo), bisect_left(axes[i], hi)
            ranges.append([(axes[i][j], axes[i][j + 1]) for j in range(j0, j1)])
        cells.extend((RationalBox(ivs), v) for ivs in itertools.product(*ranges))
    return StepDensity(cells, d)


def verify_partition_of_unity(phi: StepDensity) -> UnityCheck:
    """Decide ``sum_k phi(x + k) = 1`` for a.e. ``x``, exactly.

    On failure the first residue cell (lexicographic order) whose fiber sum
    differs from 1 is returned as the witness.
    """
    breaks, fib = _density_fibers(phi)
    for js, cell in _residue_cells(breaks):
        s = sum(fib.get(js, {}).values(), Fraction(0))
        if s != 1:
            return UnityCheck(False, cell, s)
    return UnityCheck(True)


def fourier_transform(phi: StepDensity, t) -> complex:
    """``mu_hat(t) = int e^{2 pi i t.x} phi(x) dx`` in closed form."""
    t = as_vector(t, phi.dim)
    return sum((float(v) * box_exp_integral(b, t) for b, v in phi.cells), complex(0.0))


def fourier_transform_many(phi: StepDensity, T) -> np.ndarray:
    """:func:`fourier_transform` at every row of ``T`` (shape ``(m, d)``, or ``(m,)`` in 1-d)."""
    T = np.asarray(T, dtype=float).reshape(-1, phi.dim)
    out = np.zeros(T.shape[0], dtype=complex)
    for b, v in phi.cells:
        out += float(v) * box_exp_integral_many(b, T)
    return out


def moment(phi: StepDensity, n) -> complex:
    """``int e_n d mu`` for an integer vector ``n``."""
    n = tuple(int(x) for x in as_vector(n, phi.dim))
    return fourier_transform(phi, n)


def F_phi(phi: StepDensity, t, x) -> complex:
    """The periodised sum ``sum_k e^{2 pi i k.t} phi(x + k)`` (finitely many terms)."""
    d = phi.dim
    t = as_vector(t, d)
    x = tuple(as_rational(xi) if not isinstance(xi, float) else xi for xi in as_vector(x, d))
    if not all(0 <= xi < 1 for xi in x):
        raise PreconditionError(f"F_phi needs x in [0,1)^{d}, got {x}")
    total = complex(0.0)
    for box, v in phi.cells:
        ranges = []
        for (lo, hi), xi in zip(box.intervals, x):
            ranges.append(range(math.ceil(lo - xi), math.ceil(hi - xi)))
        for k in itertools.product(*ranges):
            phase = cis(sum(ki * ti for ki, ti in zip(k, t)))
            total += float(v) * phase
    return total


def _fiber_value(kv: dict, t) -> complex:
    return sum((float(v) * cis(sum(ki * ti for ki, ti in zip(k, t))) for k, v in kv.items()), complex(0.0))


def c_phi(phi: StepDensity, t) -> float:
    """``int_Q |F_phi(t, x)|^2 dx`` as an exact sum over residue cells.

    Raises :class:`PreconditionError` unless ``phi`` satisfies the integer
    partition of unity.
    """
    check = verify_partition_of_unity(phi)
    if not check:
        raise PreconditionError(
            f"c_phi needs a partition of unity; fiber sum is {check.witness_sum} on {check.witness}"
        )
    t = as_vector(t, phi.dim)
    breaks, fib = _density_fibers(phi)
    total = 0.0
    for js, kv in fib.items():
        vol = 1.0
        for i, j in enumerate(js):
            vol *= float(breaks[i][j + 1] - breaks[i][j])
        total += vol * abs(_fiber_value(kv, t)) ** 2
    return total


def c_phi_poisson(phi: StepDensity, t, N: int) -> float:
    """Partial sum ``sum_{|n|_inf <= N} |phi_hat(t + n)|^2``."""
    if not verify_partition_of_unity(phi):
        raise PreconditionError("c_phi_poisson needs a partition of unity")
    t = np.asarray(as_vector(t, phi.dim), dtype=float)
    rng = np.arange(-N, N + 1, dtype=float)
    grids = np.meshgrid(*([rng] * phi.dim), indexing="ij")
    T = np.stack([g.ravel() for g in grids], axis=1) + t
    vals = fourier_transform_many(phi, T)
    return float(np.sum(np.abs(vals) ** 2))


_PROBE_FREQUENCIES = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), 0.1234567, math.sqrt(2) - 1)


def _incompleteness_witness(phi: StepDensity):
    """A frequency ``t`` with ``c_phi(t) < 1``, when one of a few probes finds it."""
    for base in _PROBE_FREQUENCIES:
        for axis in range(phi.dim):
            t = [0] * phi.dim
            t[axis] = base
            if c_phi(phi, t) < 1 - FLOAT_TOL:
                return tuple(t)
    t = tuple(_PROBE_FREQUENCIES[-1] * (i + 1) for i in range(phi.dim))
    if c_phi(phi, t) < 1 - FLOAT_TOL:
        return t
    return None


def _certificate_from_fibers(breaks, fib, dim) -> CongruencePartition:
    pieces: dict = {}
    for js, cell in _residue_cells(breaks):
        (k,) = fib[js].keys()
        pieces.setdefault(k, []).append(cell)
    return CongruencePartition(list(pieces.items()), dim)


def has_spectrum_Zd(phi: StepDensity) -> SpectrumVerdict:
    """Classify ``{e_n : n in Z^d}`` in ``L^2(phi dx)``.

    Orthonormality is the partition of unity; completeness holds exactly
    when ``phi`` is the indicator of a set translation congruent to the unit
    cube, in which case the congruence is returned as certificate.  For the
    incomplete case the witness is a probe frequency with ``c_phi(t) < 1``
    when one is found (it may be ``None``).
    """
    check = verify_partition_of_unity(phi)
    if not check:
        return SpectrumVerdict(NOT_ORTHONORMAL, witness=check.witness)
    if all(v == 1 for _, v in phi.cells):
        breaks, fib = _density_fibers(phi)
        return SpectrumVerdict(
            ORTHONORMAL_AND_COMPLETE, certificate=_certificate_from_fibers(breaks, fib, phi.dim)
        )
    return SpectrumVerdict(ORTHONORMAL_INCOMPLETE, witness=_incompleteness_witness(phi))


def _disjoint_union(boxes: Sequence[RationalBox], dim: int) -> list:
    axes = [sorted({e for b in boxes for e in b.intervals[i]}) for i in range(dim)]
    covered = set()
    for box in boxes:
        ranges = []
        for i, (lo, hi) in enumerate(box.intervals):
            ranges.append(range(bisect_left(axes[i], lo), bisect_left(axes[i], hi)))
        covered.update(itertools.product(*ranges))
    return [
        RationalBox([(axes[i][j], axes[i][j + 1]) for i, j in enumerate(js)]) for js in sorted(covered)
    ]


def check_translation_congruent(boxes: Iterable) -> Optional[CongruencePartition]:
    """The congruence partition of ``E = union(boxes)`` onto ``[0, 1)^d``, or ``None``.

    ``E`` must have volume 1 (overlaps between the given boxes are counted
    once); anything else raises :class:`PreconditionError` before folding.
    """
    boxes = [b if isinstance(b, RationalBox) else RationalBox(b) for b in boxes]
    if not boxes:
        raise PreconditionError("empty set")
    dim = boxes[0].dim
    cells = _disjoint_union(boxes, dim)
    vol = sum((c.volume for c in cells), Fraction(0))
    if vol != 1:
        raise PreconditionError(f"a set congruent to the unit cube has volume 1, got {vol}")
    breaks = _residue_breaks(cells, dim)
    fib = _fibers([(c, Fraction(1)) for c in cells], dim, breaks)
    for js, _ in _residue_cells(breaks):
        if len(fib.get(js, ())) != 1:
            return None
    return _certificate_from_fibers(breaks, fib, dim)


def build_from_partition(p: CongruencePartition) -> StepDensity:
    """``chi_E`` for ``E = union_k (E_k + k)``."""
    if not isinstance(p, CongruencePartition):
        p = CongruencePartition(p)
    cells = [(b.shift(k), 1) for k, boxes in p.pieces for b in boxes]
    return StepDensity(cells, p.dim)


def fold_to_cube(phi: StepDensity) -> StepDensity:
    """The density ``x -> sum_k phi(x + k)`` on ``[0, 1)^d``.

    Cells with equal values are merged, so a partition of unity folds to
    ``chi_Q`` as a single box.  The result has the same mass as ``phi``.
    """
    breaks, fib = _density_fibers(phi)
    by_value: dict = {}
    for js, kv in fib.items():
        box = RationalBox([(breaks[i][j], breaks[i][j + 1]) for i, j in enumerate(js)])
        by_value.setdefault(sum(kv.values(), Fraction(0)), []).append(box)
    cells = [(b, v) for v, boxes in by_value.items() for b in merge_boxes(boxes)]
    return StepDensity(cells, phi.dim)


def same_measure(phi: StepDensity, psi: StepDensity) -> bool:
    """Whether two step densities agree almost everywhere."""
    if phi.dim != psi.dim:
        return False
    axes = [
        sorted({e for dens in (phi, psi) for b, _ in dens.cells for e in b.intervals[i]})
        for i in range(phi.dim)
    ]

    def on_grid(dens):
        vals = {}
        for box, v in dens.cells:
            ranges = [
                range(bisect_left(axes[i], lo), bisect_left(axes[i], hi))
                for i, (lo, hi) in enumerate(box.intervals)
            ]
            for js in itertools.product(*ranges):
                vals[js] = v
        return vals

    return on_grid(phi) == on_grid(psi)


def translation_equivalent_density(phi: StepDensity, psi: StepDensity) -> DensityEquivalence:
    """Decide translation equivalence of two step densities fiber by fiber.

    On each residue cell the multisets of nonzero translate values must
    coincide; matching translates with equal values (in increasing shift
    order) gives the piecewise integer shift.
    """
    if phi.dim != psi.dim:
        raise PreconditionError("densities of different dimensions")
    breaks = _residue_breaks(
        [b for b, _ in phi.cells] + [b for b, _ in psi.cells], phi.dim
    )
    f1 = _fibers(phi.cells, phi.dim, breaks)
    f2 = _fibers(psi.cells, psi.dim, breaks)
    moves = []
    for js, cell in _residue_cells(breaks):
        a = sorted(f1.get(js, {}).items(), key=lambda kv: (kv[1], kv[0]))
        b = sorted(f2.get(js, {}).items(), key=lambda kv: (kv[1], kv[0]))
        if [v for _, v in a] != [v for _, v in b]:
            return DensityEquivalence(False, witness=cell)
        moves.extend((cell, k1, k2) for (k1, _), (k2, _) in zip(a, b))
    return DensityEquivalence(True, tuple(moves))
