"""Fourier coefficients on a finite spectrum slice and the local translation group.

``U(t)`` is diagonal in the exponential basis, so on a finite slice it is
exactly coefficient-wise multiplication by ``e^{2 pi i t.lambda}``; the
identities below hold at every truncation, not just in the limit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .atomic import AtomicMeasure, atomic_fourier_transform, is_spectrum_atomic
from .density import StepDensity, fourier_transform, has_spectrum_Zd
from .errors import NotIsoSpectralError, PreconditionError
from .exactnum import as_vector, cis

Measure = Union[StepDensity, AtomicMeasure]


@dataclass(frozen=True)
class SpectralExpansion:
    """Coefficients ``c_lambda`` indexed by a finite frequency list."""

    spectrum: tuple
    coefficients: np.ndarray

    def __init__(self, spectrum: Sequence, coefficients):
        freqs = tuple(tuple(l) if isinstance(l, (list, tuple)) else (l,) for l in spectrum)
        coef = np.array(coefficients, dtype=complex).reshape(-1)
        if len(freqs) != coef.shape[0]:
            raise ValueError(f"{len(freqs)} frequencies but {coef.shape[0]} coefficients")
        if not np.all(np.isfinite(coef)):
            raise ValueError("non-finite coefficient")
        coef.setflags(write=False)
        object.__setattr__(self, "spectrum", freqs)
        object.__setattr__(self, "coefficients", coef)

    @classmethod
    def basis(cls, spectrum: Sequence, index: int) -> "SpectralExpansion":
        c = np.zeros(len(spectrum), dtype=complex)
        c[index] = 1.0
        return cls(spectrum, c)

    def norm2(self) -> float:
        """Squared l2 norm."""
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def to_json(self) -> dict:
        freqs = [list(l) if len(l) > 1 else l[0] for l in self.spectrum]
        return {
            "spectrum": freqs,
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SpectralExpansion":
        return cls(obj["spectrum"], [complex(re, im) for re, im in obj["coefficients"]])


def _transform(mu: Measure, t) -> complex:
    if isinstance(mu, StepDensity):
        return fourier_transform(mu, t)
    if isinstance(mu, AtomicMeasure):
        return atomic_fourier_transform(mu, t)
    raise TypeError(f"unsupported measure {type(mu).__name__}")


def analyze(mu: Measure, t, spectrum: Sequence) -> SpectralExpansion:
    """Coefficients of ``e_t`` against ``e_lambda``: ``<e_t, e_lambda> = mu_hat(t - lambda)``."""
    t = as_vector(t, mu.dim)
    freqs = [tuple(l) if isinstance(l, (list, tuple)) else (l,) for l in spectrum]
    coefs = [_transform(mu, tuple(ti - li for ti, li in zip(t, lam))) for lam in freqs]
    return SpectralExpansion(freqs, coefs)


def local_translate(t, f: SpectralExpansion) -> SpectralExpansion:
    """Apply ``U(t)``: ``c_lambda -> e^{2 pi i t.lambda} c_lambda``."""
    if not f.spectrum:
        return f
    t = as_vector(t, len(f.spectrum[0]))
    phases = np.array([cis(sum(ti * li for ti, li in zip(t, lam))) for lam in f.spectrum])
    return SpectralExpansion(f.spectrum, phases * f.coefficients)


def _verify_spectrum(mu: Measure, spectrum: tuple, tol: float) -> None:
    if isinstance(mu, StepDensity):
        if any(len(l) != mu.dim or any(int(c) != c for c in l) for l in spectrum):
            raise NotIsoSpectralError("density spectra here are Z^d; slice has non-integer frequencies")
        if not has_spectrum_Zd(mu).complete:
            raise NotIsoSpectralError("density does not have spectrum Z^d")
    elif isinstance(mu, AtomicMeasure):
        if not is_spectrum_atomic(mu, [tuple(int(c) for c in l) for l in spectrum], tol):
            raise NotIsoSpectralError("atomic measure does not have the slice as spectrum")
    else:
        raise TypeError(f"unsupported measure {type(mu).__name__}")


def intertwine(mu: Measure, mu2: Measure, f: SpectralExpansion, tol: float = 1e-10) -> SpectralExpansion:
    """The basis exchange ``e_lambda -> e_lambda`` from ``L^2(mu)`` to ``L^2(mu2)``.

    On coefficients this is the identity; what it adds is the check that
    both measures really carry ``f.spectrum`` (a ``Z^d`` spectrum for
    densities, the exact finite set for atomic measures).
    """
    _verify_spectrum(mu, f.spectrum, tol)
    _verify_spectrum(mu2, f.spectrum, tol)
    return SpectralExpansion(f.spectrum, f.coefficients.copy())


def _in_support(mu: Measure, x) -> bool:
    if isinstance(mu, StepDensity):
        return any(box.contains(x) for box, _ in mu.cells)
    return mu.contains(x)


def synthesize_pointwise(mu: Measure, f: SpectralExpansion, x) -> complex:
    """``sum_lambda c_lambda e^{2 pi i lambda.x}`` at a point of the support of ``mu``."""
    x = as_vector(x, mu.dim)
    if not _in_support(mu, x):
        raise PreconditionError(f"{x} is outside the support")
    return sum(
        (c * cis(sum(li * xi for li, xi in zip(lam, x))) for lam, c in zip(f.spectrum, f.coefficients)),
        complex(0.0),
    )
