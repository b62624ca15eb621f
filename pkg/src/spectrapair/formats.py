"""JSON descriptions of measures, partitions and IFS, with rationals as ``"p/q"`` strings."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .atomic import AtomicMeasure, FrequencySet
from .density import CongruencePartition, StepDensity
from .exactnum import RationalBox, as_rational
from .ifs import AffineIFS


class FormatError(ValueError):
    """Malformed JSON description."""


def rat(q: Fraction) -> str:
    return str(Fraction(q))


def _box_from(obj, dim=None) -> RationalBox:
    if not isinstance(obj, list) or not all(isinstance(iv, list) and len(iv) == 2 for iv in obj):
        raise FormatError(f"box must be a list of [a, b] pairs, got {obj!r}")
    box = RationalBox(obj)
    if dim is not None and box.dim != dim:
        raise FormatError(f"box {obj!r} is not {dim}-dimensional")
    return box


def _box_to(box: RationalBox) -> list:
    return [[rat(lo), rat(hi)] for lo, hi in box.intervals]


def density_to_json(phi: StepDensity) -> dict:
    return {
        "type": "step",
        "dim": phi.dim,
        "cells": [{"box": _box_to(b), "value": rat(v)} for b, v in phi.cells],
    }


def atomic_to_json(A: AtomicMeasure, spectrum=None) -> dict:
    out = {"type": "atomic", "dim": A.dim, "points": [[rat(c) for c in p] for p in A.points]}
    if spectrum is not None:
        out["spectrum"] = [list(f) for f in spectrum]
    return out


def partition_to_json(p: CongruencePartition) -> dict:
    return {
        "type": "partition",
        "dim": p.dim,
        "pieces": [{"shift": list(k), "boxes": [_box_to(b) for b in boxes]} for k, boxes in p.pieces],
    }


def ifs_to_json(ifs: AffineIFS, L=None) -> dict:
    out = {"type": "ifs", "R": ifs.R, "B": list(ifs.B)}
    if L is not None:
        out["L"] = list(L)
    return out


def parse(obj: dict):
    """Build the object a JSON description stands for.

    Returns a StepDensity, CongruencePartition, ``(AtomicMeasure,
    FrequencySet)`` or ``(AffineIFS, L)``.  An atomic description without a
    ``"spectrum"`` key gets ``{0, ..., N-1}``; an IFS without ``"L"`` gets
    ``None``.
    """
    if not isinstance(obj, dict) or "type" not in obj:
        raise FormatError("expected an object with a 'type' key")
    kind = obj["type"]
    try:
        if kind == "step":
            dim = int(obj["dim"])
            cells = [(_box_from(c["box"], dim), as_rational(c["value"])) for c in obj["cells"]]
            return StepDensity(cells, dim)
        if kind == "atomic":
            dim = int(obj.get("dim", 1))
            pts = [p if isinstance(p, list) else [p] for p in obj["points"]]
            if any(len(p) != dim for p in pts):
                raise FormatError(f"atoms must be {dim}-dimensional")
            A = AtomicMeasure([tuple(as_rational(c) for c in p) for p in pts])
            freqs = obj.get("spectrum")
            return A, FrequencySet(freqs) if freqs is not None else FrequencySet.range(A.N)
        if kind == "partition":
            dim = int(obj["dim"])
            pieces = [
                (tuple(int(s) for s in pc["shift"]), [_box_from(b, dim) for b in pc["boxes"]])
                for pc in obj["pieces"]
            ]
            return CongruencePartition(pieces, dim)
        if kind == "ifs":
            L = obj.get("L")
            return AffineIFS(obj["R"], obj["B"]), tuple(int(l) for l in L) if L is not None else None
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise FormatError(f"malformed {kind} description: {exc}") from exc
    raise FormatError(f"unknown type {kind!r}")


def load(path: Union[str, Path]):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return parse(obj)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"
