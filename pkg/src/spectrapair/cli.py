"""Batch front-end.

Usage:
    spectrapair check  --input measure.json
    spectrapair curve  --input measure.json --quantity mu_hat --grid -3:3:601
    spectrapair family --input random --pieces 3 --count 5 --seed 7 --out famdir
    spectrapair ifs    --input ifs.json --action cycles

Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for parse
errors and invariant violations.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import formats
from .atomic import (
    AtomicMeasure,
    FrequencySet,
    atomic_fourier_transform,
    exp_matrix,
    residue_form,
    unitarity_defect,
)
from .density import (
    CongruencePartition,
    StepDensity,
    build_from_partition,
    c_phi,
    c_phi_poisson,
    fourier_transform,
    has_spectrum_Zd,
)
from .errors import SpectralError
from .exactnum import RationalBox
from .ifs import (
    DEFAULT_FACTORS,
    AffineIFS,
    cycle_candidates,
    extreme_cycles,
    gamma_slice,
    is_hadamard_pair,
    mu_hat_ifs,
    non_equivalence_certificate,
    spectral_sum,
    support_cover,
)

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2
DEFAULT_TOL = 1e-10
TOL_ENV = "SPECTRAPAIR_TOL"

rat = formats.rat


class UsageError(SpectralError):
    pass


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    out: Optional[str] = None
    grid: tuple = (Fraction(-3), Fraction(3), 601)
    trunc_N: int = 50
    depth_n: int = 8
    factors_K: int = DEFAULT_FACTORS
    tol: float = DEFAULT_TOL
    seed: int = 0
    pieces: int = 3
    count: int = 1
    dim: int = 1
    quantity: str = "mu_hat"
    action: str = "cycles"
    depth: int = 1
    other: Optional[str] = None

    def __post_init__(self):
        start, stop, count = self.grid
        if count < 1:
            raise UsageError("grid needs at least one point")
        if not start < stop:
            raise UsageError("grid needs start < stop")
        if not self.tol > 0:
            raise UsageError("tolerance must be positive")

    def grid_points(self) -> List[Fraction]:
        start, stop, n = self.grid
        if n == 1:
            return [start]
        return [start + (stop - start) * Fraction(i, n - 1) for i in range(n)]


def parse_grid(text: str) -> tuple:
    try:
        a, b, n = text.split(":")
        return Fraction(a), Fraction(b), int(n)
    except ValueError as exc:
        raise UsageError(f"grid must look like a:b:n, got {text!r}") from exc


def _box_json(box: RationalBox) -> list:
    return [[rat(lo), rat(hi)] for lo, hi in box.intervals]


def _vec_json(v) -> list:
    return [rat(c) if isinstance(c, (int, Fraction)) else float(c) for c in v]


def _real(x: float) -> str:
    return f"{float(x) + 0.0:.15g}"


# --------------------------------------------------------------------------
# check


def _check_density(phi: StepDensity) -> tuple:
    verdict = has_spectrum_Zd(phi)
    report = {"status": verdict.status, "theorem": "T1.1" if verdict.status == "not_orthonormal" else "T1.2"}
    if verdict.witness is not None:
        w = verdict.witness
        if isinstance(w, RationalBox):
            report["witness"] = {"residue_cell": _box_json(w)}
        else:
            report["witness"] = {"frequency": _vec_json(w), "c_phi": c_phi(phi, w)}
    if verdict.certificate is not None:
        report["certificate"] = formats.partition_to_json(verdict.certificate)["pieces"]
    return report, EXIT_OK if verdict.complete else EXIT_FALSE


def _check_atomic(A: AtomicMeasure, freqs: FrequencySet, tol: float) -> tuple:
    if len(freqs) != A.N:
        raise UsageError(f"{A.N} atoms but {len(freqs)} frequencies")
    defect = unitarity_defect(exp_matrix(A, freqs))
    ok = defect < tol
    report = {
        "status": "spectrum" if ok else "not_spectrum",
        "theorem": "T2.6",
        "spectrum": [list(f) if len(f) > 1 else f[0] for f in freqs],
        "unitarity_defect": defect,
    }
    if A.dim == 1 and sorted(freqs.frequencies) == [(k,) for k in range(A.N)]:
        rf = residue_form(A)
        report["residue_form"] = {
            "holds": rf.holds,
            "shift": rat(rf.shift) if rf.shift is not None else None,
            "representatives": list(rf.representatives),
        }
    return report, EXIT_OK if ok else EXIT_FALSE


def _check_ifs(ifs: AffineIFS, L, tol: float) -> tuple:
    if L is None:
        raise UsageError("IFS description needs a dual digit set 'L'")
    if len(L) != len(ifs.B) or not is_hadamard_pair(ifs.R, ifs.B, L, tol):
        return {"status": "not_hadamard", "hadamard": False}, EXIT_FALSE
    cycles = extreme_cycles(ifs.R, ifs.B, L)
    report = {
        "status": "spectrum" if not cycles else "undecided",
        "criterion": "hadamard_pair_without_extreme_cycles",
        "hadamard": True,
        "cycles": [[rat(x) for x in c.points] for c in cycles],
    }
    return report, EXIT_OK if not cycles else EXIT_FALSE


def cmd_check(cfg: RunConfig) -> tuple:
    obj = formats.load(cfg.input)
    if isinstance(obj, StepDensity):
        return _check_density(obj)
    if isinstance(obj, CongruencePartition):
        return _check_density(build_from_partition(obj))
    if isinstance(obj[0], AtomicMeasure):
        return _check_atomic(obj[0], obj[1], cfg.tol)
    return _check_ifs(obj[0], obj[1], cfg.tol)


# --------------------------------------------------------------------------
# curve


def cmd_curve(cfg: RunConfig) -> str:
    obj = formats.load(cfg.input)
    if isinstance(obj, CongruencePartition):
        obj = build_from_partition(obj)
    q = cfg.quantity
    ts = cfg.grid_points()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, StepDensity):
        if obj.dim != 1:
            raise UsageError("curves are sampled along t in R; the density must be 1-dimensional")
        if q == "mu_hat":
            rows = [(t, fourier_transform(obj, t)) for t in ts]
        elif q == "c_phi":
            rows = [(t, c_phi(obj, t)) for t in ts]
        elif q == "c_phi_poisson":
            rows = [(t, c_phi_poisson(obj, float(t), cfg.trunc_N)) for t in ts]
        else:
            raise UsageError(f"quantity {q!r} is not defined for a step density")
    elif isinstance(obj[0], AtomicMeasure):
        A = obj[0]
        if A.dim != 1 or q != "mu_hat":
            raise UsageError("atomic curves: mu_hat of a 1-dimensional measure only")
        rows = [(t, atomic_fourier_transform(A, t)) for t in ts]
    else:
        ifs, L = obj
        if q == "mu_hat":
            rows = [(t, mu_hat_ifs(ifs.R, ifs.B, float(t), cfg.factors_K)) for t in ts]
        elif q == "spectral_sum":
            if L is None:
                raise UsageError("spectral_sum needs 'L' in the IFS description")
            gamma = gamma_slice(ifs.R, L, cfg.depth_n)
            rows = [(t, spectral_sum(ifs.R, ifs.B, gamma, float(t), cfg.factors_K)) for t in ts]
        else:
            raise UsageError(f"quantity {q!r} is not defined for an IFS")
    if q == "mu_hat":
        w.writerow(["t", "re", "im"])
        for t, z in rows:
            w.writerow([_real(t), _real(z.real), _real(z.imag)])
    else:
        w.writerow(["t", q])
        for t, v in rows:
            w.writerow([_real(t), _real(v)])
    return buf.getvalue()


# --------------------------------------------------------------------------
# family


def random_partition(rng: random.Random, pieces: int, dim: int = 1, max_den: int = 64, max_shift: int = 8):
    """Split ``[0,1)^dim`` into ``pieces`` slabs along the first axis and shift each at random."""
    if pieces < 1:
        raise UsageError("need at least one piece")
    cuts: set = set()
    while len(cuts) < pieces - 1:
        q = rng.randint(2, max_den)
        cuts.add(Fraction(rng.randint(1, q - 1), q))
    edges = [Fraction(0)] + sorted(cuts) + [Fraction(1)]
    out = []
    for lo, hi in zip(edges, edges[1:]):
        box = RationalBox([(lo, hi)] + [(0, 1)] * (dim - 1))
        shift = tuple(rng.randint(-max_shift, max_shift) for _ in range(dim))
        out.append((shift, [box]))
    return CongruencePartition(out, dim)


def cmd_family(cfg: RunConfig) -> tuple:
    if cfg.out is None:
        raise UsageError("family needs --out DIR")
    if cfg.input in (None, "random"):
        rng = random.Random(cfg.seed)
        parts = [random_partition(rng, cfg.pieces, cfg.dim) for _ in range(cfg.count)]
    else:
        p = formats.load(cfg.input)
        if not isinstance(p, CongruencePartition):
            raise UsageError("family input must be a partition description or 'random'")
        parts = [p]
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    members = []
    code = EXIT_OK
    for i, part in enumerate(parts):
        phi = build_from_partition(part)
        verdict = has_spectrum_Zd(phi)
        if not verdict.complete:
            code = EXIT_FALSE
        pfile, dfile = f"partition_{i:03d}.json", f"density_{i:03d}.json"
        (outdir / pfile).write_text(formats.dumps(formats.partition_to_json(part)))
        (outdir / dfile).write_text(formats.dumps(formats.density_to_json(phi)))
        members.append({"partition": pfile, "density": dfile, "status": verdict.status})
    return {"count": len(members), "members": members}, code


# --------------------------------------------------------------------------
# ifs


def cmd_ifs(cfg: RunConfig) -> tuple:
    ifs, L = formats.load(cfg.input)
    if not isinstance(ifs, AffineIFS):
        raise UsageError("ifs command needs an IFS description")
    action = cfg.action
    if action in ("hadamard", "cycles") and L is None:
        raise UsageError("IFS description needs a dual digit set 'L'")
    if action == "hadamard":
        ok = len(L) == len(ifs.B) and is_hadamard_pair(ifs.R, ifs.B, L, cfg.tol)
        return {"R": ifs.R, "B": list(ifs.B), "L": list(L), "hadamard": ok}, EXIT_OK if ok else EXIT_FALSE
    if action == "cycles":
        cycles = extreme_cycles(ifs.R, ifs.B, L)
        report = {
            "candidates": [rat(x) for x in cycle_candidates(ifs.R, ifs.B, L)],
            "cycles": [
                {"points": [rat(x) for x in c.points], "digits": list(c.digits)} for c in cycles
            ],
        }
        return report, EXIT_OK if not cycles else EXIT_FALSE
    if action == "cover":
        cover = support_cover(ifs.R, ifs.B, cfg.depth)
        return [[rat(lo), rat(hi)] for lo, hi in cover], EXIT_OK
    if action == "certificate":
        if cfg.other is None:
            raise UsageError("certificate needs --other IFS.json")
        other, _ = formats.load(cfg.other)
        cert = non_equivalence_certificate(ifs, other, cfg.depth)
        if cert is None:
            return None, EXIT_FALSE
        return {"point": rat(cert[0]), "distance": rat(cert[1])}, EXIT_OK
    raise UsageError(f"unknown action {action!r}")


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectrapair", description="Spectral pair verifier and constructor.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", help="JSON description (or 'random' for family)")
        sp.add_argument("--out", help="output file (directory for family); default stdout")
        sp.add_argument("--tol", type=float, default=None, help=f"tolerance (env {TOL_ENV})")
        return sp

    common(sub.add_parser("check", help="spectrum verdict for a measure"))

    c = common(sub.add_parser("curve", help="sample mu_hat, c_phi or spectral sums as CSV"))
    c.add_argument("--quantity", default="mu_hat", choices=["mu_hat", "c_phi", "c_phi_poisson", "spectral_sum"])
    c.add_argument("--grid", default="-3:3:601", help="start:stop:count")
    c.add_argument("--trunc-N", type=int, default=50)
    c.add_argument("--depth-n", type=int, default=8)
    c.add_argument("--factors-K", type=int, default=DEFAULT_FACTORS)

    f = common(sub.add_parser("family", help="emit an iso-spectral family of congruent sets"))
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--pieces", type=int, default=3)
    f.add_argument("--count", type=int, default=1)
    f.add_argument("--dim", type=int, default=1)

    i = common(sub.add_parser("ifs", help="Hadamard pair, cycles, covers, certificates"))
    i.add_argument("--action", default="cycles", choices=["hadamard", "cycles", "cover", "certificate"])
    i.add_argument("--depth", type=int, default=1)
    i.add_argument("--other", help="second IFS for --action certificate")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    tol = args.tol
    if tol is None:
        tol = float(os.environ.get(TOL_ENV, DEFAULT_TOL))
    kw = {k: v for k, v in vars(args).items() if v is not None and k != "tol"}
    if "grid" in kw:
        kw["grid"] = parse_grid(kw["grid"])
    return RunConfig(tol=tol, **kw)


def _glue_grid(argv: List[str]) -> List[str]:
    # "--grid -3:3:601" would otherwise read the value as an option
    out, it = [], iter(argv)
    for a in it:
        if a == "--grid":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--grid={nxt}")
        else:
            out.append(a)
    return out


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_grid(argv))
    try:
        cfg = config_from_args(args)
        if cfg.command != "family" and cfg.input is None:
            raise UsageError("--input is required")
        if cfg.command == "curve":
            text, code = cmd_curve(cfg), EXIT_OK
        else:
            handler = {"check": cmd_check, "family": cmd_family, "ifs": cmd_ifs}[cfg.command]
            report, code = handler(cfg)
            text = formats.dumps(report)
    except (ValueError, OSError) as exc:
        print(f"spectrapair: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if cfg.out is not None and cfg.command != "family":
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
