"""Command-line entry point: ``toric-obc <command> [flags]``.

Output is deterministic JSON (fixed key order, floats with 17 significant
digits) that embeds the fully resolved configuration.  Exit codes: 0 ok,
1 usage or configuration error, 2 two methods disagree.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import boundary as bd
from .entropy import MAX_DENSE_SIDE, Bipartition, entropy_report
from .groundspace import (
    MAX_DEFAULT_RING,
    MAX_DENSE_QUBITS,
    BoundaryConfig,
    CoefficientFamily,
    degeneracy_log2,
    dense_ground_state,
    stabilizer_ground_state,
    torus_logical_operators,
)
from .lattice import LatticeSpec, build_lattice
from .pauli import independent_generators
from .spectrum import (
    ClusterTruncated,
    ConvergenceError,
    HamiltonianParams,
    build_hamiltonian,
    degeneracy_from_spectrum,
    ground_splitting,
    loglog_slope,
    lowest_eigenpairs,
)

SPECTRAL_CHECK_QUBITS = 14
CONSISTENCY_TOL = 1e-9

COMMON_DEFAULTS = {
    "rows": 2,
    "cols": 2,
    "bc": "plaquette",
    "je": 1.0,
    "jm": 1.0,
    "hx": 0.0,
    "format": "json",
    "out": None,
}
COMMAND_DEFAULTS = {
    "degeneracy": {},
    "entropy": {
        "partition_rect": None,
        "partition_spins": None,
        "family": "equal",
        "a": 1.0,
        "phases": None,
    },
    "dispersion": {"hx": 0.01, "boundary_length": 40, "kpoints": None},
    "perturb": {"hx": 0.01, "rmax": 1, "order": None},
    "spectrum": {"k": 8, "sweep": None, "levels": None, "fix_corners": False},
}


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    payload: dict
    exit_code: int = 0
    csv: str | None = None


# -- serialization -------------------------------------------------------------


def _fmt(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        text = format(x, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj: Any) -> str:
    """JSON with 17-significant-digit floats; non-finite floats become null."""
    return _fmt(obj) + "\n"


# -- parsing ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _phases(text: str) -> dict[str, float]:
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            k, v = item.split(":")
            out[str(int(k))] = float(v)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"phases look like 'l:phi,l:phi', got {item!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with default values; flags override it")
    common.add_argument("--rows", type=int)
    common.add_argument("--cols", type=int)
    common.add_argument("--bc", choices=["plaquette", "star", "periodic"])
    common.add_argument("--je", type=float)
    common.add_argument("--jm", type=float)
    common.add_argument("--hx", type=float)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"])

    parser = _Parser(prog="toric-obc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("degeneracy", parents=[common], help="ground-space dimension")

    p = sub.add_parser("entropy", parents=[common], help="bipartite entanglement entropy")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--partition-rect", type=_int_list, metavar="r0,c0,r1,c1")
    g.add_argument("--partition-spins", type=_int_list, metavar="i,j,k")
    p.add_argument("--family", choices=["equal", "geometric"])
    p.add_argument("--a", type=float)
    p.add_argument("--phases", type=_phases, metavar="l:phi,...")

    p = sub.add_parser("dispersion", parents=[common], help="boundary excitation band")
    p.add_argument("--boundary-length", type=int)
    p.add_argument("--kpoints", type=int)

    p = sub.add_parser("perturb", parents=[common], help="resolvent chain vs closed form")
    p.add_argument("--rmax", type=int)
    p.add_argument("--order", type=int)

    p = sub.add_parser("spectrum", parents=[common], help="low-lying spectrum")
    p.add_argument("--k", type=int)
    p.add_argument("--sweep", type=_float_list, metavar="h1,h2,...")
    p.add_argument("--levels", type=int, help="levels in the split manifold for --sweep")
    p.add_argument("--fix-corners", action="store_true", default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the JSON config file, then explicit flags."""
    cmd = args.command
    cfg = {"command": cmd, **COMMON_DEFAULTS, **COMMAND_DEFAULTS[cmd]}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys for {cmd}: {sorted(unknown)}")
        cfg.update({k: v for k, v in file_cfg.items() if k != "command"})
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None and key != "command":
            cfg[key] = val
    return cfg


def _lattice(cfg) -> LatticeSpec:
    return build_lattice(int(cfg["rows"]), int(cfg["cols"]), cfg["bc"])


# -- commands --------------------------------------------------------------------


def cmd_degeneracy(cfg) -> Outcome:
    lat = _lattice(cfg)
    log2 = degeneracy_log2(lat)
    out = {
        "config": cfg,
        "spin_count": lat.spin_count,
        "log2_degeneracy": log2,
        "degeneracy": 1 << log2,
        "spectral": None,
        "agree": None,
    }
    code = 0
    if lat.spin_count <= SPECTRAL_CHECK_QUBITS:
        op = build_hamiltonian(lat, HamiltonianParams(cfg["je"], cfg["jm"], 0.0))
        k = min(op.dim, (1 << log2) + 2)
        pairs = lowest_eigenpairs(op, k)
        try:
            count = degeneracy_from_spectrum(pairs.values)
        except ClusterTruncated:
            count = None
        agree = count == 1 << log2
        out["spectral"] = {
            "method": pairs.method,
            "count": count,
            "ground_energy": pairs.values[0],
            "max_residual": float(pairs.residuals.max()),
        }
        out["agree"] = agree
        code = 0 if agree else 2
    return Outcome(out, code)


def _family(cfg) -> CoefficientFamily:
    if cfg["family"] == "equal":
        return CoefficientFamily.equal()
    phases = {int(k): float(v) for k, v in (cfg["phases"] or {}).items()}
    return CoefficientFamily.geometric(float(cfg["a"]), phases)


def _partition(lat, cfg) -> Bipartition:
    rect, spins = cfg["partition_rect"], cfg["partition_spins"]
    if rect is not None and spins is not None:
        raise UsageError("give either a rectangle or a spin list, not both")
    if rect is not None:
        if len(rect) != 4:
            raise UsageError("--partition-rect needs r0,c0,r1,c1")
        return Bipartition.from_rect(lat, *rect)
    if spins is not None:
        return Bipartition.from_spins(lat, spins)
    raise UsageError("entropy needs --partition-rect or --partition-spins")


def cmd_entropy(cfg) -> Outcome:
    lat = _lattice(cfg)
    fam = _family(cfg)
    part = _partition(lat, cfg)
    if lat.periodic and not fam.is_equal:
        raise UsageError("coefficient families apply to open boundaries only")
    group = None
    extra = []
    if lat.periodic:
        # fix the torus logical sector so the state is pure
        ops = list(lat.stabilizer_ops) + list(torus_logical_operators(lat))
        group = independent_generators(ops)
        extra.append("torus state fixed by the two X-type logical loops")
    elif fam.is_equal:
        group = stabilizer_ground_state(lat)
    psi = None
    smaller = min(len(part.a_spins), len(part.b_spins))
    if lat.periodic or lat.dual:
        extra.append("dense route skipped: state built on the plaquette-boundary lattice only")
    elif lat.spin_count > MAX_DENSE_QUBITS or lat.ring_length > MAX_DEFAULT_RING:
        extra.append("dense route skipped: lattice too large")
    elif smaller > MAX_DENSE_SIDE:
        extra.append("dense route skipped: smaller side too large")
    else:
        psi = dense_ground_state(lat, fam)
    rep = entropy_report(part, fam, group=group, psi=psi)
    rep.notes = extra + rep.notes
    d = rep.to_dict()
    code = 0
    if rep.s_rank is not None and rep.s_dense is not None:
        agree = abs(rep.s_rank - rep.s_dense) <= CONSISTENCY_TOL
        d["routes_agree"] = agree
        code = 0 if agree else 2
    return Outcome({"config": cfg, "a_spins": sorted(part.a_spins), **d}, code)


def cmd_dispersion(cfg) -> Outcome:
    c = bd.BoundaryCouplings(float(cfg["hx"]), float(cfg["jm"]), int(cfg["boundary_length"]))
    curve = bd.dispersion_curve(c, cfg["kpoints"])
    payload = {
        "config": cfg,
        "lambda": c.lam,
        "band_amplitude": 2.0 * abs(c.h_x) * c.lam**2,
        "max_limit_gap": float(np.max(np.abs(curve.eps_limit - curve.eps_finite))),
        "limit_gap_bound": bd.limit_bound(c),
        **curve.to_dict(),
    }
    return Outcome(payload, 0, csv=curve.to_csv())


def straight_segment(lat: LatticeSpec, R: int) -> list[int] | None:
    """First run of ``R`` consecutive non-corner ring positions."""
    L = lat.ring_length
    corners = set(lat.corner_positions)
    for start in range(L):
        seg = [(start + j) % L for j in range(R)]
        if not corners & set(seg):
            return seg
    return None


def cmd_perturb(cfg) -> Outcome:
    lat = _lattice(cfg)
    if lat.periodic or lat.dual:
        raise UsageError("perturb runs on the plaquette-boundary lattice")
    rmax = int(cfg["rmax"])
    if rmax < 1:
        raise UsageError("--rmax must be >= 1")
    c = bd.BoundaryCouplings(float(cfg["hx"]), float(cfg["jm"]), lat.ring_length)
    rows = []
    code = 0
    for R in range(1, rmax + 1):
        seg = straight_segment(lat, R)
        if seg is None:
            raise UsageError(f"no straight boundary segment of length {R} on this lattice")
        order = int(cfg["order"]) if cfg["order"] is not None else R + 2
        frm = BoundaryConfig.from_positions(lat.ring_length, [])
        to = BoundaryConfig.from_positions(lat.ring_length, seg)
        chain = bd.resolvent_shift(lat, frm, to, c, order)
        formula = bd.delta_E(R, c)
        leading = bd.ordering_factor(R) * formula if order == R + 2 else 0.0
        scale = max(abs(leading), abs(chain), 1e-300)
        consistent = order > R + 2 or abs(chain - leading) <= 1e-10 * scale or chain == leading
        if not consistent:
            code = 2
        rows.append(
            {
                "R": R,
                "segment": seg,
                "order": order,
                "chain": chain,
                "delta_E": formula,
                "ratio_to_delta_E": chain / formula if formula else None,
                "ordering_factor": bd.ordering_factor(R),
                "leading_amplitude": leading,
                "chain_matches_leading": consistent,
            }
        )
    return Outcome({"config": cfg, "lambda": c.lam, "results": rows}, code)


def cmd_spectrum(cfg) -> Outcome:
    lat = _lattice(cfg)
    params = HamiltonianParams(float(cfg["je"]), float(cfg["jm"]), float(cfg["hx"]))
    op = build_hamiltonian(lat, params)
    k = int(cfg["k"])
    if not 1 <= k <= 64 and op.dim > 1 << 12:
        raise UsageError("k must be in 1..64 for the iterative solver")
    code = 0
    try:
        pairs = lowest_eigenpairs(op, k)
        values, residuals, method = pairs.values, pairs.residuals, pairs.method
    except ConvergenceError as exc:
        values, residuals, method = [], exc.residuals, "lanczos"
        code = 2
    try:
        deg = degeneracy_from_spectrum(values) if len(values) else None
    except ClusterTruncated:
        deg = None
    out = {
        "config": cfg,
        "params": {"j_e": params.j_e, "j_m": params.j_m, "h_x": params.h_x},
        "method": method,
        "eigenvalues": list(values),
        "residuals": list(residuals) if residuals is not None else [],
        "degeneracy": deg,
        "sweep": None,
    }
    if cfg["sweep"]:
        hs = [float(h) for h in cfg["sweep"]]
        fix = bool(cfg["fix_corners"])
        levels = cfg["levels"]
        if levels is None:
            log2 = degeneracy_log2(lat)
            if fix:
                log2 -= len(lat.corner_positions)
            levels = 1 << log2
        widths = [
            ground_splitting(lat, HamiltonianParams(params.j_e, params.j_m, h), int(levels), fix)
            for h in hs
        ]
        out["sweep"] = {
            "h": hs,
            "levels": int(levels),
            "fix_corners": fix,
            "width": widths,
            "loglog_slope": loglog_slope(hs, widths) if len(hs) > 1 else None,
        }
    return Outcome(out, code)


COMMANDS = {
    "degeneracy": cmd_degeneracy,
    "entropy": cmd_entropy,
    "dispersion": cmd_dispersion,
    "perturb": cmd_perturb,
    "spectrum": cmd_spectrum,
}


def run(argv=None) -> tuple[int, str, str | None]:
    """Parse, execute and render; returns ``(exit code, text, output path)``."""
    args = build_parser().parse_args(argv)
    cfg = resolve_config(args)
    if cfg["format"] not in ("json", "csv"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    if cfg["format"] == "csv" and cfg["command"] != "dispersion":
        raise UsageError(f"{cfg['command']} has no CSV output")
    outcome = COMMANDS[cfg["command"]](cfg)
    if cfg["format"] == "csv":
        text = "# config: " + dumps(cfg) + outcome.csv
    else:
        text = dumps(outcome.payload)
    return outcome.exit_code, text, cfg["out"]


def main(argv=None) -> int:
    try:
        code, text, out = run(argv)
    except (UsageError, ValueError, IndexError) as exc:
        print(f"toric-obc: error: {exc}", file=sys.stderr)
        return 1
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
