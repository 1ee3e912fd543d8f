"""Command-line front end: ``qcohom <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .action import action_table, build_weight_matrix, canonical_gamma
from .errors import ConfigurationError, NotRegularError, QCohomError
from .oracle import (
    SampleConfig,
    compare_density,
    is_monotone_decreasing,
    ring_profile,
    sample_marginals,
    sample_slice,
    slice_walls,
)
from .residues import ClassSpec, PiecewiseDensity, all_cells, dh_density, pairing
from .ring import ring_presentation
from .walls import enumerate_walls, first_ray_crossings, locate_chamber, paths_for_cell

EXIT_ERROR, EXIT_CONFIG, EXIT_NOT_REGULAR = 1, 2, 3


def parse_rationals(text: str) -> tuple:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(",") if part.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"cannot read {text!r} as comma-separated rationals") from exc


def _qubits(p):
    p.add_argument("--qubits", "-r", type=int, required=True, help="number of qubits r")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=42, help="random seed (oracle only)")
    common.add_argument("--out", help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="qcohom", description="Cohomology of qubit torus quotients.")
    parser.add_argument("--version", action="version", version=f"qcohom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("action", parents=[common], help="weight matrix and fixed-point data")
    _qubits(p)
    p.add_argument("--dump", action="store_true", help="include every fixed point")
    p.add_argument("--gamma", help="polarization vector, e.g. -2,-1")

    p = sub.add_parser("chamber", parents=[common], help="chamber and dendrite of a regular value")
    _qubits(p)
    p.add_argument("--xi", required=True)

    p = sub.add_parser("ring", parents=[common], help="cohomology ring presentation")
    _qubits(p)
    p.add_argument("--xi", help="regular value fixing the circle splits (default: built-in point)")
    p.add_argument("--sigma", action="store_true", help="add the sigma decomposition of the full relation")
    p.add_argument("--coordinate-only", action="store_true", help="use only the 2r coordinate-circle generators")

    p = sub.add_parser("pair", parents=[common], help="pairing of eta^a omega^b")
    _qubits(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--xi", required=True)
    p.add_argument("--symbolic", action="store_true", help="return the cell polynomial in x1..xr")
    p.add_argument("--strict", action="store_true", help="fail when the first ray crosses an interior wall")
    p.add_argument("--details", action="store_true", help="also report the cell key and walls crossed")

    p = sub.add_parser("dh", parents=[common], help="Duistermaat-Heckman density per cell")
    _qubits(p)
    p.add_argument("--normalize", action="store_true")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--chamber", help="pyramid name (e.g. upper) or full cell key")
    g.add_argument("--all", action="store_true", help="every cell (default)")

    p = sub.add_parser("oracle", parents=[common], help="Monte Carlo histogram and comparison")
    _qubits(p)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--band", type=Fraction, help="wall exclusion band in xi units (default 1/bins)")
    p.add_argument("--threads", type=int, default=4)
    p.add_argument("--compare", help="dh JSON file to compare against, '-' for stdin")
    p.add_argument("--slice", type=int, metavar="AXIS", help="compare on the slice x_AXIS = 0")
    p.add_argument("--metric", choices=("linf", "l2"), default=None)
    p.add_argument("--threshold", type=float, default=None)
    return parser


def _check_xi(r, xi):
    if len(xi) != r:
        raise ConfigurationError(f"--xi has {len(xi)} coordinates, expected {r}")
    return xi


def cmd_action(args) -> dict:
    A = build_weight_matrix(args.qubits)
    gamma = parse_rationals(args.gamma) if args.gamma else canonical_gamma(args.qubits)
    if len(gamma) != args.qubits:
        raise ConfigurationError("--gamma needs one entry per qubit")
    table = action_table(A, gamma)
    if not args.dump:
        table.pop("fixed_points")
    table["gamma"] = [str(g) for g in table["gamma"]]
    return table


def cmd_chamber(args) -> dict:
    A = build_weight_matrix(args.qubits)
    xi = _check_xi(args.qubits, parse_rationals(args.xi))
    walls = enumerate_walls(A)
    ch = locate_chamber(walls, xi)
    return {
        "chamber": ch.name,
        "cell": ch.cell.key(),
        "apex": {"axis": ch.apex_axis, "sign": ch.apex_sign},
        "walls_hit": [w.describe() for w in first_ray_crossings(walls, xi, ch)],
        "dendrite": [
            {
                "steps": [[f"t{a}", d] for a, d in path.steps],
                "terminal": f"p{path.terminal}",
                "sign": path.sign,
            }
            for path in paths_for_cell(A, ch.cell)
        ],
    }


def cmd_ring(args) -> dict:
    xi = _check_xi(args.qubits, parse_rationals(args.xi)) if args.xi else None
    pres = ring_presentation(args.qubits, xi, coordinate_only=args.coordinate_only)
    return pres.to_json(sigma=args.sigma)


def cmd_pair(args) -> dict:
    xi = _check_xi(args.qubits, parse_rationals(args.xi))
    res = pairing(args.qubits, ClassSpec(args.a, args.b), xi, symbolic=args.symbolic, strict=args.strict)
    out = {
        "chamber": res.chamber.name,
        "total": res.value.to_text(),
        "contributions": {f"p{j}": v.to_text() for j, v in sorted(res.contributions.items())},
    }
    if args.details:
        out["cell"] = res.cell.key()
        out["walls_hit"] = [w.describe() for w in res.walls_hit]
    return out


def cmd_dh(args) -> dict:
    dens = dh_density(args.qubits, normalize=args.normalize)
    data = dens.to_json()
    if args.chamber:
        keys = [k for k in data["pieces"] if k == args.chamber or k.split("/")[0] == args.chamber]
        if not keys:
            raise ConfigurationError(
                f"no cell named {args.chamber!r}; known: {', '.join(sorted({c.key().split('/')[0] for c in all_cells(args.qubits)}))}"
            )
        data["pieces"] = {k: data["pieces"][k] for k in keys}
    return data


def _read_density(source: str) -> PiecewiseDensity:
    text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"density input is not JSON: {exc}") from exc
    return PiecewiseDensity.from_json(data)


def cmd_oracle(args) -> dict:
    cfg = SampleConfig(args.qubits, args.samples, args.bins, args.seed, args.band, args.threads)
    if args.slice:
        hist = sample_slice(cfg, args.slice)
    else:
        hist = sample_marginals(cfg)
    out = {"qubits": cfg.r, "samples": cfg.samples, "bins": cfg.bins, "seed": cfg.seed}
    if args.slice:
        out["slice_axis"] = args.slice
        out["slice_samples"] = hist.samples
        means, errs = ring_profile(hist)
        out["ring_profile"] = [[float(m), float(e)] for m, e in zip(means, errs)]
        out["monotone"] = is_monotone_decreasing(hist)
    else:
        out["means"] = hist.means().tolist()
    if args.compare is None:
        out["counts"] = hist.counts.tolist()
        return out
    dens = _read_density(args.compare)
    if dens.r != cfg.r:
        raise ConfigurationError(f"density is for {dens.r} qubits, sampler for {cfg.r}")
    if args.slice:
        target = dens.normalized().slice_zero(args.slice)
        walls = slice_walls(enumerate_walls(build_weight_matrix(cfg.r)), args.slice)
        metric = args.metric or "l2"
        threshold = 0.05 if args.threshold is None else args.threshold
    else:
        target = dens
        walls = None
        metric = args.metric or "linf"
        threshold = 0.02 if args.threshold is None else args.threshold
    report = compare_density(hist, target, walls, cfg.wall_band, threshold, metric)
    out["report"] = report.to_json()
    return out


COMMANDS = {
    "action": cmd_action,
    "chamber": cmd_chamber,
    "ring": cmd_ring,
    "pair": cmd_pair,
    "dh": cmd_dh,
    "oracle": cmd_oracle,
}


def _has_dict(v) -> bool:
    if isinstance(v, dict):
        return True
    return isinstance(v, list) and any(_has_dict(x) for x in v)


def _as_text(data, indent: int = 0) -> str:
    """Indented key: value lines; containers without nested objects stay inline."""
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k, v in data.items():
            if _has_dict(v):
                lines.append(f"{pad}{k}:")
                lines.append(_as_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v if isinstance(v, str) else json.dumps(v)}")
    else:
        for item in data:
            lines.append(f"{pad}-")
            lines.append(_as_text(item, indent + 1))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data = COMMANDS[args.command](args)
    except NotRegularError as exc:
        print(f"qcohom: {exc}", file=sys.stderr)
        return EXIT_NOT_REGULAR
    except ConfigurationError as exc:
        print(f"qcohom: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QCohomError as exc:
        print(f"qcohom: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"qcohom: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(data, separators=(",", ":")) if args.format == "json" else _as_text(data)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
