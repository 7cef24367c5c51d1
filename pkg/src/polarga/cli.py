"""Command-line entry point: ``polarga <command> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import bench, diagnostics, ga
from .construction import construct_code


def _levels(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise argparse.ArgumentTypeError("empty level range")
        return list(range(lo, hi + 1))
    return [int(text)]


def _floats(values: list[str]) -> list[float]:
    out = []
    for v in values:
        out.extend(float(x) for x in v.split(",") if x)
    return out


def _sigma2(args) -> float:
    db = args.design_snr_db if getattr(args, "design_snr_db", None) is not None else args.ebn0_db
    return float(ga.ebn0_to_noise_variance(db, args.rate))


def cmd_construct(args) -> int:
    code = construct_code(args.method, args.n, args.k, _sigma2(args))
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(code.to_json(include_means=args.means), fh)
    return 0


def cmd_census(args) -> int:
    sigma2 = _sigma2(args)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "mu_pvs", "theta_pvs", "mu_prs", "theta_prs"])
        for n in _levels(args.levels):
            c = diagnostics.census(args.method, n, sigma2)
            w.writerow([n, c.pvs, f"{100 * c.pvs_ratio:.3f}", c.prs, f"{100 * c.prs_ratio:.3f}"])
    return 0


def cmd_boundaries(args) -> int:
    b = diagnostics.solve_set_boundaries(args.method)
    print("empty" if b.empty else f"a1={b.a1:.6g} a2={b.a2:.6g}")
    return 0


def cmd_cle(args) -> int:
    t = np.linspace(args.t_min, args.t_max, args.points)
    (n,) = _levels(args.levels)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "method", "cle_exact", "cle_bound"])
        for m in args.methods.split(","):
            p = diagnostics.cle_profile(m, n, t)
            for ti, c, b in zip(p.t, p.cle, p.injection_bound):
                w.writerow([f"{ti:.6g}", p.scheme, f"{c:.6g}", f"{b:.6g}"])
    return 0


def cmd_simulate(args) -> int:
    cfg = bench.SimConfig(
        n=args.n,
        k=args.k,
        ebn0_db=tuple(_floats(args.ebn0_db)),
        method=args.method,
        decoder=args.decoder,
        list_size=args.list_size,
        crc16=args.crc16,
        channel=args.channel,
        target_errors=args.target_errors,
        max_trials=args.max_trials,
        seed=args.seed,
        design_snr_db=args.design_snr_db,
        workers=args.workers,
    )

    def report(p):
        print(f"{p.ebn0_db:g} dB: {p.block_errors}/{p.trials} bler={p.bler:.3e}", file=sys.stderr)

    res = bench.run_bler(cfg, progress=report)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ebn0_db", "trials", "block_errors", "bler", "sc_bound"])
        for p in res.points:
            bound = "" if p.sc_bound is None else f"{p.sc_bound:.6e}"
            w.writerow([p.ebn0_db, p.trials, p.block_errors, f"{p.bler:.6e}", bound])
    return 0


def cmd_dispersion(args) -> int:
    try:
        r = bench.dispersion_limit(1 << args.n, args.k, args.epsilon)
    except bench.NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return 2
    print(f"{r.ebn0_db:.4f}")
    return 0


METHODS = ["ega", "chung", "aga2", "aga3", "aga4", "bec"]
GA_METHODS = ["ega", "exact", "chung", "aga2", "aga3", "aga4"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polarga", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build an information set")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--ebn0-db", type=float, required=True)
    c.add_argument("--rate", type=float, required=True)
    c.add_argument("--method", choices=METHODS, required=True)
    c.add_argument("--design-snr-db", type=float)
    c.add_argument("--means", action="store_true", help="include leaf means")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("census", help="count PVS/PRS nodes per level")
    c.add_argument("--method", choices=GA_METHODS, required=True)
    c.add_argument("--levels", required=True, help="a..b")
    c.add_argument("--ebn0-db", type=float, required=True)
    c.add_argument("--rate", type=float, required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_census)

    c = sub.add_parser("boundaries", help="PRS/PVS boundary points")
    c.add_argument("--method", choices=GA_METHODS, required=True)
    c.set_defaults(func=cmd_boundaries)

    c = sub.add_parser("cle", help="capacity-loss error against exact GA")
    c.add_argument("--levels", required=True)
    c.add_argument("--t-min", type=float, required=True)
    c.add_argument("--t-max", type=float, required=True)
    c.add_argument("--points", type=int, required=True)
    c.add_argument("--methods", required=True, help="comma separated")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_cle)

    c = sub.add_parser("simulate", help="Monte Carlo BLER")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--ebn0-db", nargs="+", required=True)
    c.add_argument("--method", choices=METHODS, required=True)
    c.add_argument("--decoder", choices=list(bench.DECODERS), default="sc")
    c.add_argument("--list-size", type=int, default=8)
    c.add_argument("--crc16", action="store_true")
    c.add_argument("--channel", choices=["awgn", "rayleigh"], default="awgn")
    c.add_argument("--target-errors", type=int, default=100)
    c.add_argument("--max-trials", type=int, default=1_000_000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--design-snr-db", type=float)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_simulate)

    c = sub.add_parser("dispersion", help="normal-approximation Eb/N0 limit")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--epsilon", type=float, required=True)
    c.set_defaults(func=cmd_dispersion)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ga.UnsupportedSchemeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
