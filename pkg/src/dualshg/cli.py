"""Command-line entry point: ``dualshg-sweep``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .sweep import MODES, SweepConfig, emit_csv, run_sweep, to_db, write_csv

log = logging.getLogger("dualshg")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dualshg-sweep",
        description="Pump-power sweep of harmonic squeezing, twin-beam and "
                    "entanglement figures for a dual-ported SHG resonator.")
    p.add_argument("--config", help="JSON sweep configuration")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--pmin", type=float, help="lowest pump power (W)")
    p.add_argument("--pmax", type=float, help="highest pump power (W)")
    p.add_argument("--points", type=int, help="number of grid points")
    p.add_argument("--omega", type=float, help="sideband angular frequency (rad/s)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--dump-config", metavar="PATH",
                   help="also write the effective configuration as JSON")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args) -> SweepConfig:
    cfg = SweepConfig.load(args.config) if args.config else SweepConfig()
    overrides = {k: v for k, v in dict(mode=args.mode, p_min=args.pmin, p_max=args.pmax,
                                       n_points=args.points, omega=args.omega).items()
                 if v is not None}
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = resolve_config(args)
        if args.dump_config:
            with open(args.dump_config, "w") as fh:
                fh.write(cfg.to_json() + "\n")
        table = run_sweep(cfg, jobs=args.jobs)
        if args.out:
            emit_csv(table, args.out)
        else:
            write_csv(table, sys.stdout)
    except (OSError, ValueError, TypeError) as exc:
        log.error("%s", exc)
        return 2

    failed = [r for r in table if r["status"] != "ok"]
    for r in failed:
        log.warning("p_in=%g: %s", r["p_in"], r["status"])
    last = table[-1]
    if last["status"] == "ok":
        log.info("%s at p_in=%g W: S_X1 %.2f dB, V_EPR %.3f, V_DGCZ %.3f", cfg.mode,
                 last["p_in"], to_db(last["s_x1"]), last["v_epr"], last["v_dgcz"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
