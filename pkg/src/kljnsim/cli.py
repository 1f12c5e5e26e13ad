"""Command-line harness: ``analyze``, ``simulate`` and ``design-pad``.

Exit codes are a stable contract for scripting: 0 on success, 1 for any
configuration problem, 2 for runtime failures such as unwritable outputs.
``KLJN_SEED`` in the environment supplies the master seed when ``--seed``
is not given; an explicit ``master_seed`` in the config file ranks below
both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .circuit import design_tee_pad
from .config import ConfigError, load_config_file, resolve_config
from .reporting import build_report, write_report

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102 - argparse hook
        # bad invocations are configuration errors under the exit-code contract
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="kljnsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--preset", help="built-in network preset (overrides the file's network)")
        p.add_argument("--out", help="report path (default: standard output)")

    p_an = sub.add_parser("analyze", help="closed-form moments, ratio and attack probabilities")
    add_common(p_an)

    p_sim = sub.add_parser("simulate", help="Monte Carlo key exchange, alarm and attack campaign")
    add_common(p_sim)
    p_sim.add_argument("--seed", type=int, help="master seed (fallback: KLJN_SEED, then config file)")
    p_sim.add_argument("--bits", type=int, help="number of bit periods")
    p_sim.add_argument("--samples-per-bit", type=int, help="samples per bit period")
    p_sim.add_argument("--mode", choices=("independent", "waveform"), help="sampling mode")
    p_sim.add_argument("--trace-csv", help="dump per-sample currents to this CSV file")

    p_pad = sub.add_parser("design-pad", help="matched symmetric T-pad resistor values")
    p_pad.add_argument("--loss-db", type=float, required=True)
    p_pad.add_argument("--z0", type=float, required=True)
    return parser


def _env_seed() -> Optional[int]:
    raw = os.environ.get("KLJN_SEED")
    if raw is None:
        return None
    try:
        return int(raw, 0)
    except ValueError:
        raise ConfigError(f"KLJN_SEED must be an integer, got {raw!r}")


def cmd_analyze(args: argparse.Namespace) -> int:
    file_data = load_config_file(args.config) if args.config else None
    cfg = resolve_config(file_data, preset=args.preset, out=args.out)
    report = build_report(cfg, empirical=False)
    write_report(report, cfg.report_path)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    file_data = load_config_file(args.config) if args.config else None
    seed = args.seed if args.seed is not None else _env_seed()
    cfg = resolve_config(
        file_data,
        preset=args.preset,
        seed=seed,
        bits=args.bits,
        samples_per_bit=args.samples_per_bit,
        mode=args.mode,
        out=args.out,
        trace_csv=args.trace_csv,
    )
    report = build_report(cfg, empirical=True)
    write_report(report, cfg.report_path)
    return EXIT_OK


def cmd_design_pad(args: argparse.Namespace) -> int:
    pad = design_tee_pad(args.loss_db, args.z0)
    print(
        json.dumps(
            {
                "loss_db": args.loss_db,
                "z0_ohm": args.z0,
                "r_series_ohm": pad.r_series,
                "r_shunt_ohm": pad.r_shunt,
            },
            indent=2,
        )
    )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        return cmd_design_pad(args)
    except (ConfigError, ValueError) as exc:
        print(f"kljnsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"kljnsim: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
