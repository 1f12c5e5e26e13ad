#!/usr/bin/env python3
"""Sweep the pad's shunt resistance and tabulate the resulting leak.

Shows how the current imbalance (and with it Eve's success rate) dies off
as the shunt leg stiffens toward an open branch, i.e. as the topology
approaches the intact single loop.  Output is CSV on stdout, ready for any
plotting tool.
"""

import argparse
import csv
import sys

import numpy as np

from kljnsim import (
    AttenuatorConfig,
    NetworkConfig,
    NoiseSpec,
    analytic_attack_probabilities,
    analytic_mean_square_currents,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-alice", type=float, default=1000.0)
    ap.add_argument("--r-bob", type=float, default=10000.0)
    ap.add_argument("--r-series", type=float, default=2.9)
    ap.add_argument("--shunt-min", type=float, default=100.0)
    ap.add_argument("--shunt-max", type=float, default=1e7)
    ap.add_argument("--points", type=int, default=36)
    args = ap.parse_args()

    noise = NoiseSpec()
    writer = csv.writer(sys.stdout)
    writer.writerow(
        ("r_shunt", "ratio", "p_success", "p_error", "p_no_answer", "expected_measurements")
    )
    for r_shunt in np.geomspace(args.shunt_min, args.shunt_max, args.points):
        net = NetworkConfig(
            args.r_alice,
            args.r_bob,
            AttenuatorConfig(r_series=args.r_series, r_shunt=float(r_shunt)),
        )
        moments = analytic_mean_square_currents(net, noise)
        probs = analytic_attack_probabilities(moments.ratio)
        writer.writerow(
            (
                f"{r_shunt:.6g}",
                f"{moments.ratio:.6f}",
                f"{probs.p_success:.6f}",
                f"{probs.p_error:.6f}",
                f"{probs.p_no_answer:.6f}",
                f"{probs.expected_measurements:.4f}",
            )
        )


if __name__ == "__main__":
    main()
