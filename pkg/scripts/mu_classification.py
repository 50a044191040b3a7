#!/usr/bin/env python3
"""Interferer-constellation classification rate vs SNR (library API demo).

Equivalent to `detect-sim mumimo` but goes through the Python API and
prints the per-hypothesis score of one example scenario first.
"""

import argparse

import numpy as np

from mimodet import classify_interferer, make_constellation
from mimodet.mumimo import MuScenario
from mimodet.simharness import mu_classification_rates


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=24)
    ap.add_argument("--desired", type=int, default=64)
    ap.add_argument("--interferer", type=int, default=16)
    ap.add_argument("--snr", type=float, nargs="+", default=[0, 10, 20, 30])
    ap.add_argument("--scenarios", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    # one worked example
    rng = np.random.default_rng(args.seed)
    des = make_constellation(args.desired)
    intf = make_constellation(args.interferer)
    h = (rng.standard_normal((args.k, 2, 2)) + 1j * rng.standard_normal((args.k, 2, 2))) / np.sqrt(2)
    x1 = des.points[rng.integers(des.order, size=args.k)] * des.unit_energy_scale
    x2 = intf.points[rng.integers(intf.order, size=args.k)] * intf.unit_energy_scale
    sigma2 = 2.0 / 10.0 ** (args.snr[-1] / 10.0)
    y = h[:, :, 0] * x1[:, None] + h[:, :, 1] * x2[:, None]
    y = y + np.sqrt(sigma2 / 2) * (rng.standard_normal((args.k, 2)) + 1j * rng.standard_normal((args.k, 2)))
    cls = classify_interferer(MuScenario.create(h, y, des, sigma2))
    print(f"example window at {args.snr[-1]} dB, true interferer {args.interferer}-QAM:")
    for order, score in sorted(cls.scores.items()):
        mark = " <- chosen" if order == cls.chosen.order else ""
        print(f"  hypothesis {order:3d}-QAM  score={score:.2f}{mark}")

    print(f"\nclassification rate over {args.scenarios} scenarios:")
    rates = mu_classification_rates(
        args.seed, args.k, args.desired, args.interferer, args.snr, args.scenarios
    )
    for snr, rate in zip(args.snr, rates):
        print(f"  snr={snr:5.1f} dB  rate={rate:.4f}")


if __name__ == "__main__":
    main()
