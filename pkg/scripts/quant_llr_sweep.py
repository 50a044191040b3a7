#!/usr/bin/env python3
"""LLR degradation of the quantized detector across fixed-point formats.

Sweeps fractional bits at fixed integer bits on a 2-layer configuration
and reports the mean/max deviation from float exhaustive-MAP LLRs,
using common trials across formats.
"""

import argparse

from mimodet.hwmodel import FixedPointFormat
from mimodet.simharness import SimConfig, llr_fidelity


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=64)
    ap.add_argument("--snr", type=float, default=14.0)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--int-bits", type=int, default=9)
    ap.add_argument("--frac-bits", type=int, nargs="+", default=[4, 5, 6, 7, 8, 9])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    base = dict(
        n_layers=2, mods=(args.order, args.order), snr_db=(args.snr,),
        trials=args.trials, detector="map2", master_seed=args.seed,
    )
    print(f"2x2 {args.order}-QAM at {args.snr} dB, {args.trials} trials per format")
    for f_bits in args.frac_bits:
        fmt = FixedPointFormat(args.int_bits, f_bits)
        pt = llr_fidelity(SimConfig(quant=fmt, **base))[0]
        print(f"  ({fmt})  mean|dLLR|={pt.llr_mae:.6g}  max|dLLR|={pt.llr_max:.6g}")
    pt = llr_fidelity(SimConfig(**base))[0]
    print(f"  (float) mean|dLLR|={pt.llr_mae:.3g}  max|dLLR|={pt.llr_max:.3g}")


if __name__ == "__main__":
    main()
