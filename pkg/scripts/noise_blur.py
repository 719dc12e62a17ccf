"""Noisy maps: plug-in MI against ln(1/eps) for several measure-preserving maps.

Usage: python3 scripts/noise_blur.py [--samples N] [--delta-inv L] [--out DIR]
"""
import argparse

from infoflow.config import parse_config
from infoflow.experiments import run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--delta-inv", type=int, default=1000)
    ap.add_argument("--out", default="results/noise")
    args = ap.parse_args()
    cfg = parse_config(flags={
        "experiment": "noise", "samples": args.samples, "delta_inv": args.delta_inv,
        "out": args.out, "plot": True,
    })
    for r in run(cfg).rows:
        print(f"eps={r.param:<5} {r.flags[0]:18s} est={float(r.empirical):.4f} ln(1/eps)={r.predicted:.4f}")


if __name__ == "__main__":
    main()
