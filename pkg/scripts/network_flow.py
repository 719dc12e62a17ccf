"""Transfer entropy on a coupled pair and causation entropy on a 3-node chain.

Usage: python3 scripts/network_flow.py [--samples N] [--delta-inv L] [--out DIR]
"""
import argparse

from infoflow.config import parse_config
from infoflow.experiments import report_csv, run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--delta-inv", type=int, default=4)
    ap.add_argument("--out", default="results/network")
    args = ap.parse_args()
    for kind in ("te", "ce"):
        cfg = parse_config(flags={
            "experiment": kind, "samples": args.samples, "delta_inv": args.delta_inv, "out": args.out,
        })
        print(report_csv(run(cfg)))


if __name__ == "__main__":
    main()
