"""Mesh refinement for E_d: MI(L) - ln L should settle at -ln d.

Usage: python3 scripts/mesh_refinement.py [--samples N] [--out DIR]
"""
import argparse
import math

from infoflow import exact_bernoulli_joint, mutual_information
from infoflow.config import parse_config
from infoflow.experiments import run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--out", default="results/refinement")
    args = ap.parse_args()
    cfg = parse_config(flags={
        "experiment": "bernoulli", "d_range": "2,5,10", "L_list": "50,100,200,400",
        "samples": args.samples, "out": args.out,
    })
    report = run(cfg)
    print(f"{'d':>3} {'L':>5} {'empirical-lnL':>14} {'exact-lnL':>10}")
    for r in report.rows:
        d = int(r.flags[1].split("=")[1])
        L = int(r.param)
        exact = mutual_information(exact_bernoulli_joint(L, d)).value
        print(f"{d:>3} {L:>5} {float(r.empirical) - math.log(L):>14.4f} {exact - math.log(L):>10.4f}")


if __name__ == "__main__":
    main()
