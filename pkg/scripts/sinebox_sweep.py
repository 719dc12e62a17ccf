"""Sine box sweep n = 1..10 at L = 300, uniform input and acip orbit pairs.

Usage: python3 scripts/sinebox_sweep.py [--samples N] [--out DIR]
"""
import argparse

from infoflow.config import parse_config
from infoflow.experiments import run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=10**6)
    ap.add_argument("--out", default="results/sinebox")
    args = ap.parse_args()
    cfg = parse_config(flags={"experiment": "sinebox", "samples": args.samples, "out": args.out, "plot": True})
    report = run(cfg)
    for dist in cfg.dists():
        rows = [r for r in report.rows if f"dist={dist}" in r.flags]
        vals = " ".join(f"{float(r.empirical):.3f}" for r in rows)
        print(f"{dist:8s} {vals}")


if __name__ == "__main__":
    main()
