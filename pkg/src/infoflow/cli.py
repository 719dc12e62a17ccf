"""Command line entry point: ``infoflow run ...`` and ``infoflow config ...``.

Exit codes: 0 success, 1 usage or capacity error, 2 internal-consistency
failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import EXPERIMENTS, parse_config
from .errors import CapacityError, ConsistencyError, InfoFlowError, UsageError
from .experiments import report_csv, run

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON config file; flags override its values")
    p.add_argument("--experiment", choices=EXPERIMENTS)
    p.add_argument("--delta-inv", "-L", dest="delta_inv", help="mesh size L (cells on [0, 1))")
    p.add_argument("--samples", "-N", dest="samples", help="sample count or trajectory length")
    p.add_argument("--transients", help="discarded orbit prefix")
    p.add_argument("--seed")
    p.add_argument("--x0", help="orbit start point for acip runs")
    p.add_argument("--dist", action="append", help="uniform | gaussian:MEAN,VAR | acip (repeatable)")
    p.add_argument("--d-range", dest="d_range", help="e.g. 2..30 or 2,5,10")
    p.add_argument("--n-range", dest="n_range", help="e.g. 1..10")
    p.add_argument("--epsilon", help="comma separated noise widths")
    p.add_argument("--L-list", dest="L_list", help="mesh refinement list for the bernoulli sweep")
    p.add_argument("--maps", help="comma separated maps, e.g. bernoulli:2,rotation:0.37")
    p.add_argument("--gain", help="self gain of network nodes")
    p.add_argument("--coupling", help="integer coupling weight")
    p.add_argument("--trials", help="random joints for cmi-check")
    p.add_argument("--cmi-dims", dest="cmi_dims", help="three sizes, e.g. 4,4,4")
    p.add_argument("--out", help="output directory (also INFOFLOW_OUT)")
    p.add_argument("--plot", action="store_const", const=True, default=None, help="also write an SVG panel")
    p.add_argument("--workers", help="threads for sweep points")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infoflow", description="Information-flow experiments on interval maps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p_run = sub.add_parser("run", help="run an experiment and write CSV (and optionally SVG)")
    _add_config_flags(p_run)
    p_run.add_argument("--quiet", action="store_true", help="do not echo the CSV to stdout")
    p_cfg = sub.add_parser("config", help="print the resolved configuration as JSON")
    _add_config_flags(p_cfg)
    return parser


_NON_CONFIG = {"command", "config", "quiet"}


def _resolve(args: argparse.Namespace):
    flags = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
    if flags.get("dist"):
        flags["dist"] = list(flags["dist"])
    return parse_config(args.config, flags)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _resolve(args)
        if args.command == "config":
            print(json.dumps(cfg.to_dict(), indent=2))
            return EXIT_OK
        report = run(cfg)
        if not args.quiet:
            sys.stdout.write(report_csv(report))
        stem = cfg.experiment.replace("-", "_")
        print(f"wrote {Path(cfg.out) / (stem + '.csv')} in {report.metadata['wall_time_s']} s", file=sys.stderr)
        return EXIT_OK
    except (UsageError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (InfoFlowError, ValueError) as exc:
        # remaining domain errors come from bad parameter combinations
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
