"""Experiment sweeps and their CSV / SVG output."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .ambiguity import prediction_from_samples
from .config import ExperimentConfig
from .discretize import Mesh, joint_from_samples
from .dynamics import (
    Acip,
    Bernoulli,
    SineBox,
    generate_trajectory,
    parse_dist,
    parse_map,
    sample_distribution,
)
from .flow import (
    NetworkSpec,
    SeriesBundle,
    causation_entropy,
    exact_linear_joint,
    simulate_network,
    transfer_entropy,
)
from .noise import NoiseSpec, noise_experiment
from .prob import (
    InfoValue,
    JointDist3,
    conditional_mutual_information,
    disintegrated_cmi,
    mutual_information,
)

CSV_HEADER = ("param", "empirical_nats", "predicted_nats", "discrepancy_nats", "flags")
INF_TOKEN = "inf-flag"


@dataclass
class Row:
    param: float | int | str
    empirical: float | InfoValue
    predicted: float | None = None
    flags: list[str] = field(default_factory=list)

    @property
    def discrepancy(self) -> float | None:
        emp = float(self.empirical)
        if self.predicted is None or math.isinf(emp) or math.isinf(self.predicted):
            return None
        return emp - self.predicted


@dataclass
class ExperimentReport:
    experiment: str
    rows: list[Row]
    metadata: dict

    def column(self, name: str, flag: str | None = None) -> list:
        rows = [r for r in self.rows if flag is None or flag in r.flags]
        return [getattr(r, name) for r in rows]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, InfoValue):
        value = float(value)
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isinf(value):
        return INF_TOKEN
    if math.isnan(value):
        raise ValueError("refusing to write NaN to a report")
    return format(value, ".12g")


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in report.rows:
        w.writerow([_fmt(r.param), _fmt(r.empirical), _fmt(r.predicted), _fmt(r.discrepancy), ";".join(r.flags)])
    return buf.getvalue()


def _sweep(fn: Callable, points: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


# --- individual experiments --------------------------------------------------


def _pairs_for(map_, dist_text: str, cfg: ExperimentConfig, n_samples: int):
    """(y, x) pairs: consecutive orbit points for acip, i.i.d. (y, T(y)) otherwise."""
    dist = parse_dist(dist_text)
    if isinstance(dist, Acip):
        traj = generate_trajectory(map_, cfg.x0, cfg.transients, n_samples + 1)
        return traj.samples[:-1], traj.samples[1:]
    y = sample_distribution(dist, n_samples, cfg.seed)
    return y, map_(y)


def _map_mi_row(map_, param, dist_text: str, mesh: Mesh, cfg: ExperimentConfig, extra=()) -> Row:
    y, x = _pairs_for(map_, dist_text, cfg, cfg.samples)
    mi = mutual_information(joint_from_samples(mesh, y, x))
    pred = prediction_from_samples(map_, mesh, y, x)
    flags = [f"dist={dist_text}", *extra]
    if pred.contracting_weight > 0:
        flags.append(f"contracting_weight={pred.contracting_weight:.4g}")
    if pred.clipped_weight > 0:
        flags.append(f"clipped_weight={pred.clipped_weight:.4g}")
    return Row(param, mi, pred.predicted_mi, flags)


def run_bernoulli(cfg: ExperimentConfig) -> list[Row]:
    rows = []
    for dist_text in cfg.dists():
        if cfg.L_list:
            points = [(d, L) for d in cfg.d_range for L in cfg.L_list]
            rows += _sweep(
                lambda p: _map_mi_row(Bernoulli(p[0]), p[1], dist_text, Mesh(p[1]), cfg, [f"d={p[0]}"]),
                points, cfg.workers,
            )
        else:
            mesh = Mesh(cfg.delta_inv)
            rows += _sweep(lambda d: _map_mi_row(Bernoulli(d), d, dist_text, mesh, cfg), cfg.d_range, cfg.workers)
    return rows


def run_sinebox(cfg: ExperimentConfig) -> list[Row]:
    mesh = Mesh(cfg.delta_inv)
    rows = []
    for dist_text in cfg.dists():
        rows += _sweep(lambda n: _map_mi_row(SineBox(n), n, dist_text, mesh, cfg), cfg.n_range, cfg.workers)
    return rows


def run_noise(cfg: ExperimentConfig) -> list[Row]:
    mesh = Mesh(cfg.delta_inv)
    points = [(eps, m) for eps in cfg.epsilon for m in cfg.maps]

    def one(point):
        eps, m = point
        res = noise_experiment(NoiseSpec(eps, parse_map(m)), mesh, cfg.samples, cfg.seed)
        return Row(eps, res.estimated_mi, res.analytic_mi, [f"map={res.map}", *res.flags])

    return _sweep(one, points, cfg.workers)


def _exact_te(cfg: ExperimentConfig) -> float:
    return conditional_mutual_information(exact_linear_joint(cfg.delta_inv, cfg.gain, cfg.coupling)).value


def run_te(cfg: ExperimentConfig) -> list[Row]:
    spec = NetworkSpec((cfg.gain, cfg.gain), ((0, 1, cfg.coupling),))
    bundle = SeriesBundle(simulate_network(spec, cfg.samples, cfg.transients, cfg.seed), Mesh(cfg.delta_inv))
    exact = _exact_te(cfg)
    return [
        Row("1->2", transfer_entropy(bundle, "1", "2"), exact, ["exact-joint"]),
        Row("2->1", transfer_entropy(bundle, "2", "1"), 0.0, ["autonomous-target"]),
    ]


CE_CASES = (
    # (label, targets, sources, conditions, predicted kind)
    ("C(1->2|2)", ["2"], ["1"], ["2"], "direct"),
    ("C(2->3|3)", ["3"], ["2"], ["3"], "direct"),
    ("C(1->3|3)", ["3"], ["1"], ["3"], "zero"),
    ("C(1->3|2)", ["3"], ["1"], ["2"], "zero"),
    ("C(1->3|2+3)", ["3"], ["1"], ["2", "3"], "zero"),
    ("C(1->2|-)", ["2"], ["1"], [], "zero"),
)


def run_ce(cfg: ExperimentConfig) -> list[Row]:
    spec = NetworkSpec.chain(3, cfg.gain, cfg.coupling)
    bundle = SeriesBundle(simulate_network(spec, cfg.samples, cfg.transients, cfg.seed), Mesh(cfg.delta_inv))
    exact = _exact_te(cfg)
    rows = []
    for label, tgt, src, cond, kind in CE_CASES:
        val = causation_entropy(bundle, tgt, src, cond)
        rows.append(Row(label, val, exact if kind == "direct" else 0.0, [kind]))
    return rows


def random_joint3(rng: np.random.Generator, dims: Sequence[int], zero_prob: float = 0.2) -> JointDist3:
    """Dirichlet(1) joint with roughly ``zero_prob`` of its cells zeroed."""
    size = int(np.prod(dims))
    w = rng.exponential(size=size)
    w[rng.random(size) < zero_prob] = 0.0
    if w.sum() == 0:
        w[rng.integers(size)] = 1.0
    return JointDist3((w / w.sum()).reshape(tuple(dims)))


def cmi_check(trials: int, dims: Sequence[int], seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        j = random_joint3(rng, dims)
        worst = max(worst, abs(conditional_mutual_information(j).value - disintegrated_cmi(j).value))
    return worst


def run_cmi_check(cfg: ExperimentConfig) -> list[Row]:
    worst = cmi_check(cfg.trials, cfg.cmi_dims, cfg.seed)
    dims = "x".join(map(str, cfg.cmi_dims))
    return [Row(cfg.trials, worst, 0.0, [f"dims={dims}", "max|direct-disintegrated|"])]


RUNNERS = {
    "bernoulli": run_bernoulli,
    "sinebox": run_sinebox,
    "noise": run_noise,
    "te": run_te,
    "ce": run_ce,
    "cmi-check": run_cmi_check,
}


# --- orchestration -----------------------------------------------------------


def run(cfg: ExperimentConfig, write: bool = True) -> ExperimentReport:
    start = time.perf_counter()
    rows = RUNNERS[cfg.experiment](cfg)
    meta = {
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "L": cfg.delta_inv,
        "wall_time_s": round(time.perf_counter() - start, 3),
        "config": cfg.to_dict(),
    }
    report = ExperimentReport(cfg.experiment, rows, meta)
    if write:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = cfg.experiment.replace("-", "_")
        with open(out / f"{stem}.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(report_csv(report))
        (out / f"{stem}.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        if cfg.plot:
            plot_report(report, out / f"{stem}.svg")
    return report


def plot_report(report: ExperimentReport, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed salt so element ids, and hence the file bytes, repeat across runs
    matplotlib.rcParams["svg.hashsalt"] = "infoflow"

    groups: dict[str, list[Row]] = {}
    for r in report.rows:
        key = next((f for f in r.flags if f.startswith(("dist=", "map=", "d="))), report.experiment)
        groups.setdefault(key, []).append(r)

    fig, ax = plt.subplots(figsize=(6, 4))
    numeric = all(isinstance(r.param, (int, float)) for r in report.rows)
    for i, (key, rows) in enumerate(groups.items()):
        xs = [r.param for r in rows] if numeric else list(range(len(rows)))
        colour = f"C{i}"
        ax.plot(xs, [float(r.empirical) for r in rows], "o", color=colour, label=key)
        pred = [(x, r.predicted) for x, r in zip(xs, rows) if r.predicted is not None]
        if pred:
            ax.plot(*zip(*pred), "--", color=colour, lw=1)
    if not numeric:
        ax.set_xticks(range(len(report.rows)))
        ax.set_xticklabels([str(r.param) for r in report.rows], rotation=30, ha="right")
    ax.set_xlabel("sweep parameter")
    ax.set_ylabel("nats")
    ax.set_title(report.experiment)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
