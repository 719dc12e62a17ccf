"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run under pytest (lines are collected into the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from infoflow.config import parse_config
from infoflow.discretize import Mesh, exact_bernoulli_joint
from infoflow.dynamics import Bernoulli, Rotation
from infoflow.experiments import run
from infoflow.flow import exact_linear_joint
from infoflow.noise import NoiseSpec, noise_experiment
from infoflow.prob import (
    DiscreteDist,
    JointDist2,
    JointDist3,
    conditional_mutual_information,
    disintegrated_cmi,
    kl_divergence,
    markovize,
    mutual_information,
    shannon_entropy,
)

RESULTS: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _cfg(**flags):
    return parse_config(flags=flags, env={})


# 1 -------------------------------------------------------------------------------


def test_criterion_1_exact_bernoulli_formula():
    start = time.perf_counter()
    worst = 0.0
    pairs = 0
    for L in range(3, 513):
        lnL = math.log(L)
        for d in range(2, L):
            mi = mutual_information(exact_bernoulli_joint(L, d)).value
            worst = max(worst, abs(mi - (lnL - math.log(d))))
            pairs += 1
    worst_coarse = 0.0
    for d in range(2, 65):
        for L in range(1, d + 1):
            worst_coarse = max(worst_coarse, abs(mutual_information(exact_bernoulli_joint(L, d)).value))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and worst_coarse <= 1e-12 and elapsed < 1.0
    record("1", ok, f"{pairs} pairs d<L<=512 max err {worst:.2e}; L<=d max |MI| {worst_coarse:.2e}; "
                    f"runtime {elapsed:.1f} s (limit 1 s)")


# 2 / 3 ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_sweep(dist: str):
    start = time.perf_counter()
    rep = run(_cfg(experiment="bernoulli", delta_inv=300, samples=10**6, d_range="2..30", dist=[dist]),
              write=False)
    return {r.param: float(r.empirical) for r in rep.rows}, time.perf_counter() - start


def test_criterion_2_bernoulli_empirical():
    mi, elapsed = bernoulli_sweep("uniform")
    errs = {d: abs(v - (math.log(300) - math.log(d))) for d, v in mi.items()}
    worst_d = max(errs, key=errs.get)
    ok = len(mi) == 29 and max(errs.values()) <= 0.02 and elapsed < 60
    record("2", ok, f"29 d values, max |MI - ln(300/d)| = {errs[worst_d]:.4f} at d={worst_d} (limit 0.02); "
                    f"runtime {elapsed:.1f} s (limit 60 s)")


def test_criterion_3_gaussian_case():
    uni, _ = bernoulli_sweep("uniform")
    gau, _ = bernoulli_sweep("gaussian:0.3,0.02")
    excess = max(gau[d] - uni[d] for d in uni)
    gap2, gap30 = abs(gau[2] - uni[2]), abs(gau[30] - uni[30])
    ok = excess <= 0.03 and gap30 <= gap2 / 3
    record("3", ok, f"max(gauss - uniform) = {excess:.4f} (limit 0.03); |gap| d=2 {gap2:.4f}, "
                    f"d=30 {gap30:.4f} (need <= {gap2 / 3:.4f})")


# 4 ---------------------------------------------------------------------------------


def test_criterion_4_sinebox_monotone():
    rep = run(_cfg(experiment="sinebox", delta_inv=300, samples=10**6, transients=1000, n_range="1..10"),
              write=False)
    details, ok = [], True
    for dist in ("uniform", "acip"):
        v = np.array([float(r.empirical) for r in rep.rows if f"dist={dist}" in r.flags])
        # each step may rise by at most the 0.03 slack
        rises = np.diff(v)
        ok &= v.size == 10 and bool(np.all(rises < 0.03))
        details.append(f"{dist}: MI {v[0]:.3f} -> {v[-1]:.3f}, smallest drop {-rises.max():.4f}")
    record("4", ok, "; ".join(details))


# 5 ---------------------------------------------------------------------------------


def test_criterion_5_disintegration_oracle():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        dims = tuple(rng.integers(1, 6, size=3))
        w = rng.exponential(size=dims)
        w[rng.random(dims) < 0.2] = 0.0
        if w.sum() == 0:
            w.flat[0] = 1.0
        j = JointDist3(w / w.sum())
        worst = max(worst, abs(conditional_mutual_information(j).value - disintegrated_cmi(j).value))
    elapsed = time.perf_counter() - start
    record("5", worst <= 1e-12 and elapsed < 5,
           f"1000 joints <= 5x5x5, max |direct - disintegrated| = {worst:.2e}; runtime {elapsed:.2f} s")


# 6 ---------------------------------------------------------------------------------


def test_criterion_6_log_growth():
    worst = 0.0
    for d in range(2, 31):
        for L in (50, 100, 200, 400):
            offset = mutual_information(exact_bernoulli_joint(L, d)).value - math.log(L)
            worst = max(worst, abs(offset + math.log(d)))
    record("6", worst <= 1e-12, f"MI(L) - ln L = -ln d for d=2..30, L in 50..400: max err {worst:.2e}")


# 7 ---------------------------------------------------------------------------------


def test_criterion_7_additive_noise():
    mesh = Mesh(1000)
    maps = (Bernoulli(2), Bernoulli(10), Rotation(0.37))
    ok, parts = True, []
    for eps in (0.1, 0.02):
        assert mesh.L * eps >= 20
        est = [noise_experiment(NoiseSpec(eps, m), mesh, 10**6, 0).estimated_mi for m in maps]
        target = math.log(1 / eps)
        err = max(abs(e - target) for e in est)
        spread = max(est) - min(est)
        ok &= err <= 0.05 and spread <= 0.05
        parts.append(f"eps={eps}: errs {', '.join(f'{e - target:+.3f}' for e in est)}, spread {spread:.3f}")
    record("7", ok, f"L=1000, N=1e6; {'; '.join(parts)} (limits 0.05)")


# 8 ---------------------------------------------------------------------------------


def polygon_cell_joint(L, g, c):
    from test_flow import polygon_cell_joint as oracle

    return oracle(L, g, c)


def test_criterion_8_te_screening():
    zero = conditional_mutual_information(exact_linear_joint(4, 2, 0)).value
    j = exact_linear_joint(8, 1, 1)
    te = conditional_mutual_information(j).value
    oracle = polygon_cell_joint(8, 1, 1)
    te_oracle = conditional_mutual_information(JointDist3(oracle / oracle.sum())).value
    ok = abs(zero) <= 1e-12 and abs(te - te_oracle) <= 1e-9 and abs(te - math.log(8)) <= 1e-9
    record("8", ok, f"independent source TE = {zero:.1e}; (U+V) mod 1 at L=8: TE = {te:.9f}, "
                    f"polygon oracle {te_oracle:.9f}, stated target ln 8 = {math.log(8):.9f}")


# 9 ---------------------------------------------------------------------------------


def _random_mass(rng, shape):
    w = rng.exponential(size=shape)
    w[rng.random(shape) < 0.25] = 0.0
    if w.sum() == 0:
        w.flat[rng.integers(w.size)] = 1.0
    return w / w.sum()


def test_criterion_9_property_suite():
    rng = np.random.default_rng(99)
    n = 10**4
    tol = 1e-12
    bad = dict.fromkeys(("kl>=0", "mi>=0", "cmi>=0", "mi-sym", "I(X;X)=H", "markov-idem", "markov-marg"), 0)
    for _ in range(n):
        k = int(rng.integers(1, 9))
        p, m = DiscreteDist(_random_mass(rng, k)), DiscreteDist(_random_mass(rng, k))
        kl = kl_divergence(p, m)
        bad["kl>=0"] += not (kl.is_infinite or kl.value >= 0)
        bad["I(X;X)=H"] += abs(mutual_information(JointDist2.diagonal(p)).value - shannon_entropy(p)) > tol

        j2 = JointDist2(_random_mass(rng, tuple(rng.integers(1, 7, size=2))))
        mi = mutual_information(j2).value
        bad["mi>=0"] += mi < 0
        bad["mi-sym"] += abs(mi - mutual_information(j2.transpose()).value) > tol

        j3 = JointDist3(_random_mass(rng, tuple(rng.integers(1, 6, size=3))))
        bad["cmi>=0"] += conditional_mutual_information(j3).value < 0
        mk = markovize(j3)
        bad["markov-idem"] += not np.allclose(markovize(mk).mass, mk.mass, rtol=0, atol=tol)
        bad["markov-marg"] += not (np.allclose(mk.marginal_xz(), j3.marginal_xz(), rtol=0, atol=tol)
                                   and np.allclose(mk.marginal_yz(), j3.marginal_yz(), rtol=0, atol=tol))
    total = sum(bad.values())
    record("9", total == 0, f"{n} cases per property, violations: "
                            + ", ".join(f"{k} {v}" for k, v in bad.items()))


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
