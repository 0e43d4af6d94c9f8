"""Timing and accuracy comparison of the parameter chain against the 4-point solvers.

Problems are drawn with the projective data protocol, so every solver sees the
same four correspondences and ``compose_sks`` sees their ground-truth
parameters.
"""

from __future__ import annotations

import csv
import gc
import time
from dataclasses import dataclass, field

import numpy as np

from .datagen import PerturbationSpec, Regime, generate_one
from .errors import PreconditionError
from .geometry import projective_distance
from .sks import compose_sks, dlt_four_point, sks_four_point

LINEAR_SOLVE = {
    "compose_sks": "none: fixed 3x3 products",
    "sks_four_point": "closed-form 2x2 elimination",
    "dlt_four_point": "SVD of 8x9 system",
}


@dataclass
class BenchRow:
    method: str
    median_us: float
    q1_us: float
    q3_us: float
    max_dist_vs_dlt: float

    @property
    def linear_solve(self) -> str:
        return LINEAR_SOLVE[self.method]


@dataclass
class BenchReport:
    trials: int
    seed: int
    repeats: int
    rows: list[BenchRow] = field(default_factory=list)

    def row(self, method: str) -> BenchRow:
        return next(r for r in self.rows if r.method == method)

    @property
    def speedup(self) -> float:
        """Median DLT time over median ``compose_sks`` time."""
        return self.row("dlt_four_point").median_us / self.row("compose_sks").median_us

    def format_table(self) -> str:
        head = f"{'method':<16}{'linear solve':<30}{'median_us':>11}{'q1_us':>10}{'q3_us':>10}{'max_dist_vs_dlt':>17}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.method:<16}{r.linear_solve:<30}{r.median_us:>11.2f}{r.q1_us:>10.2f}"
                f"{r.q3_us:>10.2f}{r.max_dist_vs_dlt:>17.3e}"
            )
        lines.append(
            f"trials={self.trials} seed={self.seed} repeats={self.repeats} "
            f"speedup(compose_sks vs dlt_four_point)={self.speedup:.2f}x"
        )
        return "\n".join(lines)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["method", "linear_solve", "median_us", "q1_us", "q3_us", "max_dist_vs_dlt"])
            for r in self.rows:
                w.writerow([r.method, r.linear_solve, r.median_us, r.q1_us, r.q3_us, r.max_dist_vs_dlt])


def _time_us(fn, arg, extra, repeats: int) -> float:
    start = time.perf_counter_ns()
    for _ in range(repeats):
        fn(arg, *extra)
    return (time.perf_counter_ns() - start) / repeats / 1e3


def run_bench(trials: int, seed: int = 0, repeats: int = 5) -> BenchReport:
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    if repeats < 1:
        raise PreconditionError("repeats must be >= 1")
    spec = PerturbationSpec(regime=Regime.PROJECTIVE, count=trials, seed=seed)
    samples = [generate_one(spec, i) for i in range(trials)]

    times = {m: np.empty(trials) for m in LINEAR_SOLVE}
    dist = {m: 0.0 for m in LINEAR_SOLVE}
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for i, s in enumerate(samples):
            corr, cfg = s.correspondences, s.cfg
            ref = dlt_four_point(corr)
            dist["compose_sks"] = max(dist["compose_sks"], projective_distance(compose_sks(s.gt_params, cfg), ref))
            dist["sks_four_point"] = max(dist["sks_four_point"], projective_distance(sks_four_point(corr), ref))
            times["compose_sks"][i] = _time_us(compose_sks, s.gt_params, (cfg,), repeats)
            times["sks_four_point"][i] = _time_us(sks_four_point, corr, (), repeats)
            times["dlt_four_point"][i] = _time_us(dlt_four_point, corr, (), repeats)
    finally:
        if gc_was_enabled:
            gc.enable()

    report = BenchReport(trials=trials, seed=seed, repeats=repeats)
    for m in LINEAR_SOLVE:
        q1, med, q3 = np.percentile(times[m], [25, 50, 75])
        report.rows.append(BenchRow(m, float(med), float(q1), float(q3), dist[m]))
    return report
