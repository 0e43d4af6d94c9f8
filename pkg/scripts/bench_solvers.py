"""Time compose_sks against the two 4-point solvers and write a CSV report."""

import argparse
from dataclasses import dataclass

from sks_homography.bench import run_bench


@dataclass
class BenchConfig:
    trials: int = 2000
    seed: int = 0
    repeats: int = 5
    out: str | None = "bench.csv"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(BenchConfig()).items():
        ap.add_argument(f"--{name}", type=type(default) if default is not None else str, default=default)
    cfg = BenchConfig(**vars(ap.parse_args()))
    report = run_bench(cfg.trials, cfg.seed, cfg.repeats)
    print(report.format_table())
    if cfg.out:
        report.write_csv(cfg.out)
        print(f"wrote {cfg.out}")


if __name__ == "__main__":
    main()
