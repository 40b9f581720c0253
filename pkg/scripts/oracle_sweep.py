"""Compare the closed-form minimum with the grid-search oracle on random instances.

Prints one CSV row per instance and a summary line on stderr.

    python scripts/oracle_sweep.py --instances 200 --n 2 --step 0.25 > sweep.csv
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from tropopt.ineq import is_feasible
from tropopt.linalg import Mat, spectral_radius
from tropopt.optimizer import OptProblem, OracleConfig, brute_force_min, compute_theta
from tropopt.semifield import Semifield


@dataclass
class SweepConfig:
    instances: int = 100
    n: int = 2
    semifield: str = "max-plus"
    low: int = -9
    high: int = 9
    null_prob: float = 0.2
    radius: float = 30.0
    step: float = 0.25
    seed: int = 0


def random_int_mat(rng, field: Semifield, rows: int, cols: int, cfg: SweepConfig) -> Mat:
    data = rng.integers(cfg.low, cfg.high + 1, size=(rows, cols)).astype(float)
    data[rng.random((rows, cols)) < cfg.null_prob] = field.null_repr
    return Mat(field, data)


def sweep(cfg: SweepConfig):
    field = Semifield.parse(cfg.semifield)
    rng = np.random.default_rng(cfg.seed)
    oracle = OracleConfig(grid_radius=cfg.radius, grid_step=cfg.step)
    done = 0
    while done < cfg.instances:
        A = random_int_mat(rng, field, cfg.n, cfg.n, cfg)
        C = random_int_mat(rng, field, cfg.n, cfg.n, cfg)
        if spectral_radius(A).is_null or not is_feasible(C):
            continue
        g = Mat(field, rng.integers(cfg.low, cfg.high + 1, size=(cfg.n, 1)).astype(float))
        p = OptProblem(A, C, g)
        t0 = time.perf_counter()
        found = brute_force_min(p, config=oracle)
        elapsed = time.perf_counter() - t0
        theta = compute_theta(A, C).value
        yield {
            "instance": done,
            "theta": theta,
            "oracle": None if found is None else found.value,
            "gap": None if found is None else abs(theta - found.value),
            "oracle_seconds": round(elapsed, 4),
        }
        done += 1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SweepConfig):
        ap.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    cfg = SweepConfig(**vars(ap.parse_args()))

    writer = csv.DictWriter(sys.stdout, fieldnames=["instance", "theta", "oracle", "gap", "oracle_seconds"])
    writer.writeheader()
    gaps = []
    for row in sweep(cfg):
        writer.writerow(row)
        gaps.append(float("inf") if row["gap"] is None else row["gap"])
    worst = max(gaps) if gaps else 0.0
    verdict = "within" if worst <= cfg.step else "OUTSIDE"
    print(f"{len(gaps)} instances, max gap {worst:g} ({verdict} step {cfg.step}); config {asdict(cfg)}",
          file=sys.stderr)


if __name__ == "__main__":
    main()
