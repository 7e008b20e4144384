"""Run the finite-field conjecture scans and the characteristic-2 obstruction checks.

    python scripts/finite_field_scans.py --seed 0 --workers 4
"""

import argparse
import time
from dataclasses import dataclass, field

from anticomm.search import char2_counterexample_scan, cross_validate_scan, finite_field_conjecture_scan


@dataclass
class ScanConfig:
    seed: int = 0
    workers: int = 1
    budget: int = 20_000
    conjecture_cases: list = field(default_factory=lambda: [(3, 2), (3, 3), (5, 2), (3, 4), (5, 3)])
    char2_cases: list = field(default_factory=lambda: [(2, 2), (3, 2), (3, 3), (4, 3)])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="skip the n = 4 / GF(5)^3 sampled scans")
    args = ap.parse_args()
    cfg = ScanConfig(seed=args.seed, workers=args.workers)
    if args.quick:
        cfg.conjecture_cases = cfg.conjecture_cases[:3]

    for p, n in cfg.conjecture_cases:
        t0 = time.perf_counter()
        report = finite_field_conjecture_scan(p, n, seed=cfg.seed, budget=cfg.budget, workers=cfg.workers)
        print(report.text() + f"# {time.perf_counter() - t0:.2f}s\n")
    print(f"cross_validation(3,2)={cross_validate_scan(3, 2)}\n")
    for n, p in cfg.char2_cases:
        t0 = time.perf_counter()
        report = char2_counterexample_scan(n, p, workers=cfg.workers)
        print(report.text() + f"# {time.perf_counter() - t0:.2f}s\n")


if __name__ == "__main__":
    main()
