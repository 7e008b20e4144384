"""Construct and verify witnesses for random matrices; tally the construction paths.

    python scripts/witness_totality.py --trials 500 --seed 1
"""

import argparse
import collections
import random
import sys
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from helpers import sample_with_rank  # noqa: E402

from anticomm.field import GF, Q  # noqa: E402
from anticomm.errors import BudgetExhausted  # noqa: E402
from anticomm.witness import assemble_witness, verify_witness  # noqa: E402


@dataclass
class TotalityConfig:
    trials: int = 200
    seed: int = 1
    min_n: int = 2
    max_n: int = 6
    prime: int = 0  # 0 means Q


def run(cfg: TotalityConfig):
    F = Q if cfg.prime == 0 else GF(cfg.prime)
    rng = random.Random(cfg.seed)
    paths = collections.Counter()
    exhausted = 0
    for i in range(cfg.trials):
        n = rng.randint(cfg.min_n, cfg.max_n)
        A = sample_with_rank(rng, n, deficient=False, field=F)
        try:
            w = assemble_witness(A, seed=cfg.seed + i)
        except BudgetExhausted:
            exhausted += 1
            continue
        verify_witness(A, w)
        paths["randomized" if w.provenance.startswith("randomized") else "deterministic"] += 1
    return paths, exhausted


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--prime", type=int, default=0)
    args = ap.parse_args()
    cfg = TotalityConfig(trials=args.trials, seed=args.seed, max_n=args.max_n, prime=args.prime)
    paths, exhausted = run(cfg)
    print(f"field={'Q' if cfg.prime == 0 else cfg.prime} trials={cfg.trials}")
    for k, v in sorted(paths.items()):
        print(f"{k}={v}")
    print(f"budget_exhausted={exhausted}")


if __name__ == "__main__":
    main()
