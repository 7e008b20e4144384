"""Sign surveys of det(AX + XA) for a gallery of 4x4 block matrices.

Prints the classifier verdict next to sampled sign counts.

    python scripts/sign_surveys.py --samples 10000 --seed 3
"""

import argparse
from dataclasses import dataclass

from anticomm.classify import phi_nonneg
from anticomm.field import Q
from anticomm.matrix import Matrix, block_diag, jordan_block
from anticomm.search import sign_survey


@dataclass
class SurveyConfig:
    samples: int = 10_000
    seed: int = 3
    bound: int = 5


def gallery():
    C = lambda a: Matrix(Q, [[0, a], [1, 0]])
    yield "C(-1)+C(-1)", block_diag([C(-1), C(-1)])
    yield "C(-1)+C(-2)", block_diag([C(-1), C(-2)])
    yield "C(2)+C(2)", block_diag([C(2), C(2)])
    yield "C(-1)+J2", block_diag([C(-1), jordan_block(Q, 2)])
    yield "C(-1)+0", block_diag([C(-1), Matrix.zeros(Q, 2)])
    yield "J2+J2", block_diag([jordan_block(Q, 2)] * 2)
    yield "J4", jordan_block(Q, 4)
    yield "I4", Matrix.identity(Q, 4)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()
    cfg = SurveyConfig(samples=args.samples, seed=args.seed)
    print(f"{'A':<14}{'verdict':<14}{'neg':>7}{'zero':>7}{'pos':>7}")
    for label, A in gallery():
        verdict = phi_nonneg(A, seed=cfg.seed).verdict
        s = sign_survey(A, cfg.samples, cfg.bound, seed=cfg.seed)
        print(f"{label:<14}{str(verdict):<14}{s.negatives:>7}{s.zeros:>7}{s.positives:>7}")


if __name__ == "__main__":
    main()
