#!/usr/bin/env python3
"""Survey: dense-period certificates against primitivity.

Sweeps every essential transition matrix up to a given size (plus random
larger samples) and tabulates certificate verdicts against primitivity;
the two must coincide.  Prints a per-size summary with worst observed N0.
"""

import argparse
import random
import time
from dataclasses import dataclass

from symshadow.dense_periods import (DensePeriodsCertificate,
                                     dense_periods_certificate)
from symshadow.sft import TransitionMatrix, is_primitive


@dataclass(frozen=True)
class SurveyConfig:
    exhaustive_max_size: int = 3
    random_samples: int = 200
    random_sizes: tuple = (5, 6)
    epsilon: float = 0.25
    n_max: int = 100
    seed: int = 1


def essential(rows, size) -> bool:
    return all(any(r) for r in rows) and \
        all(any(rows[i][j] for i in range(size)) for j in range(size))


def verdict_matches(matrix, config) -> tuple[bool, int | None]:
    result = dense_periods_certificate(matrix, config.epsilon, config.n_max)
    certified = isinstance(result, DensePeriodsCertificate)
    return certified == is_primitive(matrix), (result.N0 if certified else None)


def run(config: SurveyConfig) -> bool:
    all_agree = True
    for size in range(1, config.exhaustive_max_size + 1):
        start = time.time()
        total = agree = 0
        worst_n0 = 0
        for bits in range(1 << (size * size)):
            rows = [[(bits >> (size * i + j)) & 1 for j in range(size)]
                    for i in range(size)]
            if not essential(rows, size):
                continue
            ok, n0 = verdict_matches(TransitionMatrix(rows), config)
            total += 1
            agree += ok
            if n0 is not None:
                worst_n0 = max(worst_n0, n0)
        all_agree &= agree == total
        print(f"size {size}: {total} essential matrices, {agree} agree, "
              f"worst N0 = {worst_n0}, {time.time() - start:.1f}s")

    rng = random.Random(config.seed)
    start = time.time()
    total = agree = 0
    worst_n0 = 0
    for _ in range(config.random_samples):
        size = rng.choice(config.random_sizes)
        while True:
            rows = [[1 if rng.random() < 0.4 else 0 for _ in range(size)]
                    for _ in range(size)]
            if essential(rows, size):
                break
        ok, n0 = verdict_matches(TransitionMatrix(rows), config)
        total += 1
        agree += ok
        if n0 is not None:
            worst_n0 = max(worst_n0, n0)
    all_agree &= agree == total
    print(f"random {config.random_sizes}: {total} samples, {agree} agree, "
          f"worst N0 = {worst_n0}, {time.time() - start:.1f}s")
    print("AGREEMENT" if all_agree else "MISMATCH FOUND")
    return all_agree


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--exhaustive-max-size", type=int, default=3)
    parser.add_argument("--random-samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    config = SurveyConfig(exhaustive_max_size=args.exhaustive_max_size,
                          random_samples=args.random_samples, seed=args.seed)
    raise SystemExit(0 if run(config) else 1)


if __name__ == "__main__":
    main()
