#!/usr/bin/env python3
"""Which short cat-map orbits equidistribute?

Scans all rational periodic orbits up to a period and denominator bound
and ranks them by weak-* distance to Lebesgue over low Fourier modes.
"""

import argparse
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from symshadow.measures import (LebesgueTorus, fourier_family, periodic_measure,
                                weak_star_distance)
from symshadow.systems import cat_map


@dataclass(frozen=True)
class ScanConfig:
    max_period: int = 30
    max_denominator: int = 40
    mode_bound: int = 3
    top: int = 10


def run(config: ScanConfig):
    system = cat_map()
    family = fourier_family(config.mode_bound)
    lebesgue = LebesgueTorus()
    start = time.time()
    ranked = []
    seen = set()
    for q in range(1, config.max_denominator + 1):
        for i in range(q):
            for j in range(q):
                if math.gcd(math.gcd(i, j), q) != 1:
                    continue
                p0 = (Fraction(i, q), Fraction(j, q))
                if p0 in seen:
                    continue
                orbit = [p0]
                seen.add(p0)
                cur = system.apply(p0)
                while cur != p0 and len(orbit) <= config.max_period:
                    orbit.append(cur)
                    seen.add(cur)
                    cur = system.apply(cur)
                if cur != p0:
                    continue
                d = weak_star_distance(periodic_measure(orbit), lebesgue, family)
                ranked.append((d, len(orbit), q, (i, j)))
    ranked.sort()
    print(f"scanned {len(seen)} points, {len(ranked)} orbits of period "
          f"<= {config.max_period} in {time.time() - start:.1f}s")
    print(f"{'distance':>10} {'period':>7} {'q':>4}  start")
    for d, period, q, start_pt in ranked[:config.top]:
        print(f"{d:>10.5f} {period:>7} {q:>4}  ({start_pt[0]}/{q}, {start_pt[1]}/{q})")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-period", type=int, default=30)
    parser.add_argument("--max-denominator", type=int, default=40)
    parser.add_argument("--top", type=int, default=10)
    args = parser.parse_args()
    run(ScanConfig(max_period=args.max_period,
                   max_denominator=args.max_denominator, top=args.top))


if __name__ == "__main__":
    main()
