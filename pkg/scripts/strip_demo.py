#!/usr/bin/env python3
"""Sample the quasi-open strip in the stochastic regime and compare the
empirical law of (exit pattern, deviation count) to the exact transfer
distribution.

Usage: python scripts/strip_demo.py [count] [seed]
"""

import sys
from fractions import Fraction as F

from freeboundary.lattice import (NumericStrip, SamplerConfig, empirical_tv,
                                  exact_numeric_distribution, mc_sample)


def main() -> int:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 20000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    ctx = NumericStrip(3, F(1, 2), F(1, 3), F(1, 2), F(-1, 4), F(1, 3), F(-1, 5),
                       (F(1, 2), F(1, 3), F(1, 4)))
    exact = exact_numeric_distribution(ctx, 3)
    samples = mc_sample(ctx, count, SamplerConfig(seed=seed))
    counts = {}
    for s, h, v in samples:
        key = (s, min(h + v, 4))
        counts[key] = counts.get(key, 0) + 1
    print("outcome        exact        empirical")
    for key in sorted(exact, key=str):
        s, dev = key
        print("%s D=%s   %10.6f   %10.6f"
              % ("".join(map(str, s)), dev, float(exact[key]),
                 counts.get(key, 0) / count))
    print("total variation: %.4f" % empirical_tv(samples, exact, 3))
    return 0


if __name__ == "__main__":
    sys.exit(main())
