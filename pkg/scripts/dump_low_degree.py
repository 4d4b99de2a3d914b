#!/usr/bin/env python3
"""Print the n=1 bounded sum in closed view and the first shift-law
coefficients, as human-readable sanity output.

Usage: python scripts/dump_low_degree.py
"""

from freeboundary.process import build_ring, chi_pgf_forms, ring_letters, z_n
from freeboundary.series import TruncationPolicy


def main() -> int:
    caps = TruncationPolicy(qt=2, x=2, params=4)
    ring = build_ring(caps, 1)
    f = z_n(ring, 1, ring_letters(ring, 1))
    print("bounded sum at n=1, one letter (truncated):")
    print(" ", f)
    coeffs, _psum, _derived, _printed = chi_pgf_forms(
        TruncationPolicy(qt=3, x=0, params=2, z=2), 2)
    for k, c in enumerate(coeffs):
        print("shift weight z^%d:" % k)
        print(" ", c)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
