#!/usr/bin/env python3
"""Run every registered identity at desk-scale defaults and print a table.

Usage: python scripts/run_suite.py [--fast]
"""

import argparse
import contextlib
import io
import sys
import time

from freeboundary import cli


CASES = [
    ("qt-symmetry", ["--n", "2", "--alphabet", "1", "--qt-cap", "4",
                     "--x-cap", "3", "--param-cap", "3"]),
    ("abcd-symmetry", ["--n", "1", "--alphabet", "1", "--qt-cap", "3",
                       "--x-cap", "3", "--param-cap", "3"]),
    ("absorb-params", ["--n", "1", "--alphabet", "1", "--qt-cap", "3",
                       "--x-cap", "3", "--param-cap", "3"]),
    ("invert-pair", ["--n", "1", "--alphabet", "2", "--qt-cap", "3",
                     "--x-cap", "3", "--param-cap", "3"]),
    ("partition-function", ["--alphabet", "1", "--qt-cap", "4", "--x-cap", "3",
                            "--param-cap", "3"]),
    ("contour-cross-check", ["--n", "2", "--alphabet", "1", "--qt-cap", "4",
                             "--x-cap", "3", "--param-cap", "0"]),
    ("yang-baxter", []),
    ("boson-hl", ["--n-max", "5"]),
    ("yb-boson", ["--qt-cap", "2"]),
    ("u-power-shift", ["--qt-cap", "3"]),
    ("boundary-compat", ["--param-cap", "4"]),
    ("littlewood", ["--alphabet", "2", "--qt-cap", "3", "--x-cap", "4",
                    "--param-cap", "3"]),
    ("mehler", ["--qt-cap", "3", "--param-cap", "6", "--z-order", "6"]),
    ("chi-pgf", ["--qt-cap", "3", "--param-cap", "3", "--z-order", "3"]),
    ("hl-6vm-matching", ["--alphabet", "1", "--n-max", "2", "--qt-cap", "3",
                         "--x-cap", "2", "--param-cap", "2"]),
    ("koornwinder-constant", ["--n", "2", "--qt-cap", "3", "--param-cap", "3"]),
    ("koornwinder-bc", ["--n", "1", "--qt-cap", "2", "--x-cap", "4",
                        "--param-cap", "2"]),
    ("stationary-cross-check", ["--count", "1200", "--seed", "7"]),
]

FAST_SKIP = {"hl-6vm-matching", "stationary-cross-check", "contour-cross-check"}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--fast", action="store_true", help="skip the slow checks")
    args = ap.parse_args()
    failures = 0
    for name, extra in CASES:
        if args.fast and name in FAST_SKIP:
            print("%-24s skipped" % name)
            continue
        t0 = time.perf_counter()
        with contextlib.redirect_stdout(io.StringIO()):
            code = cli.main(["run", name, *extra])
        dt = time.perf_counter() - t0
        print("%-24s exit=%d  %.1fs" % (name, code, dt))
        failures += 1 if code not in (0,) else 0
    print("suite:", "all passed" if failures == 0 else "%d failing" % failures)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
