#!/usr/bin/env python3
"""Enumerate canonical drawable / convex / h-convex systems for small n and print counts."""

import argparse
import time

from rotsys.encode import EncodeOptions, new_instance
from rotsys.solve import enumerate_all, enumerate_by_extension


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=7)
    args = ap.parse_args()
    for label, opts in (("drawable", EncodeOptions()), ("convex", EncodeOptions(convex=True)),
                        ("h-convex", EncodeOptions(hconvex=True))):
        prev = None
        for n in range(4, args.max_n + 1):
            t0 = time.perf_counter()
            if n <= 6:
                prev = enumerate_all(new_instance(n, opts), canonical_only=True).systems
            else:
                prev = enumerate_by_extension(n, opts, parents=prev)
            print(f"{label:9s} n={n}: {len(prev):6d} classes  ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
