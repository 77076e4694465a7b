#!/usr/bin/env python3
"""Plane Hamiltonian cycle avoiding a star, on a random point set or on a corpus file."""

import argparse
import json
import time

from rotsys import core, geometry, hamconvex
from rotsys.solve import read_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--star", type=int, default=1)
    ap.add_argument("--corpus", help="JSON-lines rotation systems instead of random points")
    args = ap.parse_args()

    if args.corpus:
        systems = read_corpus(args.corpus)
    else:
        systems = [core.rotation_from_points(geometry.random_points(args.n, rng=args.seed))]
    for rs in systems:
        t0 = time.perf_counter()
        dec = hamconvex.find_bad_edges(rs, args.star)
        res = hamconvex.plane_hc_convex(rs, args.star)
        dt = time.perf_counter() - t0
        rep = hamconvex.verify_hc(rs, args.star, res)
        print(json.dumps({"n": rs.n, "star": args.star, "bad_edges": dec.m,
                          "cycle": res.sequence, "ok": rep["ok"], "ms": round(1000 * dt, 2)}))


if __name__ == "__main__":
    main()
