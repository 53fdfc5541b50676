#!/usr/bin/env python3
"""Validate the free-group hitting-measure formula by sampling: long SRW
trajectories' endpoint prefixes vs exact cylinder masses."""

import argparse
import json
import sys

from groupwalk.boundary import validate_hitting_measure
from groupwalk.sampler import SamplerConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--level", type=int, default=2)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--trajectories", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    report = validate_hitting_measure(args.k, args.level, SamplerConfig(
        seed=args.seed, trajectories=args.trajectories, steps=args.steps,
        workers=args.workers))
    print(json.dumps({
        "k": args.k, "level": report.level, "steps": report.steps,
        "trajectories": report.trajectories, "seed": report.seed,
        "tv_distance": report.tv_distance, "undefined": report.undefined,
        "frequencies": report.frequencies,
    }, sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
