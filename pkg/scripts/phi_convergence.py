#!/usr/bin/env python3
"""Distortion of the Cesaro averages phi_n at the identity, as a function of
n: the sequence d_n(e) equals a_n/n and converges to the drift. CSV output."""

import argparse
import sys

from groupwalk import freewalk, group_from_id, srw
from groupwalk.drift import drift_exact_partial
from groupwalk.wordmetric import norm_evaluator


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="free:2")
    ap.add_argument("--n-max", type=int, default=64)
    args = ap.parse_args()

    group = group_from_id(args.group)
    print("n,distortion_at_e")
    if args.group.startswith("free:"):
        a = freewalk.expected_norms(group.k, args.n_max)
        for n in range(1, args.n_max + 1):
            print(f"{n},{float(a[n]) / n:.8f}")
    else:
        mu = srw(group)
        exact = drift_exact_partial(mu, norm_evaluator(group), args.n_max)
        for n, a_n in zip(exact.ns, exact.a_values):
            print(f"{n},{float(a_n) / n:.8f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
