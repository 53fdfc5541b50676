"""Exact radial computations for the simple random walk on a free group.

The word norm of SRW on F_k is a birth-death chain on the non-negative
integers: from m >= 1 it steps +1 with probability (2k-1)/(2k) and -1 with
probability 1/(2k); from 0 it steps to 1. Because the n-step law is invariant
under every automorphism of the Cayley tree fixing the identity, mu^{*n} is
uniform on each sphere, and several quantities that are hopeless to reach by
generic convolution (the support grows like 3^n) have exact rational radial
formulas:

* expected norms a_n = E|X_n|,
* the one-step averages f_j(s) = sum_t (|st| - |t|) mu^{*j}(t), which are
  radial with
      f_j(r) = r - 2 * sum_{i=1}^{r} P(|X_j| >= i) * (2k-1)^{1-i} / (2k),
  since P(X_j extends a fixed reduced prefix of length i) =
  P(|X_j| >= i) * (2k-1)^{1-i} / (2k)  (uniformity on spheres),
* Shannon entropies H(mu^{*n}).

These routines are an alternative route to the same numbers the convolution
pipeline produces; the two are cross-checked against each other (and against
brute-force path enumeration) in the test suite.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List


def norm_distributions(k: int, n_max: int) -> List[List[Fraction]]:
    """dist[n][m] = P(|X_n| = m) for SRW on F_k, exact, n = 0..n_max."""
    if k < 1:
        raise ValueError("free rank must be >= 1")
    up = Fraction(2 * k - 1, 2 * k)
    down = Fraction(1, 2 * k)
    dist = [[Fraction(1)]]
    for n in range(n_max):
        cur = dist[-1]
        nxt = [Fraction(0)] * (len(cur) + 1)
        for m, w in enumerate(cur):
            if w == 0:
                continue
            if m == 0:
                nxt[1] += w
            else:
                nxt[m + 1] += w * up
                nxt[m - 1] += w * down
        dist.append(nxt)
    return dist


def expected_norms(k: int, n_max: int) -> List[Fraction]:
    """a_n = E|X_n| for n = 0..n_max (exact)."""
    dist = norm_distributions(k, n_max)
    return [sum(Fraction(m) * w for m, w in enumerate(row)) for row in dist]


def _tails(row: List[Fraction]) -> List[Fraction]:
    """tails[i] = P(|X| >= i)."""
    tails = [Fraction(0)] * (len(row) + 1)
    acc = Fraction(0)
    for m in range(len(row) - 1, -1, -1):
        acc += row[m]
        tails[m] = acc
    return tails


def radial_fk(k: int, steps: int, r_max: int) -> List[List[Fraction]]:
    """table[j][r] = f_j on the sphere of radius r, for j = 0..steps-1.

    f_j(e) = 0 is included at r = 0.
    """
    dist = norm_distributions(k, max(steps - 1, 0))
    q = 2 * k - 1
    table = []
    for j in range(steps):
        tails = _tails(dist[j])
        row = [Fraction(0)]
        acc = Fraction(0)
        for r in range(1, r_max + 1):
            tail = tails[r] if r < len(tails) else Fraction(0)
            acc += tail * Fraction(1, 2 * k) * Fraction(1, q) ** (r - 1)
            row.append(Fraction(r) - 2 * acc)
        table.append(row)
    return table


def radial_phi(k: int, n: int, r_max: int) -> List[Fraction]:
    """phi_n on spheres 0..r_max: the Cesaro average of f_0..f_{n-1}."""
    if n < 1:
        raise ValueError("Cesaro length must be >= 1")
    fk = radial_fk(k, n, r_max)
    return [sum(fk[j][r] for j in range(n)) / n for r in range(r_max + 1)]


def shannon_entropy(k: int, n: int) -> float:
    """H(mu^{*n}) in nats, via the exact radial law (uniform on spheres)."""
    row = norm_distributions(k, n)[n]
    h = 0.0
    for m, w in enumerate(row):
        if w == 0:
            continue
        if m == 0:
            h -= float(w) * math.log(float(w))
        else:
            sphere = 2 * k * (2 * k - 1) ** (m - 1)
            h -= float(w) * (math.log(float(w)) - math.log(sphere))
    return h
