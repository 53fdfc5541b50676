"""Quasi-harmonic tables: the one-step norm averages f_k, their Cesaro
averages phi_n, and the identities tying them to the drift.

    f_k(s)   = sum_t (rho(st) - rho(t)) mu^{*k}(t)
    phi_n(s) = (1/n) sum_{k<n} f_k(s)

Key exact identities, all checked here (and exactly zero in untruncated
rational mode):

* recursion: sum_s f_k(gs) mu(s) = f_{k+1}(g) + sum_s f_k(s) mu(s);
* telescoping: sum_s phi_n(s) mu(s) = a_n / n, the partial drift average;
* bounds: |f_k(s)| <= rho(s) (triangle inequality), and
  |phi_n(gs) - phi_n(s)| <= rho(g) for all g, s.

The distortion d_n(g) = sum_s phi_n(gs) mu(s) - phi_n(g) approaches the
drift; no subsequence is chosen here: the full sequence phi_n is computed
on a finite ball and convergence is reported as a diagnostic trend (the
tolerances for those trends are empirical and flagged as such in reports).

Per-entry truncation error: dropping mass d from mu^{*k} perturbs f_k(s) by
at most d * rho(s) (each dropped term is bounded by rho(s)); this is tighter
than the coarse d * (R_eval + k * max-generator-norm) bound and is the one
stored in the tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence

from .errors import DomainError, OutOfRangeError
from .groups import FreeGroup, Group
from . import freewalk
from .measures import FiniteMeasure, dirac, power_sequence
from .wordmetric import build_ball

TOLERANCE_NOTE = ("distortion/defect trend tolerances are empirical; the "
                  "underlying convergence has no stated rate")


@dataclass(frozen=True)
class FkTable:
    k: int
    values: Dict[object, object]
    error_bars: Dict[object, object]
    r_eval: int
    mode: str


@dataclass(frozen=True)
class PhiTable:
    n: int
    values: Dict[object, object]
    error_bars: Dict[object, object]
    r_eval: int
    mode: str


def _eval_points(group: Group, r_eval: int) -> List:
    return list(build_ball(group, r_eval).norms.keys())


def compute_fk_tables(mu: FiniteMeasure, norm_fn: Callable, k_max: int,
                      r_eval: int, threshold=0) -> List[FkTable]:
    """f_k on the ball of radius r_eval for k = 0..k_max (shared power chain).

    norm_fn must cover the ball shifted by supp mu^{*k}; with the closed-form
    evaluators this is total, with a ball table it raises OutOfRangeError.
    """
    group = mu.group
    points = _eval_points(group, r_eval)
    point_norms = {s: norm_fn(s) for s in points}
    tables = []
    zero = Fraction(0) if mu.mode == "exact" else 0.0

    def table_for(mun: FiniteMeasure, k: int) -> FkTable:
        values, errors = {}, {}
        atom_norms = [(t, w, norm_fn(t)) for t, w in mun.atoms.items()]
        for s in points:
            acc = zero
            for t, w, nt in atom_norms:
                acc += (norm_fn(group.mul(s, t)) - nt) * w
            values[s] = acc
            errors[s] = mun.deficit * point_norms[s]
        return FkTable(k=k, values=values, error_bars=errors,
                       r_eval=r_eval, mode=mu.mode)

    tables.append(table_for(dirac(group, mode=mu.mode), 0))
    for k, mun in power_sequence(mu, k_max, threshold=threshold):
        tables.append(table_for(mun, k))
    return tables


def compute_fk(mu: FiniteMeasure, norm_fn: Callable, k: int, r_eval: int,
               threshold=0) -> FkTable:
    return compute_fk_tables(mu, norm_fn, k, r_eval, threshold)[k]


def phi_from_fk(tables: Sequence[FkTable], n: int) -> PhiTable:
    """Pointwise Cesaro average of f_0..f_{n-1}; phi_n(e) = 0 exactly."""
    if n < 1 or n > len(tables):
        raise DomainError("Cesaro length exceeds computed f_k range")
    head = tables[:n]
    values, errors = {}, {}
    for s in head[0].values:
        values[s] = sum(t.values[s] for t in head) / n
        errors[s] = sum(t.error_bars[s] for t in head) / n
    return PhiTable(n=n, values=values, error_bars=errors,
                    r_eval=head[0].r_eval, mode=head[0].mode)


def compute_phi(mu: FiniteMeasure, norm_fn: Callable, n: int, r_eval: int,
                threshold=0) -> PhiTable:
    return phi_from_fk(compute_fk_tables(mu, norm_fn, n - 1, r_eval,
                                         threshold), n)


def phi_table_free_srw(k_rank: int, n: int, r_eval: int) -> PhiTable:
    """Exact phi_n for SRW on F_k via the radial route (any n).

    Generic convolution is infeasible beyond small n on free groups; the
    radial birth-death computation gives the same exact rationals (the two
    routes are cross-checked in tests for small n).
    """
    group = FreeGroup(k_rank)
    radial = freewalk.radial_phi(k_rank, n, r_eval)
    values = {s: radial[len(s)] for s in _eval_points(group, r_eval)}
    zero = radial[0] * 0
    return PhiTable(n=n, values=values,
                    error_bars={s: zero for s in values},
                    r_eval=r_eval, mode="exact")


@dataclass(frozen=True)
class DiagRecursionReport:
    k: int
    max_residual: object
    error_allowance: object
    points_checked: int


def check_diag_recursion(mu: FiniteMeasure, fk: FkTable, fk1: FkTable,
                         test_set: Iterable) -> DiagRecursionReport:
    """Residual of the one-step recursion on each test point.

    Exactly zero in untruncated rational mode; otherwise bounded by the
    tables' combined error bars.
    """
    if fk1.k != fk.k + 1:
        raise DomainError("need consecutive f_k tables")
    group = mu.group
    mean_fk = sum(fk.values[s] * w for s, w in mu.atoms.items())
    worst = 0
    allowance = 0
    count = 0
    for g in test_set:
        try:
            lhs = sum(fk.values[group.mul(g, s)] * w
                      for s, w in mu.atoms.items())
            rhs = fk1.values[g] + mean_fk
            allow = (fk1.error_bars[g]
                     + sum(fk.error_bars[group.mul(g, s)] * w
                           for s, w in mu.atoms.items())
                     + sum(fk.error_bars[s] * w for s, w in mu.atoms.items()))
        except KeyError as exc:
            raise OutOfRangeError(
                f"f_k tables do not cover {exc} (grow r_eval)")
        res = abs(lhs - rhs)
        if res > worst:
            worst = res
        if allow > allowance:
            allowance = allow
        count += 1
    return DiagRecursionReport(k=fk.k, max_residual=worst,
                               error_allowance=allowance,
                               points_checked=count)


@dataclass(frozen=True)
class QuasiHarmonicReport:
    n: int
    distortions: Dict[object, object]   # d_n(g) per test point
    sup_distortion: object
    mean_identity_residual: object      # |sum_s phi_n(s) mu(s) - a_n / n|
    tolerance_note: str


def check_quasi_harmonicity(mu: FiniteMeasure, phi: PhiTable, a_n,
                            test_set: Iterable) -> QuasiHarmonicReport:
    """Distortion table d_n(g) and the exact telescoping identity.

    a_n is the exact partial drift sum at the same n and truncation as phi
    (from drift_exact_partial); in untruncated rational mode the identity
    residual is exactly 0.
    """
    group = mu.group
    dist = {}
    for g in test_set:
        try:
            d = sum(phi.values[group.mul(g, s)] * w
                    for s, w in mu.atoms.items()) - phi.values[g]
        except KeyError as exc:
            raise OutOfRangeError(f"phi table does not cover {exc}")
        dist[g] = d
    mean_phi = sum(phi.values[s] * w for s, w in mu.atoms.items())
    residual = abs(mean_phi - a_n / phi.n)
    sup = max((abs(d) for d in dist.values()), default=0)
    return QuasiHarmonicReport(n=phi.n, distortions=dist, sup_distortion=sup,
                               mean_identity_residual=residual,
                               tolerance_note=TOLERANCE_NOTE)


def check_lipschitz(phi: PhiTable, group: Group, norm_fn: Callable,
                    pairs: Iterable) -> object:
    """max over (g, s) of |phi(gs) - phi(s)| - rho(g); <= 0 means the left
    Lipschitz bound holds (up to the tables' error bars)."""
    worst = None
    for g, s in pairs:
        gs = group.mul(g, s)
        if gs not in phi.values or s not in phi.values:
            raise OutOfRangeError(f"phi table does not cover pair {(g, s)}")
        excess = (abs(phi.values[gs] - phi.values[s]) - norm_fn(g)
                  - phi.error_bars[gs] - phi.error_bars[s])
        if worst is None or excess > worst:
            worst = excess
    return worst


def homomorphism_defect(phi: PhiTable, group: Group,
                        pairs: Iterable) -> object:
    """max over (g, h) of |phi(gh) - phi(g) - phi(h)|.

    Tends to 0 along n for symmetric walks on abelian groups; no smallness
    holds in general (and none is asserted here).
    """
    worst = 0
    for g, h in pairs:
        gh = group.mul(g, h)
        try:
            defect = abs(phi.values[gh] - phi.values[g] - phi.values[h])
        except KeyError as exc:
            raise OutOfRangeError(f"phi table does not cover {exc}")
        if defect > worst:
            worst = defect
    return worst
