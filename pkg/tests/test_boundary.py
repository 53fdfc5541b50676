"""Boundary cylinder machinery: masses, the cocycle and its identities, the
Poisson semi-norm, the c sequence, Poisson integrals, span ranks.

Oracle discipline: the exponent formula for the cocycle is checked against
the mass-ratio route on deep cylinders; effective-level enumeration is
checked against literal full enumeration at small levels; the hitting
measure is validated by exact stationarity here and by sampling in the
acceptance suite.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupwalk import boundary
from groupwalk.errors import (DomainError, OutOfRangeError,
                              PreconditionError, ResourceLimitError)
from groupwalk.groups import FreeGroup
from groupwalk.measures import finite_measure, srw
from groupwalk.wordmetric import check_value_seminorm


F2 = FreeGroup(2)


def words(text):
    return F2.parse_element(text)


# -- cylinders -----------------------------------------------------------------

@pytest.mark.parametrize("k,level", [(2, 1), (2, 2), (2, 3), (3, 2)])
def test_cylinder_masses_partition_unity(k, level):
    total = sum(boundary.cylinder_mass(k, w)
                for w in boundary.cylinders(k, level))
    assert total == 1
    assert (len(list(boundary.cylinders(k, level)))
            == boundary.cylinder_count(k, level))


def test_cylinder_mass_values():
    assert boundary.cylinder_mass(2, (1,)) == Fraction(1, 4)
    assert boundary.cylinder_mass(2, (1, 2)) == Fraction(1, 12)
    with pytest.raises(DomainError):
        boundary.cylinder_mass(2, ())


def test_rank_one_rejected():
    with pytest.raises(DomainError):
        boundary.cylinder_mass(1, (1,))


# -- cocycle -------------------------------------------------------------------

def test_cocycle_identity_element_is_one():
    for w in boundary.cylinders(2, 2):
        assert boundary.cocycle_value(2, (), w) == 1


def test_cocycle_values_on_level_one():
    a = words("a")
    assert boundary.cocycle_value(2, a, (1,)) == 3
    for first in ((-1,), (2,), (-2,)):
        assert boundary.cocycle_value(2, a, first) == Fraction(1, 3)


def test_cocycle_level_one_integral_is_one():
    a = words("a")
    total = sum(boundary.cylinder_mass(2, w) * boundary.cocycle_value(2, a, w)
                for w in boundary.cylinders(2, 1))
    assert total == 1


def test_cocycle_requires_deep_cylinder():
    with pytest.raises(OutOfRangeError):
        boundary.cocycle_exponent(2, words("ab"), (1,))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 3), st.integers(0, 587))
def test_cocycle_exponent_matches_mass_ratio_oracle(glen, widx):
    # deep cylinders: the derivative equals the mass ratio of the
    # translated cylinder (the limit is already exact at level |g|+1)
    ball = boundary.ball_words(F2, 3)
    gs = [g for g in ball if len(g) == glen]
    g = gs[widx % len(gs)] if gs else ()
    deep = list(boundary.cylinders(2, max(1, glen + 1)))
    w = deep[widx % len(deep)]
    assert (boundary.cocycle_value(2, g, w)
            == boundary.cocycle_mass_ratio(2, g, w))


def test_cocycle_constant_on_deep_cylinders():
    # sigma(g, .) at level >= |g| only sees the level-|g| prefix
    g = words("ab")
    for w in boundary.cylinders(2, 2):
        expo = boundary.cocycle_exponent(2, g, w)
        for ext in boundary._extensions(2, w, 4):
            assert boundary.cocycle_exponent(2, g, ext) == expo


def test_identity_check_squared_generator():
    a = words("a")
    rep = boundary.check_cocycle_identity(2, a, a, 4)
    assert rep.violations == 0
    assert boundary.cocycle_value(2, words("aa"), (1, 1, 2, 1)) == 9


def test_identity_check_effective_level_matches_full_enumeration():
    s, t = words("ab"), words("B")
    group = F2
    st_word = group.mul(s, t)
    s_inv = group.inv(s)
    worst = Fraction(0)
    count = 0
    for w in boundary.cylinders(2, 5):   # literal deep enumeration
        lhs = boundary.cocycle_value(2, st_word, w)
        rhs = (boundary.cocycle_value(2, s, w)
               * boundary.cocycle_value(2, t, group.mul(s_inv, w)[:len(t)]
                                        if len(group.mul(s_inv, w)) >= len(t)
                                        else group.mul(s_inv, w)))
        worst = max(worst, abs(lhs - rhs))
        count += 1
    rep = boundary.check_cocycle_identity(2, s, t, 5)
    assert rep.cylinders_checked == count == 324
    assert rep.max_residual == worst == 0


def test_identity_check_level_guard():
    with pytest.raises(OutOfRangeError):
        boundary.check_cocycle_identity(2, words("ab"), words("ab"), 3)


def test_identity_ball_radius2_level6():
    rep = boundary.check_cocycle_identity_ball(2, 2, 6)
    assert rep.violations == 0
    assert rep.max_residual == 0


# -- normalization -------------------------------------------------------------

@pytest.mark.parametrize("k_power,level", [(1, 4), (2, 6), (3, 8)])
def test_cocycle_normalization_exact(k_power, level):
    rep = boundary.check_cocycle_normalization(2, k_power, level)
    assert rep.violations == 0
    assert rep.max_residual == 0
    assert rep.cylinders_checked == boundary.cylinder_count(2, level)


def test_normalization_level_one_hand_value():
    # for any boundary point starting with 'a': (1/4)(3 + 1/3 + 1/3 + 1/3) = 1
    a_first = (1,)
    total = sum(Fraction(1, 4) * boundary.cocycle_value(2, s, a_first)
                for s in [(1,), (-1,), (2,), (-2,)])
    assert total == 1


# -- Poisson semi-norm ---------------------------------------------------------

def test_seminorm_values():
    assert boundary.poisson_seminorm_exponent(2, ()) == 0
    assert boundary.poisson_seminorm(2, ()) == 0
    assert boundary.poisson_seminorm(2, words("a")) == pytest.approx(math.log(3))
    for g in boundary.ball_words(F2, 5):
        assert boundary.poisson_seminorm_exponent(2, g) == len(g)


def test_seminorm_axioms_via_exponents():
    values = {g: boundary.poisson_seminorm_exponent(2, g)
              for g in boundary.ball_words(F2, 4)}
    report = check_value_seminorm(F2, values)
    assert report.ok


def test_seminorm_is_log_multiple_of_word_norm():
    # the proportionality constant log(2k-1) realizes the comparison
    # rho_mu <= C rho with C = log 3 for k = 2
    for g in boundary.ball_words(F2, 4):
        assert boundary.poisson_seminorm(2, g) == pytest.approx(
            len(g) * math.log(3))


# -- c sequence ----------------------------------------------------------------

def test_c1_is_minus_half():
    # level-1 integral: (1/4) log 3 - (3/4) log 3 per generator
    assert boundary.integral_log_cocycle(2, (1,)) == Fraction(-1, 2)
    coeffs = boundary.c_sequence(2, 5)
    assert coeffs[0] == Fraction(-1, 2)


def test_c_sequence_additive():
    coeffs = boundary.c_sequence(2, 5)
    for n, c in enumerate(coeffs, start=1):
        assert c == n * coeffs[0]


def test_c_sequence_jensen_window():
    # -c_1 equals the drift of the pulled-back semi-norm: drift * log 3,
    # certified upper bounds from the word norm bracket it from above
    from groupwalk.drift import drift_exact_partial
    from groupwalk.wordmetric import norm_evaluator
    coeffs = boundary.c_sequence(2, 3)
    minus_c1 = -float(coeffs[0]) * math.log(3)
    report = drift_exact_partial(srw(F2), norm_evaluator(F2), 10)
    assert minus_c1 <= report.certified_bound * math.log(3)
    assert minus_c1 == pytest.approx(0.5 * math.log(3))


def test_c_sequence_rejects_rank_one():
    with pytest.raises(DomainError):
        boundary.c_sequence(1, 3)


def test_require_srw_guard():
    lopsided = finite_measure(F2, {(1,): Fraction(1, 2),
                                   (-1,): Fraction(1, 6),
                                   (2,): Fraction(1, 6),
                                   (-2,): Fraction(1, 6)})
    with pytest.raises(PreconditionError):
        boundary.require_srw(lopsided, 2)
    boundary.require_srw(srw(F2), 2)


# -- Poisson integrals ---------------------------------------------------------

def test_poisson_integral_of_constant():
    f = boundary.CylinderFunction.constant(2, 2, 1)
    for g in boundary.ball_words(F2, 2):
        assert boundary.poisson_integral(f, g) == 1


def test_poisson_integral_indicator_values():
    f = boundary.CylinderFunction.indicator(2, (1,))
    assert boundary.poisson_integral(f, ()) == Fraction(1, 4)
    assert boundary.poisson_integral(f, words("a")) == Fraction(3, 4)
    assert boundary.poisson_integral(f, words("A")) == Fraction(1, 12)


def test_poisson_integral_pushforward_route():
    # independent route: P_m f(g) = sum_C f(C) m(g^-1 C)
    f = boundary.CylinderFunction.indicator(2, (1, 2))
    for g in boundary.ball_words(F2, 2):
        direct = boundary.poisson_integral(f, g)
        pushed = sum(v * boundary.translated_cylinder_mass(2, g, w)
                     for w, v in f.values.items())
        assert direct == pushed


def test_harmonicity_exact():
    assert boundary.check_harmonicity(
        boundary.CylinderFunction.constant(2, 1, 1), 2) == 0
    assert boundary.check_harmonicity(
        boundary.CylinderFunction.indicator(2, (1,)), 3) == 0
    import random
    rng = random.Random(7)
    values = {w: Fraction(rng.randint(-8, 8), rng.randint(1, 9))
              for w in boundary.cylinders(2, 3)}
    f = boundary.CylinderFunction(2, 3, values)
    assert boundary.check_harmonicity(f, 2) == 0


def test_boundary_stationarity_exact():
    for level in (1, 2, 3):
        assert boundary.check_boundary_stationarity(2, level) == 0
    assert boundary.check_boundary_stationarity(3, 2) == 0


def test_cylinder_function_validation():
    with pytest.raises(DomainError):
        boundary.CylinderFunction(2, 2, {(1,): Fraction(1)})


def test_poisson_integral_resource_guard():
    f = boundary.CylinderFunction.indicator(2, (1,))
    with pytest.raises(ResourceLimitError):
        boundary.poisson_integral(f, tuple([1, 2] * 7))


# -- span ranks ----------------------------------------------------------------

def test_span_rank_values():
    assert boundary.span_rank(2, 1, 1) == 4
    assert boundary.span_rank(2, 2, 2) == 12
    assert boundary.span_rank(2, 2, 0) == 1
    assert boundary.span_is_full(2, 3, 3)


def test_span_rank_monotone_in_radius():
    ranks = [boundary.span_rank(2, 2, r) for r in (0, 1, 2)]
    assert ranks == sorted(ranks)
    assert ranks[-1] == 12


def test_span_rank_precondition():
    with pytest.raises(PreconditionError):
        boundary.span_rank(2, 1, 2)


def test_exact_rank_on_known_matrix():
    rows = [[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)],
            [Fraction(0), Fraction(1)]]
    assert boundary.exact_rank(rows) == 2


# -- sampled validation (small here; the big run is in acceptance) ---------------

def test_hitting_measure_mc_small():
    from groupwalk.sampler import SamplerConfig
    report = boundary.validate_hitting_measure(
        2, 1, SamplerConfig(seed=31, trajectories=4000, steps=60))
    assert report.tv_distance < 0.05
    assert report.undefined <= 4000 * 0.01
