"""Radial route for free-group SRW vs two independent oracles: full path
enumeration (small n) and the generic convolution pipeline."""

from fractions import Fraction
from itertools import product as iproduct

import pytest

from groupwalk import freewalk
from groupwalk.groups import FreeGroup
from groupwalk.measures import power_sequence, srw
from groupwalk.quasiharmonic import compute_fk_tables, phi_table_free_srw
from groupwalk.wordmetric import free_norm, norm_evaluator


def brute_norm_distribution(k, n):
    """Oracle: all (2k)^n generator paths, tallied by endpoint norm."""
    group = FreeGroup(k)
    gens = group.generators()
    out = {}
    w = Fraction(1, len(gens)) ** n
    for combo in iproduct(gens, repeat=n):
        g = group.identity()
        for s in combo:
            g = group.mul(g, s)
        out[len(g)] = out.get(len(g), Fraction(0)) + w
    return out


@pytest.mark.parametrize("k,n", [(2, 0), (2, 1), (2, 4), (2, 6), (3, 4)])
def test_norm_distribution_matches_path_enumeration(k, n):
    radial = freewalk.norm_distributions(k, n)[n]
    brute = brute_norm_distribution(k, n)
    assert {m: w for m, w in enumerate(radial) if w} == brute


def test_expected_norms_first_values():
    a = freewalk.expected_norms(2, 8)
    assert a[0] == 0
    assert a[1] == 1
    assert a[2] == Fraction(3, 2)
    assert a[8] == Fraction(4821, 1024)


def test_expected_norms_match_convolution():
    a = freewalk.expected_norms(2, 6)
    for n, mun in power_sequence(srw(FreeGroup(2)), 6):
        assert sum(free_norm(s) * w for s, w in mun.atoms.items()) == a[n]


@pytest.mark.parametrize("k", [2, 3])
def test_radial_fk_matches_convolution_route(k):
    group = FreeGroup(k)
    tables = compute_fk_tables(srw(group), norm_evaluator(group), 4, 3)
    radial = freewalk.radial_fk(k, 5, 3)
    for j in range(5):
        for s, value in tables[j].values.items():
            assert radial[j][len(s)] == value


def test_radial_phi_matches_convolution_route():
    group = FreeGroup(2)
    phi_radial = phi_table_free_srw(2, 5, 3)
    from groupwalk.quasiharmonic import compute_phi
    phi_conv = compute_phi(srw(group), norm_evaluator(group), 5, 3)
    assert phi_radial.values == phi_conv.values


def test_radial_f1_value():
    # four-term sum over the generators gives f_1 = 1/2 on the unit sphere
    assert freewalk.radial_fk(2, 2, 1)[1][1] == Fraction(1, 2)


def test_f0_is_the_norm():
    radial = freewalk.radial_fk(2, 1, 5)[0]
    assert radial == [Fraction(r) for r in range(6)]


def test_entropy_values():
    import math
    assert freewalk.shannon_entropy(2, 1) == pytest.approx(math.log(4))
    # exact convolution cross-check at n = 4
    from groupwalk.measures import power, shannon_entropy as measure_entropy
    h4 = measure_entropy(power(srw(FreeGroup(2)), 4))
    assert freewalk.shannon_entropy(2, 4) == pytest.approx(h4, rel=1e-12)


def test_entropy_rate_decreasing_toward_boundary_value():
    import math
    limit = 0.5 * math.log(3)
    rates = [freewalk.shannon_entropy(2, n) / n for n in (1, 2, 4, 8, 16)]
    assert all(a > b for a, b in zip(rates, rates[1:]))
    assert all(r > limit for r in rates)
