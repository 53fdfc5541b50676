"""Seed discipline, worker invariance, and endpoint laws of the sampler."""

import pytest

from groupwalk.errors import DomainError
from groupwalk.groups import FreeGroup, Heisenberg, group_from_id
from groupwalk.measures import dirac, power, srw, total_variation
from groupwalk.sampler import (SamplerConfig, atom_table,
                               empirical_endpoint_distribution,
                               endpoint_counts, norm_statistics,
                               prefix_counts, sample_trajectory, substream)


def test_zero_steps_gives_empty_trajectory():
    z = group_from_id("zd:1")
    assert sample_trajectory(z, srw(z), 0, substream(0, 0)) == []


def test_deterministic_walk():
    z = group_from_id("zd:1")
    mu = dirac(z, (1,))
    traj = sample_trajectory(z, mu, 3, substream(0, 0))
    assert traj == [(1,), (2,), (3,)]


def test_same_seed_same_trajectory():
    f2 = FreeGroup(2)
    mu = srw(f2)
    t1 = sample_trajectory(f2, mu, 50, substream(42, 7))
    t2 = sample_trajectory(f2, mu, 50, substream(42, 7))
    assert t1 == t2
    t3 = sample_trajectory(f2, mu, 50, substream(42, 8))
    assert t1 != t3


def test_atom_order_is_canonical_string_order():
    f2 = FreeGroup(2)
    elems, cdf = atom_table(srw(f2))
    names = [f2.format_element(g) for g in elems]
    assert names == sorted(names)
    assert cdf[-1] == 1.0


def test_norm_statistics_worker_invariance():
    z2 = group_from_id("zd:2")
    mu = srw(z2)
    runs = []
    for workers in (1, 2, 5):
        cfg = SamplerConfig(seed=99, trajectories=300, steps=64,
                            workers=workers)
        runs.append(norm_statistics(mu, cfg, checkpoints=[16, 64]))
    assert runs[0] == runs[1] == runs[2]
    assert runs[0][16][0] == 300
    assert all(isinstance(v, int) for v in runs[0][64])


def test_norm_statistics_repeatable_across_runs():
    lam = group_from_id("lamplighter")
    cfg = SamplerConfig(seed=3, trajectories=100, steps=50)
    a = norm_statistics(srw(lam), cfg)
    b = norm_statistics(srw(lam), cfg)
    assert a == b


def test_endpoint_counts_worker_invariance():
    f2 = FreeGroup(2)
    cfg1 = SamplerConfig(seed=5, trajectories=200, steps=3, workers=1)
    cfg2 = SamplerConfig(seed=5, trajectories=200, steps=3, workers=3)
    assert endpoint_counts(srw(f2), cfg1) == endpoint_counts(srw(f2), cfg2)


def test_empirical_endpoint_tv_small():
    z = group_from_id("zd:1")
    mu = srw(z)
    emp, tv = empirical_endpoint_distribution(
        mu, SamplerConfig(seed=11, trajectories=100_000, steps=2))
    assert tv is not None and tv < 0.01
    exact = power(mu, 2)
    assert total_variation(emp, exact) == tv


def test_empirical_point_mass_for_deterministic_walk():
    z = group_from_id("zd:1")
    emp, tv = empirical_endpoint_distribution(
        dirac(z, (1,)), SamplerConfig(seed=0, trajectories=500, steps=5))
    assert dict(emp.atoms) == {(5,): 1.0}
    assert tv == 0


def test_free2_one_step_frequencies():
    f2 = FreeGroup(2)
    emp, tv = empirical_endpoint_distribution(
        srw(f2), SamplerConfig(seed=2, trajectories=100_000, steps=1))
    for g in f2.generators():
        assert emp.atoms[g] == pytest.approx(0.25, abs=0.01)


@pytest.mark.parametrize("gid", ["zd:1", "free:2"])
def test_endpoint_law_converges_at_four_steps(gid):
    group = group_from_id(gid)
    mu = srw(group)
    tvs = []
    for trajectories in (2000, 50_000):
        _, tv = empirical_endpoint_distribution(
            mu, SamplerConfig(seed=8, trajectories=trajectories, steps=4))
        tvs.append(tv)
    assert tvs[1] < tvs[0]
    assert tvs[1] < 0.02


def test_prefix_counts_free_only():
    with pytest.raises(DomainError):
        prefix_counts(srw(group_from_id("zd:2")), 2,
                      SamplerConfig(seed=0, trajectories=10, steps=4))
    counts = prefix_counts(srw(FreeGroup(2)), 1,
                           SamplerConfig(seed=0, trajectories=400, steps=30))
    assert sum(counts.values()) == 400
    assert set(counts) <= {"a", "A", "b", "B", "-"}


def test_heisenberg_norm_stats_with_ball():
    h = Heisenberg()
    cfg = SamplerConfig(seed=1, trajectories=50, steps=4)
    stats = norm_statistics(srw(h), cfg, ball_radius=6)
    assert stats[4][0] == 50


def test_config_validation():
    with pytest.raises(DomainError):
        SamplerConfig(seed=0, trajectories=0, steps=1)
    with pytest.raises(DomainError):
        SamplerConfig(seed=0, trajectories=1, steps=-1)
    with pytest.raises(DomainError):
        norm_statistics(srw(FreeGroup(2)),
                        SamplerConfig(seed=0, trajectories=1, steps=4),
                        checkpoints=[9])
