import math

import numpy as np
import pytest

from cdeval.bias import FilterConfig, recurrence_filter
from cdeval.graph import aggregate_temporal
from cdeval.synth import PlantedConfig, inject_sporadic_noise, planted_partition


def intra_count(g, gt):
    lab = gt.aligned(g.nodes).labels
    return int(np.sum(lab[g.edge_u] == lab[g.edge_v]))


def test_cliques_when_p_in_one():
    g, gt = planted_partition(PlantedConfig(sizes=(3, 4, 5), p_in=1.0, p_out=0.0, seed=2))
    assert g.edge_count == 3 + 6 + 10
    assert intra_count(g, gt) == g.edge_count
    assert sorted(gt.sizes().tolist()) == [3, 4, 5]


def test_no_cross_edges_when_p_out_zero():
    for seed in range(5):
        g, gt = planted_partition(PlantedConfig(p_out=0.0, seed=seed))
        assert intra_count(g, gt) == g.edge_count


def test_weights_are_w_in():
    g, _ = planted_partition(PlantedConfig(sizes=(10, 10), p_in=0.5, p_out=0.1, w_in=3, seed=1))
    assert set(g.edge_w.tolist()) == {3.0}


def test_expected_intra_edges_binomial():
    trials = 4 * math.comb(32, 2)
    mean, sd = trials * 0.3, math.sqrt(trials * 0.3 * 0.7)
    assert mean == pytest.approx(595.2)
    counts = [intra_count(*planted_partition(PlantedConfig(seed=s))) for s in range(200)]
    assert abs(np.mean(counts) - mean) <= 3 * sd / math.sqrt(200)


def test_seed_reproducible():
    a, _ = planted_partition(PlantedConfig(seed=9))
    b, _ = planted_partition(PlantedConfig(seed=9))
    c, _ = planted_partition(PlantedConfig(seed=10))
    assert np.array_equal(a.edge_u, b.edge_u) and np.array_equal(a.edge_v, b.edge_v)
    assert np.array_equal(a.edge_w, b.edge_w)
    assert a.edge_set() != c.edge_set()


@pytest.mark.parametrize("kwargs", [dict(sizes=(0, 3)), dict(sizes=(1,)), dict(p_in=1.5), dict(p_out=-0.1),
                                    dict(w_in=0), dict(w_in=1.5)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        PlantedConfig(**kwargs)


def test_non_assortative_warns(caplog):
    PlantedConfig(p_in=0.1, p_out=0.2)
    assert "no assortative structure" in caplog.text


def test_zero_rate_is_identity():
    g, gt = planted_partition(PlantedConfig(seed=4))
    noisy, stream = inject_sporadic_noise(g, gt, 0.0)
    assert noisy.edge_set() == g.edge_set()
    assert aggregate_temporal(stream).edge_set() == g.edge_set()


def test_noise_count_contract():
    g, gt = planted_partition(PlantedConfig(seed=0))
    noisy, stream = inject_sporadic_noise(g, gt, 2.0, seed=0)
    assert noisy.edge_count == g.edge_count + math.ceil(2.0 * g.edge_count)
    added = noisy.edge_set() - g.edge_set()
    lab = dict(zip(gt.nodes, gt.labels.tolist()))
    assert all(lab[a] != lab[b] for a, b in (tuple(e) for e in added))
    assert set(noisy.edge_w.tolist()) == {1.0, 2.0}
    assert len(stream.events) == int(noisy.total_weight)
    assert aggregate_temporal(stream).edge_set() == noisy.edge_set()


def test_filter_inverts_injection_over_50_seeds():
    for seed in range(50):
        g, gt = planted_partition(PlantedConfig(seed=seed))
        _, stream = inject_sporadic_noise(g, gt, 2.0, seed=seed)
        assert recurrence_filter(stream, FilterConfig(2)).edge_set() == g.edge_set()


def test_noise_errors():
    g, gt = planted_partition(PlantedConfig(sizes=(4, 4), p_in=1.0, p_out=0.0))
    with pytest.raises(ValueError, match="free"):
        inject_sporadic_noise(g, gt, 10.0)
    whole, one = planted_partition(PlantedConfig(sizes=(6,), p_in=1.0))
    with pytest.raises(ValueError, match="2 ground-truth"):
        inject_sporadic_noise(whole, one, 0.5)
    with pytest.raises(ValueError):
        inject_sporadic_noise(g, gt, -1.0)
