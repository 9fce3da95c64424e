import numpy as np
import pytest

from citerank import CartelSpec, SynthConfig, generate, generate_traced, in_degree


def _in_strength(net):
    received = np.zeros(net.n_nodes)
    for (_i, j), w in net.weights.items():
        received[j] += w
    return received


def test_same_seed_reproduces_identical_network():
    cfg = SynthConfig(n_nodes=60, mean_out_citations=4.0, seed=123)
    a = generate(cfg)
    b = generate(cfg)
    assert a.node_ids == b.node_ids
    assert a.weights == b.weights


def test_different_seeds_differ():
    a = generate(SynthConfig(n_nodes=60, seed=1))
    b = generate(SynthConfig(n_nodes=60, seed=2))
    assert a.weights != b.weights


def test_generated_network_is_valid():
    net = generate(SynthConfig(n_nodes=80, mean_out_citations=6.0, seed=9))
    assert net.n_nodes == 80
    assert all(w >= 1 for w in net.weights.values())
    assert all(i != j for (i, j) in net.weights)  # no self-citations


def test_uniform_attachment_mean_in_strength_tracks_mean_out():
    received = []
    for seed in range(10):
        cfg = SynthConfig(n_nodes=100, mean_out_citations=6.0, attachment_exponent=0.0, seed=seed)
        received.append(_in_strength(generate(cfg)).mean())
    assert abs(np.mean(received) - 6.0) < 0.5


def test_preferential_attachment_concentrates_citations():
    # stronger attachment -> heavier maximum in-degree, on average
    flat, strong = [], []
    for seed in range(8):
        flat.append(
            in_degree(generate(SynthConfig(100, 5.0, attachment_exponent=0.0, seed=seed))).max()
        )
        strong.append(
            in_degree(generate(SynthConfig(100, 5.0, attachment_exponent=2.0, seed=seed))).max()
        )
    assert np.mean(strong) > np.mean(flat)


def test_cartel_members_are_least_cited_and_reported():
    cfg = SynthConfig(n_nodes=50, mean_out_citations=5.0, seed=4,
                      cartel=CartelSpec(member_count=5, internal_weight_boost=10))
    base = generate(SynthConfig(n_nodes=50, mean_out_citations=5.0, seed=4))
    traced = generate_traced(cfg)
    assert len(traced.cartel_members) == 5
    received = _in_strength(base)
    cutoff = np.sort(received)[4]
    member_idx = [base.index_of(m) for m in traced.cartel_members]
    assert all(received[i] <= cutoff for i in member_idx)


def test_cartel_raises_internal_weight_share():
    plain_cfg = SynthConfig(n_nodes=100, mean_out_citations=5.0, seed=11)
    cartel_cfg = SynthConfig(n_nodes=100, mean_out_citations=5.0, seed=11,
                             cartel=CartelSpec(member_count=5, internal_weight_boost=20))
    plain = generate(plain_cfg)
    traced = generate_traced(cartel_cfg)
    members = {traced.network.index_of(m) for m in traced.cartel_members}

    def internal_share(net):
        internal = sum(w for (i, j), w in net.weights.items() if i in members and j in members)
        return internal / net.total_weight

    assert internal_share(traced.network) > internal_share(plain)


def test_cartel_leaves_base_network_untouched():
    plain = generate(SynthConfig(n_nodes=40, mean_out_citations=4.0, seed=21))
    traced = generate_traced(
        SynthConfig(n_nodes=40, mean_out_citations=4.0, seed=21,
                    cartel=CartelSpec(member_count=4, internal_weight_boost=7))
    )
    members = {traced.network.index_of(m) for m in traced.cartel_members}
    for (i, j), w in plain.weights.items():
        expected = w + (7 if i in members and j in members else 0)
        assert traced.network.weights[(i, j)] == expected


def test_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(n_nodes=0)
    with pytest.raises(ValueError):
        SynthConfig(n_nodes=10, mean_out_citations=0.0)
    with pytest.raises(ValueError):
        SynthConfig(n_nodes=10, attachment_exponent=-1.0)
    with pytest.raises(ValueError):
        SynthConfig(n_nodes=5, cartel=CartelSpec(5, 2))
    with pytest.raises(ValueError):
        CartelSpec(1, 2)
    with pytest.raises(ValueError):
        CartelSpec(3, 0)
