import math

import numpy as np
import pytest

from hermclust.core.errors import BadParams, MetaMismatch
from hermclust.schemas.params import DsbmParams, MetaGraph, meta_preset
from hermclust.services.dsbm import TWO_COMMUNITY_META, sample_dsbm2, sample_dsbm_meta, shuffle_vertices
from hermclust.services.graph import directed_count, total_flow
from hermclust.services.lesc import estimate_params


def _params(sizes, p, q, eta):
    return DsbmParams(sizes=sizes, p=p, q=q, eta=eta)


class TestSampleDsbm2:
    def test_single_pair(self):
        for seed in (0, 1, 99):
            g, labels = sample_dsbm2(_params([1, 1], 1.0, 1.0, 0.0), seed)
            s, d, _ = g.edges()
            assert (s.tolist(), d.tolist()) == ([0], [1])
            assert labels.to_list() == [0, 1]

    def test_no_edges(self):
        g, _ = sample_dsbm2(_params([20, 30], 0.0, 0.0, 0.2), 5)
        assert g.num_edges == 0

    def test_complete_graph(self):
        g, labels = sample_dsbm2(_params([4, 4], 1.0, 1.0, 0.0), 7)
        assert g.num_edges == 28
        assert not g.has_reciprocal()
        assert directed_count(g, labels.mask(1), labels.mask(0)) == 0.0

    def test_planted_labels(self):
        _, labels = sample_dsbm2(_params([3, 2], 0.5, 0.5, 0.1), 0)
        assert labels.to_list() == [0, 0, 0, 1, 1]

    def test_same_seed_same_edges(self):
        params = _params([60, 40], 0.1, 0.05, 0.2)
        a, _ = sample_dsbm2(params, 11)
        b, _ = sample_dsbm2(params, 11)
        c, _ = sample_dsbm2(params, 12)
        for x, y in zip(a.edges(), b.edges()):
            np.testing.assert_array_equal(x, y)
        assert a.num_edges != c.num_edges or not np.array_equal(a.edges()[0], c.edges()[0])

    def test_never_reciprocal(self):
        for seed in range(5):
            g, _ = sample_dsbm2(_params([30, 30], 0.5, 0.5, 0.3), seed)
            assert not g.has_reciprocal()

    def test_needs_two_sizes(self):
        with pytest.raises(BadParams):
            sample_dsbm2(_params([5, 5, 5], 0.1, 0.1, 0.1), 0)

    @pytest.mark.parametrize("kwargs", [dict(p=1.5), dict(q=-0.1), dict(eta=0.7), dict(sizes=[])])
    def test_bad_params(self, kwargs):
        base = dict(sizes=[5, 5], p=0.1, q=0.1, eta=0.1)
        base.update(kwargs)
        with pytest.raises(BadParams):
            DsbmParams.checked(**base)

    def test_mean_edge_count(self):
        params = _params([200, 200], 0.05, 0.05, 0.1)
        counts = [sample_dsbm2(params, seed)[0].num_edges for seed in range(20)]
        pairs = 400 * 399 / 2
        mean, sd = 0.05 * pairs, math.sqrt(pairs * 0.05 * 0.95)
        assert abs(np.mean(counts) - mean) <= 3 * sd / math.sqrt(len(counts))

    def test_empirical_parameters(self):
        g, labels = sample_dsbm2(_params([300, 300], 0.1, 0.05, 0.2), 4)
        est = estimate_params(g, labels)
        assert est.p == pytest.approx(0.1, rel=0.1)
        assert est.q == pytest.approx(0.05, rel=0.1)
        assert est.eta == pytest.approx(0.2, rel=0.1)


class TestSampleMeta:
    def test_two_community_meta_matches_dsbm2(self):
        params = _params([25, 35], 0.2, 0.1, 0.15)
        a, _ = sample_dsbm2(params, 3)
        b, _ = sample_dsbm_meta(params, TWO_COMMUNITY_META, 3)
        for x, y in zip(a.edges(), b.edges()):
            np.testing.assert_array_equal(x, y)

    def test_path_preset_size(self):
        params = _params([100, 100, 100], 0.01, 0.01, 0.1)
        g, labels = sample_dsbm_meta(params, meta_preset("path3"), 0)
        assert g.n == 300
        assert labels.sizes().tolist() == [100, 100, 100]

    def test_mismatch(self):
        with pytest.raises(MetaMismatch):
            sample_dsbm_meta(_params([5, 5, 5], 0.1, 0.1, 0.1), TWO_COMMUNITY_META, 0)

    def test_oriented_pair_direction(self):
        meta = MetaGraph(k=3, oriented_pairs=[(2, 0)])
        g, labels = sample_dsbm_meta(_params([10, 10, 10], 0.0, 1.0, 0.0), meta, 1)
        c0, c1, c2 = labels.mask(0), labels.mask(1), labels.mask(2)
        assert directed_count(g, c2, c0) == 100
        assert directed_count(g, c0, c2) == 0
        assert directed_count(g, c0, c1) + directed_count(g, c1, c0) == 100

    def test_unoriented_pairs_are_balanced(self):
        meta = MetaGraph(k=2, oriented_pairs=[])
        for seed in range(10):
            g, labels = sample_dsbm_meta(_params([100, 100], 0.1, 0.1, 0.1), meta, seed)
            tf = total_flow(g, labels)
            forward = directed_count(g, labels.mask(0), labels.mask(1))
            assert abs(forward - tf / 2) <= 4 * math.sqrt(tf) / 2


class TestShuffle:
    def test_labels_follow_vertices(self):
        g, labels = sample_dsbm2(_params([30, 20], 0.2, 0.1, 0.1), 2)
        sg, sl = shuffle_vertices(g, labels, 2)
        assert sg.num_edges == g.num_edges
        assert sorted(sl.to_list()) == sorted(labels.to_list())
        assert total_flow(sg, sl) == total_flow(g, labels)
        assert directed_count(sg, sl.mask(0), sl.mask(1)) == directed_count(g, labels.mask(0), labels.mask(1))

    def test_deterministic(self):
        g, labels = sample_dsbm2(_params([30, 20], 0.2, 0.1, 0.1), 2)
        a = shuffle_vertices(g, labels, 9)
        b = shuffle_vertices(g, labels, 9)
        assert a[1].to_list() == b[1].to_list()
        np.testing.assert_array_equal(a[0].edges()[0], b[0].edges()[0])
