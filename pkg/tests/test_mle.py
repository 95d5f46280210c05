import math

import numpy as np
import pytest

from hermclust.core.errors import ReciprocalEdge, SizeMismatch, TooLarge, WeightedGraph
from hermclust.schemas.params import DsbmParams
from hermclust.services.dsbm import sample_dsbm2
from hermclust.services.graph import Labeling, build_graph
from hermclust.services.mle import (
    MleWeights,
    apply_operator,
    build_operator,
    clamp_params,
    count_log_likelihood,
    exhaustive_mle,
    likelihood_offset,
    log_likelihood,
    mle_weights,
    quadratic_form,
    quadratic_form_closed,
)


def dense_h(g, w):
    a = g.adj.toarray()
    n = g.n
    return w.w_r * (a + a.T) + 1j * w.w_i * (a - a.T) + w.w_c * (np.ones((n, n)) - np.eye(n))


def random_dsbm(rng, sizes):
    params = DsbmParams(
        sizes=sizes,
        p=float(rng.uniform(0.05, 0.95)),
        q=float(rng.uniform(0.05, 0.95)),
        eta=float(rng.uniform(0.01, 0.49)),
    )
    g, _ = sample_dsbm2(params, int(rng.integers(1 << 31)))
    return g, params


class TestMleWeights:
    def test_equal_densities_have_no_ones_term(self):
        assert mle_weights(0.3, 0.3, 0.2).w_c == 0.0

    def test_no_direction_noise_weight_at_half(self):
        assert mle_weights(0.3, 0.1, 0.5).w_i == 0.0

    def test_reference_values(self):
        w = mle_weights(0.01, 0.005, 0.1)
        assert w.w_i == pytest.approx(math.log(9.0), rel=1e-12)
        assert w.w_i == pytest.approx(2.1972, abs=1e-4)
        assert w.w_r == pytest.approx(2.41802, abs=1e-4)
        assert w.w_c == pytest.approx(-0.010076, abs=1e-6)

    def test_matches_direct_formula(self):
        p, q, eta = 0.2, 0.07, 0.3
        w = mle_weights(p, q, eta)
        expected = math.log(p**2 * (1 - q) ** 2 / (4 * eta * (1 - eta) * q**2 * (1 - p) ** 2))
        assert w.w_r == pytest.approx(expected, rel=1e-12)
        assert w.w_c == pytest.approx(2 * math.log((1 - p) / (1 - q)), rel=1e-12)

    def test_clamping_keeps_weights_finite(self):
        for p, q, eta in [(0.0, 0.0, 0.0), (1.0, 0.0, 0.5), (0.0, 1.0, 0.0)]:
            w = mle_weights(p, q, eta, n=100)
            assert all(math.isfinite(x) for x in (w.w_r, w.w_i, w.w_c))

    def test_clamp_ranges(self):
        p, q, eta = clamp_params(0.0, 1.0, 0.0, n=11)
        assert p == pytest.approx(1 / 110)
        assert q == pytest.approx(1 - 1 / 110)
        assert eta == 1e-4
        assert clamp_params(0.3, 0.3, 0.9)[2] == 0.5

    def test_skew_weight_nonnegative(self):
        for eta in np.linspace(0.001, 0.5, 20):
            assert mle_weights(0.1, 0.2, eta).w_i >= 0.0


class TestOperator:
    def test_empty_graph_is_zero(self):
        op = build_operator(build_graph(3, []), MleWeights(1.0, 1.0, 0.0))
        np.testing.assert_array_equal(op.to_dense(), np.zeros((3, 3)))
        assert op.row_abs_bound() == 0.0

    def test_single_edge(self):
        w = MleWeights(w_r=0.7, w_i=1.3, w_c=0.0)
        op = build_operator(build_graph(2, [(0, 1)]), w)
        expected = np.array([[0, 0.7 + 1.3j], [0.7 - 1.3j, 0]])
        np.testing.assert_allclose(op.to_dense(), expected)
        np.testing.assert_allclose(apply_operator(op, np.array([1, 0])), [0, 0.7 - 1.3j])

    def test_ones_part(self, three_edges):
        op = build_operator(three_edges, MleWeights(0.0, 0.0, 1.0))
        np.testing.assert_allclose(op.to_dense(), np.ones((4, 4)) - np.eye(4))

    def test_zero_vector(self, three_edges):
        op = build_operator(three_edges, mle_weights(0.3, 0.1, 0.2))
        np.testing.assert_array_equal(apply_operator(op, np.zeros(4)), np.zeros(4))

    def test_size_mismatch(self, three_edges):
        op = build_operator(three_edges, mle_weights(0.3, 0.1, 0.2))
        with pytest.raises(SizeMismatch):
            apply_operator(op, np.ones(5))

    def test_matches_dense_product(self, rng):
        for _ in range(5):
            g, _ = random_dsbm(rng, [50, 50])
            w = mle_weights(0.3, 0.1, 0.15, g.n)
            op = build_operator(g, w)
            h = dense_h(g, w)
            x = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
            y = apply_operator(op, x)
            ref = h @ x
            assert np.linalg.norm(y - ref) <= 1e-12 * np.linalg.norm(ref)
            np.testing.assert_allclose(op.to_dense(), h, atol=1e-12)

    def test_hermitian(self, rng):
        g, _ = random_dsbm(rng, [40, 60])
        op = build_operator(g, mle_weights(0.2, 0.05, 0.1, g.n))
        for _ in range(10):
            x = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
            y = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
            gap = abs(np.vdot(x, op.apply(y)) - np.conj(np.vdot(y, op.apply(x))))
            assert gap <= 1e-10 * np.linalg.norm(x) * np.linalg.norm(y) * max(1.0, op.row_abs_bound())
            assert abs(np.imag(np.vdot(x, op.apply(x)))) <= 1e-9 * np.linalg.norm(x) ** 2 * op.row_abs_bound()

    def test_linear_operator_view(self, rng):
        g, _ = random_dsbm(rng, [20, 20])
        op = build_operator(g, mle_weights(0.2, 0.05, 0.1, g.n))
        lin = op.as_linear_operator()
        x = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
        assert lin.shape == (g.n, g.n)
        np.testing.assert_allclose(lin.matvec(x), op.apply(x))

    def test_deterministic(self, rng):
        g, _ = random_dsbm(rng, [30, 30])
        op = build_operator(g, mle_weights(0.2, 0.05, 0.1, g.n))
        x = rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n)
        np.testing.assert_array_equal(op.apply(x), op.apply(x))


class TestQuadraticForm:
    def test_empty_graph(self, halves):
        assert quadratic_form(build_graph(4, []), MleWeights(1.0, 2.0, 0.0), halves) == pytest.approx(0.0)

    def test_hand_example(self, three_edges, halves):
        w = MleWeights(w_r=0.3, w_i=1.7, w_c=-0.4)
        expected = 2 * w.w_r + 4 * w.w_i + 4 * w.w_c
        assert quadratic_form(three_edges, w, halves) == pytest.approx(expected)
        assert quadratic_form_closed(three_edges, w, halves) == pytest.approx(expected)

    def test_swap_flips_net_flow_term(self, three_edges, halves):
        w = MleWeights(w_r=0.3, w_i=1.7, w_c=-0.4)
        a = quadratic_form(three_edges, w, halves)
        b = quadratic_form(three_edges, w, halves.swapped())
        assert a - b == pytest.approx(8 * w.w_i)

    def test_closed_form_identity(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 51))
            m = int(rng.integers(0, 3 * n))
            src, dst = rng.integers(0, n, m), rng.integers(0, n, m)
            keep = src != dst
            g = build_graph(n, zip(src[keep], dst[keep], rng.uniform(0.5, 2.0, keep.sum())))
            part = Labeling(rng.integers(0, 2, n), 2)
            w = MleWeights(*rng.normal(size=3))
            qf = quadratic_form(g, w, part)
            closed = quadratic_form_closed(g, w, part)
            assert qf == pytest.approx(closed, rel=1e-9, abs=1e-9)

    def test_size_mismatch(self, three_edges):
        with pytest.raises(SizeMismatch):
            quadratic_form(three_edges, MleWeights(1, 1, 0), Labeling(np.array([0, 1]), 2))


class TestLikelihood:
    def test_empty_graph(self):
        n, p = 5, 0.3
        ll = log_likelihood(build_graph(n, []), Labeling(np.array([0, 0, 1, 1, 1]), 2), DsbmParams(sizes=[5], p=p, q=p, eta=0.2))
        assert ll == pytest.approx(n * (n - 1) / 2 * math.log(1 - p))

    def test_single_intra_edge(self):
        p, q = 0.4, 0.2
        ll = log_likelihood(build_graph(3, [(0, 1)]), Labeling(np.array([0, 0, 1]), 2), DsbmParams(sizes=[3], p=p, q=q, eta=0.1))
        assert ll == pytest.approx(math.log(p / 2) + 2 * math.log(1 - q))

    def test_rejects_weighted(self, halves):
        with pytest.raises(WeightedGraph):
            log_likelihood(build_graph(4, [(0, 1, 2.0)]), halves, DsbmParams(sizes=[4], p=0.1, q=0.1, eta=0.1))

    def test_rejects_reciprocal(self, halves):
        with pytest.raises(ReciprocalEdge):
            log_likelihood(build_graph(4, [(0, 1), (1, 0)]), halves, DsbmParams(sizes=[4], p=0.1, q=0.1, eta=0.1))

    def test_counts_match_binary_likelihood(self, rng):
        for _ in range(20):
            g, params = random_dsbm(rng, [8, 12])
            part = Labeling(rng.integers(0, 2, g.n), 2)
            assert count_log_likelihood(g, part, params.p, params.q, params.eta) == pytest.approx(log_likelihood(g, part, params), rel=1e-12)

    def test_counts_accept_weighted(self, halves):
        g = build_graph(4, [(0, 2, 2.0)])
        p, q, eta = 0.4, 0.2, 0.1
        # two forward units, both intra pairs empty, two inter pairs empty
        expected = 2 * math.log((1 - eta) * q) + 2 * math.log1p(-p) + 2 * math.log1p(-q)
        assert count_log_likelihood(g, halves, p, q, eta) == pytest.approx(expected)

    def test_offset_identity(self, rng):
        for _ in range(30):
            g, params = random_dsbm(rng, [6, 9])
            w = mle_weights(params.p, params.q, params.eta, g.n)
            c = likelihood_offset(g, params)
            for _ in range(5):
                part = Labeling(rng.integers(0, 2, g.n), 2)
                assert 4 * log_likelihood(g, part, params) == pytest.approx(quadratic_form(g, w, part) + c, rel=1e-9, abs=1e-8)


def _all_labelings(n):
    codes = np.arange(1 << n)
    return ((codes[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)


class TestExhaustiveMle:
    def test_recovers_cross_edges(self):
        g = build_graph(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
        found = exhaustive_mle(g, DsbmParams(sizes=[2, 2], p=0.5, q=0.5, eta=0.1))
        assert found.to_list() == [0, 0, 1, 1]

    def test_empty_graph_ties_go_to_smallest_code(self):
        found = exhaustive_mle(build_graph(5, []), DsbmParams(sizes=[5], p=0.3, q=0.3, eta=0.2))
        assert found.to_list() == [0, 0, 0, 0, 0]

    def test_too_large(self):
        with pytest.raises(TooLarge):
            exhaustive_mle(build_graph(21, []), DsbmParams(sizes=[21], p=0.3, q=0.3, eta=0.2))

    def test_agrees_with_quadratic_form(self, rng):
        bits = _all_labelings(10)
        x = np.where(bits == 0, 1j, 1.0 + 0j)
        for _ in range(100):
            g, params = random_dsbm(rng, [5, 5])
            w = mle_weights(params.p, params.q, params.eta, g.n)
            h = dense_h(g, w)
            scores = np.real(np.einsum("li,ij,lj->l", x.conj(), h, x))
            found = exhaustive_mle(g, params)
            # canonical relabeling may have swapped source and sink
            found_score = max(quadratic_form(g, w, found), quadratic_form(g, w, found.swapped()))
            top = scores.max()
            assert found_score >= top - 1e-9 * max(1.0, abs(top))
            assert found.assignments[0] == 0
