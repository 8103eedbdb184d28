import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import build_encoded
from rulemine.errors import ConfigError, DataError
from rulemine.lvq import (
    LvqConfig,
    allocate_per_class,
    fit_network,
    init_network,
    move_away,
    move_toward,
    nearest_two,
    train,
)


def _uniform_data(schema, n, seed, classes=2):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 1, (n, 2))
    y = rng.integers(0, classes, n)
    for c in range(classes):        # every class present
        y[c] = c
    return build_encoded(schema, X, y)


class TestConfig:
    def test_defaults(self):
        cfg = LvqConfig()
        assert cfg.centroid_count == 30
        assert cfg.repulsion_ratio == 1.2

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"adapt_rate": 0.0},
            {"adapt_rate": 1.0},
            {"centroid_count": 0},
            {"max_epochs": 0},
            {"stability_threshold": -1e-9},
            {"repulsion_ratio": 1.0},
        ],
    )
    def test_invalid_values(self, kwargs):
        with pytest.raises(ConfigError):
            LvqConfig(**kwargs)


class TestAllocation:
    def test_exact_proportional_split(self):
        assert allocate_per_class(np.array([600, 400]), 30) == {0: 18, 1: 12}

    def test_minimum_one_guarantee(self):
        alloc = allocate_per_class(np.array([990, 10]), 30)
        assert alloc == {0: 29, 1: 1}

    def test_k_below_class_count(self):
        with pytest.raises(ConfigError):
            allocate_per_class(np.array([1, 1, 1]), 2)

    def test_absent_class_gets_nothing(self):
        alloc = allocate_per_class(np.array([10, 0, 10]), 4)
        assert 1 not in alloc
        assert sum(alloc.values()) == 4

    def test_no_examples_at_all(self):
        with pytest.raises(DataError):
            allocate_per_class(np.array([0, 0]), 3)

    @given(
        st.lists(st.integers(min_value=1, max_value=500), min_size=1, max_size=6),
        st.integers(min_value=1, max_value=60),
    )
    @settings(max_examples=100, deadline=None)
    def test_sums_to_total_with_min_one(self, counts, extra):
        counts = np.array(counts)
        total = len(counts) + extra
        alloc = allocate_per_class(counts, total)
        assert sum(alloc.values()) == total
        assert all(v >= 1 for v in alloc.values())
        assert set(alloc) == set(range(len(counts)))


class TestInit:
    def test_positions_are_distinct_examples(self, numeric_schema):
        X = np.array([[0.1, 0.1], [0.3, 0.3], [0.5, 0.5], [0.7, 0.7], [0.9, 0.9]])
        data = build_encoded(numeric_schema, X, [0] * 5)
        cfg = LvqConfig(centroid_count=3, seed=1)
        net = init_network(data, cfg)
        rows = {tuple(c.position) for c in net.centroids}
        assert len(rows) == 3
        assert rows <= {tuple(r) for r in X}

    def test_small_class_allows_duplicates(self, numeric_schema):
        X = np.array([[0.1, 0.1], [0.9, 0.9], [0.2, 0.2], [0.3, 0.3], [0.4, 0.4]])
        y = [1, 1, 0, 0, 0]
        data = build_encoded(numeric_schema, X, y)
        # force class 1 (2 examples) to hold 3 centroids
        cfg = LvqConfig(centroid_count=6, seed=0)
        net = init_network(data, cfg)
        assert sum(1 for c in net.centroids if c.class_index == 1) >= 1

    def test_determinism(self, numeric_schema):
        data = _uniform_data(numeric_schema, 50, 4)
        a = init_network(data, LvqConfig(centroid_count=8, seed=11))
        b = init_network(data, LvqConfig(centroid_count=8, seed=11))
        assert all(
            np.array_equal(x.position, y.position)
            for x, y in zip(a.centroids, b.centroids)
        )

    def test_empty_data_rejected(self, numeric_schema):
        data = build_encoded(numeric_schema, np.zeros((0, 2)), [])
        with pytest.raises(DataError):
            init_network(data, LvqConfig(centroid_count=2))


class TestNearestTwo:
    def _net(self, numeric_schema, positions, classes):
        X = np.array(positions)
        data = build_encoded(numeric_schema, X, classes)
        return init_network(
            data, LvqConfig(centroid_count=len(positions), seed=0)
        )

    def test_identity_distance_zero(self, numeric_schema):
        net = self._net(numeric_schema, [[0.0, 0.0], [1.0, 0.0]], [0, 1])
        (i1, d1), _ = nearest_two(net, np.array([0.0, 0.0]))
        assert d1 == 0.0

    def test_hand_computed_distances(self, numeric_schema):
        net = self._net(numeric_schema, [[0.0, 0.0], [1.0, 0.0]], [0, 1])
        by_pos = sorted(range(2), key=lambda i: net.centroids[i].position[0])
        (i1, d1), (i2, d2) = nearest_two(net, np.array([0.2, 0.0]))
        assert i1 == by_pos[0] and d1 == pytest.approx(0.2)
        assert i2 == by_pos[1] and d2 == pytest.approx(0.8)

    def test_tie_takes_lower_index(self, numeric_schema):
        net = self._net(numeric_schema, [[0.0, 0.0], [1.0, 0.0]], [0, 1])
        (i1, _), (i2, _) = nearest_two(net, np.array([0.5, 0.0]))
        assert i1 == 0 and i2 == 1

    def test_needs_two_centroids(self, numeric_schema):
        X = np.array([[0.5, 0.5], [0.6, 0.6]])
        data = build_encoded(numeric_schema, X, [0, 0])
        net = init_network(data, LvqConfig(centroid_count=1, seed=0))
        with pytest.raises(ConfigError):
            nearest_two(net, np.array([0.0, 0.0]))


class TestMoveLaws:
    def test_attraction_formula(self):
        c = np.array([0.0, 0.0])
        x = np.array([1.0, 0.0])
        assert np.allclose(move_toward(c, x, 0.05), [0.05, 0.0])

    def test_degenerate_repulsion_is_noop(self):
        c = np.array([0.5, 0.5])
        assert np.array_equal(move_away(c, c.copy(), 0.3), c)

    def test_contraction_and_expansion_randomized(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            d = int(rng.integers(1, 8))
            c = rng.uniform(0, 1, d)
            x = rng.uniform(0, 1, d)
            a = float(rng.uniform(0.001, 0.999))
            base = np.linalg.norm(c - x)
            assert abs(np.linalg.norm(move_toward(c, x, a) - x) - (1 - a) * base) < 1e-12
            assert abs(np.linalg.norm(move_away(c, x, a) - x) - (1 + a) * base) < 1e-12


class TestTraining:
    def test_one_class_trace_never_increases(self, numeric_schema):
        rng = np.random.default_rng(0)
        X = rng.uniform(0, 1, (80, 2))
        data = build_encoded(numeric_schema, X, np.zeros(80, dtype=np.int64))
        net = fit_network(data, LvqConfig(centroid_count=4, seed=3))
        assert len(net.trace) >= 1
        for a, b in zip(net.trace, net.trace[1:]):
            assert b <= a + 1e-12

    def test_positions_stay_in_unit_cube(self, numeric_schema):
        data = _uniform_data(numeric_schema, 200, 8)
        net = fit_network(data, LvqConfig(centroid_count=10, seed=5))
        for c in net.centroids:
            assert np.all(c.position >= 0.0) and np.all(c.position <= 1.0)

    def test_represented_counts_sum_to_train_size(self, numeric_schema):
        data = _uniform_data(numeric_schema, 137, 2)
        net = fit_network(data, LvqConfig(centroid_count=7, seed=1))
        assert sum(c.represented_count for c in net.centroids) == 137

    def test_single_member_deviation_is_zero(self, numeric_schema):
        # three far-apart one-class examples, three centroids: a stable 1-1 map
        X = np.array([[0.05, 0.05], [0.5, 0.95], [0.95, 0.05]])
        data = build_encoded(numeric_schema, X, [0, 0, 0])
        net = fit_network(data, LvqConfig(centroid_count=3, seed=0))
        singles = [c for c in net.centroids if c.represented_count == 1]
        assert len(singles) == 3
        for c in singles:
            assert np.all(c.deviation == 0.0)

    def test_deviation_nonnegative(self, numeric_schema):
        data = _uniform_data(numeric_schema, 90, 12)
        net = fit_network(data, LvqConfig(centroid_count=4, seed=2))
        for c in net.centroids:
            assert np.all(c.deviation >= 0.0)

    def test_bitwise_determinism(self, numeric_schema):
        data = _uniform_data(numeric_schema, 120, 6)
        cfg = LvqConfig(centroid_count=8, seed=21)
        a = fit_network(data, cfg)
        b = fit_network(data, cfg)
        for ca, cb in zip(a.centroids, b.centroids):
            assert np.array_equal(ca.position, cb.position)
            assert np.array_equal(ca.deviation, cb.deviation)
            assert ca.represented_count == cb.represented_count
        assert a.trace == b.trace

    def test_max_epochs_bounds_trace(self, numeric_schema):
        data = _uniform_data(numeric_schema, 60, 3)
        cfg = LvqConfig(centroid_count=4, seed=0, max_epochs=5, stability_threshold=1e-30)
        net = fit_network(data, cfg)
        assert len(net.trace) <= 5

    def test_train_does_not_grow_network(self, numeric_schema):
        data = _uniform_data(numeric_schema, 40, 9)
        cfg = LvqConfig(centroid_count=6, seed=7)
        net = init_network(data, cfg)
        trained = train(net, data, cfg)
        assert len(trained.centroids) == 6
        assert sum(trained.allocation.values()) == 6
