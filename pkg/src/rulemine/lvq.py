"""Supervised vector quantization over encoded examples.

Centroids are class-labeled points in [0, 1]^d. Training presents examples
one at a time: the nearest centroid is pulled toward same-class examples and
pushed away from different-class ones, and a different-class second-nearest
centroid inside 1.2x the winning distance is pushed away as well. The fitted
centroids, together with the per-dimension spread of the examples each one
represents, later seed the rule search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .schema import EncodedDataset


@dataclass(frozen=True)
class LvqConfig:
    centroid_count: int = 30
    adapt_rate: float = 0.05
    max_epochs: int = 100
    stability_threshold: float = 1e-4
    repulsion_ratio: float = 1.2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.centroid_count < 1:
            raise ConfigError("centroid_count must be >= 1")
        if not 0.0 < self.adapt_rate < 1.0:
            raise ConfigError("adapt_rate must lie in (0, 1)")
        if self.max_epochs < 1:
            raise ConfigError("max_epochs must be >= 1")
        if self.stability_threshold <= 0.0:
            raise ConfigError("stability_threshold must be positive")
        if self.repulsion_ratio <= 1.0:
            raise ConfigError("repulsion_ratio must exceed 1")


@dataclass
class Centroid:
    position: np.ndarray
    class_index: int
    represented_count: int = 0
    deviation: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass
class LvqNetwork:
    centroids: list[Centroid]
    allocation: dict[int, int]
    trace: list[float] = field(default_factory=list)

    @property
    def positions(self) -> np.ndarray:
        return np.stack([c.position for c in self.centroids])

    @property
    def class_indices(self) -> np.ndarray:
        return np.array([c.class_index for c in self.centroids], dtype=np.int64)


def move_toward(position: np.ndarray, example: np.ndarray, rate: float) -> np.ndarray:
    """Attraction step: the new distance to the example is (1 - rate) times
    the old one, exactly."""
    return position + rate * (example - position)


def move_away(position: np.ndarray, example: np.ndarray, rate: float) -> np.ndarray:
    """Repulsion step: the new distance to the example is (1 + rate) times
    the old one, exactly."""
    return position - rate * (example - position)


def allocate_per_class(class_counts: np.ndarray, total_centroids: int) -> dict[int, int]:
    """Distribute centroids across classes in proportion to class frequency.

    Every class present in the data gets at least one centroid; the counts
    sum to ``total_centroids`` exactly (largest-remainder correction).
    """
    counts = np.asarray(class_counts, dtype=np.int64)
    present = np.flatnonzero(counts > 0)
    if present.size == 0:
        raise DataError("no class has any examples")
    if total_centroids < present.size:
        raise ConfigError(
            f"centroid_count={total_centroids} is smaller than the "
            f"{present.size} classes present"
        )
    total_examples = int(counts.sum())
    ideal = {int(c): total_centroids * int(counts[c]) / total_examples for c in present}
    alloc = {c: max(1, int(np.floor(share + 0.5))) for c, share in ideal.items()}
    diff = total_centroids - sum(alloc.values())
    while diff > 0:
        c = min(alloc, key=lambda k: (alloc[k] - ideal[k], k))
        alloc[c] += 1
        diff -= 1
    while diff < 0:
        # only classes above the one-centroid floor may give a centroid back
        c = min(
            (k for k in alloc if alloc[k] > 1),
            key=lambda k: (ideal[k] - alloc[k], k),
        )
        alloc[c] -= 1
        diff += 1
    return dict(sorted(alloc.items()))


def _seed_pair(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    init_ss, train_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(init_ss), np.random.default_rng(train_ss)


def init_network(train: EncodedDataset, config: LvqConfig) -> LvqNetwork:
    """Place centroids on randomly chosen training examples of each class.

    Sampling is without replacement unless a class holds fewer examples than
    its allocation.
    """
    if len(train) == 0:
        raise DataError("cannot initialize a network from an empty dataset")
    rng, _ = _seed_pair(config.seed)
    alloc = allocate_per_class(train.class_counts(), config.centroid_count)
    centroids: list[Centroid] = []
    d = train.dimension
    for class_index, count in alloc.items():
        members = np.flatnonzero(train.y == class_index)
        chosen = rng.choice(members, size=count, replace=members.size < count)
        for row in chosen:
            centroids.append(
                Centroid(
                    position=train.X[int(row)].copy(),
                    class_index=class_index,
                    represented_count=0,
                    deviation=np.zeros(d),
                )
            )
    return LvqNetwork(centroids=centroids, allocation=alloc)


def nearest_two(network: LvqNetwork, point: np.ndarray) -> tuple[tuple[int, float], tuple[int, float]]:
    """Indices and Euclidean distances of the two nearest centroids.

    Ties resolve to the lowest centroid index.
    """
    if len(network.centroids) < 2:
        raise ConfigError("nearest_two needs at least 2 centroids")
    positions = network.positions
    diff = positions - point
    d2 = np.einsum("kd,kd->k", diff, diff)
    first = int(np.argmin(d2))  # argmin returns the first (lowest) index on ties
    d_first = float(np.sqrt(d2[first]))
    d2[first] = np.inf
    second = int(np.argmin(d2))
    d_second = float(np.sqrt(d2[second]))
    return (first, d_first), (second, d_second)


def _final_statistics(
    network: LvqNetwork, positions: np.ndarray, train: EncodedDataset
) -> None:
    # one clean assignment pass over the final positions
    d2 = (
        np.einsum("nd,nd->n", train.X, train.X)[:, None]
        - 2.0 * train.X @ positions.T
        + np.einsum("kd,kd->k", positions, positions)[None, :]
    )
    assign = np.argmin(d2, axis=1)
    d = train.dimension
    for k, centroid in enumerate(network.centroids):
        members = np.flatnonzero(assign == k)
        centroid.position = positions[k]
        centroid.represented_count = int(members.size)
        if members.size >= 2:
            centroid.deviation = np.std(train.X[members], axis=0)
        else:
            centroid.deviation = np.zeros(d)


def train(network: LvqNetwork, train_data: EncodedDataset, config: LvqConfig) -> LvqNetwork:
    """Fit the network in place and return it.

    Presentation order is reshuffled each epoch from the seeded generator.
    Training stops when the mean centroid displacement in an epoch falls
    below the stability threshold, when example-to-centroid assignments
    repeat across two consecutive epochs, or at max_epochs.
    """
    if len(train_data) == 0:
        raise DataError("cannot train on an empty dataset")
    positions = network.positions.copy()
    if positions.shape[1] != train_data.dimension:
        raise DataError(
            f"network dimension {positions.shape[1]} does not match "
            f"data dimension {train_data.dimension}"
        )
    _, rng = _seed_pair(config.seed)
    classes = network.class_indices
    X, y = train_data.X, train_data.y
    n = len(train_data)
    ratio_sq = config.repulsion_ratio**2
    prev_assign: np.ndarray | None = None
    network.trace = []

    for epoch in range(config.max_epochs):
        rate = config.adapt_rate * (1.0 - epoch / config.max_epochs)
        start = positions.copy()
        assign = np.empty(n, dtype=np.int64)
        for i in rng.permutation(n):
            x = X[i]
            diff = positions - x
            d2 = np.einsum("kd,kd->k", diff, diff)
            first = int(np.argmin(d2))
            d2_first = d2[first]
            d2[first] = np.inf
            second = int(np.argmin(d2))
            d2_second = d2[second]
            assign[i] = first
            if classes[first] == y[i]:
                positions[first] = move_toward(positions[first], x, rate)
            else:
                positions[first] = move_away(positions[first], x, rate)
            np.clip(positions[first], 0.0, 1.0, out=positions[first])
            if classes[second] != y[i] and d2_second < ratio_sq * d2_first:
                positions[second] = move_away(positions[second], x, rate)
                np.clip(positions[second], 0.0, 1.0, out=positions[second])
        movement = float(np.mean(np.sqrt(((positions - start) ** 2).sum(axis=1))))
        network.trace.append(movement)
        if movement < config.stability_threshold:
            break
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            break
        prev_assign = assign

    _final_statistics(network, positions, train_data)
    return network


def fit_network(train_data: EncodedDataset, config: LvqConfig) -> LvqNetwork:
    """init_network followed by train."""
    return train(init_network(train_data, config), train_data, config)
