"""Binary particle swarm that searches for one rule antecedent.

Each particle encodes a candidate antecedent: one participation bit per
encoded column plus a (lo, hi) interval gene pair per numeric attribute. Two
velocity layers drive the bits. veloc1 is the conventional
inertia/cognitive/social velocity over the bit vector; veloc2 accumulates
veloc1 and is squashed through a sigmoid to give each bit its probability of
being 1 on the next draw. Interval genes move by standard continuous updates
and are clamped to [0, 1] with lo <= hi repaired by swapping.

Fitness of a decoded rule is a weighted sum of confidence, support, and a
shortness term, so the swarm prefers pure rules, then broad ones, then short
ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .lvq import LvqNetwork
from .rules import NominalMembership, NumericInterval, Rule, match_mask
from .schema import ColumnLayout, EncodedDataset

_PERTURB_VELOC_SCALE = 0.1  # fraction of the veloc2 span, for perturbed copies
_PERTURB_GENE_SCALE = 0.05


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 40
    max_iterations: int = 200
    inertia: float = 0.7
    cognitive: float = 1.4
    social: float = 1.4
    veloc1_bounds: tuple[float, float] = (-1.0, 1.0)
    veloc2_bounds: tuple[float, float] = (-4.0, 4.0)
    weight_confidence: float = 0.6
    weight_support: float = 0.3
    weight_length: float = 0.1
    stagnation_limit: int = 30
    seed: int = 0

    def __post_init__(self) -> None:
        if self.swarm_size < 1:
            raise ConfigError("swarm_size must be >= 1")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if self.stagnation_limit < 1:
            raise ConfigError("stagnation_limit must be >= 1")
        if self.inertia < 0.0:
            raise ConfigError("inertia must be non-negative")
        for name in ("veloc1_bounds", "veloc2_bounds"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ConfigError(f"{name} must be an ordered (low, high) pair")
        weights = (self.weight_confidence, self.weight_support, self.weight_length)
        if any(w < 0.0 for w in weights):
            raise ConfigError("fitness weights must be non-negative")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise ConfigError("fitness weights must sum to 1")


@dataclass
class Particle:
    position: np.ndarray  # bits, stored as 0.0/1.0 for velocity arithmetic
    veloc1: np.ndarray
    veloc2: np.ndarray
    genes: np.ndarray  # (num numeric attributes, 2) rows of (lo, hi)
    gene_veloc: np.ndarray
    fitness: float
    best_position: np.ndarray
    best_genes: np.ndarray
    best_fitness: float


@dataclass
class Swarm:
    particles: list[Particle]
    class_index: int
    rng: np.random.Generator
    iteration: int = 0
    best_position: np.ndarray | None = None
    best_genes: np.ndarray | None = None
    best_fitness: float = -np.inf
    trace: list[float] = field(default_factory=list)


def sigmoid(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ev = np.exp(v[~pos])
    out[~pos] = ev / (1.0 + ev)
    return out


def binarize(veloc2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw bits: each is 1 with probability sigmoid(veloc2)."""
    v = np.asarray(veloc2, dtype=np.float64)
    return (rng.random(v.shape) < sigmoid(v)).astype(np.float64)


def decode_state(
    position: np.ndarray,
    genes: np.ndarray,
    layout: ColumnLayout,
    class_index: int,
) -> Rule:
    """Turn a bit vector plus interval genes into a Rule.

    A nominal attribute with no bits set, or all bits set, places no
    condition. A numeric attribute participates only when its column bit is
    set; its condition is the closed interval held by its gene pair.
    """
    conditions = []
    schema = layout.schema
    numeric_index = {name: i for i, name in enumerate(layout.numeric_names)}
    for attr in schema.attributes:
        if attr.kind == "nominal":
            cols = layout.nominal_columns(attr.name)
            bits = position[cols.start : cols.stop]
            chosen = [v for v, b in zip(attr.values, bits) if b >= 0.5]
            if 0 < len(chosen) < len(attr.values):
                conditions.append(NominalMembership(attr.name, frozenset(chosen)))
        else:
            if position[layout.numeric_column(attr.name)] >= 0.5:
                lo, hi = genes[numeric_index[attr.name]]
                conditions.append(NumericInterval(attr.name, float(lo), float(hi)))
    return Rule(antecedent=tuple(conditions), class_index=class_index)


def decode(particle: Particle, data: EncodedDataset, class_index: int) -> Rule:
    return decode_state(particle.position, particle.genes, data.layout, class_index)


def fitness_from_rule(rule: Rule, data: EncodedDataset, config: PsoConfig) -> float:
    """Weighted confidence + support + shortness of a decoded rule.

    Uses the same count-then-divide arithmetic as rules.support and
    rules.confidence, so recomputing fitness from the decoded Rule matches
    this value exactly.
    """
    if len(data) == 0:
        raise DataError("fitness is undefined on an empty dataset")
    mask = match_mask(rule.antecedent, data.X, data.layout)
    matched = int(np.count_nonzero(mask))
    correct = int(np.count_nonzero(mask & (data.y == rule.class_index)))
    support = correct / len(data)
    confidence = correct / matched if matched else 0.0
    total_attributes = len(data.schema.attributes)
    shortness = 1.0 - len(rule.antecedent) / total_attributes
    return (
        config.weight_confidence * confidence
        + config.weight_support * support
        + config.weight_length * shortness
    )


def fitness(
    particle: Particle, class_index: int, data: EncodedDataset, config: PsoConfig
) -> float:
    return fitness_from_rule(decode(particle, data, class_index), data, config)


def _rescale_to(values: np.ndarray, bounds: tuple[float, float]) -> np.ndarray:
    lo, hi = bounds
    return lo + values * (hi - lo)


def _seed_veloc2(
    centroid_position: np.ndarray,
    centroid_deviation: np.ndarray,
    numeric_mask: np.ndarray,
    config: PsoConfig,
) -> np.ndarray:
    """Centroid-derived accumulator start values.

    Nominal columns reuse the centroid coordinate directly; numeric columns
    use 1 - 1.5 * deviation (clamped to [0, 1]) so that a dimension the
    centroid represents tightly is likely to participate. Both are then
    rescaled into the veloc2 bounds.
    """
    raw = np.where(
        numeric_mask,
        np.clip(1.0 - 1.5 * centroid_deviation, 0.0, 1.0),
        centroid_position,
    )
    return _rescale_to(raw, config.veloc2_bounds)


def _seed_genes(
    centroid_position: np.ndarray,
    centroid_deviation: np.ndarray,
    numeric_cols: np.ndarray,
) -> np.ndarray:
    center = centroid_position[numeric_cols]
    spread = 1.5 * centroid_deviation[numeric_cols]
    genes = np.stack([center - spread, center + spread], axis=1)
    return np.clip(genes, 0.0, 1.0)


def seed_swarm(
    network: LvqNetwork,
    class_index: int,
    min_represented: int,
    data: EncodedDataset,
    config: PsoConfig,
) -> Swarm:
    """Build the initial swarm for one rule-search run.

    Seeds come from the network's centroids of the target class that
    represent at least ``min_represented`` examples; if none qualify, all
    centroids of the class; if the class has no centroids at all, the swarm
    initializes randomly. Extra particles beyond the seed pool are perturbed
    copies of the seeds.
    """
    if len(data) == 0:
        raise DataError("cannot seed a swarm against an empty dataset")
    layout = data.layout
    d = layout.dimension
    numeric_cols = np.array(
        [layout.numeric_column(n) for n in layout.numeric_names], dtype=np.int64
    )
    numeric_mask = np.zeros(d, dtype=bool)
    numeric_mask[numeric_cols] = True

    seeds = [
        c
        for c in network.centroids
        if c.class_index == class_index and c.represented_count >= min_represented
    ]
    if not seeds:
        seeds = [c for c in network.centroids if c.class_index == class_index]

    rng = np.random.default_rng(config.seed)
    lb1, ub1 = config.veloc1_bounds
    lb2, ub2 = config.veloc2_bounds
    particles: list[Particle] = []
    for s in range(config.swarm_size):
        if seeds:
            base = seeds[s % len(seeds)]
            veloc2 = _seed_veloc2(base.position, base.deviation, numeric_mask, config)
            genes = _seed_genes(base.position, base.deviation, numeric_cols)
            if s >= len(seeds):
                veloc2 = np.clip(
                    veloc2 + rng.normal(0.0, _PERTURB_VELOC_SCALE * (ub2 - lb2), d),
                    lb2,
                    ub2,
                )
                genes = np.sort(
                    np.clip(genes + rng.normal(0.0, _PERTURB_GENE_SCALE, genes.shape), 0.0, 1.0),
                    axis=1,
                )
        else:
            veloc2 = rng.uniform(lb2, ub2, d)
            genes = np.sort(rng.uniform(0.0, 1.0, (numeric_cols.size, 2)), axis=1)
        veloc1 = rng.uniform(lb1, ub1, d)
        gene_veloc = rng.uniform(lb1, ub1, genes.shape)
        position = binarize(veloc2, rng)
        particle = Particle(
            position=position,
            veloc1=veloc1,
            veloc2=veloc2,
            genes=genes,
            gene_veloc=gene_veloc,
            fitness=-np.inf,
            best_position=position.copy(),
            best_genes=genes.copy(),
            best_fitness=-np.inf,
        )
        particle.fitness = fitness(particle, class_index, data, config)
        particle.best_fitness = particle.fitness
        particles.append(particle)

    swarm = Swarm(particles=particles, class_index=class_index, rng=rng)
    for p in particles:
        if p.best_fitness > swarm.best_fitness:
            swarm.best_fitness = p.best_fitness
            swarm.best_position = p.best_position.copy()
            swarm.best_genes = p.best_genes.copy()
    swarm.trace.append(swarm.best_fitness)
    return swarm


def step(swarm: Swarm, data: EncodedDataset, config: PsoConfig) -> None:
    """Advance the swarm one iteration (synchronous update).

    All particles move against the current global best, then fitness,
    personal bests, and the global best are updated in particle order.
    Best updates require strict improvement.
    """
    rng = swarm.rng
    lb1, ub1 = config.veloc1_bounds
    lb2, ub2 = config.veloc2_bounds
    w, c1, c2 = config.inertia, config.cognitive, config.social
    gbest_position = swarm.best_position
    gbest_genes = swarm.best_genes

    for p in swarm.particles:
        r1 = rng.random(p.position.shape)
        r2 = rng.random(p.position.shape)
        p.veloc1 = np.clip(
            w * p.veloc1
            + c1 * r1 * (p.best_position - p.position)
            + c2 * r2 * (gbest_position - p.position),
            lb1,
            ub1,
        )
        p.veloc2 = np.clip(p.veloc2 + p.veloc1, lb2, ub2)
        p.position = binarize(p.veloc2, rng)
        if p.genes.size:
            g1 = rng.random(p.genes.shape)
            g2 = rng.random(p.genes.shape)
            p.gene_veloc = np.clip(
                w * p.gene_veloc
                + c1 * g1 * (p.best_genes - p.genes)
                + c2 * g2 * (gbest_genes - p.genes),
                lb1,
                ub1,
            )
            # clamp to the unit interval, then swap-repair lo > hi
            p.genes = np.sort(np.clip(p.genes + p.gene_veloc, 0.0, 1.0), axis=1)

    for p in swarm.particles:
        p.fitness = fitness(p, swarm.class_index, data, config)
        if p.fitness > p.best_fitness:
            p.best_fitness = p.fitness
            p.best_position = p.position.copy()
            p.best_genes = p.genes.copy()
        if p.best_fitness > swarm.best_fitness:
            swarm.best_fitness = p.best_fitness
            swarm.best_position = p.best_position.copy()
            swarm.best_genes = p.best_genes.copy()

    swarm.iteration += 1
    swarm.trace.append(swarm.best_fitness)


def evolve(swarm: Swarm, data: EncodedDataset, config: PsoConfig) -> Rule:
    """Run the swarm until max_iterations or stagnation, return the best rule.

    Stagnation means the global best has not improved for
    ``config.stagnation_limit`` consecutive iterations.
    """
    stale = 0
    while swarm.iteration < config.max_iterations and stale < config.stagnation_limit:
        before = swarm.best_fitness
        step(swarm, data, config)
        stale = 0 if swarm.best_fitness > before else stale + 1
    return decode_state(
        swarm.best_position, swarm.best_genes, data.layout, swarm.class_index
    )
