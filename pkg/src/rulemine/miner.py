"""Iterative rule learning over a fitted centroid network.

One swarm run produces one candidate rule for the class with the most
uncovered examples. A candidate is emitted only if it clears the support
floor in force for its class, meets the confidence threshold, and covers at
least one example; emitted rules remove the examples they match and classify
correctly. The floor is ``support_factor * uncovered_c / total_train`` and
the candidate's support is measured against the same full-training
denominator, so emission demands a covered count of at least
``support_factor`` times the class's remaining examples: the floor shrinks
as mining progresses, but never so fast that single-digit fragments qualify
while a class is still broadly uncovered. Classes retire after too many
failed attempts in a row.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DataError
from .lvq import LvqConfig, LvqNetwork, fit_network
from .pso import PsoConfig, evolve, seed_swarm
from .rules import (
    Provenance,
    Rule,
    RuleList,
    choose_default_class,
    match_mask,
    rule_to_dict,
)
from .schema import AttributeSchema, EncodedDataset

STOP_ALL_COVERED = "all_covered"
STOP_NO_VIABLE_CLASS = "no_viable_class"


@dataclass(frozen=True)
class MinerConfig:
    support_factor: float = 0.1
    min_confidence: float = 0.6
    max_attempts_per_class: int = 5
    min_represented: int = 2
    lvq: LvqConfig = field(default_factory=LvqConfig)
    pso: PsoConfig = field(default_factory=PsoConfig)
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.support_factor <= 1.0:
            raise ConfigError("support_factor must lie in (0, 1]")
        if not 0.0 < self.min_confidence <= 1.0:
            raise ConfigError("min_confidence must lie in (0, 1]")
        if self.max_attempts_per_class < 1:
            raise ConfigError("max_attempts_per_class must be >= 1")
        if self.min_represented < 0:
            raise ConfigError("min_represented must be >= 0")

    @staticmethod
    def from_dict(doc: dict) -> "MinerConfig":
        """Build a config from a JSON-style dict of overrides."""
        known = {
            "support_factor",
            "min_confidence",
            "max_attempts_per_class",
            "min_represented",
            "lvq",
            "pso",
            "seed",
        }
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config key {sorted(unknown)[0]!r}")
        kwargs = {k: v for k, v in doc.items() if k not in ("lvq", "pso")}
        try:
            if "lvq" in doc:
                kwargs["lvq"] = LvqConfig(**doc["lvq"])
            if "pso" in doc:
                pso_doc = dict(doc["pso"])
                for bounds_key in ("veloc1_bounds", "veloc2_bounds"):
                    if bounds_key in pso_doc:
                        pso_doc[bounds_key] = tuple(pso_doc[bounds_key])
                kwargs["pso"] = PsoConfig(**pso_doc)
            return MinerConfig(**kwargs)
        except TypeError as exc:
            raise ConfigError(f"bad config document: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "support_factor": self.support_factor,
            "min_confidence": self.min_confidence,
            "max_attempts_per_class": self.max_attempts_per_class,
            "min_represented": self.min_represented,
            "lvq": {
                "centroid_count": self.lvq.centroid_count,
                "adapt_rate": self.lvq.adapt_rate,
                "max_epochs": self.lvq.max_epochs,
                "stability_threshold": self.lvq.stability_threshold,
                "repulsion_ratio": self.lvq.repulsion_ratio,
                "seed": self.lvq.seed,
            },
            "pso": {
                "swarm_size": self.pso.swarm_size,
                "max_iterations": self.pso.max_iterations,
                "inertia": self.pso.inertia,
                "cognitive": self.pso.cognitive,
                "social": self.pso.social,
                "veloc1_bounds": list(self.pso.veloc1_bounds),
                "veloc2_bounds": list(self.pso.veloc2_bounds),
                "weight_confidence": self.pso.weight_confidence,
                "weight_support": self.pso.weight_support,
                "weight_length": self.pso.weight_length,
                "stagnation_limit": self.pso.stagnation_limit,
                "seed": self.pso.seed,
            },
            "seed": self.seed,
        }


def min_support(uncovered_count: int, total_train: int, support_factor: float) -> float:
    """Support floor for a class with ``uncovered_count`` examples left."""
    if total_train <= 0:
        raise DataError("total_train must be positive")
    return support_factor * uncovered_count / total_train


@dataclass
class RuleRecord:
    """Everything recorded about one emitted rule, including the uncovered
    row indices it was measured against (so the numbers can be re-verified)."""

    rule: Rule
    class_index: int
    support: float
    confidence: float
    covered_count: int
    iteration: int
    uncovered_before: tuple[int, ...]


@dataclass
class SwarmLog:
    iteration: int
    class_index: int
    trace: list[float]
    emitted: bool


@dataclass
class MiningReport:
    records: list[RuleRecord]
    failed_attempts: dict[int, int]
    stop_reason: str
    uncovered_residue: dict[int, int]
    swarm_logs: list[SwarmLog]
    total_iterations: int
    train_size: int
    network: LvqNetwork

    def to_dict(self, schema: AttributeSchema) -> dict:
        # the fitted network is serialized with the model, not the report
        labels = schema.class_labels
        return {
            "stop_reason": self.stop_reason,
            "train_size": self.train_size,
            "total_iterations": self.total_iterations,
            "rules": [
                {
                    "rule": rule_to_dict(r.rule, schema),
                    "class": labels[r.class_index],
                    "support": r.support,
                    "confidence": r.confidence,
                    "covered_count": r.covered_count,
                    "iteration": r.iteration,
                    "uncovered_before": list(r.uncovered_before),
                }
                for r in self.records
            ],
            "failed_attempts": {
                labels[c]: n for c, n in sorted(self.failed_attempts.items())
            },
            "uncovered_residue": {
                labels[c]: n for c, n in sorted(self.uncovered_residue.items())
            },
            "swarm_logs": [
                {
                    "iteration": log.iteration,
                    "class": labels[log.class_index],
                    "emitted": log.emitted,
                    "best_fitness_trace": list(log.trace),
                }
                for log in self.swarm_logs
            ],
        }


def mine(train: EncodedDataset, config: MinerConfig) -> tuple[RuleList, MiningReport]:
    """Mine an ordered rule list from encoded training data.

    The centroid network is fitted once up front and only re-filtered by
    class between swarm runs. Sub-seeds for the network fit and for every
    swarm launch are drawn from the master seed, so a given (data, config)
    pair reproduces the identical rule list.
    """
    n = len(train)
    if n == 0:
        raise DataError("cannot mine an empty dataset")
    n_classes = len(train.schema.class_labels)
    present = np.unique(train.y)
    if present.size < 2:
        raise ConfigError("mining needs at least 2 classes present in the data")

    master = np.random.default_rng(config.seed)

    def draw_seed() -> int:
        return int(master.integers(0, 2**63 - 1))

    network = fit_network(train, replace(config.lvq, seed=draw_seed()))

    uncovered = np.ones(n, dtype=bool)
    total_counts = np.bincount(train.y, minlength=n_classes)
    consecutive_failures = {c: 0 for c in range(n_classes)}
    failed_attempts = {c: 0 for c in range(n_classes)}
    retired: set[int] = set()
    rules: list[Rule] = []
    records: list[RuleRecord] = []
    swarm_logs: list[SwarmLog] = []
    iteration = 0
    # each iteration either covers >= 1 example or increments a failure
    # counter that only resets on coverage
    iteration_bound = n * (1 + config.max_attempts_per_class) + n_classes * config.max_attempts_per_class

    while True:
        uncovered_idx = np.flatnonzero(uncovered)
        if uncovered_idx.size == 0:
            stop_reason = STOP_ALL_COVERED
            break
        uncovered_counts = np.bincount(train.y[uncovered_idx], minlength=n_classes)
        # a class stays viable while anything of it is uncovered: a rule
        # covering all of it always clears the floor (support_factor <= 1)
        viable = [
            c for c in range(n_classes) if uncovered_counts[c] > 0 and c not in retired
        ]
        if not viable:
            stop_reason = STOP_NO_VIABLE_CLASS
            break
        target = min(viable, key=lambda c: (-int(uncovered_counts[c]), c))
        iteration += 1
        assert iteration <= iteration_bound, "mining loop exceeded its iteration bound"

        sub = train.subset(uncovered_idx)
        swarm_config = replace(config.pso, seed=draw_seed())
        swarm = seed_swarm(network, target, config.min_represented, sub, swarm_config)
        candidate = evolve(swarm, sub, swarm_config)

        mask = match_mask(candidate.antecedent, sub.X, sub.layout)
        matched = int(np.count_nonzero(mask))
        correct_mask = mask & (sub.y == target)
        correct = int(np.count_nonzero(correct_mask))
        support_value = correct / len(sub)
        confidence_value = correct / matched if matched else 0.0
        # the floor and the gate share the full-training-size denominator, so
        # the gate reduces to: covered count >= support_factor * uncovered_c.
        # support_value itself is kept on the uncovered snapshot (same
        # denominator the recorded provenance and its re-verification use);
        # it always dominates correct / n, so the recorded support clears the
        # floor whenever the gate does.
        floor = min_support(int(uncovered_counts[target]), n, config.support_factor)
        emitted = (
            correct / n >= floor
            and confidence_value >= config.min_confidence
            and correct >= 1
        )
        swarm_logs.append(SwarmLog(iteration, target, list(swarm.trace), emitted))

        if emitted:
            rule = Rule(
                antecedent=candidate.antecedent,
                class_index=target,
                provenance=Provenance(
                    emission_order=len(rules) + 1,
                    support=support_value,
                    confidence=confidence_value,
                ),
            )
            rules.append(rule)
            records.append(
                RuleRecord(
                    rule=rule,
                    class_index=target,
                    support=support_value,
                    confidence=confidence_value,
                    covered_count=correct,
                    iteration=iteration,
                    uncovered_before=tuple(int(i) for i in uncovered_idx),
                )
            )
            uncovered[uncovered_idx[correct_mask]] = False
            consecutive_failures[target] = 0
        else:
            consecutive_failures[target] += 1
            failed_attempts[target] += 1
            if consecutive_failures[target] >= config.max_attempts_per_class:
                retired.add(target)

    residue_y = train.y[uncovered]
    default = choose_default_class(residue_y, total_counts)
    rule_list = RuleList(rules=tuple(rules), default_class=default)
    residue_counts = np.bincount(residue_y, minlength=n_classes)
    report = MiningReport(
        records=records,
        failed_attempts=failed_attempts,
        stop_reason=stop_reason,
        uncovered_residue={c: int(residue_counts[c]) for c in range(n_classes)},
        swarm_logs=swarm_logs,
        total_iterations=iteration,
        train_size=n,
        network=network,
    )
    return rule_list, report
