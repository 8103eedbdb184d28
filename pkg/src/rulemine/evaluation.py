"""Decision-list evaluation and a deterministic greedy covering baseline.

Confusion matrices here are oriented rows = predicted class, columns =
actual class. The headline accuracy is the diagonal mass over the total;
the type I error is the mass predicted away from the designated positive
class while the true class was positive, over the total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .rules import (
    NominalMembership,
    NumericInterval,
    Provenance,
    Rule,
    RuleList,
    choose_default_class,
    classify_dataset,
)
from .schema import EncodedDataset


@dataclass
class ConfusionMatrix:
    """Square matrix of prediction/actual mass; float so that averaged
    matrices (e.g. cross-validation means) work too."""

    counts: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.float64)
        if self.counts.ndim != 2 or self.counts.shape[0] != self.counts.shape[1]:
            raise DataError("confusion matrix must be square")
        if self.counts.shape[0] != len(self.labels):
            raise DataError("confusion matrix size must match the label count")

    @property
    def total(self) -> float:
        return float(self.counts.sum())


def accuracy_from_matrix(matrix: ConfusionMatrix) -> float:
    """Diagonal mass over total mass, as a ratio in [0, 1]."""
    total = matrix.total
    if total <= 0:
        raise DataError("confusion matrix is empty")
    return float(np.trace(matrix.counts)) / total

def type_i_error_from_matrix(matrix: ConfusionMatrix, positive_class: int) -> float:
    """Mass with actual class = positive but predicted otherwise, over total."""
    total = matrix.total
    if total <= 0:
        raise DataError("confusion matrix is empty")
    if not 0 <= positive_class < len(matrix.labels):
        raise DataError(f"positive class index {positive_class} out of range")
    column = float(matrix.counts[:, positive_class].sum())
    hit = float(matrix.counts[positive_class, positive_class])
    return (column - hit) / total


@dataclass
class EvalReport:
    confusion: ConfusionMatrix
    accuracy: float
    type_i_error: float
    rule_count: int
    mean_antecedent_length: float
    rule_fire_counts: list[int]
    default_fire_count: int
    positive_class: int

    @property
    def accuracy_percent(self) -> float:
        return 100.0 * self.accuracy

    def to_dict(self) -> dict:
        return {
            "confusion": {
                "labels": list(self.confusion.labels),
                "counts": self.confusion.counts.tolist(),
            },
            "accuracy": self.accuracy,
            "accuracy_percent": self.accuracy_percent,
            "type_i_error": self.type_i_error,
            "rule_count": self.rule_count,
            "mean_antecedent_length": self.mean_antecedent_length,
            "rule_fire_counts": self.rule_fire_counts,
            "default_fire_count": self.default_fire_count,
            "positive_class": self.confusion.labels[self.positive_class],
        }

    def format_table(self) -> str:
        labels = self.confusion.labels
        width = max(14, max(len(l) for l in labels) + 2)

        def cell(value: float) -> str:
            text = f"{value:.2f}".rstrip("0").rstrip(".")
            return f"{text:>{width}}"

        lines = []
        corner = "pred / actual"
        header = f"{corner:<{width}}" + "".join(f"{l:>{width}}" for l in labels)
        lines.append(header)
        for i, label in enumerate(labels):
            row = f"{label:<{width}}" + "".join(cell(v) for v in self.confusion.counts[i])
            lines.append(row)
        lines.append("")
        lines.append(f"{'accuracy (%)':<22}{self.accuracy_percent:.2f}")
        lines.append(f"{'type I error':<22}{self.type_i_error:.2f}")
        lines.append(f"{'rules':<22}{self.rule_count}")
        lines.append(f"{'mean antecedent':<22}{self.mean_antecedent_length:.2f}")
        return "\n".join(lines)


def evaluate(
    rule_list: RuleList, test: EncodedDataset, positive_class: int = 1
) -> EvalReport:
    """Score a rule list on labeled data."""
    if len(test) == 0:
        raise DataError("cannot evaluate on an empty dataset")
    labels = test.schema.class_labels
    n_classes = len(labels)
    predicted, fired = classify_dataset(rule_list, test)
    counts = np.zeros((n_classes, n_classes), dtype=np.float64)
    np.add.at(counts, (predicted, test.y), 1.0)
    matrix = ConfusionMatrix(counts=counts, labels=labels)
    fire_counts = np.bincount(fired, minlength=len(rule_list.rules) + 1)
    rule_count = len(rule_list.rules)
    mean_len = (
        float(np.mean([len(r.antecedent) for r in rule_list.rules]))
        if rule_list.rules
        else 0.0
    )
    return EvalReport(
        confusion=matrix,
        accuracy=accuracy_from_matrix(matrix),
        type_i_error=type_i_error_from_matrix(matrix, positive_class),
        rule_count=rule_count,
        mean_antecedent_length=mean_len,
        rule_fire_counts=[int(c) for c in fire_counts[1:]],
        default_fire_count=int(fire_counts[0]),
        positive_class=positive_class,
    )


def _best_numeric_condition(
    sub: EncodedDataset,
    cur_mask: np.ndarray,
    target: int,
    attribute: str,
):
    """Best (confidence, support, condition, mask) numeric split.

    Split points are midpoints between consecutive distinct values of the
    currently matched rows; both directions (<= mid and >= mid) compete.
    """
    layout = sub.layout
    col = layout.numeric_column(attribute)
    rows = np.flatnonzero(cur_mask)
    values = sub.X[rows, col]
    correct = (sub.y[rows] == target).astype(np.float64)
    order = np.argsort(values, kind="stable")
    values = values[order]
    correct = correct[order]
    distinct_end = np.flatnonzero(values[:-1] < values[1:])
    if distinct_end.size == 0:
        return None
    mids = 0.5 * (values[distinct_end] + values[distinct_end + 1])
    cum_correct = np.cumsum(correct)
    total_correct = cum_correct[-1]
    m = len(rows)
    best = None
    for direction in ("le", "ge"):
        if direction == "le":
            matched = (distinct_end + 1).astype(np.float64)
            good = cum_correct[distinct_end]
        else:
            matched = (m - distinct_end - 1).astype(np.float64)
            good = total_correct - cum_correct[distinct_end]
        conf = np.divide(good, matched, out=np.zeros_like(good), where=matched > 0)
        supp = good / len(sub)
        top_conf = conf.max()
        tied = np.flatnonzero(conf == top_conf)
        pick = tied[np.argmax(supp[tied])]
        key = (float(conf[pick]), float(supp[pick]))
        if best is None or key > best[0]:
            if direction == "le":
                cond = NumericInterval(attribute, 0.0, float(mids[pick]))
            else:
                cond = NumericInterval(attribute, float(mids[pick]), 1.0)
            best = (key, cond)
    if best is None:
        return None
    key, cond = best
    full_values = sub.X[:, col]
    mask = cur_mask & (full_values >= cond.lo) & (full_values <= cond.hi)
    return key[0], key[1], cond, mask


def mine_greedy_baseline(
    train: EncodedDataset, min_confidence: float = 0.6
) -> RuleList:
    """Separate-and-conquer baseline with single-value nominal conditions.

    Repeatedly grows one rule for the class with the most uncovered examples
    by adding, each step, the condition that maximizes confidence then
    support; growth stops at the confidence threshold or when no candidate
    improves. Every rule carries at least one condition (a bare always-true
    rule would swallow the remaining data in one bite and say nothing).
    Matched and correctly classified examples are removed; mining stops when
    no grown rule covers at least one example.
    """
    if len(train) == 0:
        raise DataError("cannot mine an empty dataset")
    layout = train.layout
    schema = train.schema
    n_classes = len(schema.class_labels)
    total_counts = np.bincount(train.y, minlength=n_classes)
    uncovered = np.ones(len(train), dtype=bool)
    rules: list[Rule] = []

    while uncovered.any():
        uncovered_idx = np.flatnonzero(uncovered)
        sub = train.subset(uncovered_idx)
        counts = np.bincount(sub.y, minlength=n_classes)
        target = min(
            (c for c in range(n_classes) if counts[c] > 0),
            key=lambda c: (-int(counts[c]), c),
        )
        cur_mask = np.ones(len(sub), dtype=bool)
        cur_correct = int(np.count_nonzero(sub.y == target))
        cur_conf = cur_correct / len(sub)
        cur_supp = cur_correct / len(sub)
        conditions: list = []
        used: set[str] = set()

        while not conditions or cur_conf < min_confidence:
            # the first condition is unconditional; later ones must improve
            best_key = (cur_conf, cur_supp) if conditions else (-1.0, -1.0)
            best_cond = None
            best_mask = None
            for attr in schema.attributes:
                if attr.name in used:
                    continue
                if attr.kind == "nominal":
                    cols = layout.nominal_columns(attr.name)
                    for offset, value in enumerate(attr.values):
                        mask = cur_mask & (sub.X[:, cols.start + offset] > 0.5)
                        matched = int(np.count_nonzero(mask))
                        good = int(np.count_nonzero(mask & (sub.y == target)))
                        conf = good / matched if matched else 0.0
                        supp = good / len(sub)
                        if (conf, supp) > best_key:
                            best_key = (conf, supp)
                            best_cond = NominalMembership(attr.name, frozenset({value}))
                            best_mask = mask
                else:
                    found = _best_numeric_condition(sub, cur_mask, target, attr.name)
                    if found is not None:
                        conf, supp, cond, mask = found
                        if (conf, supp) > best_key:
                            best_key = (conf, supp)
                            best_cond = cond
                            best_mask = mask
            if best_cond is None:
                break
            conditions.append(best_cond)
            used.add(best_cond.attribute)
            cur_mask = best_mask
            cur_conf, cur_supp = best_key

        if not conditions:
            # no condition can be formed at all (remaining rows are exact
            # duplicates on every attribute); leave them to the default class
            break
        correct_mask = cur_mask & (sub.y == target)
        covered = int(np.count_nonzero(correct_mask))
        if covered == 0:
            break
        rules.append(
            Rule(
                antecedent=tuple(conditions),
                class_index=target,
                provenance=Provenance(
                    emission_order=len(rules) + 1,
                    support=cur_supp,
                    confidence=cur_conf,
                ),
            )
        )
        uncovered[uncovered_idx[correct_mask]] = False

    default = choose_default_class(train.y[uncovered], total_counts)
    return RuleList(rules=tuple(rules), default_class=default)
