"""Rule representation and evaluation.

A rule is a conjunction of conditions over predictor attributes with a class
consequent. Conditions come in two shapes: a membership set over a nominal
attribute's values, or a closed interval on a numeric attribute's scaled
[0, 1] axis. An ordered rule list classifies by first match, falling back to
a default class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DataError
from .schema import (
    NOMINAL,
    AttributeSchema,
    ColumnLayout,
    EncodedDataset,
    layout_for,
    unscale_numeric,
)


@dataclass(frozen=True)
class NominalMembership:
    """The example's value for ``attribute`` must be one of ``allowed``."""

    attribute: str
    allowed: frozenset[str]

    def __post_init__(self) -> None:
        if not self.allowed:
            raise ValueError(f"empty membership set for {self.attribute!r}")


@dataclass(frozen=True)
class NumericInterval:
    """The example's scaled value for ``attribute`` must lie in [lo, hi]."""

    attribute: str
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lo <= self.hi <= 1.0:
            raise ValueError(
                f"interval for {self.attribute!r} must satisfy "
                f"0 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]"
            )


Condition = Union[NominalMembership, NumericInterval]


@dataclass(frozen=True)
class Provenance:
    """How a rule was produced: 1-based emission order and the support and
    confidence measured on the data it was mined from."""

    emission_order: int
    support: float
    confidence: float


@dataclass(frozen=True)
class Rule:
    antecedent: tuple[Condition, ...]
    class_index: int
    provenance: Provenance | None = None

    def __post_init__(self) -> None:
        names = [c.attribute for c in self.antecedent]
        if len(set(names)) != len(names):
            raise ValueError("a rule may carry at most one condition per attribute")

    def __len__(self) -> int:
        return len(self.antecedent)


@dataclass(frozen=True)
class RuleList:
    """Ordered rules plus the class assigned when nothing matches."""

    rules: tuple[Rule, ...]
    default_class: int

    def __len__(self) -> int:
        return len(self.rules)


def validate_rule(rule: Rule, schema: AttributeSchema) -> None:
    """Check a rule's conditions against a schema.

    Membership sets must be nonempty proper subsets of the declared values;
    interval conditions must target numeric attributes.
    """
    for cond in rule.antecedent:
        attr = schema.attribute(cond.attribute)
        if isinstance(cond, NominalMembership):
            if attr.kind != NOMINAL:
                raise ValueError(f"{cond.attribute!r} is not a nominal attribute")
            declared = set(attr.values)
            if not cond.allowed <= declared:
                raise ValueError(
                    f"membership set for {cond.attribute!r} uses undeclared values"
                )
            if cond.allowed == declared:
                raise ValueError(
                    f"membership set for {cond.attribute!r} must be a proper subset"
                )
        else:
            if attr.kind == NOMINAL:
                raise ValueError(f"{cond.attribute!r} is not a numeric attribute")
    if not 0 <= rule.class_index < len(schema.class_labels):
        raise ValueError(f"class index {rule.class_index} out of range")


def match_mask(
    conditions: Sequence[Condition], X: np.ndarray, layout: ColumnLayout
) -> np.ndarray:
    """Boolean mask of rows matching every condition (vectorized)."""
    mask = np.ones(X.shape[0], dtype=bool)
    for cond in conditions:
        if isinstance(cond, NominalMembership):
            attr = layout.schema.attribute(cond.attribute)
            cols = layout.nominal_columns(cond.attribute)
            picked = [cols.start + i for i, v in enumerate(attr.values) if v in cond.allowed]
            mask &= X[:, picked].sum(axis=1) > 0.5
        else:
            col = layout.numeric_column(cond.attribute)
            values = X[:, col]
            mask &= (values >= cond.lo) & (values <= cond.hi)
    return mask


def matches(rule: Rule, x: np.ndarray, layout: ColumnLayout) -> bool:
    """Does a single encoded example satisfy the rule's antecedent?"""
    return bool(match_mask(rule.antecedent, x.reshape(1, -1), layout)[0])


def support(rule: Rule, data: EncodedDataset) -> float:
    """Fraction of the dataset matched by the rule and carrying its class."""
    if len(data) == 0:
        raise DataError("support is undefined on an empty dataset")
    mask = match_mask(rule.antecedent, data.X, data.layout)
    correct = int(np.count_nonzero(mask & (data.y == rule.class_index)))
    return correct / len(data)


def confidence(rule: Rule, data: EncodedDataset) -> float:
    """Fraction of matched examples carrying the rule's class; 0.0 if none match."""
    if len(data) == 0:
        raise DataError("confidence is undefined on an empty dataset")
    mask = match_mask(rule.antecedent, data.X, data.layout)
    matched = int(np.count_nonzero(mask))
    if matched == 0:
        return 0.0
    correct = int(np.count_nonzero(mask & (data.y == rule.class_index)))
    return correct / matched


def classify(
    rule_list: RuleList, x: np.ndarray, layout: ColumnLayout
) -> tuple[int, int | None]:
    """First-match classification of one encoded example.

    Returns (class index, 1-based index of the rule that fired); the index is
    None when the default class answered.
    """
    for i, rule in enumerate(rule_list.rules, start=1):
        if matches(rule, x, layout):
            return rule.class_index, i
    return rule_list.default_class, None


def classify_dataset(
    rule_list: RuleList, data: EncodedDataset
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized first-match classification of a whole dataset.

    Returns (predicted class per row, fired rule per row) where fired is the
    1-based rule index or 0 for the default class.
    """
    n = len(data)
    fired = np.zeros(n, dtype=np.int64)
    predicted = np.full(n, rule_list.default_class, dtype=np.int64)
    undecided = np.ones(n, dtype=bool)
    for i, rule in enumerate(rule_list.rules, start=1):
        if not undecided.any():
            break
        mask = match_mask(rule.antecedent, data.X, data.layout) & undecided
        predicted[mask] = rule.class_index
        fired[mask] = i
        undecided &= ~mask
    return predicted, fired


def choose_default_class(
    uncovered_y: np.ndarray, total_counts: np.ndarray
) -> int:
    """Majority class of the uncovered residue.

    Ties break toward the globally most frequent class, then the lowest class
    index. An empty residue degenerates to the global majority.
    """
    n_classes = total_counts.shape[0]
    residue = np.bincount(uncovered_y, minlength=n_classes)
    return min(
        range(n_classes),
        key=lambda c: (-int(residue[c]), -int(total_counts[c]), c),
    )


def _format_bound(value: float) -> str:
    return f"{value:.2f}"


def render_condition(
    cond: Condition,
    schema: AttributeSchema,
    numeric_ranges: Mapping[str, tuple[float, float]],
) -> str:
    if isinstance(cond, NominalMembership):
        attr = schema.attribute(cond.attribute)
        ordered = [v for v in attr.values if v in cond.allowed]
        return f"{cond.attribute} IN {{{', '.join(ordered)}}}"
    lo, hi = numeric_ranges[cond.attribute]
    a = unscale_numeric(cond.lo, lo, hi)
    b = unscale_numeric(cond.hi, lo, hi)
    return f"{cond.attribute} IN [{_format_bound(a)}, {_format_bound(b)}]"


def render_rule(
    rule: Rule,
    schema: AttributeSchema,
    numeric_ranges: Mapping[str, tuple[float, float]],
) -> str:
    """Human-readable rule text with numeric bounds mapped back to the
    original (unscaled) attribute ranges."""
    if rule.antecedent:
        body = " AND ".join(
            render_condition(c, schema, numeric_ranges) for c in rule.antecedent
        )
    else:
        body = "TRUE"
    label = schema.class_labels[rule.class_index]
    return f"IF {body} THEN {schema.class_attribute} = {label}"


def render_rule_list(
    rule_list: RuleList,
    schema: AttributeSchema,
    numeric_ranges: Mapping[str, tuple[float, float]],
) -> str:
    lines = [
        f"{i}. {render_rule(rule, schema, numeric_ranges)}"
        for i, rule in enumerate(rule_list.rules, start=1)
    ]
    label = schema.class_labels[rule_list.default_class]
    lines.append(f"DEFAULT {schema.class_attribute} = {label}")
    return "\n".join(lines)


def condition_to_dict(cond: Condition, schema: AttributeSchema) -> dict:
    if isinstance(cond, NominalMembership):
        attr = schema.attribute(cond.attribute)
        ordered = [v for v in attr.values if v in cond.allowed]
        return {"kind": "membership", "attribute": cond.attribute, "allowed": ordered}
    return {
        "kind": "interval",
        "attribute": cond.attribute,
        "lo": cond.lo,
        "hi": cond.hi,
    }


def condition_from_dict(doc: Mapping) -> Condition:
    kind = doc.get("kind")
    if kind == "membership":
        return NominalMembership(doc["attribute"], frozenset(doc["allowed"]))
    if kind == "interval":
        return NumericInterval(doc["attribute"], float(doc["lo"]), float(doc["hi"]))
    raise DataError(f"unknown condition kind {kind!r}")


def rule_to_dict(rule: Rule, schema: AttributeSchema) -> dict:
    doc: dict = {
        "antecedent": [condition_to_dict(c, schema) for c in rule.antecedent],
        "class_index": rule.class_index,
    }
    if rule.provenance is not None:
        doc["provenance"] = {
            "emission_order": rule.provenance.emission_order,
            "support": rule.provenance.support,
            "confidence": rule.provenance.confidence,
        }
    return doc


def rule_from_dict(doc: Mapping, schema: AttributeSchema) -> Rule:
    antecedent = tuple(condition_from_dict(c) for c in doc["antecedent"])
    prov = None
    if "provenance" in doc and doc["provenance"] is not None:
        p = doc["provenance"]
        prov = Provenance(
            emission_order=int(p["emission_order"]),
            support=float(p["support"]),
            confidence=float(p["confidence"]),
        )
    rule = Rule(antecedent=antecedent, class_index=int(doc["class_index"]), provenance=prov)
    try:
        validate_rule(rule, schema)
    except ValueError as exc:
        raise DataError(f"invalid rule in document: {exc}") from exc
    return rule


def rule_list_to_dict(rule_list: RuleList, schema: AttributeSchema) -> dict:
    return {
        "rules": [rule_to_dict(r, schema) for r in rule_list.rules],
        "default_class": rule_list.default_class,
    }


def rule_list_from_dict(doc: Mapping, schema: AttributeSchema) -> RuleList:
    rules = tuple(rule_from_dict(r, schema) for r in doc["rules"])
    try:
        default = int(doc["default_class"])
    except (TypeError, ValueError) as exc:
        raise DataError(f"default class {doc['default_class']!r} is not an index") from exc
    if not 0 <= default < len(schema.class_labels):
        raise DataError(f"default class index {default} out of range")
    return RuleList(rules=rules, default_class=default)
