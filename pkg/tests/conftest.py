"""Shared builders for the test suite.

Most tests construct EncodedDataset values directly instead of going through
CSV parsing, so the fixtures here keep the column bookkeeping in one place.
"""

from __future__ import annotations

import numpy as np
import pytest

from rulemine.schema import Attribute, AttributeSchema, EncodedDataset


def build_encoded(schema: AttributeSchema, X, y) -> EncodedDataset:
    """Wrap raw arrays in an EncodedDataset with a consistent column_map."""
    column_map = []
    for attr in schema.attributes:
        if attr.kind == "nominal":
            column_map.extend((attr.name, v) for v in attr.values)
        else:
            column_map.append((attr.name, None))
    ranges = {a.name: (0.0, 1.0) for a in schema.attributes if a.kind == "numeric"}
    return EncodedDataset(
        schema=schema,
        X=np.asarray(X, dtype=np.float64),
        y=np.asarray(y, dtype=np.int64),
        column_map=tuple(column_map),
        numeric_ranges=ranges,
    )


@pytest.fixture
def credit_schema() -> AttributeSchema:
    # 1 nominal (3 values) + 2 numeric -> 5 encoded columns
    return AttributeSchema(
        attributes=(
            Attribute("marital_status", "nominal", ("single", "married", "divorced")),
            Attribute("salary", "numeric"),
            Attribute("age", "numeric"),
        ),
        class_attribute="status",
        class_labels=("Deny", "Accept"),
    )


@pytest.fixture
def numeric_schema() -> AttributeSchema:
    return AttributeSchema(
        attributes=(Attribute("x", "numeric"), Attribute("y", "numeric")),
        class_attribute="cls",
        class_labels=("neg", "pos"),
    )


def random_mixed_dataset(rng: np.random.Generator) -> EncodedDataset:
    """A small random dataset with loose structure, for stress/property tests.

    Labels follow the first numeric column with 15% noise so mining finds
    something, and every class is guaranteed at least two members.
    """
    attrs = []
    for i in range(int(rng.integers(0, 3))):
        k = int(rng.integers(2, 5))
        attrs.append(Attribute(f"nom{i}", "nominal", tuple(f"v{j}" for j in range(k))))
    for i in range(int(rng.integers(1, 4))):
        attrs.append(Attribute(f"num{i}", "numeric"))
    n_classes = int(rng.integers(2, 4))
    schema = AttributeSchema(
        attributes=tuple(attrs),
        class_attribute="cls",
        class_labels=tuple(f"c{j}" for j in range(n_classes)),
    )
    n = int(rng.integers(20, 201))
    cols = []
    for a in attrs:
        if a.kind == "nominal":
            pick = rng.integers(0, len(a.values), n)
            block = np.zeros((n, len(a.values)))
            block[np.arange(n), pick] = 1.0
            cols.append(block)
        else:
            cols.append(rng.uniform(0.0, 1.0, (n, 1)))
    X = np.hstack(cols)
    data = build_encoded(schema, X, np.zeros(n, dtype=np.int64))
    first_num = data.layout.numeric_column(
        next(a.name for a in attrs if a.kind == "numeric")
    )
    y = (X[:, first_num] * n_classes).astype(np.int64).clip(0, n_classes - 1)
    flip = rng.uniform(0.0, 1.0, n) < 0.15
    y[flip] = rng.integers(0, n_classes, int(flip.sum()))
    for c in range(n_classes):
        if (y == c).sum() < 2:
            y[rng.choice(n, 2, replace=False)] = c
    return build_encoded(schema, X, y)


def brute_force_counts(rule, data: EncodedDataset) -> tuple[int, int]:
    """Naive double-loop (matched, matched-and-correct) counts.

    Deliberately written without the vectorized matcher so the production
    code has an independent oracle to agree with.
    """
    layout = data.layout
    matched = correct = 0
    for i in range(len(data)):
        row_ok = True
        for cond in rule.antecedent:
            if hasattr(cond, "allowed"):
                active = None
                for j in layout.nominal_columns(cond.attribute):
                    if data.X[i, j] == 1.0:
                        active = layout.columns[j][1]
                        break
                if active not in cond.allowed:
                    row_ok = False
                    break
            else:
                v = data.X[i, layout.numeric_column(cond.attribute)]
                if not (cond.lo <= v <= cond.hi):
                    row_ok = False
                    break
        if row_ok:
            matched += 1
            if data.y[i] == rule.class_index:
                correct += 1
    return matched, correct
