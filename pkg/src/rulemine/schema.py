"""Schema-driven ingestion: CSV parsing, dummy coding, scaling, splitting.

A dataset is described by an attribute schema: an ordered list of predictor
attributes (nominal ones declare their value set, numeric ones do not) plus a
class attribute with its label set. Encoding dummy-codes every nominal value
into its own 0/1 column and min-max scales every numeric attribute into
[0, 1], so each encoded example lives in the unit hypercube and one Euclidean
metric works across mixed attribute kinds.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, DataError, SchemaError

NOMINAL = "nominal"
NUMERIC = "numeric"


@dataclass(frozen=True)
class Attribute:
    """One predictor column: ``kind`` is ``"nominal"`` or ``"numeric"``.

    Nominal attributes carry their declared value set in declaration order;
    numeric attributes leave ``values`` empty.
    """

    name: str
    kind: str
    values: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in (NOMINAL, NUMERIC):
            raise SchemaError(f"attribute {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == NOMINAL:
            if len(self.values) < 2:
                raise SchemaError(
                    f"nominal attribute {self.name!r} must declare at least 2 values"
                )
            if len(set(self.values)) != len(self.values):
                raise SchemaError(f"nominal attribute {self.name!r} repeats a value")
        elif self.values:
            raise SchemaError(f"numeric attribute {self.name!r} must not declare values")


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered predictor attributes plus the class attribute and its labels."""

    attributes: tuple[Attribute, ...]
    class_attribute: str
    class_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.attributes:
            raise SchemaError("schema declares no predictor attributes")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise SchemaError("attribute names must be unique")
        if self.class_attribute in names:
            raise SchemaError(
                f"class attribute {self.class_attribute!r} also appears as a predictor"
            )
        if len(self.class_labels) < 2:
            raise SchemaError("schema must declare at least 2 class labels")
        if len(set(self.class_labels)) != len(self.class_labels):
            raise SchemaError("class labels must be unique")

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    @property
    def nominal_attributes(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes if a.kind == NOMINAL)

    @property
    def numeric_attributes(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes if a.kind == NUMERIC)

    def attribute(self, name: str) -> Attribute:
        for a in self.attributes:
            if a.name == name:
                return a
        raise SchemaError(f"unknown attribute {name!r}")

    def class_index(self, label: str) -> int:
        try:
            return self.class_labels.index(label)
        except ValueError:
            raise DataError(f"unknown class label {label!r}") from None

    def to_dict(self) -> dict:
        entries = []
        for a in self.attributes:
            entry: dict = {"name": a.name, "kind": a.kind}
            if a.kind == NOMINAL:
                entry["values"] = list(a.values)
            entries.append(entry)
        return {
            "attributes": entries,
            "class_attribute": self.class_attribute,
            "class_labels": list(self.class_labels),
        }

    @staticmethod
    def from_dict(doc: Mapping) -> "AttributeSchema":
        required = {"attributes", "class_attribute", "class_labels"}
        if not isinstance(doc, Mapping):
            raise SchemaError("schema document must be a JSON object")
        missing = required - set(doc)
        if missing:
            raise SchemaError(f"schema document missing key {sorted(missing)[0]!r}")
        extra = set(doc) - required
        if extra:
            raise SchemaError(f"schema document has unknown key {sorted(extra)[0]!r}")
        raw_attrs = doc["attributes"]
        if not isinstance(raw_attrs, Sequence) or isinstance(raw_attrs, (str, bytes)):
            raise SchemaError("'attributes' must be a list")
        attrs = []
        for entry in raw_attrs:
            if not isinstance(entry, Mapping):
                raise SchemaError("each attribute entry must be a JSON object")
            allowed = {"name", "kind", "values"}
            unknown = set(entry) - allowed
            if unknown:
                raise SchemaError(
                    f"attribute entry has unknown key {sorted(unknown)[0]!r}"
                )
            if "name" not in entry or "kind" not in entry:
                raise SchemaError("attribute entry needs 'name' and 'kind'")
            values = tuple(entry.get("values", ()))
            attrs.append(Attribute(str(entry["name"]), str(entry["kind"]), values))
        labels = doc["class_labels"]
        if not isinstance(labels, Sequence) or isinstance(labels, (str, bytes)):
            raise SchemaError("'class_labels' must be a list")
        return AttributeSchema(
            attributes=tuple(attrs),
            class_attribute=str(doc["class_attribute"]),
            class_labels=tuple(str(v) for v in labels),
        )


def load_schema(path: str | Path) -> AttributeSchema:
    """Read a schema JSON document from disk."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read schema file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"schema file is not valid JSON: {exc}") from exc
    return AttributeSchema.from_dict(doc)


def save_schema(schema: AttributeSchema, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(schema.to_dict(), fh, indent=2)
        fh.write("\n")


@dataclass
class RawDataset:
    """Validated but unencoded rows; values are still strings."""

    schema: AttributeSchema
    rows: list[tuple[str, ...]]
    classes: list[str]

    def __len__(self) -> int:
        return len(self.rows)


class ColumnLayout:
    """Mapping between schema attributes and encoded column indices."""

    def __init__(self, schema: AttributeSchema) -> None:
        columns: list[tuple[str, str | None]] = []
        self._nominal_start: dict[str, int] = {}
        self._numeric_col: dict[str, int] = {}
        for a in schema.attributes:
            if a.kind == NOMINAL:
                self._nominal_start[a.name] = len(columns)
                columns.extend((a.name, v) for v in a.values)
            else:
                self._numeric_col[a.name] = len(columns)
                columns.append((a.name, None))
        self.schema = schema
        self.columns: tuple[tuple[str, str | None], ...] = tuple(columns)
        self.dimension = len(columns)
        self.numeric_names = tuple(a.name for a in schema.numeric_attributes)

    def nominal_columns(self, name: str) -> range:
        start = self._nominal_start[name]
        return range(start, start + len(self.schema.attribute(name).values))

    def numeric_column(self, name: str) -> int:
        return self._numeric_col[name]


@lru_cache(maxsize=None)
def layout_for(schema: AttributeSchema) -> ColumnLayout:
    return ColumnLayout(schema)


@dataclass
class EncodedDataset:
    """Dummy-coded, min-max scaled examples in [0, 1]^d with class indices."""

    schema: AttributeSchema
    X: np.ndarray
    y: np.ndarray
    column_map: tuple[tuple[str, str | None], ...]
    numeric_ranges: dict[str, tuple[float, float]]

    def __len__(self) -> int:
        return int(self.X.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.X.shape[1])

    @property
    def layout(self) -> ColumnLayout:
        return layout_for(self.schema)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=len(self.schema.class_labels))

    def subset(self, indices: np.ndarray) -> "EncodedDataset":
        """View the same encoding restricted to the given example indices."""
        return EncodedDataset(
            schema=self.schema,
            X=self.X[indices],
            y=self.y[indices],
            column_map=self.column_map,
            numeric_ranges=self.numeric_ranges,
        )


def coerce_row(
    schema: AttributeSchema, record: Mapping[str, str], row_number: int
) -> tuple[str, ...]:
    """Validate one record against the schema's predictor attributes.

    ``row_number`` is the 1-based data row used in error messages. Missing
    values (empty fields) are rejected here rather than silently imputed.
    """
    out = []
    for a in schema.attributes:
        value = record[a.name].strip()
        if value == "":
            raise DataError(f"row {row_number}: missing value for {a.name!r}")
        if a.kind == NOMINAL:
            if value not in a.values:
                raise DataError(
                    f"row {row_number}: value {value!r} not declared for "
                    f"nominal attribute {a.name!r}"
                )
        else:
            try:
                parsed = float(value)
            except ValueError:
                raise DataError(
                    f"row {row_number}: cannot parse {value!r} as numeric "
                    f"for attribute {a.name!r}"
                ) from None
            if not math.isfinite(parsed):
                raise DataError(
                    f"row {row_number}: non-finite numeric value for {a.name!r}"
                )
        out.append(value)
    return tuple(out)


def _open_csv(source) -> Iterable[list[str]]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            yield from csv.reader(fh)
    elif isinstance(source, io.TextIOBase):
        yield from csv.reader(source)
    else:
        yield from csv.reader(source)


def read_header(header: list[str], schema: AttributeSchema, require_class: bool):
    """Match a CSV header against the schema, order-insensitively.

    Returns (column position per predictor attribute, class column or None).
    """
    names = [h.strip() for h in header]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise SchemaError(f"duplicate column {dup!r} in header")
    positions: dict[str, int] = {n: i for i, n in enumerate(names)}
    expected = set(schema.attribute_names)
    for name in schema.attribute_names:
        if name not in positions:
            raise SchemaError(f"missing column {name!r}")
    class_pos = positions.get(schema.class_attribute)
    if require_class and class_pos is None:
        raise SchemaError(f"missing column {schema.class_attribute!r}")
    allowed = expected | {schema.class_attribute}
    for name in names:
        if name not in allowed:
            raise SchemaError(f"unexpected column {name!r}")
    return {n: positions[n] for n in schema.attribute_names}, class_pos


def parse_csv(source, schema: AttributeSchema, require_class: bool = True) -> RawDataset:
    """Parse a header-first CSV into a validated RawDataset.

    Header names must match the schema (order-insensitive). Every value is
    checked: undeclared nominal values, unparsable numerics, and missing
    fields raise DataError naming the offending 1-based data row.
    """
    reader = _open_csv(source)
    try:
        header = next(iter(reader))
    except StopIteration:
        raise SchemaError("CSV is empty (no header row)") from None
    predictor_pos, class_pos = read_header(header, schema, require_class)
    width = len(header)

    rows: list[tuple[str, ...]] = []
    classes: list[str] = []
    for row_number, fields in enumerate(reader, start=1):
        if not fields:
            continue
        if len(fields) != width:
            raise DataError(
                f"row {row_number}: expected {width} fields, found {len(fields)}"
            )
        record = {name: fields[pos] for name, pos in predictor_pos.items()}
        rows.append(coerce_row(schema, record, row_number))
        if class_pos is not None:
            label = fields[class_pos].strip()
            if label not in schema.class_labels:
                raise DataError(
                    f"row {row_number}: class label {label!r} is not declared"
                )
            classes.append(label)
    if class_pos is None:
        classes = []
    return RawDataset(schema=schema, rows=rows, classes=classes)


def numeric_ranges_of(raw: RawDataset) -> dict[str, tuple[float, float]]:
    """Observed (min, max) per numeric attribute."""
    ranges: dict[str, tuple[float, float]] = {}
    for a in raw.schema.numeric_attributes:
        pos = raw.schema.attribute_names.index(a.name)
        values = [float(r[pos]) for r in raw.rows]
        if not values:
            raise DataError("cannot compute numeric ranges of an empty dataset")
        ranges[a.name] = (min(values), max(values))
    return ranges


def scale_numeric(value: float, lo: float, hi: float) -> float:
    """Min-max scale into [0, 1], clamping out-of-range values.

    A constant training column (lo == hi) maps everything to 0.0.
    """
    if hi <= lo:
        return 0.0
    return min(1.0, max(0.0, (value - lo) / (hi - lo)))


def unscale_numeric(scaled: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return lo
    return lo + scaled * (hi - lo)


def encode_row(
    schema: AttributeSchema,
    numeric_ranges: Mapping[str, tuple[float, float]],
    row: Sequence[str],
) -> np.ndarray:
    layout = layout_for(schema)
    x = np.zeros(layout.dimension, dtype=np.float64)
    for a, value in zip(schema.attributes, row):
        if a.kind == NOMINAL:
            start = layout.nominal_columns(a.name).start
            x[start + a.values.index(value)] = 1.0
        else:
            lo, hi = numeric_ranges[a.name]
            x[layout.numeric_column(a.name)] = scale_numeric(float(value), lo, hi)
    return x


def encode(
    raw: RawDataset,
    ranges_from: RawDataset | Mapping[str, tuple[float, float]] | None = None,
) -> EncodedDataset:
    """Dummy-code and scale a RawDataset.

    Scaling ranges come from ``ranges_from`` when given (either another
    dataset or precomputed {attribute: (min, max)} ranges, so that test data
    reuses training ranges and out-of-range values clamp to the [0, 1]
    boundary), otherwise from ``raw`` itself.
    """
    if len(raw) == 0:
        raise DataError("cannot encode an empty dataset")
    if len(raw.classes) != len(raw.rows):
        raise DataError("dataset rows are missing class labels")
    layout = layout_for(raw.schema)
    if ranges_from is None:
        ranges = numeric_ranges_of(raw)
    elif isinstance(ranges_from, RawDataset):
        ranges = numeric_ranges_of(ranges_from)
    else:
        ranges = {name: (float(lo), float(hi)) for name, (lo, hi) in ranges_from.items()}
    X = np.empty((len(raw), layout.dimension), dtype=np.float64)
    for i, row in enumerate(raw.rows):
        X[i] = encode_row(raw.schema, ranges, row)
    y = np.array([raw.schema.class_index(c) for c in raw.classes], dtype=np.int64)
    return EncodedDataset(
        schema=raw.schema,
        X=X,
        y=y,
        column_map=layout.columns,
        numeric_ranges=ranges,
    )


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def stratified_split(
    data: EncodedDataset, test_fraction: float, seed: int
) -> tuple[EncodedDataset, EncodedDataset]:
    """Split into (train, test) preserving class proportions.

    Per-class test counts are round(test_fraction * class size) clamped so
    every class appears on both sides; the result is deterministic for a
    given seed. Classes with fewer than 2 examples cannot be split.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if len(data) == 0:
        raise DataError("cannot split an empty dataset")
    rng = np.random.default_rng(seed)
    test_idx: list[np.ndarray] = []
    train_idx: list[np.ndarray] = []
    for c in range(len(data.schema.class_labels)):
        members = np.flatnonzero(data.y == c)
        if members.size == 0:
            continue
        if members.size < 2:
            raise DataError(
                f"class {data.schema.class_labels[c]!r} has fewer than 2 examples; "
                "cannot stratify"
            )
        want = _round_half_up(test_fraction * members.size)
        want = min(max(want, 1), members.size - 1)
        order = rng.permutation(members.size)
        test_idx.append(members[order[:want]])
        train_idx.append(members[order[want:]])
    test_rows = np.sort(np.concatenate(test_idx))
    train_rows = np.sort(np.concatenate(train_idx))
    return data.subset(train_rows), data.subset(test_rows)
