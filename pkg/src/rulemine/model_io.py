"""Versioned JSON model artifacts.

A saved model is self-contained: schema, the numeric scaling ranges observed
at training time, the fitted centroid network, the mined rule list with
provenance, the mining configuration, and the seed. Floats serialize at full
repr precision, and nothing time- or host-dependent is written, so the same
training run always produces byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import DataError
from .lvq import Centroid, LvqNetwork
from .miner import MinerConfig
from .rules import RuleList, rule_list_from_dict, rule_list_to_dict
from .schema import AttributeSchema

FORMAT_VERSION = 1


@dataclass
class ModelArtifact:
    schema: AttributeSchema
    numeric_ranges: dict[str, tuple[float, float]]
    network: LvqNetwork
    rule_list: RuleList
    miner_config: MinerConfig
    seed: int


def _network_to_dict(network: LvqNetwork, schema: AttributeSchema) -> dict:
    labels = schema.class_labels
    return {
        "allocation": {labels[c]: n for c, n in sorted(network.allocation.items())},
        "centroids": [
            {
                "position": c.position.tolist(),
                "class": labels[c.class_index],
                "represented_count": c.represented_count,
                "deviation": c.deviation.tolist(),
            }
            for c in network.centroids
        ],
    }


def _network_from_dict(doc: Mapping, schema: AttributeSchema) -> LvqNetwork:
    label_index = {label: i for i, label in enumerate(schema.class_labels)}
    try:
        centroids = [
            Centroid(
                position=np.asarray(entry["position"], dtype=np.float64),
                class_index=label_index[entry["class"]],
                represented_count=int(entry["represented_count"]),
                deviation=np.asarray(entry["deviation"], dtype=np.float64),
            )
            for entry in doc["centroids"]
        ]
        allocation = {label_index[k]: int(v) for k, v in doc["allocation"].items()}
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed network section: {exc}") from exc
    return LvqNetwork(centroids=centroids, allocation=allocation)


def model_to_dict(artifact: ModelArtifact) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "seed": artifact.seed,
        "schema": artifact.schema.to_dict(),
        "numeric_ranges": {
            name: [lo, hi] for name, (lo, hi) in sorted(artifact.numeric_ranges.items())
        },
        "miner_config": artifact.miner_config.to_dict(),
        "network": _network_to_dict(artifact.network, artifact.schema),
        "rule_list": rule_list_to_dict(artifact.rule_list, artifact.schema),
    }


def model_from_dict(doc: Mapping) -> ModelArtifact:
    if not isinstance(doc, Mapping):
        raise DataError("model document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DataError(
            f"unsupported model format version {version!r}; expected {FORMAT_VERSION}"
        )
    for key in ("schema", "numeric_ranges", "miner_config", "network", "rule_list", "seed"):
        if key not in doc:
            raise DataError(f"model document missing key {key!r}")
    schema = AttributeSchema.from_dict(doc["schema"])
    ranges = {
        str(name): (float(pair[0]), float(pair[1]))
        for name, pair in doc["numeric_ranges"].items()
    }
    declared_numeric = {a.name for a in schema.numeric_attributes}
    if set(ranges) != declared_numeric:
        raise DataError("numeric_ranges do not match the schema's numeric attributes")
    return ModelArtifact(
        schema=schema,
        numeric_ranges=ranges,
        network=_network_from_dict(doc["network"], schema),
        rule_list=rule_list_from_dict(doc["rule_list"], schema),
        miner_config=MinerConfig.from_dict(dict(doc["miner_config"])),
        seed=int(doc["seed"]),
    )


def save_model(artifact: ModelArtifact, path: str | Path) -> None:
    text = json.dumps(model_to_dict(artifact), indent=2)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.write("\n")


def load_model(path: str | Path) -> ModelArtifact:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read model file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"model file is not valid JSON: {exc}") from exc
    return model_from_dict(doc)
