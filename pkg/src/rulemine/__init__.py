"""rulemine: ordered classification rules from mixed tabular data.

A prototype layer (supervised vector quantization) summarizes the training
data per class; a binary particle swarm seeded from those prototypes searches
for one high-confidence rule at a time; an iterative covering loop assembles
the results into an ordered rule list with a default class.
"""

from .errors import ConfigError, DataError, RulemineError, SchemaError
from .evaluation import (
    ConfusionMatrix,
    EvalReport,
    accuracy_from_matrix,
    evaluate,
    mine_greedy_baseline,
    type_i_error_from_matrix,
)
from .lvq import (
    Centroid,
    LvqConfig,
    LvqNetwork,
    allocate_per_class,
    fit_network,
    init_network,
    nearest_two,
)
from .lvq import train as train_network
from .miner import MinerConfig, MiningReport, RuleRecord, mine, min_support
from .model_io import ModelArtifact, load_model, save_model
from .pso import Particle, PsoConfig, Swarm, binarize, decode, evolve, fitness, seed_swarm, step
from .rules import (
    NominalMembership,
    NumericInterval,
    Provenance,
    Rule,
    RuleList,
    classify,
    classify_dataset,
    confidence,
    matches,
    render_rule,
    render_rule_list,
    support,
)
from .schema import (
    Attribute,
    AttributeSchema,
    EncodedDataset,
    RawDataset,
    encode,
    load_schema,
    parse_csv,
    save_schema,
    stratified_split,
)
from .synth import generate

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "AttributeSchema",
    "Centroid",
    "ConfigError",
    "ConfusionMatrix",
    "DataError",
    "EncodedDataset",
    "EvalReport",
    "LvqConfig",
    "LvqNetwork",
    "MinerConfig",
    "MiningReport",
    "ModelArtifact",
    "NominalMembership",
    "NumericInterval",
    "Particle",
    "Provenance",
    "PsoConfig",
    "RawDataset",
    "Rule",
    "RuleList",
    "RuleRecord",
    "RulemineError",
    "SchemaError",
    "Swarm",
    "accuracy_from_matrix",
    "allocate_per_class",
    "binarize",
    "classify",
    "classify_dataset",
    "confidence",
    "decode",
    "encode",
    "evaluate",
    "evolve",
    "fit_network",
    "fitness",
    "generate",
    "init_network",
    "load_model",
    "load_schema",
    "matches",
    "mine",
    "mine_greedy_baseline",
    "min_support",
    "nearest_two",
    "parse_csv",
    "render_rule",
    "render_rule_list",
    "save_model",
    "save_schema",
    "seed_swarm",
    "step",
    "stratified_split",
    "support",
    "train_network",
    "type_i_error_from_matrix",
]
