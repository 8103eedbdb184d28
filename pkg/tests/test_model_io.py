import json

import numpy as np
import pytest

from rulemine.errors import DataError
from rulemine.evaluation import evaluate
from rulemine.miner import MinerConfig, mine
from rulemine.lvq import LvqConfig
from rulemine.model_io import (
    FORMAT_VERSION,
    ModelArtifact,
    load_model,
    model_to_dict,
    save_model,
)
from rulemine.pso import PsoConfig
from rulemine.schema import encode, stratified_split
from rulemine.synth import generate


@pytest.fixture(scope="module")
def trained():
    data = encode(generate("separable", 200, 7).to_raw())
    train, test = stratified_split(data, 0.3, seed=0)
    config = MinerConfig(
        seed=3,
        lvq=LvqConfig(centroid_count=6, max_epochs=15),
        pso=PsoConfig(swarm_size=10, max_iterations=25, stagnation_limit=10),
    )
    rule_list, report = mine(train, config)
    artifact = ModelArtifact(
        schema=data.schema,
        numeric_ranges=dict(data.numeric_ranges),
        network=report.network,
        rule_list=rule_list,
        miner_config=config,
        seed=config.seed,
    )
    return artifact, test


class TestRoundTrip:
    def test_evaluation_is_identical_after_reload(self, trained, tmp_path):
        artifact, test = trained
        path = tmp_path / "model.json"
        save_model(artifact, path)
        loaded = load_model(path)
        before = evaluate(artifact.rule_list, test)
        after = evaluate(loaded.rule_list, test)
        assert np.array_equal(before.confusion.counts, after.confusion.counts)
        assert before.accuracy == after.accuracy
        assert before.type_i_error == after.type_i_error
        assert before.rule_fire_counts == after.rule_fire_counts
        assert before.default_fire_count == after.default_fire_count

    def test_every_field_survives(self, trained, tmp_path):
        artifact, _ = trained
        path = tmp_path / "model.json"
        save_model(artifact, path)
        loaded = load_model(path)
        assert loaded.schema == artifact.schema
        assert loaded.numeric_ranges == artifact.numeric_ranges
        assert loaded.rule_list == artifact.rule_list
        assert loaded.miner_config == artifact.miner_config
        assert loaded.seed == artifact.seed

    def test_network_positions_bit_exact(self, trained, tmp_path):
        artifact, _ = trained
        path = tmp_path / "model.json"
        save_model(artifact, path)
        loaded = load_model(path)
        assert len(loaded.network.centroids) == len(artifact.network.centroids)
        for a, b in zip(artifact.network.centroids, loaded.network.centroids):
            assert np.array_equal(a.position, b.position)
            assert np.array_equal(a.deviation, b.deviation)
            assert a.class_index == b.class_index
            assert a.represented_count == b.represented_count
        assert loaded.network.allocation == artifact.network.allocation

    def test_saving_twice_is_byte_identical(self, trained, tmp_path):
        artifact, _ = trained
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_model(artifact, p1)
        save_model(artifact, p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestValidation:
    def _doc(self, trained):
        artifact, _ = trained
        return model_to_dict(artifact)

    def test_document_carries_version(self, trained):
        doc = self._doc(trained)
        assert doc["format_version"] == FORMAT_VERSION
        json.dumps(doc)  # plain JSON types only

    def test_version_mismatch_rejected(self, trained, tmp_path):
        doc = self._doc(trained)
        doc["format_version"] = FORMAT_VERSION + 1
        path = tmp_path / "model.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(DataError, match="version"):
            load_model(path)

    @pytest.mark.parametrize(
        "key", ["schema", "numeric_ranges", "miner_config", "network", "rule_list", "seed"]
    )
    def test_missing_section_rejected(self, trained, tmp_path, key):
        doc = self._doc(trained)
        del doc[key]
        path = tmp_path / "model.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(DataError, match=key):
            load_model(path)

    def test_ranges_must_match_schema(self, trained, tmp_path):
        doc = self._doc(trained)
        doc["numeric_ranges"]["bogus"] = [0.0, 1.0]
        path = tmp_path / "model.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(DataError, match="numeric_ranges"):
            load_model(path)

    def test_dropped_range_rejected(self, trained, tmp_path):
        doc = self._doc(trained)
        doc["numeric_ranges"].pop("x1")
        path = tmp_path / "model.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(DataError):
            load_model(path)

    def test_unreadable_and_malformed_files(self, tmp_path):
        with pytest.raises(DataError, match="cannot read"):
            load_model(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(DataError, match="JSON"):
            load_model(bad)

    def test_non_object_document_rejected(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(DataError):
            load_model(path)
