import os

import pytest

from analysis.pseudodisc import three_ray_construction
from broker import (
    ExperimentBroker,
    ExperimentSpec,
    InvariantViolationException,
    load_instance_file,
)
from config import ConfigProvider
from db.entity import Pipeline
from geometry.core import LineSet, PointSet
from geometry.fileio import InstanceFileException, point_set_to_json, write_json
from geometry.generators import named_example, random_lines
from util.helpers import CustomLogger


@pytest.fixture(scope="session")
def broker(tmp_path_factory):
    logger = CustomLogger(__name__)
    database_path = str(tmp_path_factory.mktemp("db") / "test_database.db")
    broker = ExperimentBroker(logger, ConfigProvider(logger), database_path)
    yield broker
    broker.close()


class TestExperimentBroker:
    def test_chain_three_lines(self, broker: ExperimentBroker):
        record = broker.run_chain(named_example("three-lines"))
        assert record.passed
        assert record.lam == 4
        assert record.h_lower == 3
        assert record.g_lower == 3
        assert record.inequality_passed

    def test_chain_single_line(self, broker: ExperimentBroker):
        record = broker.run_chain(LineSet.of([(2, 1)], "one line"))
        assert record.passed
        assert (record.lam, record.h_lower, record.g_lower) == (1, 1, 1)

    def test_enumerate(self, broker: ExperimentBroker):
        record = broker.run(Pipeline.ENUMERATE, named_example("triangle-interior"), oracle=True)
        assert record.family_size == 14
        assert record.cardinality_passed

    def test_antichain(self, broker: ExperimentBroker):
        record = broker.run(Pipeline.ANTICHAIN, named_example("triangle"), oracle=True)
        assert record.g_lower == 3
        assert record.antichain_passed

    def test_longest_path_oracle(self, broker: ExperimentBroker):
        record = broker.run(Pipeline.LONGEST_PATH, named_example("three-lines"), oracle=True)
        assert record.lam == 4
        assert record.path_passed

    def test_outcome_keeps_results(self, broker: ExperimentBroker):
        outcome = broker.run_outcome(Pipeline.ENUMERATE, named_example("triangle-interior"))
        assert len(outcome.family) == 14
        outcome = broker.run_outcome(Pipeline.ANTICHAIN, named_example("triangle"))
        assert len(outcome.antichain) == 3
        assert outcome.family is not None
        outcome = broker.run_outcome(Pipeline.LONGEST_PATH, named_example("three-lines"))
        assert len(outcome.path.bends) == 3

    def test_chain_random_lines(self, broker: ExperimentBroker):
        for seed in range(10):
            record = broker.run_chain(random_lines(3 + seed % 4, seed), seed)
            assert record.passed
            assert record.g_lower >= record.h_lower

    def test_count_records(self, broker: ExperimentBroker):
        broker.run(Pipeline.LONGEST_PATH, named_example("three-lines"))
        assert broker.count_records() >= len(broker.get_records()) > 0

    def test_pseudodisc_suite(self, broker: ExperimentBroker):
        _, family = three_ray_construction(3, 5)
        record = broker.run_pseudodisc_suite(family, seed=5)
        assert record.passed
        assert record.family_size == 6
        assert record.bound_rows == 4 * 36 + 1

    def test_pseudodisc_suite_failure(self, broker: ExperimentBroker):
        before = len(broker.get_records(Pipeline.PSEUDODISC_SUITE))
        with pytest.raises(InvariantViolationException) as e:
            broker.run_pseudodisc_suite(named_example("plus-shape"))
        assert e.value.record.pseudodisc_passed is False
        assert len(e.value.certificates) > 0
        assert len(broker.get_records(Pipeline.PSEUDODISC_SUITE)) == before + 1

    def test_wrong_instance_kind(self, broker: ExperimentBroker):
        with pytest.raises(InstanceFileException):
            broker.run(Pipeline.CHAIN, named_example("triangle"))

    def test_figures(self, broker: ExperimentBroker, tmp_path):
        prefix = str(tmp_path / "three")
        broker.run_chain(named_example("three-lines"), svg_prefix=prefix)
        for stage in ("path", "points", "dual", "antichain", "traced"):
            assert os.path.exists(f"{prefix}-{stage}.svg")

    def test_batch_keeps_input_order(self, broker: ExperimentBroker):
        specs = [
            ExperimentSpec(Pipeline.ENUMERATE, "random-points", n=5, seed=1, oracle=True),
            ExperimentSpec(Pipeline.LONGEST_PATH, "random-lines", n=4, seed=2, oracle=True),
            ExperimentSpec(Pipeline.CHAIN, "named-example", path="three-lines"),
            ExperimentSpec(Pipeline.PSEUDODISC_SUITE, "three-ray", n=2, seed=3),
        ]
        records = broker.run_batch(specs, workers=1)
        assert [r.pipeline for r in records] == [spec.pipeline for spec in specs]
        assert all(r.passed for r in records)
        assert [r.pipeline for r in broker.get_records(limit=4)] == [spec.pipeline for spec in specs]

    def test_batch_processes_match_sequential(self, broker: ExperimentBroker):
        specs = [ExperimentSpec(Pipeline.CHAIN, "random-lines", n=3 + seed, seed=seed) for seed in range(4)]
        sequential = broker.run_batch(specs, workers=1)
        parallel = broker.run_batch(specs, workers=2)
        assert [r.measurements() for r in parallel] == [r.measurements() for r in sequential]


def test_load_instance_file(tmp_path):
    path = str(tmp_path / "points.json")
    write_json(path, point_set_to_json(PointSet.of([(0, 0), (1, 3)], "two")))
    assert load_instance_file(path) == PointSet.of([(0, 0), (1, 3)], "two")
    broken = tmp_path / "neither.json"
    broken.write_text('{"label": "x"}')
    with pytest.raises(InstanceFileException):
        load_instance_file(str(broken))
