import pytest

from db.entity import MetricsRecord, Pipeline
from db.manager import EntityManager
from util.helpers import CustomLogger

_logger = CustomLogger(__name__)


def _record(pipeline: Pipeline, seed: int) -> MetricsRecord:
    return MetricsRecord(pipeline=pipeline, label=f"run {seed}", seed=seed, n=3, path_passed=True)


@pytest.fixture
def database_path(tmp_path):
    return str(tmp_path / "test_database.db")


class TestEntityManager:
    def test_empty(self, database_path):
        em = EntityManager(_logger, database_path)
        assert em.count_records() == 0
        assert em.get_records() == []
        em.close()

    def test_add_and_get(self, database_path):
        em = EntityManager(_logger, database_path)
        em.add_records([_record(Pipeline.CHAIN, seed) for seed in range(3)])
        em.add_record(_record(Pipeline.ENUMERATE, 10))
        assert em.count_records() == 4
        assert [r.seed for r in em.get_records()] == [0, 1, 2, 10]
        assert [r.seed for r in em.get_records(Pipeline.CHAIN)] == [0, 1, 2]
        assert [r.seed for r in em.get_records(limit=2)] == [2, 10]
        assert all(r.created is not None for r in em.get_records())
        em.close()

    def test_records_survive_reopen(self, database_path):
        em = EntityManager(_logger, database_path)
        em.add_record(_record(Pipeline.LONGEST_PATH, 4))
        em.close()
        reopened = EntityManager(_logger, database_path)
        (record,) = reopened.get_records()
        assert record.pipeline == Pipeline.LONGEST_PATH
        assert record.measurements() == _record(Pipeline.LONGEST_PATH, 4).measurements()
        reopened.close()

    def test_pruning_keeps_newest(self, database_path):
        em = EntityManager(_logger, database_path)
        em.add_records([_record(Pipeline.CHAIN, seed) for seed in range(7)])
        em.add_record(_record(Pipeline.ENUMERATE, 100))
        em.close()
        pruned = EntityManager(_logger, database_path, entry_limit=5)
        assert [r.seed for r in pruned.get_records(Pipeline.CHAIN)] == [6]
        assert [r.seed for r in pruned.get_records(Pipeline.ENUMERATE)] == [100]
        pruned.close()

    def test_no_pruning_below_limit(self, database_path):
        em = EntityManager(_logger, database_path)
        em.add_records([_record(Pipeline.CHAIN, seed) for seed in range(4)])
        em.close()
        again = EntityManager(_logger, database_path, entry_limit=5)
        assert again.count_records() == 4
        again.close()


class TestMetricsRecord:
    def test_passed(self):
        record = _record(Pipeline.CHAIN, 1)
        assert record.passed
        record.separation_passed = False
        assert not record.passed
        assert "FAIL" in repr(record)

    def test_values(self):
        record = _record(Pipeline.CHAIN, 1)
        record.lam = 4
        values = record.to_values()
        assert "id" not in values and "created" not in values
        assert values["lam"] == 4
        assert MetricsRecord.from_values(values).measurements() == record.measurements()
