"""Manager for database entities"""
from typing import List, Optional, Sequence

from sqlalchemy import create_engine
from sqlalchemy.orm import Session, configure_mappers
from sqlalchemy.sql.expression import and_

from db.entity import Base, MetricsRecord, Pipeline
from util.const import RECORDS_ENTRY_LIMIT
from util.helpers import CustomLogger


class EntityManager:
    """
    Manages the application's database and its entities
    """

    def __init__(self, logger: CustomLogger, database_path: str, entry_limit: int = RECORDS_ENTRY_LIMIT):
        self._engine = create_engine(f"sqlite:///{database_path}", echo=False)
        configure_mappers()
        self._session = Session(bind=self._engine, expire_on_commit=False)
        self._logger = logger
        self._entry_limit = entry_limit
        self._prepare_database()
        self._clean_records()

    def _prepare_database(self):
        self._logger.debug("Applying database schemata...")
        Base.metadata.create_all(self._engine)

    def _clean_records(self):
        """
        Keeps only the newest records of each pipeline once the table exceeds the limit
        """
        self._logger.debug(f"Checking {MetricsRecord.__name__} entry count...")
        record_count = self._session.query(MetricsRecord).count()
        if not record_count > self._entry_limit:
            self._logger.debug("Limit not exceeded, no cleanup necessary.")
            return

        self._logger.debug(">>> Limit exceeded, cleaning entries...")
        keep_per_pipeline = max(self._entry_limit // len(Pipeline), 1)
        deleted = 0
        for pipeline in Pipeline:
            newest_ids = [
                row[0]
                for row in self._session.query(MetricsRecord.id)
                .filter(MetricsRecord.pipeline == pipeline)
                .order_by(MetricsRecord.id.desc())
                .limit(keep_per_pipeline)
                .all()
            ]
            deleted += (
                self._session.query(MetricsRecord)
                .filter(
                    and_(
                        MetricsRecord.pipeline == pipeline,
                        MetricsRecord.id.not_in(newest_ids),
                    )
                )
                .delete(synchronize_session="fetch")
            )
        self._session.commit()
        self._logger.info(f"Pruned {deleted} old {MetricsRecord.__name__} entries")

    def add_records(self, records: Sequence[MetricsRecord]) -> None:
        """
        Persists records in the given order
        Args:
            records: new, unsaved records
        """
        for record in records:
            self._session.add(record)
            # flush per record so ids follow input order
            self._session.flush()
        self._session.commit()
        if len(records) > 0:
            self._logger.success(f"Stored {len(records)} record(s).", CustomLogger.LEVEL_DEBUG)

    def add_record(self, record: MetricsRecord) -> None:
        self.add_records([record])

    def get_records(self, pipeline: Optional[Pipeline] = None, limit: Optional[int] = None) -> List[MetricsRecord]:
        """
        Args:
            pipeline: only records of this pipeline if given
            limit: only the newest `limit` records if given

        Returns:
            records, oldest first
        """
        query = self._session.query(MetricsRecord)
        if pipeline is not None:
            query = query.filter_by(pipeline=pipeline)
        query = query.order_by(MetricsRecord.id.desc())
        if limit is not None:
            query = query.limit(limit)
        return list(reversed(query.all()))

    def count_records(self) -> int:
        return self._session.query(MetricsRecord).count()

    def close(self) -> None:
        self._session.close()
        self._engine.dispose()

    def __del__(self):
        self.close()
