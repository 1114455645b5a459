"""Contains entity classes for ORM"""
import enum
from datetime import datetime

from sqlalchemy import (
    event,
    Column,
    Integer,
    DateTime,
    Enum,
    Text,
    Boolean,
)
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.orm import declared_attr

Base = declarative_base()


class Pipeline(enum.Enum):
    """
    Enum for the pipeline that produced a record
    """

    ENUMERATE = "enumerate"
    ANTICHAIN = "antichain"
    LONGEST_PATH = "longest-path"
    CHAIN = "chain"
    PSEUDODISC_SUITE = "pseudodisc-suite"


class BaseMixin(object):
    __abstract__ = True

    @declared_attr
    def __tablename__(self):
        return f"{self.__name__.upper()}S"

    id = Column(Integer, primary_key=True, autoincrement=True)


class CreatedMixin(object):
    __abstract__ = True
    created = Column(DateTime)


class MetricsRecord(BaseMixin, CreatedMixin, Base):
    """
    Measured quantities of one pipeline run; a check flag is None when the
    pipeline does not perform that check
    """

    pipeline = Column(Enum(Pipeline), nullable=False)
    label = Column(Text, nullable=False, default="")
    seed = Column(Integer, nullable=True)
    n = Column(Integer, nullable=False)
    g_lower = Column(Integer, nullable=True)
    h_lower = Column(Integer, nullable=True)
    lam = Column(Integer, nullable=True)
    bound_rows = Column(Integer, nullable=True)
    family_size = Column(Integer, nullable=True)
    cardinality_passed = Column(Boolean, nullable=True)
    separation_passed = Column(Boolean, nullable=True)
    antichain_passed = Column(Boolean, nullable=True)
    inequality_passed = Column(Boolean, nullable=True)
    path_passed = Column(Boolean, nullable=True)
    pseudodisc_passed = Column(Boolean, nullable=True)
    rank_passed = Column(Boolean, nullable=True)

    FLAG_NAMES = (
        "cardinality_passed",
        "separation_passed",
        "antichain_passed",
        "inequality_passed",
        "path_passed",
        "pseudodisc_passed",
        "rank_passed",
    )

    @property
    def passed(self) -> bool:
        return all(getattr(self, flag) is not False for flag in self.FLAG_NAMES)

    def to_values(self) -> dict:
        """Column values without id and timestamp; picklable"""
        return {
            column.name: getattr(self, column.name)
            for column in MetricsRecord.__table__.columns
            if column.name not in ("id", "created")
        }

    @classmethod
    def from_values(cls, values: dict) -> "MetricsRecord":
        return cls(**values)

    def measurements(self) -> tuple:
        """Every stored value except id and timestamp, for reproducibility checks"""
        return (
            self.pipeline,
            self.label,
            self.seed,
            self.n,
            self.g_lower,
            self.h_lower,
            self.lam,
            self.bound_rows,
            self.family_size,
        ) + tuple(getattr(self, flag) for flag in self.FLAG_NAMES)

    def __repr__(self):
        return (
            f"<{MetricsRecord.__name__}>({self.pipeline.value} {self.label} n={self.n} "
            f"g>={self.g_lower} h>={self.h_lower} lambda={self.lam} "
            f"{'PASS' if self.passed else 'FAIL'})"
        )


@event.listens_for(MetricsRecord, "before_insert")
def set_record_created(mapper, connection, target: MetricsRecord):
    """
    Stamp record creation time when persisting to DB
    Args:
        mapper: n/a
        connection: n/a
        target: record entity to persist
    """
    target.created = datetime.now()
