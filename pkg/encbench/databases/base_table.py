from __future__ import annotations  # For class method return type hinting

import os
from time import sleep
from typing import Sequence

from dotenv import load_dotenv
from sqlalchemy import (
    TIMESTAMP,
    Column,
    Integer,
    String,
    create_engine,
    func,
)
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import declarative_base, sessionmaker

Base = declarative_base()
load_dotenv(override=True)

DEFAULT_DATABASE_URL = "sqlite:///encbench.sqlite3"

db_url = os.environ.get("ENCBENCH_DATABASE_URL", DEFAULT_DATABASE_URL)
db = create_engine(db_url)
Session = sessionmaker(db)


class BaseRecord(Base):
    __abstract__ = True

    id = Column(Integer, primary_key=True)  # index
    term_name = Column(String(256), index=True)
    coordinator = Column(String(32), index=True)
    task_name = Column(String(256))
    create_time = Column(TIMESTAMP(True), server_default=func.now())

    def insert(self, max_retries: int = 2):
        Base.metadata.create_all(db, tables=[self.__table__])
        for attempt in range(max_retries):
            try:
                with Session() as session:
                    session.add(self)
                    session.commit()
                break
            except SQLAlchemyError as e:
                if attempt < max_retries - 1:
                    sleep(2**attempt)  # Exponential backoff
                else:
                    raise e

    @classmethod
    def query(cls, **kwargs) -> Sequence[BaseRecord]:
        """Query records by keyword arguments.
        Input:
            **kwargs: keyword arguments
        Return:
            Sequence[BaseRecord]: records
        Example:
            >>> CriteriaRecord.query(task_name="E", coordinator="decentral")
        """
        Base.metadata.create_all(db, tables=[cls.__table__])
        with Session() as session:
            return session.query(cls).filter_by(**kwargs).all()

    @classmethod
    def count(cls, **kwargs) -> int:
        """Count records by keyword arguments.
        Input:
            **kwargs: keyword arguments
        Return:
            int: number of records found
        Example:
            >>> CriteriaRecord.count(task_name="E", coordinator="central")
        """
        Base.metadata.create_all(db, tables=[cls.__table__])
        with Session() as session:
            return session.query(cls).filter_by(**kwargs).count()
