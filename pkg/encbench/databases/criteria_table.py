from sqlalchemy import JSON, Column, String

from encbench.databases.base_table import BaseRecord


class CriteriaRecord(BaseRecord):
    """One criterion verdict of one corpus job."""

    __tablename__ = "criteria"

    criterion = Column(String(64), index=True)
    result = Column(String(16))
    expected = Column(String(16))
    witness = Column(JSON)
    cause = Column(String(512))
    stats = Column(JSON)
