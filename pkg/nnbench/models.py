# nnbench/models.py
from sqlalchemy import (
    JSON, CheckConstraint, Column, DateTime, Float, ForeignKey, Integer, String, Text, UniqueConstraint,
)
from sqlalchemy.orm import relationship

from .db import Base


# ─────────────────────────────────────────────────────────────────────────────
# 一次實驗（一個 metric × 一組資料集 × 一組分類器欄位）
class ExperimentRecord(Base):
    __tablename__ = "experiment"
    id              = Column(Integer, primary_key=True)
    metric          = Column(String, nullable=False)
    runs            = Column(Integer, nullable=False)
    test_fraction   = Column(Float, nullable=False)
    base_seed       = Column(Integer, nullable=False)
    normalization   = Column(String, nullable=False, default="none")
    classifiers     = Column(JSON, nullable=False)      # 欄位名稱 List[str]，保留順序
    datasets        = Column(JSON, nullable=False)      # 資料集名稱 List[str]，保留順序
    config_hash     = Column(String, nullable=False, index=True)  # 設定 JSON 的 SHA-256

    status          = Column(String, nullable=False, default="running")  # running/succeeded/failed
    error           = Column(Text, nullable=True)

    created_at      = Column(DateTime(timezone=True), nullable=False)
    completed_at    = Column(DateTime(timezone=True), nullable=True)

    cells = relationship(
        "RunCell",
        back_populates="experiment",
        cascade="all, delete-orphan",
        passive_deletes=True,
        lazy="selectin",
    )

    __table_args__ = (
        CheckConstraint("status in ('running','succeeded','failed')", name="ck_experiment_status"),
    )


# ─────────────────────────────────────────────────────────────────────────────
# 資料集檔案指紋（CSV bytes 的 SHA-256），同一份檔案只記一次
class DatasetFingerprint(Base):
    __tablename__ = "dataset_fingerprint"
    file_hash   = Column(String, primary_key=True)
    name        = Column(String, nullable=False)
    path        = Column(Text, nullable=False)
    examples    = Column(Integer, nullable=False)
    features    = Column(Integer, nullable=False)
    classes     = Column(Integer, nullable=False)
    created_at  = Column(DateTime(timezone=True), nullable=False)


# ─────────────────────────────────────────────────────────────────────────────
# 單一 (資料集, run, 分類器) 的 accuracy
class RunCell(Base):
    __tablename__ = "run_cell"
    id              = Column(Integer, primary_key=True)
    experiment_id   = Column(Integer, ForeignKey("experiment.id", ondelete="CASCADE"), nullable=False, index=True)
    dataset_hash    = Column(String, ForeignKey("dataset_fingerprint.file_hash"), nullable=True)
    dataset         = Column(String, nullable=False)
    run_index       = Column(Integer, nullable=False)
    seed            = Column(Integer, nullable=False)
    classifier      = Column(String, nullable=False)
    accuracy        = Column(Float, nullable=False)

    __table_args__ = (
        UniqueConstraint("experiment_id", "dataset", "run_index", "classifier", name="uq_cell_once"),
    )

    experiment = relationship("ExperimentRecord", back_populates="cells", passive_deletes=True)
