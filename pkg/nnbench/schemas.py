# nnbench/schemas.py

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .services.classifiers import DEFAULT_CLASSIFIERS, ClassifierSpec
from .services.dataset import Normalization
from .services.metrics import MetricId


# ── Manifest（一筆 = 資料表中的一列資料集描述）
class ManifestEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1)
    path: str = Field(..., min_length=1)
    expected_examples: int = Field(..., gt=0)
    expected_features: int = Field(..., gt=0)
    expected_classes: int = Field(..., gt=0)
    expected_min: float
    expected_max: float
    label_column: int = -1   # 負數表示從最後一欄往回數
    has_header: bool = False

    @model_validator(mode="after")
    def _min_le_max(self):
        if self.expected_min > self.expected_max:
            raise ValueError(f"expected_min {self.expected_min} > expected_max {self.expected_max}")
        return self


# ── 驗證結果
class ValidationCheck(BaseModel):
    name: str                       # examples / features / classes / min / max / io
    expected: Optional[str] = None
    actual: Optional[str] = None
    passed: bool

    def describe(self) -> str:
        if self.name == "io":
            return f"I/O: {self.actual}"
        return f"{self.name} {self.actual} ≠ {self.expected}"


class ValidationReport(BaseModel):
    dataset: str
    checks: List[ValidationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[ValidationCheck]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        if self.passed:
            return f"{self.dataset}: PASS"
        reasons = "; ".join(c.describe() for c in self.failures)
        return f"{self.dataset}: FAIL ({reasons})"


# ── 實驗設定
class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    datasets: List[str] = Field(default_factory=list)
    metric: MetricId = MetricId.HASSANAT
    classifiers: Tuple[ClassifierSpec, ...] = DEFAULT_CLASSIFIERS
    runs: int = Field(10, ge=1)
    test_fraction: float = Field(0.3, gt=0.0, lt=1.0)
    base_seed: int = Field(42, ge=0)
    normalization: Normalization = Normalization.NONE
    threads: int = Field(1, ge=1)

    @field_validator("metric", mode="before")
    @classmethod
    def _parse_metric(cls, v):
        return MetricId.parse(v)

    @field_validator("normalization", mode="before")
    @classmethod
    def _parse_normalization(cls, v):
        return Normalization.parse(v)

    @field_validator("classifiers", mode="before")
    @classmethod
    def _parse_classifiers(cls, v):
        if isinstance(v, str):
            v = [p for p in v.split(",") if p.strip()]
        specs = tuple(s if isinstance(s, ClassifierSpec) else ClassifierSpec.parse(str(s)) for s in v)
        if not specs:
            raise ValueError("at least one classifier is required")
        return specs

    @property
    def column_names(self) -> List[str]:
        return [s.name for s in self.classifiers]

    def seed_for_run(self, run_index: int) -> int:
        return self.base_seed + run_index

    def with_metric(self, metric: MetricId) -> "ExperimentConfig":
        return self.model_copy(update={"metric": MetricId.parse(metric)})
