from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

_ROOT = Path(__file__).resolve().parents[1]  # repo root


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="NNBENCH_", env_file=".env", extra="ignore")

    ROOT: Path = _ROOT
    WORKSPACE_DIR: Path = Field(default_factory=lambda: _ROOT / "workspace")
    SQLITE_PATH: Optional[Path] = None  # 未指定時放在 WORKSPACE_DIR/runs.sqlite3
    RESOURCES_DIR: Path = Field(default_factory=lambda: _ROOT / "resources")
    DATA_DIR: Path = Field(default_factory=lambda: _ROOT / "resources" / "data")
    MANIFEST_PATH: Path = Field(default_factory=lambda: _ROOT / "resources" / "manifest" / "uci_datasets.manifest")

    # 實驗預設值（CLI flag > 設定檔 > 這裡）
    DEFAULT_SEED: int = 42
    DEFAULT_RUNS: int = 10
    DEFAULT_TEST_FRACTION: float = 0.3
    DEFAULT_THREADS: int = 1

    # 超過此筆數的資料集只在 --extended 時執行
    EXTENDED_MIN_EXAMPLES: int = 1500

    LOG_LEVEL: str = "WARNING"
    RECORD_RUNS: bool = False

    @property
    def sqlite_path(self) -> Path:
        return self.SQLITE_PATH or (self.WORKSPACE_DIR / "runs.sqlite3")

    @property
    def templates_dir(self) -> Path:
        return self.RESOURCES_DIR / "templates"


settings = Settings()
