# nnbench/errors.py
from __future__ import annotations

from typing import Optional


class NNBenchError(Exception):
    """
    所有可預期錯誤的基底；exit_code 對應 CLI 的結束碼
    （0 成功 / 1 驗證失敗 / 2 用法、設定、I/O 錯誤）。
    """

    exit_code: int = 2

    def __init__(self, detail: str, *, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class InvalidInputError(NNBenchError, ValueError):
    """Non-finite or malformed feature values."""


class DimensionError(NNBenchError, ValueError):
    pass


class InvalidArgumentError(NNBenchError, ValueError):
    pass


class DatasetIOError(NNBenchError, OSError):
    pass


class DatasetFormatError(NNBenchError):
    pass


class DatasetParseError(DatasetFormatError):
    def __init__(self, detail: str, *, row: int, column: int):
        super().__init__(f"{detail} (row {row}, column {column})")
        self.row = row
        self.column = column


class ConfigError(NNBenchError):
    pass


class ValidationFailed(NNBenchError):
    exit_code = 1
