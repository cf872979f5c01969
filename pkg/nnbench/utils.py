# nnbench/utils.py
import hashlib
import math
import re
from pathlib import Path
from typing import Iterable, List, Optional

_NAME_STRIP_RE = re.compile(r"[\s._\-]+")


class Utils:
    @staticmethod
    def canon_name(name: str) -> str:
        """資料集名稱正規化：'Letter rec.' / 'letter-rec' / 'LETTER_REC' 都視為同一個。"""
        return _NAME_STRIP_RE.sub("", (name or "").strip().lower())

    @staticmethod
    def split_list(value: Optional[str]) -> List[str]:
        """逗號分隔字串 -> list，去掉空白與空項目。"""
        if not value:
            return []
        return [p.strip() for p in value.split(",") if p.strip()]

    @staticmethod
    def unique_in_order(seq: Iterable[str]) -> List[str]:
        """去重但保留第一次出現的順序。"""
        seen = set()
        out: List[str] = []
        for x in seq or []:
            if x in seen:
                continue
            seen.add(x)
            out.append(x)
        return out

    @staticmethod
    def round_half_up(x: float) -> int:
        return int(math.floor(x + 0.5))

    @staticmethod
    def fmt_cell(v: Optional[float], digits: int = 2) -> str:
        if v is None:
            return "-"
        return f"{float(v):.{digits}f}"

    @staticmethod
    def sha256_file(path: Path, chunk_size: int = 1 << 20) -> str:
        h = hashlib.sha256()
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(chunk_size), b""):
                h.update(chunk)
        return h.hexdigest()
