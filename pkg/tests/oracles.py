"""Plain-loop reference versions used to cross-check the vectorised code."""
import math
from typing import List, Sequence

TIE = 1e-9


def hassanat_component(a: float, b: float) -> float:
    lo, hi = min(a, b), max(a, b)
    if lo >= 0:
        return 1 - (1 + lo) / (1 + hi)
    return 1 - (1 + lo + abs(lo)) / (1 + hi + abs(lo))


def hassanat_distance(a: Sequence[float], b: Sequence[float]) -> float:
    return sum(hassanat_component(x, y) for x, y in zip(a, b))


def _pick(scores: List[float], labels_by_rank: Sequence[int]) -> int:
    best = max(scores)
    tied = {c for c, s in enumerate(scores) if s >= best - TIE}
    for lab in labels_by_rank:
        if lab in tied:
            return lab
    raise AssertionError("no tied class among ranked labels")


def knn(labels_by_rank: Sequence[int], k: int, n_classes: int) -> int:
    votes = [0.0] * n_classes
    for i in range(k):
        votes[labels_by_rank[i]] += 1
    return _pick(votes, labels_by_rank[:k])


def iinc_scores(labels_by_rank: Sequence[int], n_classes: int) -> List[float]:
    s = [0.0] * n_classes
    for i, lab in enumerate(labels_by_rank, start=1):
        s[lab] += 1.0 / i
    return s


def iinc(labels_by_rank: Sequence[int], n_classes: int) -> int:
    return _pick(iinc_scores(labels_by_rank, n_classes), labels_by_rank)


def enn(labels_by_rank: Sequence[int], n_classes: int) -> int:
    n = len(labels_by_rank)
    top = math.isqrt(n)
    if top % 2 == 0:
        top -= 1
    top = max(top, 1)
    ws = [0.0] * n_classes
    for k in range(1, top + 1, 2):
        for i in range(1, k + 1):
            ws[labels_by_rank[i - 1]] += 1.0 / math.log2(1 + i)
    return _pick(ws, labels_by_rank[:top])
