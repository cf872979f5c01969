# nnbench/services/experiment_worker.py

import asyncio
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunJob:
    dataset_index: int
    run_index: int
    seed: int
    dataset: Any   # Dataset
    config: Any    # ExperimentConfig


# 佇列項目：(job 序號, job)；序號 -1 為結束訊號
QueueItem = Tuple[int, Optional[RunJob]]


class ExperimentWorker:
    """
    固定數量的 worker coroutine 從 queue 取 job，
    每個 job 用 asyncio.to_thread 丟到執行緒執行（numpy 運算可釋放 GIL）。
    結果依 job 序號放回，與完成順序無關。
    """

    def __init__(self, max_concurrency: int = 1, queue_maxsize: int = 0):
        self._max_concurrency = max(1, max_concurrency)
        self._queue_maxsize = queue_maxsize

    # ─────────────────────────────────────────────────────────
    # 公開 API（同步）

    def run_all(
        self,
        jobs: Sequence[RunJob],
        fn: Callable[[RunJob], Any],
        progress: Optional[Callable[[int], None]] = None,
    ) -> List[Any]:
        if not jobs:
            return []
        if self._max_concurrency == 1:
            # 單執行緒時直接依序執行，不需要 event loop
            out = []
            for job in jobs:
                out.append(fn(job))
                if progress:
                    progress(1)
            return out
        return asyncio.run(self._run_all(jobs, fn, progress))

    # ─────────────────────────────────────────────────────────
    # 內部

    async def _run_all(
        self,
        jobs: Sequence[RunJob],
        fn: Callable[[RunJob], Any],
        progress: Optional[Callable[[int], None]],
    ) -> List[Any]:
        queue: asyncio.Queue[QueueItem] = asyncio.Queue(maxsize=self._queue_maxsize)
        results: Dict[int, Any] = {}
        errors: Dict[int, BaseException] = {}

        workers = [
            asyncio.create_task(self._worker_loop(queue, fn, results, errors, progress))
            for _ in range(min(self._max_concurrency, len(jobs)))
        ]
        for i, job in enumerate(jobs):
            await queue.put((i, job))
        # 通知 worker 退出
        for _ in workers:
            await queue.put((-1, None))
        await asyncio.gather(*workers)

        if errors:
            # 以 job 順序回報第一個錯誤，確保錯誤訊息也是決定性的
            first = min(errors)
            raise errors[first]
        return [results[i] for i in range(len(jobs))]

    async def _worker_loop(
        self,
        queue: "asyncio.Queue[QueueItem]",
        fn: Callable[[RunJob], Any],
        results: Dict[int, Any],
        errors: Dict[int, BaseException],
        progress: Optional[Callable[[int], None]],
    ) -> None:
        while True:
            idx, job = await queue.get()
            try:
                if idx == -1:
                    return
                try:
                    results[idx] = await asyncio.to_thread(fn, job)
                except Exception as e:
                    logger.debug("job %d failed: %s", idx, e)
                    errors[idx] = e
                if progress:
                    progress(1)
            finally:
                queue.task_done()
