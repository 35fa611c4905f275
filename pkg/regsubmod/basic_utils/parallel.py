"""
线程池并发工具：候选运行、β 扫描等彼此独立的任务在这里并发执行。
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Optional, Sequence, TypeVar

from tqdm import tqdm

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def map_threaded(
    fn: Callable[[T], R],
    items: Sequence[T],
    threads: int = 1,
    desc: Optional[str] = None,
) -> List[R]:
    """
    对 items 逐个调用 fn，结果按输入顺序返回。

    Args:
        fn: 作用在单个任务上的纯函数。
        items: 任务列表。
        threads: 线程数；小于等于 1 或只有一个任务时顺序执行。
        desc: 进度条标题；为 None 时不显示进度条。

    Returns:
        与 items 一一对应的结果列表。

    Raises:
        任意任务抛出的第一个异常（其余任务仍会执行完并记录日志）。
    """
    progress = tqdm(total=len(items), desc=desc, disable=desc is None)

    if threads <= 1 or len(items) <= 1:
        results_seq: List[R] = []
        with progress:
            for item in items:
                results_seq.append(fn(item))
                progress.update(1)
        return results_seq

    results: List[R] = [None] * len(items)  # type: ignore[list-item]
    first_error: Optional[BaseException] = None
    logger.debug(f"Running {len(items)} tasks with threads={threads}")

    with progress, ThreadPoolExecutor(max_workers=threads) as executor:
        future_to_idx = {executor.submit(fn, item): idx for idx, item in enumerate(items)}

        for future in as_completed(future_to_idx):
            idx = future_to_idx[future]
            try:
                results[idx] = future.result()
            except Exception as e:
                logger.exception(f"Task {idx + 1}/{len(items)} failed: {e}")
                if first_error is None:
                    first_error = e
            progress.update(1)

    if first_error is not None:
        raise first_error
    return results
