"""Deterministic chunked evaluation.

Work is always split into the same fixed-size chunks, so results are
bit-identical whether the chunks run sequentially or on a thread pool.
``LMS_THREADS`` caps the pool size; 0 or 1 (the default) runs sequentially.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 4096


def thread_count():
    raw = os.environ.get("LMS_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"LMS_THREADS must be an integer, got {raw!r}") from None
    return max(n, 0)


def map_chunks(fn, n, chunk=CHUNK):
    """Call ``fn(start, stop)`` over ``range(n)`` in chunks; concatenate results.

    ``fn`` returns an ndarray (or a tuple of ndarrays) whose first axis has
    length ``stop - start``.
    """
    bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
    threads = thread_count()
    if threads <= 1 or len(bounds) <= 1:
        parts = [fn(a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: fn(*ab), bounds))
    if not parts:
        return None
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(col) for col in zip(*parts))
    return np.concatenate(parts)
