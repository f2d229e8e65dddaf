"""Order-preserving process-pool map controlled by ``ENTWB_THREADS``."""
import os
from concurrent.futures import ProcessPoolExecutor


def worker_count():
    """Worker processes to use: ``ENTWB_THREADS`` if set, else all cores."""
    env = os.environ.get("ENTWB_THREADS", "").strip()
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("ENTWB_THREADS must be a positive integer")
        return n
    return os.cpu_count() or 1


def ordered_map(fn, items, threads=None, min_chunk=16):
    """``[fn(x) for x in items]``, possibly across processes.

    Results always come back in input order, so output never depends on the
    schedule.
    """
    items = list(items)
    threads = worker_count() if threads is None else threads
    if threads <= 1 or len(items) <= min_chunk:
        return [fn(x) for x in items]
    chunk = max(min_chunk, len(items) // (4 * threads))
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=chunk))
