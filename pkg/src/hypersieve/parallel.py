"""Deterministic work-unit execution.

Work units are evaluated independently and their results merged by the
caller with associative, order-insensitive operations (bitmap OR, counter
sums), so hit counts are identical for any parallelism width.  Results are
always returned in submission order.
"""

from __future__ import annotations

import multiprocessing as mp


def run_units(fn, args_list, threads: int):
    """Map fn over args_list with a process pool of the given width; width 1
    runs inline.  Results come back in submission order regardless of
    scheduling."""
    if threads <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    ctx = mp.get_context("fork")
    with ctx.Pool(processes=min(threads, len(args_list))) as pool:
        return pool.map(fn, args_list)
