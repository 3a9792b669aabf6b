"""Replay a trace against one heap variant."""

from typing import Optional

from .heap import Heap
from .metrics import MetricsSink, windowed_mean
from .trace import Trace


def replay(trace: Trace, policy, seed: int = 0,
           metrics: Optional[MetricsSink] = None) -> Heap:
    """Run every op of ``trace`` on a fresh heap and return the heap.

    Raises the heap's own errors (DeadHandle, KeyIncrease, EmptyHeap) if the
    trace is not valid.
    """
    heap = Heap(policy, seed, metrics)
    handles = {}
    ext_of = {}
    insert = heap.insert
    delete_min = heap.delete_min
    decrease_key = heap.decrease_key
    for op in trace.ops:
        code = op[0]
        if code == "D":
            h = heap.min.handle if heap.min is not None else None
            delete_min()
            del handles[ext_of.pop(h)]
        elif code == "K":
            decrease_key(handles[op[1]], op[2])
        else:
            h = insert(op[2])
            handles[op[1]] = h
            ext_of[h] = op[1]
    heap.metrics.finish(heap.n)
    return heap


def measure(trace: Trace, policy, seed: int = 0) -> dict:
    """Replay ``trace`` and report the windowed mean delete-min cost."""
    sink = MetricsSink(keep_records=True)
    heap = replay(trace, policy, seed, sink)
    return {
        "mean_dm": windowed_mean(sink.records, trace.window_start),
        "max_degree": sink.max_degree,
        "summary": sink.summary,
        "final_n": heap.n,
    }
