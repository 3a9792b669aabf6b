"""Fibonacci heaps with pluggable cascading-cut policies, instrumented for cost."""

from .heap import (DeadHandle, EmptyHeap, Heap, HeapError, KeyIncrease,
                   PolicyMismatch, meld, new)
from .metrics import CostRecord, MetricsSink
from .policy import CutPolicyKind
from .trace import Trace

__all__ = ["CostRecord", "CutPolicyKind", "DeadHandle", "EmptyHeap", "Heap",
           "HeapError", "KeyIncrease", "MetricsSink", "PolicyMismatch", "Trace",
           "meld", "new"]
