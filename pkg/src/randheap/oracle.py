"""Reference priority queue and lockstep differential runner.

The oracle is a sorted list, O(n) per update and obviously correct. Its
tiebreak is the insertion sequence number, the same order the heap uses
within one heap object, so the two must agree on every delete-min.
"""

import bisect
from typing import Callable, List, NamedTuple, Optional, Tuple

from .heap import Heap, HeapError, SEQ_BITS
from .policy import CutPolicyKind
from .trace import InvalidTrace, Trace, validate_trace

SEQ_MASK = (1 << SEQ_BITS) - 1


class NotFailing(Exception):
    pass


class OracleQueue:
    def __init__(self):
        self.entries: List[Tuple[int, int, int]] = []   # (priority, tiebreak, ext)
        self._where = {}                                 # ext -> (priority, tiebreak)
        self._seq = 0

    def __len__(self):
        return len(self.entries)

    def insert(self, ext: int, priority: int) -> None:
        entry = (priority, self._seq, ext)
        self._seq += 1
        bisect.insort(self.entries, entry)
        self._where[ext] = entry

    def delete_min(self) -> Tuple[int, int, int]:
        entry = self.entries.pop(0)
        del self._where[entry[2]]
        return entry

    def decrease_key(self, ext: int, priority: int) -> None:
        old = self._where[ext]
        if priority > old[0]:
            raise ValueError(f"id {ext}: {priority} > {old[0]}")
        self.entries.pop(bisect.bisect_left(self.entries, old))
        entry = (priority, old[1], ext)
        bisect.insort(self.entries, entry)
        self._where[ext] = entry

    def drain(self) -> List[Tuple[int, int, int]]:
        out = self.entries
        self.entries = []
        self._where.clear()
        return out


class Divergence(NamedTuple):
    op_index: int
    expected: Optional[Tuple[int, int]]
    actual: Optional[Tuple[int, int]]
    detail: str = ""

    def __str__(self):
        if self.detail:
            return f"op {self.op_index}: {self.detail}"
        return f"op {self.op_index}: expected {self.expected}, got {self.actual}"


HeapFactory = Callable[[CutPolicyKind, int], Heap]


def _default_factory(policy, seed):
    return Heap(policy, seed)


def diff_run(trace: Trace, policy, seed: int = 0, validate: bool = True,
             heap_factory: Optional[HeapFactory] = None) -> Optional[Divergence]:
    """Replay ``trace`` on a heap and on the oracle in lockstep.

    Returns None when every delete-min agrees (and, with ``validate``, the
    heap's structural check is clean after every op); otherwise the first
    divergence. ``heap_factory`` lets tests substitute a faulty heap.
    """
    bad = validate_trace(trace)
    if bad:
        raise InvalidTrace(bad)
    heap = (heap_factory or _default_factory)(CutPolicyKind.parse(policy), seed)
    oracle = OracleQueue()
    handles = {}
    for i, op in enumerate(trace.ops, start=1):
        code = op[0]
        try:
            if code == "I":
                handles[op[1]] = heap.insert(op[2])
                oracle.insert(op[1], op[2])
            elif code == "K":
                heap.decrease_key(handles[op[1]], op[2])
                oracle.decrease_key(op[1], op[2])
            else:
                pri, tb = heap.delete_min()
                want = oracle.delete_min()
                got = (pri, tb & SEQ_MASK)
                if got != want[:2]:
                    return Divergence(i, want[:2], got)
                del handles[want[2]]
        except (HeapError, KeyError) as exc:
            return Divergence(i, None, None, f"{type(exc).__name__}: {exc}")
        if validate:
            problems = heap.validate()
            if problems:
                v = problems[0]
                return Divergence(i, None, None, f"{v.kind}: {v.detail}".rstrip(": "))
    return None


def shrink(trace: Trace, policy, seed: int = 0, failing: Optional[Divergence] = None,
           heap_factory: Optional[HeapFactory] = None) -> Trace:
    """Greedily delete ops while the trace stays valid and still diverges.

    An insert is removed together with every decrease-key on its id, so the
    candidate stays valid. Passes repeat until no single removal works.
    """
    def fails(t):
        return not validate_trace(t) and diff_run(t, policy, seed,
                                                  heap_factory=heap_factory) is not None

    if failing is None and diff_run(trace, policy, seed, heap_factory=heap_factory) is None:
        raise NotFailing("trace does not diverge")
    if failing is not None and not fails(trace):
        raise NotFailing("trace does not diverge")
    ops = list(trace.ops)
    changed = True
    while changed:
        changed = False
        i = len(ops) - 1
        while i >= 0:
            op = ops[i]
            if op[0] == "I":
                cand = [o for j, o in enumerate(ops)
                        if j != i and not (o[0] == "K" and o[1] == op[1])]
            else:
                cand = ops[:i] + ops[i + 1:]
            if fails(trace.with_ops(cand)):
                ops = cand
                changed = True
            i = min(i, len(ops)) - 1
    return trace.with_ops(ops)
