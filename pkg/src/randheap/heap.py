"""Instrumented Fibonacci heap with a pluggable cut policy.

The four heap variants differ only in what happens to a node's ancestors
after decrease-key cuts it (see :mod:`randheap.policy`); everything else
lives here: lazy insert and meld, delete-min with degree-indexed
consolidation, and a structural validator used by the tests.

Keys are ``(priority, tiebreak)`` pairs packed into one integer,
``priority << 64 | tiebreak``, so comparisons are single integer compares.
The tiebreak is ``tag << 40 | seq`` where ``tag`` is unique per heap object
and ``seq`` counts inserts, which keeps keys unique across melds.

Handles are integers ``tag << 64 | generation << 32 | slot``. A slot is
reused after its node is deleted, with the generation bumped, so a stale
handle is reported as :class:`DeadHandle` instead of aliasing a new node.
"""

import itertools
from typing import List, NamedTuple, Optional, Tuple

from .metrics import (DECREASE_KEY, DELETE_MIN, INSERT, MELD, CostRecord,
                      CutEvent, MetricsSink)
from .policy import CutPolicyKind, make_policy
from .rng import SplitMix64

TIEBREAK_MASK = (1 << 64) - 1
SEQ_BITS = 40
SLOT_MASK = (1 << 32) - 1

DECREASE_KEY_CUT = "DecreaseKey"
CASCADE_CUT = "PolicyCascade"
CONSOLIDATE_CUT = "Consolidate"


class HeapError(Exception):
    pass


class EmptyHeap(HeapError):
    pass


class DeadHandle(HeapError):
    pass


class KeyIncrease(HeapError):
    pass


class PolicyMismatch(HeapError):
    pass


class Violation(NamedTuple):
    kind: str
    handle: Optional[int]
    detail: str


class Node:
    __slots__ = ("key", "parent", "children", "degree", "marked", "handle")

    def __init__(self, key, handle):
        self.key = key
        self.parent = None
        self.children = []
        self.degree = 0
        self.marked = False
        self.handle = handle

    @property
    def priority(self) -> int:
        return self.key >> 64

    @property
    def tiebreak(self) -> int:
        return self.key & TIEBREAK_MASK

    def __repr__(self):
        return f"Node(priority={self.priority}, degree={self.degree})"


class _Store:
    """Slot-indexed node storage with free-list reuse."""

    __slots__ = ("tag", "nodes", "gens", "free")

    def __init__(self, tag):
        self.tag = tag
        self.nodes = []
        self.gens = []
        self.free = []

    def alloc(self, key):
        if self.free:
            slot = self.free.pop()
            gen = self.gens[slot]
        else:
            slot = len(self.nodes)
            gen = 0
            self.nodes.append(None)
            self.gens.append(0)
        node = Node(key, (self.tag << 64) | (gen << 32) | slot)
        self.nodes[slot] = node
        return node

    def release(self, node):
        slot = node.handle & SLOT_MASK
        self.nodes[slot] = None
        self.gens[slot] += 1
        self.free.append(slot)


_tags = itertools.count()


class Heap:
    """A Fibonacci heap whose cascading rule is chosen by ``policy``.

    ``s`` counts public operations (insert, delete-min, decrease-key, meld)
    and doubles as the op index of the cost record each one emits.
    """

    def __init__(self, policy=CutPolicyKind.MARKBIT, seed: int = 0,
                 metrics: Optional[MetricsSink] = None):
        self.policy_kind = CutPolicyKind.parse(policy)
        self.policy = make_policy(self.policy_kind)
        self.rng = SplitMix64(seed)
        self.metrics = metrics if metrics is not None else MetricsSink(keep_records=False)
        self.tag = next(_tags)
        self._store = _Store(self.tag)
        self._stores = {self.tag: self._store}
        self._seq = 0
        self.roots: List[Node] = []
        self.min: Optional[Node] = None
        self.n = 0
        self.s = 0
        self._links = 0
        self._cuts = 0
        self._flips = 0

    # -- counted primitives -------------------------------------------------

    def _cut(self, x: Node, trigger: str) -> Node:
        """Detach ``x`` from its parent onto the root list; return the parent."""
        p = x.parent
        p.children.remove(x)
        p.degree -= 1
        x.parent = None
        x.marked = False
        self.roots.append(x)
        self._cuts += 1
        if self.metrics.keep_events:
            self.metrics.cut_event(CutEvent(x.handle, p.handle, trigger))
        return p

    def _flip(self) -> int:
        self._flips += 1
        return self.rng.flip()

    def _link(self, parent: Node, child: Node) -> None:
        child.parent = parent
        parent.children.append(child)
        parent.degree += 1
        self._links += 1

    # -- public operations --------------------------------------------------

    def __len__(self):
        return self.n

    def insert(self, priority: int) -> int:
        tiebreak = (self.tag << SEQ_BITS) | self._seq
        self._seq += 1
        node = self._store.alloc((priority << 64) | tiebreak)
        self.roots.append(node)
        if self.min is None or node.key < self.min.key:
            self.min = node
        n_before = self.n
        self.n += 1
        self.s += 1
        self.metrics.record(CostRecord(self.s, INSERT, 0, 0, 0, 0, 0, n_before, 1))
        return node.handle

    def find_min(self) -> Optional[Tuple[int, int]]:
        if self.min is None:
            return None
        return self.min.handle, self.min.key >> 64

    def delete_min(self) -> Tuple[int, int]:
        z = self.min
        if z is None:
            raise EmptyHeap("delete_min on an empty heap")
        n_before = self.n
        self.s += 1
        self._links = self._cuts = self._flips = 0

        roots = [r for r in self.roots if r is not z]
        children = z.children
        detached = len(children)
        for c in children:
            c.parent = None
            c.marked = False
        roots.extend(children)
        self.roots = roots
        self._release(z)
        self.n -= 1

        self.policy.on_consolidate(self)
        scanned = len(self.roots)
        self._consolidate()

        links, cuts, flips = self._links, self._cuts, self._flips
        self.metrics.record(CostRecord(
            self.s, DELETE_MIN, links, cuts, flips, scanned, detached, n_before,
            1 + links + cuts + flips + scanned + detached))
        return z.key >> 64, z.key & TIEBREAK_MASK

    def decrease_key(self, handle: int, priority: int) -> None:
        store = self._stores.get(handle >> 64)
        try:
            x = store.nodes[handle & SLOT_MASK]
        except (AttributeError, IndexError):
            x = None
        if x is None or x.handle != handle:
            x = self.node(handle)
        key = (priority << 64) | (x.key & TIEBREAK_MASK)
        if key > x.key:
            raise KeyIncrease(f"priority {priority} > current {x.key >> 64}")
        self.s += 1
        self._cuts = self._flips = 0
        x.key = key
        p = x.parent
        if p is not None and key < p.key:
            self._cut(x, DECREASE_KEY_CUT)
            self.policy.after_cut(self, p)
        if key < self.min.key:
            self.min = x
        cuts, flips = self._cuts, self._flips
        self.metrics.record(CostRecord(self.s, DECREASE_KEY, 0, cuts, flips, 0, 0,
                                       self.n, 1 + cuts + flips))

    def node(self, handle: int) -> Node:
        """Resolve a live handle to its node or raise :class:`DeadHandle`."""
        store = self._stores.get(handle >> 64)
        if store is not None:
            slot = handle & SLOT_MASK
            if slot < len(store.nodes):
                node = store.nodes[slot]
                if node is not None and node.handle == handle:
                    return node
        raise DeadHandle(f"handle {handle:#x} is not live in this heap")

    def priority(self, handle: int) -> int:
        return self.node(handle).key >> 64

    # -- internals ------------------------------------------------------------

    def _release(self, node: Node) -> None:
        self._stores[node.handle >> 64].release(node)

    def _consolidate(self) -> None:
        roots = self.roots
        if not roots:
            self.min = None
            return
        table = [None] * (2 + self.n.bit_length())
        top = 0
        link = self._link
        for x in roots:
            d = x.degree
            while True:
                if d >= len(table):
                    table.extend([None] * (d + 2 - len(table)))
                y = table[d]
                if y is None:
                    break
                table[d] = None
                if y.key < x.key:
                    x, y = y, x
                link(x, y)
                d += 1
            table[d] = x
            if d > top:
                top = d
        if top > self.metrics.max_degree:
            self.metrics.max_degree = top
        new_roots = [t for t in table if t is not None]
        self.roots = new_roots
        m = new_roots[0]
        for r in new_roots:
            if r.key < m.key:
                m = r
        self.min = m

    def flatten(self, trigger: str = CONSOLIDATE_CUT) -> int:
        """Cut every non-root node onto the root list; return the cut count."""
        count = 0
        stack = list(self.roots)
        while stack:
            x = stack.pop()
            if x.children:
                kids = x.children
                stack.extend(kids)
                for c in kids:
                    c.parent = None
                    c.marked = False
                    self.roots.append(c)
                    if self.metrics.keep_events:
                        self.metrics.cut_event(CutEvent(c.handle, x.handle, trigger))
                count += len(kids)
                x.children = []
                x.degree = 0
        self._cuts += count
        return count

    # -- inspection -----------------------------------------------------------

    def iter_nodes(self):
        stack = list(self.roots)
        while stack:
            x = stack.pop()
            yield x
            stack.extend(x.children)

    def max_degree(self) -> int:
        return max((x.degree for x in self.iter_nodes()), default=0)

    def root_degrees(self) -> List[int]:
        return [r.degree for r in self.roots]

    def snapshot(self):
        """Nested tuple view of the forest, for determinism comparisons.

        Keys appear as (priority, insert sequence), without the heap tag.
        """
        mask = (1 << SEQ_BITS) - 1

        def walk(x):
            return (x.key >> 64, x.key & mask, x.marked,
                    tuple(walk(c) for c in x.children))
        return tuple(walk(r) for r in self.roots)

    def validate(self) -> List[Violation]:
        """Check every structural invariant; an empty list means healthy."""
        out = []
        seen = set()
        keys = set()
        check_marks = self.policy_kind is not CutPolicyKind.MARKBIT
        for r in self.roots:
            if r.parent is not None:
                out.append(Violation("RootHasParent", r.handle, ""))
            if r.marked:
                out.append(Violation("MarkedRoot", r.handle, ""))
        stack = list(self.roots)
        while stack:
            x = stack.pop()
            if id(x) in seen:
                out.append(Violation("Cycle", x.handle, "node reached twice"))
                continue
            seen.add(id(x))
            try:
                if self.node(x.handle) is not x:
                    raise DeadHandle
            except DeadHandle:
                out.append(Violation("DeadNode", x.handle, "reachable but not live"))
            if x.key in keys:
                out.append(Violation("DuplicateKey", x.handle, ""))
            keys.add(x.key)
            if x.degree != len(x.children):
                out.append(Violation("DegreeMismatch", x.handle,
                                     f"degree {x.degree} != {len(x.children)} children"))
            if check_marks and x.marked:
                out.append(Violation("UnexpectedMark", x.handle, ""))
            for c in x.children:
                if c.parent is not x:
                    out.append(Violation("ParentLink", c.handle, "child does not point back"))
                if not c.key > x.key:
                    out.append(Violation("HeapOrder", c.handle,
                                         f"child key {c.key >> 64} <= parent {x.key >> 64}"))
                stack.append(c)
        if len(seen) != self.n:
            out.append(Violation("SizeMismatch", None, f"n={self.n} reachable={len(seen)}"))
        if self.n == 0:
            if self.min is not None:
                out.append(Violation("MinPointer", None, "min set on empty heap"))
        elif self.min is None or self.min.parent is not None or id(self.min) not in seen:
            out.append(Violation("MinPointer", None, "min is not a live root"))
        elif keys and self.min.key != min(keys):
            out.append(Violation("MinPointer", self.min.handle, "min is not minimal"))
        return out


def new(policy=CutPolicyKind.MARKBIT, seed: int = 0, metrics=None) -> Heap:
    return Heap(policy, seed, metrics)


def meld(a: Heap, b: Heap) -> Heap:
    """Lazily concatenate ``b`` into ``a`` and return ``a``.

    Handles from both inputs stay valid against the result. ``b`` is left
    empty and its handles no longer resolve against ``b``.
    """
    if a.policy_kind is not b.policy_kind:
        raise PolicyMismatch(f"{a.policy_kind.value} vs {b.policy_kind.value}")
    n_before = a.n + b.n
    a.roots.extend(b.roots)
    a._stores.update(b._stores)
    if b.min is not None and (a.min is None or b.min.key < a.min.key):
        a.min = b.min
    a.n += b.n
    a.s += b.s + 1
    a.metrics.max_degree = max(a.metrics.max_degree, b.metrics.max_degree)
    b.roots = []
    b.min = None
    b.n = 0
    b._stores = {b.tag: _Store(b.tag)}
    b._store = b._stores[b.tag]
    a.metrics.record(CostRecord(a.s, MELD, 0, 0, 0, 0, 0, n_before, 1))
    return a
