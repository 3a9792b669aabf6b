"""Trace generators: seeded random workloads and oblivious adversaries.

Both adversaries build a *staircase*: one root of every rank 0..k-1, each
as small as the cut policy permits, and then repeatedly insert a new
minimum and delete it. Every such delete-min scans all k roots, so its
cost tracks the staircase height.

A rank is raised by ``grow(j)``. The staircase roots of ranks 0..j-1 are
folded into a fresh temporary node X (one delete-min makes X absorb them
by linking). X then reaches rank j and is linked below the rank-j root A.
Finally decrease-key detaches the top ``shed`` children of X again. A
policy that lets X survive losing those children leaves A one rank
higher, with X as a small child:

* NaiveCut always keeps X; MarkBit cuts X on its second loss.
* RandomCoin keeps X with probability ``2**-shed``.

The same ops are then repeated ``retries`` times. X's key is lowered to
just above A's before each repeat. After a success X stays under A, the
repeat changes nothing, and the result sticks. After a failure X is a root
again holding the unshed children, so the repeat is exactly a fresh
attempt. The sequence never depends on coin outcomes.

``gen_sqrt_n`` sheds every child (brooms) and tries once: NaiveCut ends
with about sqrt(2n) roots, MarkBit with O(log n).

``gen_logsq`` sheds only the top ``t`` children but retries ``c * 2**t``
times, so RandomCoin reliably builds trees that are thinner than MarkBit
allows. The lower children that X retains are rebuilt recursively. A grow
fails with probability ``(1 - 2**-t) ** (c * 2**t)``, about ``e**-c``, and
one failure collapses part of the staircase, so ``c`` is the smallest factor
that keeps the expected number of failed grows in the whole build below
``FAIL_BUDGET``. ``t``, ``c`` and the height are chosen as large as the
operation budget ``s`` (and an optional element bound) allows.
"""

import heapq
from functools import lru_cache
from typing import List, Optional, Tuple

from .rng import SplitMix64
from .trace import Trace


class BadMix(ValueError):
    pass


PRIORITY_BITS = 48
RETRY_FACTOR = 8
FAIL_BUDGET = 1e-3
MAX_RETRY_FACTOR = 40
# bands keep the throwaway minima below every structural key
STRUCT_TOP = 0
SINK_TOP = -(1 << 61)
UNLIMITED = 1 << 30


def gen_random(n_ops: int, seed: int, mix=(0.4, 0.3, 0.3)) -> Trace:
    """Seeded random workload of exactly ``n_ops`` valid ops.

    Op kinds are drawn from ``mix = (p_insert, p_delete_min, p_decrease)``;
    a delete-min or decrease-key drawn on an empty heap becomes an insert.
    Priorities are uniform 48-bit; decrease-key picks a live id uniformly
    and a new priority uniformly in [0, current].
    """
    p_ins, p_del, p_dec = _check_mix(mix)
    rng = SplitMix64(seed)
    top = 1 << PRIORITY_BITS
    ops = []
    live: List[int] = []      # live ext ids, swap-removed
    where = {}                # ext id -> index in live
    prio = {}                 # ext id -> (priority, seq)
    pq: List[Tuple[int, int, int]] = []
    next_id = 1
    seq = 0
    cut1 = p_ins
    cut2 = p_ins + p_del
    for _ in range(n_ops):
        u = rng.uniform()
        kind = "I" if u < cut1 else ("D" if u < cut2 else "K")
        if kind != "I" and not live:
            kind = "I"
        if kind == "I":
            ext = next_id
            next_id += 1
            p = rng.below(top)
            ops.append(("I", ext, p))
            where[ext] = len(live)
            live.append(ext)
            prio[ext] = (p, seq)
            heapq.heappush(pq, (p, seq, ext))
            seq += 1
        elif kind == "D":
            while prio.get(pq[0][2]) != pq[0][:2]:
                heapq.heappop(pq)
            _, _, ext = heapq.heappop(pq)
            ops.append(("D",))
            del prio[ext]
            i = where.pop(ext)
            last = live.pop()
            if last != ext:
                live[i] = last
                where[last] = i
        else:
            ext = live[rng.below(len(live))]
            cur, s = prio[ext]
            p = rng.below(cur + 1)
            ops.append(("K", ext, p))
            prio[ext] = (p, s)
            heapq.heappush(pq, (p, s, ext))
    meta = {"generator": "random", "ops": str(n_ops), "seed": str(seed),
            "mix": ",".join(repr(float(x)) for x in (p_ins, p_del, p_dec))}
    return Trace(ops, meta)


def _check_mix(mix):
    try:
        vals = tuple(float(x) for x in mix)
    except (TypeError, ValueError):
        raise BadMix(f"mix must be three numbers, got {mix!r}") from None
    if len(vals) != 3 or any(v < 0 for v in vals) or abs(sum(vals) - 1.0) > 1e-9:
        raise BadMix(f"mix must be three nonnegative probabilities summing to 1, got {mix!r}")
    return vals


class _Staircase:
    """Emits the staircase construction; see the module docstring."""

    def __init__(self, shed: int, retry_factor: int):
        self.shed = shed
        self.retry_factor = retry_factor
        self.ops: List[tuple] = []
        self.low = STRUCT_TOP
        self.sink = SINK_TOP
        self.next_id = 1
        self.stair: List[Optional[int]] = []

    def retries(self, j: int) -> int:
        return _retries(min(j, self.shed), self.retry_factor)

    def _lower(self) -> int:
        self.low -= 1
        return self.low

    def _insert(self, priority: int) -> int:
        ext = self.next_id
        self.next_id += 1
        self.ops.append(("I", ext, priority))
        return ext

    def flush_min(self) -> None:
        """Insert a new global minimum and delete it (forces consolidation)."""
        self.sink -= 1
        self._insert(self.sink)
        self.ops.append(("D",))

    def grow(self, j: int) -> None:
        st = self.stair
        target = st[j]
        t = min(j, self.shed)
        reps = self.retries(j)
        # X and the shed roots draw keys from a block that sits above target
        block = self.low
        self.low -= reps * (t + 1) + 2
        x = self._insert(block - 1)
        cursor = block - 1
        self.ops.append(("K", target, self._lower()))
        for _ in range(reps):
            cursor -= 1
            self.ops.append(("K", x, cursor))
            self.flush_min()
            for i in range(j - 1, j - 1 - t, -1):
                cursor -= 1
                self.ops.append(("K", st[i], cursor))
        # ranks 0..j-t-1 now live inside X; target moved up to rank j+1
        for i in range(j - t):
            st[i] = None
        st[j] = None
        st[j + 1] = target

    def build(self, k: int) -> None:
        """Fill ranks 0..k-1, assuming they are empty and rank k is free."""
        if k <= 0:
            return
        if len(self.stair) < k + 2:
            self.stair.extend([None] * (k + 2 - len(self.stair)))
        if k == 1:
            self.stair[0] = self._insert(self._lower())
            return
        self.build(k - 1)
        for j in range(k - 2, -1, -1):
            self.grow(j)
            if j - self.shed > 0:
                self.build(j - self.shed)
        self.stair[0] = self._insert(self._lower())


def _retries(t: int, retry_factor: int) -> int:
    # retry_factor 0 means a single attempt regardless of t
    return retry_factor << t if t and retry_factor else 1


@lru_cache(maxsize=None)
def staircase_cost(k: int, shed: int, retry_factor: int = RETRY_FACTOR) -> Tuple[int, int]:
    """(op count, live elements) of ``_Staircase(shed, retry_factor).build(k)``."""
    if k <= 0:
        return 0, 0
    if k == 1:
        return 1, 1
    ops, live = staircase_cost(k - 1, shed, retry_factor)
    for j in range(k - 2, -1, -1):
        t = min(j, shed)
        ops += 2 + _retries(t, retry_factor) * (3 + t)
        live += 1
        if j - shed > 0:
            o, l = staircase_cost(j - shed, shed, retry_factor)
            ops += o
            live += l
    return ops + 1, live + 1


def _finish(builder: _Staircase, rounds: int, meta: dict) -> Trace:
    start = len(builder.ops) + 1
    for _ in range(rounds):
        builder.flush_min()
    meta = dict(meta)
    meta["window"] = str(start)
    return Trace(builder.ops, meta)


def sqrt_n_height(n: int) -> int:
    """Largest broom-staircase height whose elements (plus one) fit in n."""
    k = 1
    while staircase_cost(k + 1, UNLIMITED, 0)[1] + 1 <= n:
        k += 1
    return k


def gen_sqrt_n(n: int, rounds: Optional[int] = None) -> Trace:
    """Broom staircase on at most ``n`` elements, then ``rounds`` probes."""
    if n < 4:
        raise ValueError("gen_sqrt_n needs n >= 4")
    k = sqrt_n_height(n)
    b = _Staircase(UNLIMITED, 0)
    b.build(k)
    rounds = rounds if rounds is not None else max(64, k)
    return _finish(b, rounds, {"generator": "sqrt_n", "n": str(n), "height": str(k)})


@lru_cache(maxsize=None)
def expected_failures(k: int, shed: int, retry_factor: int) -> float:
    """Expected number of grows that RandomCoin fails in ``build(k)``."""
    if k <= 1:
        return 0.0
    e = expected_failures(k - 1, shed, retry_factor)
    for j in range(k - 2, -1, -1):
        t = min(j, shed)
        if t:
            e += (1 - 2.0 ** -t) ** _retries(t, retry_factor)
        if j - shed > 0:
            e += expected_failures(j - shed, shed, retry_factor)
    return e


MIN_ROUNDS = 64
# probe rounds per live element; a rebuilding policy then cycles several
# times inside the window and its mean includes the rebuild cost
ROUNDS_PER_ELEMENT = 8


def _min_rounds(s: int) -> int:
    return min(MIN_ROUNDS, s // 4)


def _rounds(s: int, build_ops: int, live: int) -> int:
    return max(_min_rounds(s), ROUNDS_PER_ELEMENT * (live + 1), (s - build_ops + 1) // 2)


def logsq_params(s: int, n_max: Optional[int] = None) -> Tuple[int, int, int]:
    """Pick (shed, height, retry factor) maximizing height within the budget.

    The build must fit in ``s`` ops together with a few probe rounds,
    leave room for the full probe window within ``2 * s``, keep the
    expected number of failed grows within ``FAIL_BUDGET`` and, with
    ``n_max``, keep at most ``n_max - 1`` live elements. Ties in height go to
    the smaller op count.
    """
    budget = s - 2 * _min_rounds(s)
    best = (1, 0, 1, RETRY_FACTOR)   # (height, -ops, shed, retry factor)
    for shed in range(1, 2 + s.bit_length() // 2):
        for rf in range(2, MAX_RETRY_FACTOR + 1):
            k = 1
            while True:
                ops, live = staircase_cost(k + 1, shed, rf)
                if (ops > budget or ops + 2 * _rounds(s, ops, live) > 2 * s
                        or expected_failures(k + 1, shed, rf) > FAIL_BUDGET
                        or (n_max is not None and live + 1 > n_max)):
                    break
                k += 1
            cand = (k, -staircase_cost(k, shed, rf)[0], shed, rf)
            if cand > best:
                best = cand
    return best[2], best[0], best[3]


def gen_logsq(s: int, n_max: Optional[int] = None) -> Trace:
    """Thin staircase built within ``s`` ops; total length lies in [s, 2s].

    The probe rounds after the build are the measured window. They pad the
    trace to at least ``s`` ops and number at least ``ROUNDS_PER_ELEMENT``
    per live element.
    """
    if s < 64:
        raise ValueError("gen_logsq needs s >= 64")
    shed, k, rf = logsq_params(s, n_max)
    b = _Staircase(shed, rf)
    b.build(k)
    rounds = _rounds(s, len(b.ops), staircase_cost(k, shed, rf)[1])
    meta = {"generator": "logsq", "s": str(s), "shed": str(shed), "retry": str(rf),
            "height": str(k)}
    if n_max is not None:
        meta["n"] = str(n_max)
    return _finish(b, rounds, meta)
