import math

import pytest
from hypothesis import given, strategies as st

from randheap.heap import (DeadHandle, EmptyHeap, Heap, KeyIncrease,
                           PolicyMismatch, meld, new)
from randheap.metrics import MetricsSink
from randheap.policy import CutPolicyKind
from randheap.rng import SplitMix64

POLICIES = list(CutPolicyKind)
PHI = (1 + 5 ** 0.5) / 2


def drain(h):
    out = []
    while len(h):
        out.append(h.delete_min()[0])
    return out


def test_new_is_empty():
    h = new(CutPolicyKind.MARKBIT, 0)
    assert h.n == 0 and h.s == 0 and h.find_min() is None


def test_same_seed_same_coin_stream():
    a, b = new(CutPolicyKind.RANDOM, 7), new(CutPolicyKind.RANDOM, 7)
    assert [a._flip() for _ in range(64)] == [b._flip() for _ in range(64)]


def test_insert_into_empty():
    h = new()
    h.insert(5)
    assert h.find_min()[1] == 5


def test_insert_three():
    h = new()
    for p in (3, 1, 2):
        h.insert(p)
    assert h.find_min()[1] == 1 and h.n == 3 and len(h.roots) == 3


def test_insert_records_lazy_cost():
    sink = MetricsSink()
    h = Heap(CutPolicyKind.RANDOM, 0, sink)
    h.insert(4)
    rec = sink.records[0]
    assert (rec.links, rec.cuts, rec.flips, rec.cost) == (0, 0, 0, 1)


def test_find_min_does_not_count():
    h = new()
    h.insert(9)
    h.insert(4)
    assert h.find_min()[1] == 4
    assert h.s == 2


def test_delete_min_three():
    h = new()
    for p in (3, 1, 2):
        h.insert(p)
    assert h.delete_min()[0] == 1
    assert h.find_min()[1] == 2


def test_delete_min_of_eight_leaves_binary_digits():
    sink = MetricsSink()
    h = Heap(CutPolicyKind.MARKBIT, 0, sink)
    for p in range(8):
        h.insert(p)
    assert h.delete_min()[0] == 0
    assert sorted(h.root_degrees()) == [0, 1, 2]
    rec = sink.records[-1]
    # 7 roots scanned, 4 links merge them into trees of sizes 1, 2, 4
    assert (rec.roots_scanned, rec.links, rec.children_detached) == (7, 4, 0)
    assert h.validate() == []


def test_empty_delete_min_raises():
    with pytest.raises(EmptyHeap):
        new().delete_min()


def test_dead_handle_and_reused_slot():
    h = new()
    a = h.insert(1)
    h.delete_min()
    b = h.insert(2)
    assert a != b
    with pytest.raises(DeadHandle):
        h.decrease_key(a, 0)
    with pytest.raises(DeadHandle):
        h.node(12345)


def test_key_increase_raises():
    h = new()
    x = h.insert(5)
    with pytest.raises(KeyIncrease):
        h.decrease_key(x, 6)


def test_equal_key_decrease_is_a_noop_cut():
    h = new(CutPolicyKind.NAIVE)
    hs = [h.insert(p) for p in range(4)]
    h.delete_min()
    h.decrease_key(hs[3], 3)
    assert h._cuts == 0 and h.validate() == []


def test_decrease_root_no_cut():
    sink = MetricsSink()
    h = Heap(CutPolicyKind.RANDOM, 0, sink)
    x = h.insert(5)
    h.insert(7)
    h.decrease_key(x, 1)
    rec = sink.records[-1]
    assert (rec.cuts, rec.flips, rec.cost) == (0, 0, 1)


def _binomial_16(policy, seed):
    """One B4 tree over priorities 1..16 (depth-4 leaf is the last child chain)."""
    sink = MetricsSink()
    h = Heap(policy, seed, sink)
    handles = {p: h.insert(p) for p in range(17)}
    h.delete_min()
    assert h.root_degrees() == [4]
    return h, sink, handles


def _deepest(h):
    best = (0, None)
    stack = [(r, 0) for r in h.roots]
    while stack:
        x, d = stack.pop()
        if d > best[0]:
            best = (d, x)
        stack.extend((c, d + 1) for c in x.children)
    return best


def test_naive_child_cut_is_one_cut():
    h, sink, _ = _binomial_16(CutPolicyKind.NAIVE, 0)
    depth, x = _deepest(h)
    h.decrease_key(x.handle, -1)
    rec = sink.records[-1]
    assert (rec.cuts, rec.flips) == (1, 0)


def test_random_coin_heads_heads_tails_depth_four():
    # seed 1 starts heads, heads, tails
    r = SplitMix64(1)
    assert [r.flip() for _ in range(3)] == [1, 1, 0]
    h, sink, _ = _binomial_16(CutPolicyKind.RANDOM, 1)
    depth, x = _deepest(h)
    assert depth == 4
    h.decrease_key(x.handle, -1)
    rec = sink.records[-1]
    assert (rec.cuts, rec.flips) == (3, 3)
    assert h.validate() == []


def test_random_coin_tails_first():
    assert SplitMix64(2).flip() == 0
    h, sink, _ = _binomial_16(CutPolicyKind.RANDOM, 2)
    _, x = _deepest(h)
    h.decrease_key(x.handle, -1)
    rec = sink.records[-1]
    assert (rec.cuts, rec.flips) == (1, 1)


def test_meld_empty():
    m = meld(new(), new())
    assert m.n == 0 and m.find_min() is None


def test_meld_small():
    a, b = new(), new()
    a.insert(1)
    a.insert(5)
    hb = b.insert(3)
    m = meld(a, b)
    assert m.find_min()[1] == 1 and m.n == 3
    m.decrease_key(hb, 0)
    assert m.find_min() == (hb, 0)
    assert m.validate() == []


def test_meld_records_unit_cost_and_counts_op():
    sink = MetricsSink()
    a = Heap(CutPolicyKind.MARKBIT, 0, sink)
    b = new()
    a.insert(1)
    b.insert(2)
    meld(a, b)
    rec = sink.records[-1]
    assert rec.op_kind == "M" and rec.cost == 1 and rec.n_before == 2


def test_meld_policy_mismatch():
    with pytest.raises(PolicyMismatch):
        meld(new(CutPolicyKind.MARKBIT), new(CutPolicyKind.RANDOM))


def test_meld_two_hundred_sorted():
    rng = SplitMix64(11)
    a, b = new(CutPolicyKind.RANDOM, 1), new(CutPolicyKind.RANDOM, 2)
    pris = []
    for h in (a, b):
        for _ in range(100):
            p = rng.below(1000)
            pris.append(p)
            h.insert(p)
    m = meld(a, b)
    assert drain(m) == sorted(pris)


def test_validate_detects_corrupt_degree():
    h = new()
    for p in range(4):
        h.insert(p)
    h.delete_min()
    h.roots[0].degree += 1
    kinds = [v.kind for v in h.validate()]
    assert kinds == ["DegreeMismatch"]


def test_validate_detects_heap_order_and_marks():
    h = new(CutPolicyKind.RANDOM)
    for p in range(4):
        h.insert(p)
    h.delete_min()
    root = max(h.roots, key=lambda r: r.degree)
    child = root.children[0]
    child.marked = True
    child.key = root.key - 1
    kinds = {v.kind for v in h.validate()}
    assert {"UnexpectedMark", "HeapOrder"} <= kinds


def test_flatten_keeps_invariants():
    h = new(CutPolicyKind.FIXED)
    for p in range(33):
        h.insert(p)
    h.delete_min()
    cut = h.flatten()
    assert cut == 31 and all(r.degree == 0 for r in h.roots)
    assert h.validate() == []


ops = st.lists(st.tuples(st.sampled_from("IIDK"), st.integers(-50, 50),
                         st.integers(0, 10 ** 6)), max_size=120)


@given(ops, st.sampled_from(POLICIES), st.integers(0, 2 ** 64 - 1))
def test_random_ops_keep_invariants(seq, policy, seed):
    h = Heap(policy, seed)
    live = {}      # tiebreak -> (handle, priority)
    for code, pri, pick in seq:
        if code == "I" or not live:
            hd = h.insert(pri)
            live[h.node(hd).tiebreak] = (hd, pri)
        elif code == "D":
            want = min((p, t) for t, (_, p) in live.items())
            assert h.delete_min() == want
            del live[want[1]]
            degs = h.root_degrees()
            assert len(degs) == len(set(degs))
        else:
            tb = sorted(live)[pick % len(live)]
            hd, p = live[tb]
            h.decrease_key(hd, p - pick % 7)
            live[tb] = (hd, p - pick % 7)
        assert h.validate() == []
        if policy is CutPolicyKind.MARKBIT and h.n > 1:
            assert h.max_degree() <= math.floor(math.log(h.n, PHI))
    assert drain(h) == sorted(p for _, p in live.values())


@given(st.lists(st.integers(-1000, 1000), max_size=80), st.sampled_from(POLICIES))
def test_drain_sorts(pris, policy):
    h = Heap(policy, 3)
    for p in pris:
        h.insert(p)
    assert drain(h) == sorted(pris)


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 100)), max_size=80),
       st.integers(0, 1000))
def test_determinism_same_seed(seq, seed):
    def run():
        sink = MetricsSink()
        h = Heap(CutPolicyKind.RANDOM, seed, sink)
        hs = []
        for code, v in seq:
            if code == 0 or not h.n:
                hs.append(h.insert(v))
            elif code == 1:
                h.delete_min()
            else:
                for x in hs:
                    try:
                        h.decrease_key(x, h.priority(x) - v)
                        break
                    except DeadHandle:
                        continue
        return h.snapshot(), [tuple(r)[1:] for r in sink.records]
    assert run() == run()
