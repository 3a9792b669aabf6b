"""Cut policies: what happens to a node's ancestors after it loses a child.

``after_cut(heap, parent)`` runs right after decrease-key detaches a child
from ``parent``. ``on_consolidate(heap)`` runs once per delete-min, after
the deleted node's children were promoted and before any linking.

MarkBit      textbook cascading cuts driven by the per-node mark.
RandomCoin   one fair coin per ancestor step: heads cuts and continues
             upward, tails stops. Roots never consume a flip.
NaiveCut     no cascade at all.
FixedRandom  RandomCoin plus a periodic rebuild: once the number of
             operations since the last rebuild reaches ``REBUILD_FACTOR * n``,
             the next delete-min cuts every tree down to singleton roots
             before consolidating. Trees therefore never outlive O(n)
             operations, so the number of coin-flip survivals a node can
             accumulate is governed by n rather than by the total operation
             count. The rebuild costs O(n) and happens at most once per
             ``REBUILD_FACTOR * n`` operations.
"""

import enum


class CutPolicyKind(enum.Enum):
    MARKBIT = "markbit"
    RANDOM = "random"
    NAIVE = "naive"
    FIXED = "fixed"

    @classmethod
    def parse(cls, value) -> "CutPolicyKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown policy {value!r}; expected one of "
                             f"{', '.join(k.value for k in cls)}") from None


class MarkBit:
    kind = CutPolicyKind.MARKBIT

    def after_cut(self, heap, p):
        while p.parent is not None:
            if not p.marked:
                p.marked = True
                return
            p = heap._cut(p, "PolicyCascade")

    def on_consolidate(self, heap):
        pass


class RandomCoin:
    kind = CutPolicyKind.RANDOM

    def after_cut(self, heap, p):
        while p.parent is not None:
            if not heap._flip():
                return
            p = heap._cut(p, "PolicyCascade")

    def on_consolidate(self, heap):
        pass


class NaiveCut:
    kind = CutPolicyKind.NAIVE

    def after_cut(self, heap, p):
        pass

    def on_consolidate(self, heap):
        pass


REBUILD_FACTOR = 2


class FixedRandom(RandomCoin):
    kind = CutPolicyKind.FIXED

    def __init__(self, rebuild_factor: int = REBUILD_FACTOR):
        self.rebuild_factor = rebuild_factor
        self.last_rebuild = 0
        self.rebuilds = 0

    def on_consolidate(self, heap):
        if heap.s - self.last_rebuild >= self.rebuild_factor * max(heap.n, 1):
            heap.flatten()
            self.last_rebuild = heap.s
            self.rebuilds += 1


def make_policy(kind: CutPolicyKind):
    return {
        CutPolicyKind.MARKBIT: MarkBit,
        CutPolicyKind.RANDOM: RandomCoin,
        CutPolicyKind.NAIVE: NaiveCut,
        CutPolicyKind.FIXED: FixedRandom,
    }[kind]()
