"""Actual-cost accounting for heap operations.

Each public heap operation produces one :class:`CostRecord`. The cost of a
record is::

    cost = 1 + links + cuts + flips + roots_scanned + children_detached

so lazy operations (insert, meld) cost exactly 1 and a delete-min pays for
the promoted children, the root-list scan and the links it performs. All
weights are 1; growth classes do not depend on the weights.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

INSERT = "I"
DELETE_MIN = "D"
DECREASE_KEY = "K"
MELD = "M"
OP_KINDS = (INSERT, DELETE_MIN, DECREASE_KEY, MELD)

CSV_HEADER = "op_index,op_kind,links,cuts,flips,roots_scanned,children_detached,n_before,cost"


class OutOfOrder(ValueError):
    pass


class CostRecord(NamedTuple):
    op_index: int
    op_kind: str
    links: int
    cuts: int
    flips: int
    roots_scanned: int
    children_detached: int
    n_before: int
    cost: int

    @classmethod
    def make(cls, op_index, op_kind, links=0, cuts=0, flips=0,
             roots_scanned=0, children_detached=0, n_before=0):
        cost = 1 + links + cuts + flips + roots_scanned + children_detached
        return cls(op_index, op_kind, links, cuts, flips, roots_scanned,
                   children_detached, n_before, cost)

    def expected_cost(self) -> int:
        return (1 + self.links + self.cuts + self.flips + self.roots_scanned
                + self.children_detached)

    def csv_row(self) -> str:
        return ",".join(str(v) for v in self)


class CutEvent(NamedTuple):
    cut_node: int
    former_parent: int
    triggered_by: str  # "DecreaseKey" | "PolicyCascade" | "Consolidate"


@dataclass
class KindStats:
    count: int = 0
    total_cost: int = 0
    max_cost: int = 0

    @property
    def mean_cost(self) -> float:
        return self.total_cost / self.count if self.count else 0.0


@dataclass
class RunSummary:
    per_kind: Dict[str, KindStats] = field(
        default_factory=lambda: {k: KindStats() for k in OP_KINDS})
    max_degree_observed: int = 0
    final_n: int = 0
    total_ops: int = 0

    def format(self) -> str:
        lines = [f"total_ops={self.total_ops} final_n={self.final_n} "
                 f"max_degree={self.max_degree_observed}"]
        for kind in OP_KINDS:
            st = self.per_kind[kind]
            if st.count:
                lines.append(f"  {kind}: count={st.count} total={st.total_cost} "
                             f"mean={st.mean_cost:.4f} max={st.max_cost}")
        return "\n".join(lines)


class MetricsSink:
    """Collects cost records for one run and keeps a running summary.

    ``keep_records=False`` keeps only the summary, which is what long sweeps
    use; ``keep_events=True`` additionally stores every :class:`CutEvent`.
    """

    def __init__(self, keep_records: bool = True, keep_events: bool = False):
        self.keep_records = keep_records
        self.keep_events = keep_events
        self.records: List[CostRecord] = []
        self.events: List[CutEvent] = []
        self.summary = RunSummary()
        self._per_kind = self.summary.per_kind
        self.max_degree = 0
        self._last_index = 0

    def record(self, rec: CostRecord) -> None:
        # positional access: this runs once per heap operation
        if rec[0] <= self._last_index:
            raise OutOfOrder(f"op_index {rec[0]} after {self._last_index}")
        cost = rec[8]
        if cost != 1 + rec[2] + rec[3] + rec[4] + rec[5] + rec[6]:
            raise ValueError(f"cost {cost} does not match its addends in {rec}")
        self._last_index = rec[0]
        st = self._per_kind[rec[1]]
        st.count += 1
        st.total_cost += cost
        if cost > st.max_cost:
            st.max_cost = cost
        self.summary.total_ops += 1
        if self.keep_records:
            self.records.append(rec)

    def cut_event(self, ev: CutEvent) -> None:
        if self.keep_events:
            self.events.append(ev)

    def finish(self, final_n: int) -> RunSummary:
        self.summary.final_n = final_n
        self.summary.max_degree_observed = self.max_degree
        return self.summary

    def write_csv(self, path) -> None:
        write_csv(self.records, path)


def write_csv(records: Iterable[CostRecord], path) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row())
            fh.write("\n")


def read_csv(path) -> List[CostRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 9:
                raise ValueError(f"{path}:{lineno}: expected 9 fields")
            vals = [int(p) for i, p in enumerate(parts) if i != 1]
            out.append(CostRecord(vals[0], parts[1], *vals[1:]))
    return out


def summarize(records: Iterable[CostRecord]) -> RunSummary:
    sink = MetricsSink(keep_records=False)
    for rec in records:
        sink.record(rec)
    return sink.summary


def amortized_series(records: Iterable[CostRecord], window: int) -> List[Tuple[int, float]]:
    """Blocked mean of delete-min cost.

    One point per full block of ``window`` delete-min records:
    ``(op_index at block end, mean cost over the block)``. A trailing partial
    block is dropped.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    points = []
    total = 0
    k = 0
    for rec in records:
        if rec.op_kind != DELETE_MIN:
            continue
        total += rec.cost
        k += 1
        if k == window:
            points.append((rec.op_index, total / window))
            total = 0
            k = 0
    return points


def windowed_mean(records: Iterable[CostRecord], start_index: Optional[int] = None,
                  fraction: float = 0.25) -> float:
    """Mean delete-min cost over a measured window.

    With ``start_index`` the window is every delete-min whose op_index is at
    least that value; otherwise it is the last ``fraction`` of delete-mins.
    """
    dm = [r.cost for r in records if r.op_kind == DELETE_MIN
          and (start_index is None or r.op_index >= start_index)]
    if not dm:
        return 0.0
    if start_index is None:
        k = max(1, int(round(len(dm) * fraction)))
        dm = dm[-k:]
    return sum(dm) / len(dm)
