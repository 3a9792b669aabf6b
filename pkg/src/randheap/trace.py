"""Single-heap operation traces and their text format.

A trace is a list of ops, each a plain tuple:

    ("I", ext_id, priority)      insert
    ("D",)                       delete-min
    ("K", ext_id, new_priority)  decrease-key

File format, one op per line, LF newlines, ``#`` starts a comment::

    # meta: generator=sqrt_n n=1024 window=5001
    I 1 17
    D
    K 1 -3

``window`` in the meta line, when present, is the 1-based op index where the
measured window of delete-mins starts.
"""

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional


class TraceParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class InvalidTrace(ValueError):
    def __init__(self, violations):
        self.violations = violations
        first = violations[0]
        super().__init__(f"line {first.line}: {first.kind}: {first.detail}")
        self.line = first.line


class TraceViolation(NamedTuple):
    line: int
    kind: str
    detail: str


@dataclass
class Trace:
    ops: List[tuple] = field(default_factory=list)
    meta: Dict[str, str] = field(default_factory=dict)
    # file line number of each op when parsed from a file
    lines: Optional[List[int]] = None

    def __len__(self):
        return len(self.ops)

    def line_of(self, i: int) -> int:
        """File line (or 1-based position) of the op at index ``i``."""
        return self.lines[i] if self.lines is not None else i + 1

    @property
    def window_start(self) -> Optional[int]:
        w = self.meta.get("window")
        return int(w) if w is not None else None

    def with_ops(self, ops) -> "Trace":
        return Trace(list(ops), dict(self.meta))

    def dumps(self) -> str:
        parts = []
        if self.meta:
            parts.append("# meta: " + " ".join(f"{k}={v}" for k, v in self.meta.items()))
        for op in self.ops:
            parts.append(" ".join(str(x) for x in op))
        return "\n".join(parts) + "\n"

    def save(self, path) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(self.dumps())


_ARITY = {"I": 2, "D": 0, "K": 2}


def loads(text: str) -> Trace:
    ops = []
    lines = []
    meta = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("meta:"):
                for tok in body[5:].split():
                    k, sep, v = tok.partition("=")
                    if not sep:
                        raise TraceParseError(lineno, f"bad meta token {tok!r}")
                    meta[k] = v
            continue
        parts = line.split()
        code = parts[0]
        if code not in _ARITY:
            raise TraceParseError(lineno, f"unknown opcode {code!r}")
        if len(parts) - 1 != _ARITY[code]:
            raise TraceParseError(lineno, f"{code} takes {_ARITY[code]} arguments, "
                                          f"got {len(parts) - 1}")
        try:
            args = [int(p) for p in parts[1:]]
        except ValueError:
            raise TraceParseError(lineno, f"non-integer argument in {line!r}") from None
        if code != "D" and args[0] < 0:
            raise TraceParseError(lineno, "ext id must be non-negative")
        ops.append((code, *args))
        lines.append(lineno)
    return Trace(ops, meta, lines)


def load(path) -> Trace:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def validate_trace(t: Trace) -> List[TraceViolation]:
    """Replay ``t`` against a shadow priority queue; report every violation.

    Delete-min removes the least (priority, insertion order) element, the
    same order every heap variant uses, so the shadow knows exactly which id
    each delete-min removes.
    """
    out = []
    current = {}   # live ext id -> (priority, seq)
    used = set()
    pq = []
    seq = 0
    for i, op in enumerate(t.ops):
        code = op[0]
        if code == "I":
            ext, pri = op[1], op[2]
            if ext in used:
                out.append(TraceViolation(t.line_of(i), "DuplicateId", f"id {ext} inserted twice"))
                continue
            used.add(ext)
            current[ext] = (pri, seq)
            heapq.heappush(pq, (pri, seq, ext))
            seq += 1
        elif code == "D":
            while pq and current.get(pq[0][2]) != pq[0][:2]:
                heapq.heappop(pq)
            if not pq:
                out.append(TraceViolation(t.line_of(i), "EmptyDeleteMin", "delete-min on empty heap"))
                continue
            _, _, ext = heapq.heappop(pq)
            del current[ext]
        elif code == "K":
            ext, pri = op[1], op[2]
            if ext not in current:
                kind = "DeadId" if ext in used else "UnknownId"
                out.append(TraceViolation(t.line_of(i), kind, f"id {ext} is not live"))
                continue
            old, s = current[ext]
            if pri > old:
                out.append(TraceViolation(t.line_of(i), "KeyIncrease", f"id {ext}: {pri} > {old}"))
                continue
            current[ext] = (pri, s)
            heapq.heappush(pq, (pri, s, ext))
        else:
            out.append(TraceViolation(t.line_of(i), "UnknownOp", repr(code)))
    return out
