"""randheap: generate traces, replay them with cost metrics, diff, fit.

Exit codes: 0 success, 1 replay error (DeadHandle/KeyIncrease), 2 oracle
divergence, 3 invalid input (trace, parameters, too few fit points),
4 I/O failure.
"""

import argparse
import os
import sys
import tempfile

from . import adversary
from .fit import FitModel, TooFewPoints, fit
from .heap import DeadHandle, EmptyHeap, KeyIncrease
from .metrics import DELETE_MIN, MetricsSink, read_csv
from .oracle import diff_run, shrink
from .policy import CutPolicyKind
from .runner import replay
from .trace import InvalidTrace, TraceParseError, load, validate_trace

EXIT_OK = 0
EXIT_REPLAY = 1
EXIT_DIVERGED = 2
EXIT_INVALID = 3
EXIT_IO = 4


def _err(msg):
    print(f"randheap: {msg}", file=sys.stderr)


def _load_valid(path):
    """Parse and validate a trace file; return (trace, exit code)."""
    try:
        t = load(path)
    except OSError as exc:
        _err(f"cannot read {path}: {exc}")
        return None, EXIT_IO
    except TraceParseError as exc:
        _err(f"{path}: {exc}")
        return None, EXIT_INVALID
    bad = validate_trace(t)
    if bad:
        v = bad[0]
        _err(f"{path}: line {v.line}: {v.kind}: {v.detail}")
        return None, EXIT_INVALID
    return t, EXIT_OK


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".randheap-")
    try:
        with os.fdopen(fd, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_gen(args) -> int:
    try:
        if args.adversary == "random":
            if args.ops is None or args.ops < 0:
                raise ValueError("--ops is required and must be >= 0")
            mix = tuple(args.mix.split(",")) if args.mix else (0.4, 0.3, 0.3)
            t = adversary.gen_random(args.ops, args.seed, mix)
        elif args.adversary == "sqrtn":
            if args.n is None:
                raise ValueError("--n is required")
            t = adversary.gen_sqrt_n(args.n)
        else:
            if args.ops is None:
                raise ValueError("--ops (the budget s) is required")
            t = adversary.gen_logsq(args.ops, args.n)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INVALID
    try:
        _write_atomic(args.out, t.dumps())
    except OSError as exc:
        _err(f"cannot write {args.out}: {exc}")
        return EXIT_IO
    return EXIT_OK


def cmd_run(args) -> int:
    t, code = _load_valid(args.trace)
    if t is None:
        return code
    sink = MetricsSink(keep_records=True)
    try:
        heap = replay(t, args.policy, args.seed, sink)
    except (DeadHandle, KeyIncrease, EmptyHeap, KeyError) as exc:
        _err(f"replay failed: {type(exc).__name__}: {exc}")
        return EXIT_REPLAY
    try:
        sink.write_csv(args.csv)
    except OSError as exc:
        _err(f"cannot write {args.csv}: {exc}")
        return EXIT_IO
    print(f"policy={args.policy.value} seed={args.seed}")
    print(sink.finish(heap.n).format())
    return EXIT_OK


def cmd_diff(args, heap_factory=None) -> int:
    t, code = _load_valid(args.trace)
    if t is None:
        return code
    try:
        div = diff_run(t, args.policy, args.seed, heap_factory=heap_factory)
    except InvalidTrace as exc:
        _err(str(exc))
        return EXIT_INVALID
    if div is None:
        print("no divergence")
        return EXIT_OK
    print(f"divergence: {div}")
    small = shrink(t, args.policy, args.seed, div, heap_factory=heap_factory)
    out = args.trace + ".shrunk"
    try:
        small.save(out)
    except OSError as exc:
        _err(f"cannot write {out}: {exc}")
        return EXIT_IO
    print(f"shrunk reproducer ({len(small)} ops): {out}")
    return EXIT_DIVERGED


def _window_mean(records, window: str) -> float:
    dm = [r.cost for r in records if r.op_kind == DELETE_MIN]
    if not dm:
        return 0.0
    if window.endswith("%"):
        k = max(1, int(len(dm) * float(window[:-1]) / 100))
    else:
        k = int(window)
        k = len(dm) if k <= 0 else min(k, len(dm))
    tail = dm[-k:]
    return sum(tail) / len(tail)


def cmd_fit(args) -> int:
    pts = []
    for arg in args.paths:
        path, _, size = arg.partition(",")
        try:
            recs = read_csv(path)
        except (OSError, ValueError) as exc:
            _err(f"cannot read {path}: {exc}")
            return EXIT_IO
        x = float(size) if size else float(recs[-1].op_index if recs else 0)
        pts.append((x, _window_mean(recs, args.window)))
    try:
        res = fit(pts, args.model)
    except TooFewPoints as exc:
        _err(str(exc))
        return EXIT_INVALID
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INVALID
    for x, y in pts:
        print(f"size={x:g} mean={y:.6f}")
    print(res.format())
    return EXIT_OK


def _policy(value):
    try:
        return CutPolicyKind.parse(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="randheap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write a trace file")
    g.add_argument("--adversary", required=True, choices=["random", "sqrtn", "logsq"])
    g.add_argument("--ops", type=int, help="op count (random) or budget s (logsq)")
    g.add_argument("--n", type=int, help="element bound (sqrtn, optional for logsq)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--mix", help="p_insert,p_delete_min,p_decrease_key")
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="replay a trace and write cost records")
    r.add_argument("--trace", required=True)
    r.add_argument("--policy", required=True, type=_policy)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--csv", required=True)

    d = sub.add_parser("diff", help="replay against the oracle")
    d.add_argument("--trace", required=True)
    d.add_argument("--policy", required=True, type=_policy)
    d.add_argument("--seed", type=int, default=0)

    f = sub.add_parser("fit", help="fit a growth model to cost CSVs")
    f.add_argument("--model", required=True, type=FitModel.parse,
                   choices=list(FitModel), metavar="{power,loglinear,logsq}")
    f.add_argument("--window", default="25%",
                   help="last W delete-mins per file, or a percentage such as 25%%")
    f.add_argument("paths", nargs="+", metavar="PATH[,SIZE]")
    return p


def main(argv=None, heap_factory=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if args.cmd == "gen":
        return cmd_gen(args)
    if args.cmd == "run":
        return cmd_run(args)
    if args.cmd == "diff":
        return cmd_diff(args, heap_factory)
    return cmd_fit(args)


def entry() -> None:
    sys.exit(main())
