"""Command line front end.

Five subcommands over JSON inputs:

- autocorr: autocorrelation of a signal, plus the sampled intensity floor
- enumerate: all intensity-equivalent signals, canonical or anchored
- solve: run one solver on a signal or an anchored pairing
- decide: product-partition decision through retrieval (exit 0/1/2)
- bench: deterministic solver benchmark, hard or random suite, CSV out

Complex numbers travel as [re, im] pairs. Input documents carry a
"kind" field, one of "signal", "pairing" or "pp"; the pairing kind may
carry an "anchor".
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ambiguity import (
    ANCHOR_REL_TOL,
    distinct_canonical,
    enumerate_solutions,
    filter_by_anchor,
    trivial_orbit_distance,
)
from .errors import (
    FprlabError,
    KindMismatch,
    NoFeasibleSolution,
    ParseError,
    UnknownSolver,
)
from .generate import generic_instance, pairing_of, planted_retrieval
from .hardness import PPAnswer, PPInstance, decide_pp
from .signal_core import (
    ComplexSignal,
    autocorrelation,
    spectrum_from_autocorr,
    uniform_grid,
)
from .solvers import SOLVERS, PRInstance, SolverConfig, oracle_solve
from .ztransform import ZeroPairing

RECOVERY_REL_TOL = 1e-6


def _complex_in(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return complex(value[0], value[1])
    raise ParseError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _complex_out(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _signal_out(x: ComplexSignal) -> list:
    return [_complex_out(z) for z in x.entries]


def load_document(path: str) -> dict:
    """Read a JSON input document from a path or '-' for stdin."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError(f"{path}: document must be an object with a 'kind' field")
    if doc["kind"] not in ("signal", "pairing", "pp"):
        raise ParseError(f"{path}: unknown kind {doc['kind']!r}")
    return doc


def _require_kind(doc: dict, kind: str, command: str):
    if doc["kind"] != kind:
        raise KindMismatch(f"{command} needs kind '{kind}', got '{doc['kind']}'")


def parse_signal(doc: dict) -> ComplexSignal:
    entries = doc.get("entries")
    if not isinstance(entries, list) or not entries:
        raise ParseError("signal: 'entries' must be a nonempty list")
    vals = [_complex_in(v, f"entries[{i}]") for i, v in enumerate(entries)]
    return ComplexSignal(np.array(vals, dtype=np.complex128))


def parse_pairing(doc: dict) -> tuple:
    """Returns (ZeroPairing, anchor or None)."""
    if "scale" not in doc or "pairs" not in doc:
        raise ParseError("pairing: 'scale' and 'pairs' are required")
    scale = _complex_in(doc["scale"], "scale")
    raw_pairs = doc["pairs"]
    if not isinstance(raw_pairs, list):
        raise ParseError("pairing: 'pairs' must be a list")
    pairs = []
    for i, item in enumerate(raw_pairs):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise ParseError(f"pairs[{i}]: expected [gamma, gamma_recip]")
        pairs.append(
            (_complex_in(item[0], f"pairs[{i}][0]"), _complex_in(item[1], f"pairs[{i}][1]"))
        )
    flags = doc.get("unit_circle_flags")
    if flags is None:
        flags = [False] * len(pairs)
    if not isinstance(flags, list) or len(flags) != len(pairs) or not all(
        isinstance(f, bool) for f in flags
    ):
        raise ParseError("pairing: 'unit_circle_flags' must be a bool list matching 'pairs'")
    anchor = None
    if "anchor" in doc and doc["anchor"] is not None:
        anchor = _complex_in(doc["anchor"], "anchor")
    return ZeroPairing(scale, tuple(pairs), tuple(flags)), anchor


def parse_pp(doc: dict) -> PPInstance:
    u = doc.get("u")
    if not isinstance(u, list) or len(u) < 2 or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in u
    ):
        raise ParseError("pp: 'u' must be a list of at least two integers")
    return PPInstance(tuple(u))


def _solver_by_name(name: str):
    if name not in SOLVERS:
        raise UnknownSolver(f"unknown solver {name!r}; choose from {sorted(SOLVERS)}")
    return SOLVERS[name]


def _emit_doc(doc: dict, out_path: str | None):
    text = json.dumps(doc, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_autocorr(args) -> int:
    doc = load_document(args.input)
    _require_kind(doc, "signal", "autocorr")
    x = parse_signal(doc)
    r = autocorrelation(x)
    m = max(4 * x.n, 2 * x.n - 1)
    floor = float(np.min(spectrum_from_autocorr(r, uniform_grid(m), tol=args.tol).values))
    _emit_doc(
        {
            "kind": "autocorr",
            "n": x.n,
            "entries": [_complex_out(v) for v in r.entries],
            "r0": float(r.entries[0].real),
            "min_sampled_intensity": floor,
        },
        args.out,
    )
    return 0


def cmd_enumerate(args) -> int:
    doc = load_document(args.input)
    if doc["kind"] == "signal":
        x = parse_signal(doc)
        pairing, anchor = pairing_of(x), None
    elif doc["kind"] == "pairing":
        pairing, anchor = parse_pairing(doc)
    else:
        raise KindMismatch("enumerate needs kind 'signal' or 'pairing', got 'pp'")
    sols = enumerate_solutions(pairing)
    out: dict = {
        "kind": "solution_set",
        "n": pairing.n_pairs + 1,
        "total_selections": len(sols.solutions),
    }
    if anchor is not None:
        kept = filter_by_anchor(sols, anchor, tol=args.tol)
        out["anchored"] = True
        out["count"] = len(kept.solutions)
        out["solutions"] = [_signal_out(sig) for _, sig in kept.solutions]
    else:
        reps = distinct_canonical(sols.signals())
        out["anchored"] = False
        out["count"] = len(reps)
        out["solutions"] = [_signal_out(sig) for sig in reps]
    _emit_doc(out, args.out)
    return 0


def _ground_truths(doc_kind: str, signal, inst: PRInstance) -> list:
    if doc_kind == "signal":
        return [signal]
    try:
        sols = enumerate_solutions(inst.pairing, alpha=float(np.angle(inst.anchor)))
        return [sig for _, sig in filter_by_anchor(sols, inst.anchor).solutions]
    except NoFeasibleSolution:
        return []


def _recovered(final: ComplexSignal, truths: list) -> bool:
    for gt in truths:
        lim = RECOVERY_REL_TOL * float(np.linalg.norm(gt.entries))
        if trivial_orbit_distance(final, gt) <= lim:
            return True
    return False


def cmd_solve(args) -> int:
    doc = load_document(args.input)
    signal = None
    if doc["kind"] == "signal":
        signal = parse_signal(doc)
        inst = PRInstance.from_signal(signal, grid_mult=args.grid_mult)
    elif doc["kind"] == "pairing":
        pairing, anchor = parse_pairing(doc)
        if anchor is None:
            raise ParseError("solve on a pairing requires an 'anchor' value")
        inst = PRInstance.from_pairing(pairing, anchor, grid_mult=args.grid_mult)
    else:
        raise KindMismatch("solve needs kind 'signal' or 'pairing', got 'pp'")
    solver = _solver_by_name(args.solver)
    cfg = SolverConfig(
        max_iters=args.iters,
        loss_tol=args.loss_tol,
        step_size=args.step_size,
        beta_hio=args.beta,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    trace = solver(inst, cfg)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    truths = _ground_truths(doc["kind"], signal, inst)
    _emit_doc(
        {
            "kind": "solve_result",
            "solver": args.solver,
            "n": inst.n,
            "grid_m": inst.grid.m,
            "iterations": len(trace.iterates) - 1,
            "final_loss": float(trace.losses[-1]),
            "converged": trace.converged,
            "recovered": _recovered(trace.final, truths) if truths else None,
            "wall_ms": round(wall_ms, 3),
            "entries": _signal_out(trace.final),
        },
        args.out,
    )
    return 0


def cmd_decide(args) -> int:
    doc = load_document(args.input)
    _require_kind(doc, "pp", "decide")
    pp = parse_pp(doc)
    solver = _solver_by_name(args.solver)
    cfg = None
    if args.iters is not None:
        cfg = SolverConfig(max_iters=args.iters, seed=args.seed)
    decision = decide_pp(pp, solver, cfg=cfg, grid_mult=args.grid_mult)
    _emit_doc(
        {
            "kind": "decision",
            "answer": decision.answer.value,
            "witness": sorted(decision.witness) if decision.witness is not None else None,
            "removed_pairs": [list(p) for p in decision.removed_pairs],
        },
        args.out,
    )
    return 0 if decision.answer is PPAnswer.HAS_SOLUTION else 1


@dataclass(frozen=True)
class ResultRow:
    """One (instance, solver) benchmark outcome; wall time never enters the CSV."""

    instance_id: str
    solver: str
    iterations: int
    final_loss: float
    recovered: bool
    wall_ms: float


CSV_HEADER = "instance_id,solver,iterations,final_loss,recovered"


def _csv_line(row: ResultRow) -> str:
    return (
        f"{row.instance_id},{row.solver},{row.iterations},"
        f"{row.final_loss!r},{str(row.recovered).lower()}"
    )


def _thread_cap() -> int:
    raw = os.environ.get("FPRLAB_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError as exc:
            raise ParseError("FPRLAB_THREADS must be an integer") from exc
        return max(1, cap)
    return max(1, min(8, os.cpu_count() or 1))


def _bench_one(task) -> ResultRow:
    iid, name, inst, gt, cfg = task
    solver = SOLVERS[name]
    t0 = time.perf_counter()
    try:
        trace = solver(inst, cfg)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        lim = RECOVERY_REL_TOL * float(np.linalg.norm(gt.entries))
        rec = trivial_orbit_distance(trace.final, gt) <= lim
        return ResultRow(iid, name, len(trace.iterates) - 1, float(trace.losses[-1]), rec, wall_ms)
    except FprlabError:
        wall_ms = (time.perf_counter() - t0) * 1000.0
        return ResultRow(iid, name, 0, float("nan"), False, wall_ms)


def cmd_bench(args) -> int:
    sizes = []
    for part in args.sizes.split(","):
        part = part.strip()
        if part:
            sizes.append(int(part))
    if any(s < 3 for s in sizes):
        raise ParseError("bench sizes must be >= 3")
    names = [s.strip() for s in args.solvers.split(",") if s.strip()]
    for name in names:
        _solver_by_name(name)
    if args.trials < 0:
        raise ParseError("trials must be >= 0")

    tasks = []
    for size in sizes:
        for t in range(args.trials):
            rng = np.random.default_rng((args.seed, size, t))
            if args.suite == "hard":
                hard, gt = planted_retrieval(size, rng, grid_mult=args.grid_mult)
                inst = hard.pr
            else:
                gt, pairing = generic_instance(size, rng)
                inst = PRInstance.from_signal(gt, grid_mult=args.grid_mult, pairing=pairing)
            iid = f"n{size}_t{t:03d}"
            for si, name in enumerate(names):
                cfg = SolverConfig(
                    max_iters=args.iters,
                    seed=args.seed + 7919 * si + 101 * t + size,
                )
                tasks.append((iid, name, inst, gt, cfg))

    with ThreadPoolExecutor(max_workers=_thread_cap()) as pool:
        rows = list(pool.map(_bench_one, tasks))
    rows.sort(key=lambda r: (r.instance_id, r.solver))

    lines = [CSV_HEADER] + [_csv_line(r) for r in rows]
    csv_text = "\n".join(lines) + "\n"
    summary = _bench_summary(rows, names)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(summary)
    else:
        sys.stdout.write(csv_text)
        print(summary, file=sys.stderr)
    return 0


def _bench_summary(rows, names) -> str:
    lines = [f"{len(rows)} runs"]
    for name in sorted(set(names)):
        mine = [r for r in rows if r.solver == name]
        if not mine:
            continue
        rate = sum(r.recovered for r in mine) / len(mine)
        iters = sum(r.iterations for r in mine) / len(mine)
        wall = sum(r.wall_ms for r in mine) / len(mine)
        finals = [r.final_loss for r in mine if math.isfinite(r.final_loss)]
        med = sorted(finals)[len(finals) // 2] if finals else float("nan")
        lines.append(
            f"  {name}: recovery {rate:.2f}, mean iters {iters:.1f}, "
            f"median final loss {med:.3e}, mean wall {wall:.2f} ms"
        )
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fprlab",
        description="Fourier phase retrieval laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("autocorr", help="autocorrelation of a signal")
    p.add_argument("input", help="JSON file with kind 'signal', or - for stdin")
    p.add_argument("--tol", type=float, default=1e-9, help="imaginary residue tolerance")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_autocorr)

    p = sub.add_parser("enumerate", help="all signals sharing the intensity")
    p.add_argument("input", help="JSON file with kind 'signal' or 'pairing'")
    p.add_argument("--tol", type=float, default=ANCHOR_REL_TOL, help="anchor filter tolerance")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("solve", help="run one solver")
    p.add_argument("input", help="JSON file with kind 'signal' or anchored 'pairing'")
    p.add_argument("--solver", default="er", help="er, hio, wf or oracle")
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-mult", type=int, default=4)
    p.add_argument("--loss-tol", type=float, default=1e-12)
    p.add_argument("--step-size", type=float, default=1e-3)
    p.add_argument("--beta", type=float, default=0.9)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("decide", help="decide a product-partition instance")
    p.add_argument("input", help="JSON file with kind 'pp'")
    p.add_argument("--solver", default="oracle")
    p.add_argument("--iters", type=int, default=None, help="override the per-round budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-mult", type=int, default=4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("bench", help="benchmark solvers on generated instances")
    p.add_argument("--sizes", default="3,4", help="comma list of signal lengths")
    p.add_argument("--trials", type=int, default=3, help="instances per size")
    p.add_argument(
        "--suite",
        default="hard",
        choices=("hard", "random"),
        help="hard: planted adversarial instances; random: generic signals",
    )
    p.add_argument("--solvers", default="er,hio,wf,oracle", help="comma list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--grid-mult", type=int, default=4)
    p.add_argument("--out", default=None, help="CSV path; stdout when omitted")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FprlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
