"""Command-line front end.

Verbs::

    progqca compile CIRCUIT [--peephole on|off] [--out BAND]
    progqca run CIRCUIT --level gate|ccqca|nn|qca --input DIGITS
                [--mode factored|faithful] [--shots N] [--seed S]
    progqca verify [--levels ...] [--max-wires N] [--seeds K] [--tol T]
    progqca trace BAND [--input DIGITS] [--steps T] [--plot FILE]
    progqca resources CIRCUIT [--families] [--plot FILE]

Exit codes: 0 on success (and verdict pass), 1 on verdict fail, 2 on
usage or parse errors.  All commands are deterministic for fixed flags
and seeds.  Probability tables are tab-separated; ``--plot`` writes a
rendered figure next to the textual output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import formats
from .autoqca import readout, run_steps
from .ccqca import interleave_index
from .compiler import (
    GCircuit,
    GateApp,
    compile_circuit,
    estimate_resources,
    instantiate,
    wire_position,
)
from .errors import LayoutError, ParseError, ProgqcaError
from .oracle import cross_check, simulate_circuit
from .statevec import marginal_distribution, sample

USAGE_ERROR = 2
VERDICT_FAIL = 1


def _load_circuit(path: str) -> GCircuit:
    doc = formats.circuit_from_text(Path(path).read_text())
    return GCircuit(doc.wires, tuple(GateApp(k, ops) for k, ops in doc.gates))


def _band_doc(compiled) -> formats.BandDoc:
    cfg = compiled.config
    return formats.BandDoc(
        digits="".join(str(d) for d in compiled.band.digits),
        origin=compiled.band.origin,
        ring_size=cfg.ring_size,
        slot_origin=cfg.slot_origin,
        data_extent=cfg.data_extent,
        wires=cfg.wires,
        completion_steps=cfg.completion_steps,
    )


# ---------------------------------------------------------------------------
# compile
# ---------------------------------------------------------------------------


def cmd_compile(args) -> int:
    circuit = _load_circuit(args.circuit)
    compiled = compile_circuit(circuit, peephole=args.peephole == "on")
    doc = _band_doc(compiled)
    text = formats.band_to_text(doc)
    if args.out:
        Path(args.out).write_text(text)
        destination = args.out
    else:
        sys.stdout.write(text)
        destination = "-"
    pairs = [("band", destination)] + list(compiled.report.as_pairs())
    pairs.append(("band-digits", len(compiled.band.digits)))
    sys.stdout.write(formats.report_lines(pairs, "progqca-compile-report/1"))
    return 0


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _print_table(table: dict[tuple[int, ...], float], counts=None) -> None:
    sys.stdout.write("# outcome\tprobability" + ("\tcount\n" if counts else "\n"))
    for digits in sorted(table):
        text = "".join(str(d) for d in digits)
        line = f"{text}\t{table[digits]:.10f}"
        if counts is not None:
            line += f"\t{counts.get(digits, 0)}"
        sys.stdout.write(line + "\n")


def cmd_run(args) -> int:
    circuit = _load_circuit(args.circuit)
    digits = [int(c) for c in args.input]
    if len(digits) != circuit.data_wires or any(d not in (0, 1) for d in digits):
        raise ParseError(
            f"--input must be {circuit.data_wires} binary digits", 1
        )
    n = circuit.data_wires
    if args.level == "gate":
        state = simulate_circuit(circuit, digits)
        table = marginal_distribution(state, tuple(range(n)))
        counts = (
            sample(state, tuple(range(n)), args.shots, args.seed)
            if args.shots
            else None
        )
        _print_table(table, counts)
        return 0
    compiled = compile_circuit(circuit, peephole=args.peephole == "on")
    lowered = compiled.lowered
    full_digits = digits + list(lowered.ancilla_inits)
    if args.level in ("ccqca", "nn"):
        from .oracle import _run_ccqca_reg  # shared runner

        marks = {
            interleave_index("d", wire_position(w)): bit
            for w, bit in enumerate(full_digits)
            if bit
        }
        reg = _run_ccqca_reg(compiled, marks, None, args.level)
        slots = [interleave_index("d", wire_position(w)) for w in range(n)]
        table = reg.marginal(slots)
    elif args.level == "qca":
        lattice = instantiate(
            compiled.config, compiled.band, digits, mode=args.mode
        )
        run_steps(lattice, compiled.config.completion_steps)
        result = readout(lattice, slots=compiled.config.wire_slots[:n])
        table = result.table
    else:
        raise ParseError(f"unknown level {args.level!r}", 1)
    counts = None
    if args.shots:
        rng = np.random.default_rng(args.seed)
        outcomes = sorted(table)
        probs = np.array([table[o] for o in outcomes])
        probs = probs / probs.sum()
        draws = rng.choice(len(outcomes), size=args.shots, p=probs)
        counts = {}
        for d in draws:
            counts[outcomes[d]] = counts.get(outcomes[d], 0) + 1
    _print_table(table, counts)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _random_circuit(rng: np.random.Generator, max_wires: int) -> GCircuit:
    wires = int(rng.integers(2, max_wires + 1))
    n_gates = int(rng.integers(1, 4))
    pairs = []
    for _ in range(n_gates):
        c, t = rng.choice(wires, size=2, replace=False)
        pairs.append((int(c), int(t)))
    return GCircuit.from_pairs(wires, pairs)


def cmd_verify(args) -> int:
    levels = tuple(
        "qca-factored" if l == "qca" else l for l in args.levels.split(",")
    )
    reports = []
    worst = 1.0
    phase_ok = True
    for seed in range(args.seeds):
        rng = np.random.default_rng(seed)
        circuit = _random_circuit(rng, args.max_wires)
        hook = args.inject_corruption if seed == 0 else None
        report = cross_check(
            circuit,
            levels=levels,
            tol=args.tol,
            corrupt_band_digit=hook,
        )
        reports.append((circuit, report))
        worst = min(worst, report.min_overlap)
        if report.phase_consistent is False:
            phase_ok = False
    verdict = all(r.verdict for _, r in reports) and phase_ok
    pairs: list[tuple[str, object]] = [
        ("levels", ",".join(levels)),
        ("circuits", args.seeds),
        ("max-wires", args.max_wires),
        ("tolerance", args.tol),
        ("min-overlap", worst),
        ("phase-consistent", phase_ok),
        ("verdict", "pass" if verdict else "fail"),
    ]
    for idx, (circuit, report) in enumerate(reports):
        gates = " ".join(f"G({g.operands[0]},{g.operands[1]})" for g in circuit.gates)
        pairs.append(
            (f"circuit-{idx}", f"{circuit.wires} wires; {gates}; "
             f"min-overlap {report.min_overlap:.12f}")
        )
        for name, outcome in report.outcomes.items():
            if not outcome.admissible:
                pairs.append((f"circuit-{idx}-{name}", f"inadmissible: {outcome.note}"))
            elif outcome.min_overlap < 1 - args.tol and outcome.witness_input:
                pairs.append(
                    (f"circuit-{idx}-{name}-witness", outcome.witness_input)
                )
    sys.stdout.write(formats.report_lines(pairs, "progqca-verify-report/1"))
    return 0 if verdict else VERDICT_FAIL


# ---------------------------------------------------------------------------
# trace
# ---------------------------------------------------------------------------

MAX_TRACE_STEPS = 5000


def trace_grid(
    doc: formats.BandDoc, input_digits: list[int], steps: int
) -> tuple[list[str], np.ndarray]:
    """Rows of the space-time diagram plus a numeric grid for rendering.

    Per cell two characters: the program digit occupying it (``.`` if
    none; uppercase ``S``/``G`` in the step where its block acted on the
    data extent) and a ``D`` marking cells holding tracked data content.
    Row 0 is the initial configuration.
    """
    from .figures import (
        TRACE_DATA,
        TRACE_EMPTY,
        TRACE_FIRE,
        TRACE_SWAP_DIGIT,
        TRACE_TURN_DIGIT,
    )

    band = doc.band()
    n = doc.ring_size
    two_n = 2 * n
    marks = [
        doc.slot_origin + 3 * wire_position(w)
        for w in range(doc.wires)
        if w >= len(input_digits) or input_digits[w]
    ]
    marks.append(doc.slot_origin + interleave_index("h", 0))
    rows = []
    grid = np.zeros((steps + 1, n), dtype=np.int8)
    nonzero = band.nonzero()
    for step in range(steps + 1):
        cells = [[".", "."] for _ in range(n)]
        for j, digit in nonzero:
            cell = (j + step) % n
            fired = False
            if step > 0:
                s = 2 * j + 3 * (step - 1)
                fired = (
                    s % two_n < doc.data_extent
                    or (s + 1) % two_n < doc.data_extent
                )
            char = str(digit)
            if fired:
                char = "S" if digit == 1 else "G"
                grid[step, cell] = TRACE_FIRE
            else:
                grid[step, cell] = (
                    TRACE_SWAP_DIGIT if digit == 1 else TRACE_TURN_DIGIT
                )
            cells[cell][0] = char
        for m in marks:
            cell = ((m - step) % two_n) // 2
            cells[cell][1] = "D"
            if grid[step, cell] == TRACE_EMPTY:
                grid[step, cell] = TRACE_DATA
        rows.append(f"{step:>5d} " + " ".join("".join(c) for c in cells))
    return rows, grid


def cmd_trace(args) -> int:
    doc = formats.band_from_text(Path(args.band).read_text())
    digits = [int(c) for c in args.input] if args.input else []
    steps = args.steps if args.steps is not None else doc.completion_steps + 5
    if steps > MAX_TRACE_STEPS:
        raise ParseError(
            f"trace of {steps} steps exceeds the cap of {MAX_TRACE_STEPS}", 1
        )
    rows, grid = trace_grid(doc, digits, steps)
    sys.stdout.write(
        f"# trace ring={doc.ring_size} steps={steps} "
        f"digits={len(doc.digits)}\n"
    )
    for row in rows:
        sys.stdout.write(row + "\n")
    if args.plot:
        from .figures import render_trace

        render_trace(grid, args.plot, doc.ring_size)
        sys.stdout.write(f"# figure written to {args.plot}\n")
    return 0


# ---------------------------------------------------------------------------
# resources
# ---------------------------------------------------------------------------


def cmd_resources(args) -> int:
    circuit = _load_circuit(args.circuit)
    report = estimate_resources(circuit, peephole=args.peephole == "on")
    sys.stdout.write("# metric\tvalue\n")
    for key, value in report.as_pairs():
        sys.stdout.write(f"{key}\t{value}\n")
    time_points = []
    space_points = []
    if args.families:
        for k in (1, 2, 4, 8):
            fam = GCircuit.from_pairs(2, [(0, 1)] * k)
            time_points.append((k, estimate_resources(fam).time_qca))
        for sep in (1, 2, 3, 4):
            fam = GCircuit.from_pairs(sep + 1, [(0, sep)])
            space_points.append((sep, estimate_resources(fam).time_nn))
        sys.stdout.write("# family\tx\tvalue\n")
        for x, y in time_points:
            sys.stdout.write(f"time-qca-vs-gates\t{x}\t{y}\n")
        for x, y in space_points:
            sys.stdout.write(f"nn-layers-vs-separation\t{x}\t{y}\n")
    if args.plot:
        from .figures import render_scaling

        if not args.families:
            for k in (1, 2, 4, 8):
                fam = GCircuit.from_pairs(2, [(0, 1)] * k)
                time_points.append((k, estimate_resources(fam).time_qca))
            for sep in (1, 2, 3, 4):
                fam = GCircuit.from_pairs(sep + 1, [(0, sep)])
                space_points.append((sep, estimate_resources(fam).time_nn))
        render_scaling(time_points, space_points, args.plot)
        sys.stdout.write(f"# figure written to {args.plot}\n")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="progqca",
        description="compile and run gate circuits on the programmable "
        "cellular automaton",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="lower a circuit to a program band")
    p.add_argument("circuit")
    p.add_argument("--peephole", choices=("on", "off"), default="off")
    p.add_argument("--out", help="band file destination (stdout if omitted)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="run a circuit at a machine level")
    p.add_argument("circuit")
    p.add_argument("--level", required=True, choices=("gate", "ccqca", "nn", "qca"))
    p.add_argument("--mode", choices=("factored", "faithful"), default="factored")
    p.add_argument("--input", required=True, help="binary digits, one per wire")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--peephole", choices=("on", "off"), default="off")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="cross-check machine levels")
    p.add_argument("--levels", default="gate,ccqca")
    p.add_argument("--max-wires", type=int, default=2)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument(
        "--inject-corruption",
        type=int,
        default=None,
        help="test hook: flip this band digit of the first circuit",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", help="space-time diagram of a band")
    p.add_argument("band")
    p.add_argument("--input", default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("resources", help="dry-run resource tallies")
    p.add_argument("circuit")
    p.add_argument("--families", action="store_true")
    p.add_argument("--peephole", choices=("on", "off"), default="off")
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_resources)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except LayoutError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except ProgqcaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
