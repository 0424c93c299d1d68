"""Reference semantics and cross-level equivalence certification.

The gate model is the root of trust: :func:`simulate_circuit` applies the
gate matrices directly to a dense register over the circuit wires.  Every
other machine level is judged against it, per input, up to one global
phase: the level's full final state is compared with the reference wire
state tensored with the expected pointer, ancilla and padding contents, so
a layer that forgets to restore its workspace loses overlap and fails.

Per-input phase freedom alone would miss an input-dependent phase, which
is invisible on basis inputs but breaks superpositions.  ``cross_check``
therefore also runs one uniform-superposition input through every level
and reports whether it matched -- the phase-consistency witness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .autoqca import faithful_state_of, run_steps
from .ccqca import (
    Homomorphism,
    apply_homomorphism_reg,
    apply_nn_op_reg,
    interleave_index,
)
from .compiler import CompiledProgram, GCircuit, compile_circuit, instantiate, wire_position
from .errors import LayoutError, ProgqcaError
from .statevec import LiveRegister, QuantumState, SiteLayout, apply_local_unitary, basis_state, overlap
from .universal import named_target

EXHAUSTIVE_INPUT_CAP = 6
KNOWN_LEVELS = ("gate", "ccqca", "nn", "qca-faithful", "qca-factored")


def exhaustive_inputs(wire_count: int, cap: int = EXHAUSTIVE_INPUT_CAP) -> list[str]:
    """All basis digit strings on the given wires, lexicographic."""
    if wire_count > cap:
        raise LayoutError(
            f"{wire_count} wires exceed the exhaustive-input cap of {cap}"
        )
    return [format(x, f"0{wire_count}b") for x in range(2 ** wire_count)]


def simulate_circuit(circuit: GCircuit, input_digits: Sequence[int]) -> QuantumState:
    """Gate-model reference: apply each gate's matrix on its wires."""
    digits = [int(d) for d in input_digits]
    if len(digits) != circuit.data_wires:
        raise ProgqcaError(
            f"expected {circuit.data_wires} input digits, got {len(digits)}"
        )
    full = digits + list(circuit.ancilla_inits)
    layout = SiteLayout((2,) * circuit.wires)
    state = basis_state(layout, full)
    for gate in circuit.gates:
        state = apply_local_unitary(
            state, gate.operands, named_target(gate.kind),
            verify=False,
        )
    return state


def simulate_circuit_vector(circuit: GCircuit, vector: np.ndarray) -> QuantumState:
    """Reference on an arbitrary joint data-wire state."""
    vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
    layout = SiteLayout((2,) * circuit.wires)
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    anc = list(circuit.ancilla_inits)
    for value, bits in zip(vector, np.ndindex(*([2] * circuit.data_wires))):
        amps[layout.index_of(list(bits) + anc)] = value
    state = QuantumState(layout, amps)
    for gate in circuit.gates:
        state = apply_local_unitary(
            state, gate.operands, named_target(gate.kind),
            verify=False,
        )
    return state


# ---------------------------------------------------------------------------
# Level runners
# ---------------------------------------------------------------------------


def _ccqca_hull(program: Iterable[Homomorphism], wires: int) -> tuple[int, int]:
    """Position interval comfortably containing the program's causal cone."""
    max_off = max((abs(h.offset) for h in program), default=0)
    lo = min(0, 1 - max_off) - 2
    hi = wires + max_off + 2
    return lo, hi


def _expected_register(
    reference: QuantumState,
    wire_slots: Sequence[int],
    ancilla_inits: Sequence[int],
    pointer_slot: int | None,
) -> LiveRegister:
    """Reference state embedded at the level's slot labels, ancillae at
    their init digits, pointer at 1 and everything else |0>.

    ``wire_slots`` covers all wires; the reference spans the leading
    (data) wires only.
    """
    reg = LiveRegister()
    if pointer_slot is not None:
        reg.set_slot_one(pointer_slot)
    n_anc = len(ancilla_inits)
    data_slots = list(wire_slots[: len(wire_slots) - n_anc])
    for m, init in enumerate(ancilla_inits):
        if init:
            reg.set_slot_one(wire_slots[len(wire_slots) - n_anc + m])
    reg.load_block(data_slots, reference.amplitudes)
    return reg


def _run_ccqca_reg(
    compiled: CompiledProgram,
    init_marks: dict[int, int],
    data_block: tuple[Sequence[int], np.ndarray] | None,
    level: str,
) -> LiveRegister:
    wires = compiled.lowered.wires
    x_lo, x_hi = _ccqca_hull(compiled.hom_program, wires)
    reg = LiveRegister()
    reg.set_slot_one(interleave_index("h", 0))
    for slot, bit in sorted(init_marks.items()):
        if bit:
            reg.set_slot_one(slot)
    if data_block is not None:
        reg.load_block(*data_block)
    if level == "ccqca":
        for h in compiled.hom_program:
            apply_homomorphism_reg(reg, h, x_lo, x_hi)
    else:
        q_lo, q_hi = 3 * x_lo, 3 * x_hi + 2
        for op in compiled.nn_program:
            apply_nn_op_reg(reg, op, q_lo, q_hi)
    return reg


@dataclass
class LevelOutcome:
    level: str
    admissible: bool
    note: str = ""
    min_overlap: float = 1.0
    witness_input: str | None = None


@dataclass
class EquivalenceReport:
    """Cross-level comparison result."""

    levels: tuple[str, ...]
    inputs: tuple[str, ...]
    outcomes: dict[str, LevelOutcome] = field(default_factory=dict)
    tol: float = 1e-9
    phase_consistent: bool | None = None
    elapsed_seconds: float = 0.0

    @property
    def min_overlap(self) -> float:
        values = [o.min_overlap for o in self.outcomes.values() if o.admissible]
        return min(values, default=0.0)

    @property
    def verdict(self) -> bool:
        if not self.outcomes:
            return False
        tested = [o for o in self.outcomes.values() if o.admissible]
        if not tested:
            return False
        ok = all(o.min_overlap >= 1 - self.tol for o in tested)
        if self.phase_consistent is False:
            ok = False
        return ok

    def as_pairs(self) -> list[tuple[str, object]]:
        pairs: list[tuple[str, object]] = [
            ("levels", " ".join(self.levels)),
            ("inputs", len(self.inputs)),
            ("tolerance", self.tol),
            ("min-overlap", self.min_overlap),
        ]
        for name, outcome in self.outcomes.items():
            if outcome.admissible:
                pairs.append((f"level-{name}", f"{outcome.min_overlap:.12f}"))
                if outcome.witness_input is not None:
                    pairs.append((f"witness-{name}", outcome.witness_input))
            else:
                pairs.append((f"level-{name}", f"inadmissible: {outcome.note}"))
        if self.phase_consistent is not None:
            pairs.append(("phase-consistent", self.phase_consistent))
        pairs.append(("verdict", "pass" if self.verdict else "fail"))
        pairs.append(("elapsed-seconds", self.elapsed_seconds))
        return pairs


def cross_check(
    circuit: GCircuit,
    inputs: Sequence[str] | None = None,
    levels: Sequence[str] = ("gate", "ccqca"),
    tol: float = 1e-9,
    peephole: bool = False,
    superposition_witness: bool = True,
    corrupt_band_digit: int | None = None,
    faithful_cell_cap: int = 6,
) -> EquivalenceReport:
    """Run the selected levels on every input and compare to the gate level.

    Comparison is full-state: the reference wire state is embedded into the
    level's lattice with pointer, ancillae and padding at their expected
    values, so restoration failures count.  ``corrupt_band_digit`` is a
    test hook flipping one program digit before the autonomous runs.
    """
    start = time.monotonic()
    for level in levels:
        if level not in KNOWN_LEVELS:
            raise ProgqcaError(f"unknown level {level!r}")
    if len(levels) < 2 or "gate" not in levels:
        raise ProgqcaError("cross_check compares at least two levels against gate")
    if inputs is None:
        inputs = exhaustive_inputs(circuit.data_wires)
    report = EquivalenceReport(tuple(levels), tuple(inputs), tol=tol)
    compiled = None
    if any(l != "gate" for l in levels):
        compiled = compile_circuit(circuit, peephole=peephole)
    band = compiled.band if compiled else None
    if band is not None and corrupt_band_digit is not None:
        digits = list(band.digits)
        digits[corrupt_band_digit] = (digits[corrupt_band_digit] + 1) % 3
        from .autoqca import ProgramBand

        band = ProgramBand(tuple(digits), band.origin)

    gate_out = LevelOutcome("gate", True)
    report.outcomes["gate"] = gate_out
    references: dict[str, QuantumState] = {}
    for text in inputs:
        references[text] = simulate_circuit(circuit, [int(c) for c in text])

    for level in levels:
        if level == "gate":
            continue
        outcome = LevelOutcome(level, True)
        report.outcomes[level] = outcome
        if level == "qca-faithful" and compiled.config.ring_size > faithful_cell_cap:
            outcome.admissible = False
            outcome.note = (
                f"ring of {compiled.config.ring_size} cells exceeds the "
                f"faithful cap of {faithful_cell_cap}"
            )
            continue
        for text in inputs:
            digits = [int(c) for c in text]
            mag = _run_level_overlap(compiled, band, level, digits, references[text])
            if mag < outcome.min_overlap:
                outcome.min_overlap = mag
                outcome.witness_input = text
        if superposition_witness and outcome.admissible:
            mag = _superposition_overlap(circuit, compiled, band, level)
            if mag is not None:
                consistent = mag >= 1 - tol
                report.phase_consistent = (
                    consistent
                    if report.phase_consistent is None
                    else (report.phase_consistent and consistent)
                )
                if not consistent:
                    outcome.min_overlap = min(outcome.min_overlap, mag)
                    outcome.witness_input = "uniform-superposition"
    report.elapsed_seconds = time.monotonic() - start
    return report


def _run_level_overlap(
    compiled: CompiledProgram,
    band,
    level: str,
    digits: Sequence[int],
    reference: QuantumState,
) -> float:
    lowered = compiled.lowered
    full_digits = list(digits) + list(lowered.ancilla_inits)
    if level in ("ccqca", "nn"):
        marks = {
            interleave_index("d", wire_position(w)): bit
            for w, bit in enumerate(full_digits)
            if bit
        }
        reg = _run_ccqca_reg(compiled, marks, None, level)
        wire_slots = [
            interleave_index("d", wire_position(w)) for w in range(lowered.wires)
        ]
        expected = _expected_register(
            reference, wire_slots, lowered.ancilla_inits, interleave_index("h", 0)
        )
        return abs(reg.overlap_with(expected))
    if level == "qca-factored":
        lat = instantiate(compiled.config, band, digits, mode="factored")
        run_steps(lat, compiled.config.completion_steps)
        expected = _expected_register(
            reference,
            compiled.config.wire_slots,
            compiled.config.ancilla_inits,
            compiled.config.pointer_slot,
        )
        return abs(lat.reg.overlap_with(expected))
    if level == "qca-faithful":
        lat = instantiate(compiled.config, band, digits, mode="faithful")
        run_steps(lat, compiled.config.completion_steps)
        fact = instantiate(compiled.config, band, digits, mode="factored")
        run_steps(fact, compiled.config.completion_steps)
        cross = abs(overlap(lat.state, faithful_state_of(fact)))
        expected = _expected_register(
            reference,
            compiled.config.wire_slots,
            compiled.config.ancilla_inits,
            compiled.config.pointer_slot,
        )
        direct = abs(fact.reg.overlap_with(expected))
        return min(cross, direct)
    raise ProgqcaError(f"unknown level {level!r}")


def _superposition_overlap(
    circuit: GCircuit, compiled: CompiledProgram, band, level: str
) -> float | None:
    """Uniform superposition over the data wires through one level."""
    lowered = compiled.lowered
    n = lowered.data_wires
    uniform = np.full(2 ** n, 2 ** (-n / 2), dtype=np.complex128)
    reference = simulate_circuit_vector(circuit, uniform)
    if level in ("ccqca", "nn"):
        data_slots = [interleave_index("d", wire_position(w)) for w in range(n)]
        anc_marks = {
            interleave_index("d", wire_position(n + m)): bit
            for m, bit in enumerate(lowered.ancilla_inits)
            if bit
        }
        reg = _run_ccqca_reg(compiled, anc_marks, (data_slots, uniform), level)
        wire_slots = [
            interleave_index("d", wire_position(w)) for w in range(lowered.wires)
        ]
        expected = _expected_register(
            reference, wire_slots, lowered.ancilla_inits, interleave_index("h", 0)
        )
        return abs(reg.overlap_with(expected))
    if level == "qca-factored":
        data_slots = [compiled.config.wire_slots[w] for w in range(n)]
        lat = instantiate(
            compiled.config, band, mode="factored", data_block=(data_slots, uniform)
        )
        run_steps(lat, compiled.config.completion_steps)
        expected = _expected_register(
            reference,
            compiled.config.wire_slots,
            compiled.config.ancilla_inits,
            compiled.config.pointer_slot,
        )
        return abs(lat.reg.overlap_with(expected))
    return None  # faithful mode takes basis inputs only
