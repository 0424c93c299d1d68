"""The lowering pipeline, from gate circuit to program band.

Stages, each checkable against the previous by state-vector comparison:

1. ``to_ccqca``    -- every two-qubit gate becomes the 33-layer pointer
   sequence between its wires' data-band positions (wire w sits at band
   position w+1, keeping all offsets positive and clear of the pointer).
2. ``to_nn``       -- every layer is rewritten to nearest-neighbour swap
   and quarter-turn layers, with an optional peephole pass cancelling
   adjacent self-inverse swap layers.
3. ``to_band``     -- the layer list becomes a classical qutrit string,
   and the ring is sized so the program clears the data with margin.

Compilation is deterministic: the same circuit and flags produce an
identical band, byte for byte.  Resource numbers are measured tallies of
an actual dry-run compile, never asymptotic claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .autoqca import (
    FactoredLattice,
    FaithfulLattice,
    ProgramBand,
    assemble_program,
    plan_ring,
)
from .ccqca import Homomorphism, NnOp, g_sequence, interleave_index, lower_to_nn, nn_live_closure
from .errors import LayoutError, ProgqcaError, UnsupportedGateError
from .universal import FixtureTable, known_realizations

NAMED_GATE_ARITY = {"G": 2, "H": 1, "TOFFOLI": 3}


@dataclass(frozen=True)
class GateApp:
    kind: str
    operands: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in NAMED_GATE_ARITY:
            raise ProgqcaError(f"unknown gate kind {self.kind!r}")
        if len(self.operands) != NAMED_GATE_ARITY[self.kind]:
            raise ProgqcaError(
                f"gate {self.kind} takes {NAMED_GATE_ARITY[self.kind]} operands"
            )
        if len(set(self.operands)) != len(self.operands):
            raise ProgqcaError(f"gate operands must be distinct: {self.operands}")


@dataclass(frozen=True)
class GCircuit:
    """A wire count and an ordered gate list.

    ``ancilla_inits`` marks the trailing wires as ancillae with fixed init
    digits; they appear when named gates are lowered to the pure two-qubit
    primitive and must be restored by every correct realization.
    """

    wires: int
    gates: tuple[GateApp, ...] = ()
    ancilla_inits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.wires < 1:
            raise ProgqcaError("a circuit needs at least one wire")
        if len(self.ancilla_inits) >= self.wires:
            raise ProgqcaError("ancillae cannot cover every wire")
        for gate in self.gates:
            if any(not 0 <= w < self.wires for w in gate.operands):
                raise ProgqcaError(f"gate {gate} uses wires outside 0..{self.wires - 1}")

    @property
    def data_wires(self) -> int:
        return self.wires - len(self.ancilla_inits)

    @property
    def is_pure(self) -> bool:
        return all(g.kind == "G" for g in self.gates)

    @classmethod
    def from_pairs(cls, wires: int, pairs: Sequence[tuple[int, int]]) -> "GCircuit":
        return cls(wires, tuple(GateApp("G", (c, t)) for c, t in pairs))


def wire_position(wire: int) -> int:
    """Data-band position of a circuit wire (strictly right of the pointer)."""
    return wire + 1


@dataclass(frozen=True)
class ResourceReport:
    time_qgc: int
    space_qgc: int
    time_ccqca: int
    time_nn: int
    space_qca: int
    time_qca: int

    def as_pairs(self) -> list[tuple[str, int]]:
        return [
            ("time-qgc", self.time_qgc),
            ("space-qgc", self.space_qgc),
            ("time-ccqca", self.time_ccqca),
            ("time-nn", self.time_nn),
            ("space-qca", self.space_qca),
            ("time-qca", self.time_qca),
        ]


@dataclass(frozen=True)
class QcaConfig:
    """Everything needed to instantiate and read out the autonomous run."""

    ring_size: int
    slot_origin: int
    data_extent: int
    completion_steps: int
    wires: int
    ancilla_inits: tuple[int, ...]
    wire_slots: tuple[int, ...]
    pointer_slot: int

    @property
    def data_wires(self) -> int:
        return self.wires - len(self.ancilla_inits)


@dataclass(frozen=True)
class CompiledProgram:
    circuit: GCircuit          # as given (may contain named gates)
    lowered: GCircuit          # pure two-qubit form actually compiled
    hom_program: tuple[Homomorphism, ...]
    nn_program: tuple[NnOp, ...]
    band: ProgramBand
    config: QcaConfig
    report: ResourceReport


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def to_ccqca(
    circuit: GCircuit, wire_map: Mapping[int, int] | None = None
) -> list[Homomorphism]:
    """Concatenated pointer sequences for the circuit's gates, in order."""
    if not circuit.is_pure:
        raise UnsupportedGateError(
            "circuit contains named gates; lower them to the two-qubit "
            "primitive first"
        )
    if wire_map is None:
        wire_map = {w: wire_position(w) for w in range(circuit.wires)}
    positions = [wire_map[w] for w in range(circuit.wires)]
    if len(set(positions)) != len(positions):
        raise ProgqcaError("wire map must be injective")
    program: list[Homomorphism] = []
    for gate in circuit.gates:
        c, t = gate.operands
        program.extend(g_sequence(wire_map[c], wire_map[t]))
    return program


def peephole_pass(ops: Sequence[NnOp]) -> list[NnOp]:
    """Cancel adjacent identical swap layers (each is self-inverse)."""
    out: list[NnOp] = []
    for op in ops:
        if out and op.kind == "E" and out[-1] == op:
            out.pop()
        else:
            out.append(op)
    return out


def to_nn(hom_program: Sequence[Homomorphism], peephole: bool = False) -> list[NnOp]:
    """Concatenate the nearest-neighbour rewriting of every layer."""
    ops: list[NnOp] = []
    for h in hom_program:
        ops.extend(lower_to_nn(h))
    if peephole:
        ops = peephole_pass(ops)
    return ops


def initial_support(wires: int, ancilla_inits: tuple[int, ...] = ()) -> set[int]:
    """Chain slots occupied at initialization: the pointer and every wire
    (ancilla wires included; their content matters even when it is |0>)."""
    slots = {interleave_index("h", 0)}
    for w in range(wires):
        slots.add(interleave_index("d", wire_position(w)))
    return slots


def to_band(
    nn_program: Sequence[NnOp],
    data_extent: int | None = None,
    *,
    wires: int = 0,
    ancilla_inits: tuple[int, ...] = (),
) -> tuple[ProgramBand, QcaConfig]:
    """Assemble the program band and size the ring.

    The live hull of the chain under the program is computed by support
    tracking, shifted to non-negative content slots (by a multiple of 3,
    preserving layer phases), and the ring is sized so no digit can touch
    live content twice before completion plus the stability margin.
    """
    if wires:
        support = initial_support(wires, ancilla_inits)
    elif data_extent is not None:
        support = set(range(max(1, data_extent)))
    else:
        raise ProgqcaError("to_band needs a data extent or a wire count")
    if nn_program:
        q_lo, q_hi = nn_live_closure(nn_program, support)
    else:
        q_lo, q_hi = min(support), max(support)
    # shift by a multiple of 3 (preserving layer phases) so all live
    # content sits at slot 2 or above, leaving a dead buffer at the wrap
    slot_origin = 3 * ((max(0, 2 - q_lo) + 2) // 3)
    band = assemble_program(list(nn_program))
    extent = q_hi + slot_origin + 1
    ring, steps = plan_ring(band, extent)
    wire_slots = tuple(
        3 * wire_position(w) + slot_origin for w in range(wires)
    )
    config = QcaConfig(
        ring_size=ring,
        slot_origin=slot_origin,
        data_extent=extent,
        completion_steps=steps,
        wires=wires,
        ancilla_inits=ancilla_inits,
        wire_slots=wire_slots,
        pointer_slot=interleave_index("h", 0) + slot_origin,
    )
    return band, config


def compile_circuit(
    circuit: GCircuit,
    peephole: bool = False,
    fixtures: FixtureTable | None = None,
) -> CompiledProgram:
    """Run the full pipeline; named gates are lowered first if present."""
    lowered = circuit if circuit.is_pure else lower_named_gates(circuit, fixtures)
    hom = to_ccqca(lowered)
    nn = to_nn(hom, peephole)
    band, config = to_band(nn, wires=lowered.wires, ancilla_inits=lowered.ancilla_inits)
    report = ResourceReport(
        time_qgc=len(lowered.gates),
        space_qgc=lowered.wires,
        time_ccqca=len(hom),
        time_nn=len(nn),
        space_qca=config.ring_size,
        time_qca=config.completion_steps,
    )
    return CompiledProgram(circuit, lowered, tuple(hom), tuple(nn), band, config, report)


def estimate_resources(circuit: GCircuit, peephole: bool = False) -> ResourceReport:
    """Measured tallies from a dry-run compile (no simulation)."""
    if not circuit.gates:
        return ResourceReport(0, 0, 0, 0, 0, 0)
    return compile_circuit(circuit, peephole).report


# ---------------------------------------------------------------------------
# Named-gate lowering
# ---------------------------------------------------------------------------


def lower_named_gates(
    circuit: GCircuit, fixtures: FixtureTable | None = None
) -> GCircuit:
    """Replace named gates by their verified realizations.

    Ancilla wires are appended once (shared across all uses, grouped by
    required init digit) and every realization restores them, so uses can
    repeat freely.
    """
    if circuit.is_pure:
        return circuit
    if circuit.ancilla_inits:
        raise ProgqcaError("cannot lower a circuit that already has ancillae")
    if fixtures is None:
        fixtures = known_realizations()
    needed_kinds = {g.kind for g in circuit.gates if g.kind != "G"}
    for kind in sorted(needed_kinds):
        if not fixtures.available(kind):
            reason = fixtures.problems.get(kind, "no fixture present")
            raise UnsupportedGateError(
                f"named gate {kind} is unavailable: {reason}"
            )
    # ancilla pool: enough wires per init digit for the hungriest gate
    pool_need: dict[int, int] = {}
    for kind in needed_kinds:
        real = fixtures.realizations[kind]
        per: dict[int, int] = {}
        for init in real.ancilla_inits:
            per[init] = per.get(init, 0) + 1
        for init, count in per.items():
            pool_need[init] = max(pool_need.get(init, 0), count)
    pool_inits: list[int] = []
    for init in sorted(pool_need):
        pool_inits.extend([init] * pool_need[init])
    pool_base = circuit.wires
    pool_by_digit: dict[int, list[int]] = {}
    for offset, init in enumerate(pool_inits):
        pool_by_digit.setdefault(init, []).append(pool_base + offset)

    gates: list[GateApp] = []
    for gate in circuit.gates:
        if gate.kind == "G":
            gates.append(gate)
            continue
        real = fixtures.realizations[gate.kind]
        taken: dict[int, int] = {}
        wire_of: dict[int, int] = {}
        for k in range(real.data_wires):
            wire_of[k] = gate.operands[k]
        for m, init in enumerate(real.ancilla_inits):
            slot = taken.get(init, 0)
            taken[init] = slot + 1
            wire_of[real.data_wires + m] = pool_by_digit[init][slot]
        for c, t, power in real.moves:
            for _ in range(power % 8):
                gates.append(GateApp("G", (wire_of[c], wire_of[t])))
    return GCircuit(
        circuit.wires + len(pool_inits), tuple(gates), tuple(pool_inits)
    )


# ---------------------------------------------------------------------------
# Lattice instantiation from a config
# ---------------------------------------------------------------------------


def data_marks(
    config: QcaConfig, input_digits: Sequence[int] | None
) -> dict[int, int]:
    """Content-slot init marks for the given data-wire digits (ancilla
    wires take their fixed inits)."""
    digits = list(input_digits or [])
    if len(digits) != config.data_wires:
        raise ProgqcaError(
            f"expected {config.data_wires} input digits, got {len(digits)}"
        )
    full = digits + list(config.ancilla_inits)
    marks = {}
    for w, digit in enumerate(full):
        if digit:
            marks[config.wire_slots[w]] = 1
    return marks


def instantiate(
    config: QcaConfig,
    band: ProgramBand,
    input_digits: Sequence[int] | None = None,
    mode: str = "factored",
    data_block: tuple[Sequence[int], np.ndarray] | None = None,
    max_live: int = 26,
):
    """Build a lattice in the requested mode, initialized per the config."""
    marks = data_marks(config, input_digits) if data_block is None else {
        config.wire_slots[config.data_wires + m]: digit
        for m, digit in enumerate(config.ancilla_inits)
        if digit
    }
    if mode == "factored":
        return FactoredLattice(
            config.ring_size,
            band,
            data=marks,
            wire_slots=config.wire_slots,
            pointer_slot=config.pointer_slot,
            completion_steps=config.completion_steps,
            live_window=(0, config.data_extent - 1),
            data_block=data_block,
            max_live=max_live,
        )
    if mode == "faithful":
        total = 12 ** config.ring_size
        from .statevec import max_amplitudes

        if total > max_amplitudes():
            import math

            admissible = int(math.log(max_amplitudes(), 12))
            raise LayoutError(
                f"faithful mode needs {total} amplitudes for a ring of "
                f"{config.ring_size} cells; at most {admissible} cells fit "
                f"the current budget"
            )
        if data_block is not None:
            raise ProgqcaError("faithful mode takes basis inputs only")
        return FaithfulLattice(
            config.ring_size,
            band,
            data=marks,
            wire_slots=config.wire_slots,
            pointer_slot=config.pointer_slot,
            completion_steps=config.completion_steps,
        )
    raise ProgqcaError(f"unknown mode {mode!r}")
