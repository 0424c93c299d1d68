"""The autonomous machine: a ring of 12-dimensional cells.

Each cell carries one program qutrit and two data qubits (basis index
``4*t + 2*q_even + q_odd``).  Every time step applies the fixed
:func:`~progqca.gatelib.cell_unitary` to all cells at once and then slides
the two tracks against each other: program content moves one cell forward,
qubit content moves one slot backward.  A program digit therefore advances
three qubit slots per step relative to the data, which is exactly one
period of the nearest-neighbour layer pattern -- as a digit slides past,
it applies its block (swap for 1, controlled quarter-turn for 2) at every
third qubit pair, i.e. one full ``E``/``F`` layer of one phase class.

A segment of three program digits with at most one nonzero entry encodes
one layer.  With segment boundaries pinned to cell index 0 mod 3 the map
is::

    (1,0,0) -> E_0    (0,1,0) -> E_2    (0,0,1) -> E_1
    (2,0,0) -> F_0    (0,2,0) -> F_2    (0,0,2) -> F_1

and segments closer to the data region execute earlier.

Two interchangeable simulations are provided.  The *faithful* mode keeps
the full ``12^N`` state and literally permutes amplitudes at each shift.
The *factored* mode exploits that the cell unitary never mixes program
digits: a classical digit string stays classical, so the program track is
an integer array, shifts become index bookkeeping, and the qubit state
lives in a :class:`~progqca.statevec.LiveRegister` keyed by content slot
labels that never move.  The factorization is exact, not approximate, and
the two modes are cross-certified in the test suite.

The section at the bottom lifts an arbitrary finite-instruction machine in
two-sublayer (Margolus) form to an autonomous ring in the same way: super
cells of three base cells plus one program cell, the program band gaining
two base cells on the data per step.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from math import ceil
from typing import Mapping, Sequence

import numpy as np

from .ccqca import NnOp
from .errors import LayoutError, ProgqcaError, SizingError
from .gatelib import cell_unitary, qutrit_block, rotation_block
from .statevec import (
    LiveRegister,
    QuantumState,
    SiteLayout,
    apply_local_unitary,
    basis_state,
    check_unitary,
    marginal_distribution,
)

_SEGMENT_OF = {
    ("E", 0): (1, 0, 0),
    ("E", 2): (0, 1, 0),
    ("E", 1): (0, 0, 1),
    ("F", 0): (2, 0, 0),
    ("F", 2): (0, 2, 0),
    ("F", 1): (0, 0, 2),
}
_OP_OF = {seg: key for key, seg in _SEGMENT_OF.items()}


@dataclass(frozen=True)
class ProgramBand:
    """Classical qutrit string, placed so its last digit sits at ``origin``.

    Digit ``k`` of the string occupies cell ``origin - len + 1 + k``; the
    first cell must be a multiple of 3 so segment phases line up.
    """

    digits: tuple[int, ...]
    origin: int = -1

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if len(self.digits) % 3 != 0:
            raise ProgqcaError("program band length must be a multiple of 3")
        if any(d not in (0, 1, 2) for d in self.digits):
            raise ProgqcaError("program digits must be 0, 1 or 2")
        if self.digits and (self.first_cell % 3) != 0:
            raise ProgqcaError(
                f"segment boundary misaligned: first cell {self.first_cell} "
                f"is not a multiple of 3"
            )

    @property
    def first_cell(self) -> int:
        return self.origin - len(self.digits) + 1

    def cells(self) -> range:
        return range(self.first_cell, self.origin + 1)

    def nonzero(self) -> list[tuple[int, int]]:
        """(cell, digit) pairs for nonzero digits, ascending by cell."""
        return [
            (self.first_cell + k, d)
            for k, d in enumerate(self.digits)
            if d != 0
        ]


def encode_segment(op: NnOp) -> tuple[int, int, int]:
    """Three qutrit digits whose fly-by applies the given layer."""
    return _SEGMENT_OF[(op.kind, op.phase)]


def decode_segment(segment: Sequence[int]) -> NnOp | None:
    """Inverse of :func:`encode_segment`; an all-zero segment is idle."""
    seg = tuple(int(d) for d in segment)
    if seg == (0, 0, 0):
        return None
    if seg not in _OP_OF:
        raise ProgqcaError(f"not a valid program segment: {seg}")
    kind, phase = _OP_OF[seg]
    return NnOp(kind, phase)


def assemble_program(ops: Sequence[NnOp]) -> ProgramBand:
    """Concatenate segments so the first-executed layer sits nearest the
    data region (largest cell index)."""
    digits: list[int] = []
    for op in reversed(ops):
        digits.extend(encode_segment(op))
    return ProgramBand(tuple(digits), origin=-1)


def band_operations(band: ProgramBand) -> list[NnOp]:
    """Layers encoded by a band, in execution order; idle segments skipped."""
    chunks = [band.digits[k : k + 3] for k in range(0, len(band.digits), 3)]
    ops = []
    for chunk in reversed(chunks):
        op = decode_segment(chunk)
        if op is not None:
            ops.append(op)
    return ops


# ---------------------------------------------------------------------------
# Sizing
# ---------------------------------------------------------------------------

STABILITY_MARGIN = 8  # post-completion steps the sizing must leave harmless


def steps_to_completion(
    band: ProgramBand,
    data_extent: int,
    ring_size: int | None = None,
) -> int:
    """Steps until every nonzero digit has passed every slot in
    ``[0, data_extent)``.

    A digit initially at cell ``j`` acts on slot pair ``(2j + 3(k-1), +1)``
    during step ``k``, so it clears slot ``R`` once ``2j + 3(T-1) > R``.
    If ``ring_size`` is given it is validated against the no-interference
    conditions and a :class:`SizingError` with the minimal admissible ring
    is raised when too small.
    """
    nz = band.nonzero()
    if not nz:
        return 0
    right_edge = data_extent - 1
    t = max(1 + ceil((right_edge + 1 - 2 * j) / 3) for j, _ in nz)
    if ring_size is not None:
        minimal = plan_ring(band, data_extent)[0]
        if ring_size < minimal:
            raise SizingError(
                f"ring of {ring_size} cells cannot run this program without "
                f"interference; minimal admissible size is {minimal}",
                minimal,
            )
    return t


def plan_ring(band: ProgramBand, data_extent: int) -> tuple[int, int]:
    """Minimal ring size and completion steps for a band over slots
    ``[0, data_extent)``.

    Three conditions, all from the three-slots-per-step relative velocity:
    program cells must not wrap onto data-bearing cells, the wrapped
    starting slots of the digits must lie beyond the live region, and no
    digit may lap the ring back into the live region before completion
    plus a stability margin.
    """
    nz = band.nonzero()
    r = data_extent - 1
    cell_hi = max(0, r) // 2
    if not nz:
        return cell_hi + 1, 0
    t = max(1 + ceil((r + 1 - 2 * j) / 3) for j, _ in nz)
    j_min = band.first_cell
    n1 = cell_hi + 1 + len(band.digits)  # program cells clear of data cells
    n2 = ceil((r + 1 - 2 * j_min) / 2)  # wrapped starts beyond live region
    n3 = ceil((3 * (t + STABILITY_MARGIN - 1) - 2 + 2) / 2)  # no lap re-entry
    return max(n1, n2, n3), t


# ---------------------------------------------------------------------------
# Faithful mode
# ---------------------------------------------------------------------------

_shift_perm_cache: dict[int, np.ndarray] = {}


def _shift_permutation(n_cells: int) -> np.ndarray:
    """Index array ``perm`` with ``new_amps = amps[perm]`` realizing the
    shift: program digit of cell i moves to cell i+1, qubit content of slot
    j moves to slot j-1 (both on the ring)."""
    if n_cells in _shift_perm_cache:
        return _shift_perm_cache[n_cells]
    total = 12 ** n_cells
    idx = np.arange(total)
    t = np.empty((n_cells, total), dtype=np.int64)
    b = np.empty((2 * n_cells, total), dtype=np.int64)
    rest = idx
    for i in range(n_cells - 1, -1, -1):
        cell = rest % 12
        rest = rest // 12
        t[i] = cell // 4
        b[2 * i] = (cell // 2) % 2
        b[2 * i + 1] = cell % 2
    # the new configuration reads the old one: t'_i = t_{i-1}, b'_s = b_{s+1}
    new_idx = np.zeros(total, dtype=np.int64)
    for i in range(n_cells):
        tt = t[(i - 1) % n_cells]
        b0 = b[(2 * i + 1) % (2 * n_cells)]
        b1 = b[(2 * i + 2) % (2 * n_cells)]
        new_idx = new_idx * 12 + (4 * tt + 2 * b0 + b1)
    perm = np.empty(total, dtype=np.int64)
    perm[new_idx] = idx
    _shift_perm_cache[n_cells] = perm
    return perm


class FaithfulLattice:
    """Dense ``12^N`` simulation; practical only for small rings."""

    mode = "faithful"

    def __init__(
        self,
        ring_size: int,
        band: ProgramBand,
        data: Mapping[int, int] | None = None,
        wire_slots: Sequence[int] = (),
        pointer_slot: int | None = None,
        completion_steps: int | None = None,
    ):
        self.ring_size = ring_size
        self.band = band
        self.wire_slots = tuple(wire_slots)
        self.pointer_slot = pointer_slot
        self.completion_steps = completion_steps
        self.tau = 0
        n = ring_size
        qutrits = [0] * n
        for cell, digit in band.nonzero():
            c = cell % n
            if qutrits[c] != 0:
                raise SizingError(
                    f"program digits collide on ring cell {c}; ring too small",
                    len(band.digits),
                )
            qutrits[c] = digit
        bits = [0] * (2 * n)
        marks = dict(data or {})
        if pointer_slot is not None:
            marks[pointer_slot] = 1
        for slot, bit in marks.items():
            bits[slot % (2 * n)] = int(bit)
        digits = []
        for i in range(n):
            digits.append(4 * qutrits[i] + 2 * bits[2 * i] + bits[2 * i + 1])
        layout = SiteLayout((12,) * n)
        amps = np.zeros(layout.total_dim, dtype=np.complex128)
        pos = 0
        for d in digits:
            pos = pos * 12 + d
        amps[pos] = 1.0
        self.state = QuantumState(layout, amps, _checked=True)

    def step(self) -> "FaithfulLattice":
        u = cell_unitary().entries
        state = self.state
        for i in range(self.ring_size):
            state = apply_local_unitary(state, (i,), u, verify=False)
        perm = _shift_permutation(self.ring_size)
        self.state = QuantumState(state.layout, state.amplitudes[perm], _checked=True)
        self.tau += 1
        return self

    def content_marginal(self, slots: Sequence[int]) -> dict[tuple[int, ...], float]:
        """Marginal over content slots, undoing the accumulated data shift."""
        n = self.ring_size
        mixed = SiteLayout((3, 2, 2) * n)
        view = QuantumState(mixed, self.state.amplitudes, _checked=True)
        sites = []
        for m in slots:
            p = (m - self.tau) % (2 * n)
            sites.append(3 * (p // 2) + 1 + (p % 2))
        return marginal_distribution(view, sites)


# ---------------------------------------------------------------------------
# Factored mode
# ---------------------------------------------------------------------------


class FactoredLattice:
    """Classical program track plus lazily materialized qubit content.

    Amplitudes are indexed by content slot labels that never move; the
    shift is pure arithmetic on the step counter.  When the ring is large
    enough that no digit can lap back into the live window (the normal,
    planned case) a digit is only visited during the steps in which its
    action pair touches the window, so the cost per step is proportional
    to the handful of digits currently flying over live content.
    """

    mode = "factored"

    def __init__(
        self,
        ring_size: int,
        band: ProgramBand,
        data: Mapping[int, int] | None = None,
        wire_slots: Sequence[int] = (),
        pointer_slot: int | None = None,
        completion_steps: int | None = None,
        live_window: tuple[int, int] | None = None,
        data_block: tuple[Sequence[int], np.ndarray] | None = None,
        max_live: int = 26,
        horizon: int | None = None,
    ):
        self.ring_size = ring_size
        self.band = band
        self.wire_slots = tuple(wire_slots)
        self.pointer_slot = pointer_slot
        self.completion_steps = completion_steps
        self.tau = 0
        self.reg = LiveRegister(max_qubits=max_live)
        marks = dict(data or {})
        if pointer_slot is not None:
            marks[pointer_slot] = 1
        for slot, bit in sorted(marks.items()):
            if bit:
                self.reg.set_slot_one(slot % (2 * ring_size))
        if data_block is not None:
            slots, vector = data_block
            self.reg.load_block([s % (2 * ring_size) for s in slots], vector)
        self._nonzero = band.nonzero()
        self._cells = [c for c, _ in self._nonzero]
        self._blocks = [qutrit_block(d) for _, d in self._nonzero]
        self._kinds = [d for _, d in self._nonzero]
        self._rot = rotation_block(1)
        self._base_live = len(self.reg.live_slots)
        self._steps_since_prune = 0
        if live_window is not None and self._window_admissible(live_window, horizon):
            self._window = live_window
        else:
            self._window = None

    def _window_admissible(self, window: tuple[int, int], horizon: int | None) -> bool:
        """The windowed fast path is exact only while no digit's absolute
        action slot can wrap back into the window."""
        if not self._nonzero:
            return True
        if horizon is None:
            horizon = (self.completion_steps or 0) + STABILITY_MARGIN
        if horizon <= 0:
            return False
        lo, hi = window
        start_ok = all(2 * j + 2 * self.ring_size > hi for j, _ in self._nonzero)
        max_abs = max(2 * j + 3 * (horizon - 1) for j, _ in self._nonzero)
        return start_ok and max_abs + 1 < 2 * self.ring_size + lo

    # -- stepping ---------------------------------------------------------

    def _active_range(self) -> tuple[int, int]:
        lo, hi = self._window
        j_lo = ceil((lo - 1 - 3 * self.tau) / 2)
        j_hi = (hi + 1 - 3 * self.tau) // 2
        return bisect_left(self._cells, j_lo), bisect_right(self._cells, j_hi)

    def step(self) -> "FactoredLattice":
        two_n = 2 * self.ring_size
        if self._window is not None:
            a, b = self._active_range()
            indices = range(a, b)
            absolute = True
        else:
            indices = range(len(self._nonzero))
            absolute = False
        for k in indices:
            j = self._cells[k]
            s = 2 * j + 3 * self.tau
            if not absolute:
                s %= two_n
            s1 = s % two_n
            s2 = (s + 1) % two_n
            if self._kinds[k] == 1:
                self.reg.apply_swap(s1, s2)
            else:
                self.reg.apply_controlled(self._rot, s1, s2)
        self.tau += 1
        self._steps_since_prune += 1
        if (
            self._steps_since_prune >= 8
            and len(self.reg.live_slots) > self._base_live
        ):
            self.reg.prune()
            self._steps_since_prune = 0
        return self

    def content_marginal(self, slots: Sequence[int]) -> dict[tuple[int, ...], float]:
        return self.reg.marginal([s % (2 * self.ring_size) for s in slots])


QcaLattice = FaithfulLattice | FactoredLattice


def qca_step(lattice: QcaLattice) -> QcaLattice:
    """Advance the machine one step: cell unitary everywhere, then shift."""
    return lattice.step()


def run_steps(lattice: QcaLattice, steps: int) -> QcaLattice:
    for _ in range(steps):
        lattice.step()
    return lattice


@dataclass
class ReadoutResult:
    """Marginal over the logical data slots plus completion bookkeeping."""

    table: dict[tuple[int, ...], float]
    elapsed_steps: int
    required_steps: int | None
    early: bool


def readout(
    lattice: QcaLattice,
    elapsed_steps: int | None = None,
    slots: Sequence[int] | None = None,
) -> ReadoutResult:
    """Read the data band in the computational basis.

    The accumulated shift is undone so results are indexed by logical
    (initial-placement) slots.  Reading before the planned completion step
    is flagged, not refused.
    """
    if elapsed_steps is None:
        elapsed_steps = lattice.tau
    if slots is None:
        slots = lattice.wire_slots
    required = lattice.completion_steps
    early = required is not None and elapsed_steps < required
    table = lattice.content_marginal(list(slots))
    return ReadoutResult(table, elapsed_steps, required, early)


def faithful_state_of(lattice: FactoredLattice) -> QuantumState:
    """Embed a factored lattice into the full per-cell basis, for
    cross-mode comparison."""
    n = lattice.ring_size
    two_n = 2 * n
    qutrits = [0] * n
    for cell, digit in lattice.band.nonzero():
        qutrits[(cell + lattice.tau) % n] = digit
    phys_slots = list(range(two_n))
    content = [(p + lattice.tau) % two_n for p in phys_slots]
    bits_vec = lattice.reg.to_dense(content)
    layout = SiteLayout((12,) * n)
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    qubit_idx = np.arange(2 ** two_n)
    cell_index = np.zeros(2 ** two_n, dtype=np.int64)
    for i in range(n):
        b0 = (qubit_idx >> (two_n - 1 - 2 * i)) & 1
        b1 = (qubit_idx >> (two_n - 2 - 2 * i)) & 1
        cell_index = cell_index * 12 + (4 * qutrits[i] + 2 * b0 + b1)
    amps[cell_index] = bits_vec
    return QuantumState(layout, amps, _checked=True)


# ---------------------------------------------------------------------------
# Generic lift of a two-sublayer machine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftedQcaSpec:
    """Autonomous encoding of a machine with ``k`` two-sublayer rules.

    Rule ``m`` applies its first block on even base-cell pairs, then its
    second on odd pairs.  The program alphabet has ``2k + 1`` symbols:
    0 is idle, ``2m - 1`` selects rule m's even block, ``2m`` its odd
    block.  A super-cell is three base cells plus one program cell.
    """

    base_dim: int
    rules: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        if self.base_dim < 2:
            raise LayoutError("base cell dimension must be at least 2")
        if not self.rules:
            raise ProgqcaError("at least one rule is required")
        d2 = self.base_dim ** 2
        frozen = []
        for even, odd in self.rules:
            even = np.asarray(even, dtype=np.complex128)
            odd = np.asarray(odd, dtype=np.complex128)
            for m in (even, odd):
                if m.shape != (d2, d2):
                    raise LayoutError(
                        f"rule blocks must be {d2}x{d2} for base dimension "
                        f"{self.base_dim}"
                    )
                check_unitary(m)
            frozen.append((even, odd))
        object.__setattr__(self, "rules", tuple(frozen))

    @property
    def rule_count(self) -> int:
        return len(self.rules)

    @property
    def alphabet_size(self) -> int:
        return 2 * len(self.rules) + 1

    def block_of(self, symbol: int) -> np.ndarray:
        if not 1 <= symbol < self.alphabet_size:
            raise ProgqcaError(f"symbol {symbol} outside alphabet")
        rule, which = divmod(symbol - 1, 2)
        return self.rules[rule][which]

    def symbols_for_rules(self, rule_sequence: Sequence[int]) -> list[tuple[int, int]]:
        """(super-slot, symbol) placements for a rule sequence.

        Rule ``m`` (1-based position in the sequence) gets its even-block
        symbol at super-slot ``-2m`` and its odd-block symbol at ``-2m-1``;
        earlier rules sit closer to the data and execute first, and the
        even/odd parity of the action pairs is fixed by the slot parity.
        """
        placements = []
        for pos, rule in enumerate(rule_sequence, start=1):
            if not 1 <= rule <= self.rule_count:
                raise ProgqcaError(f"rule index {rule} out of range")
            placements.append((-2 * pos, 2 * rule - 1))
            placements.append((-2 * pos - 1, 2 * rule))
        return placements


def lift_generic(
    rules: Sequence[tuple[np.ndarray, np.ndarray]], base_dim: int = 2
) -> LiftedQcaSpec:
    """Validate and package Margolus-form rules for autonomous execution."""
    return LiftedQcaSpec(base_dim, tuple((e, o) for e, o in rules))


class LiftedMachine:
    """Factored simulation of the lifted machine on a super-cell ring.

    Per step the program band slides one super-cell (three base cells)
    while the data band slides one base cell the same way, a net gain of
    two base cells per step; then every nonzero program symbol applies its
    block to the base-cell pair currently beside it.  Symbol action sites
    therefore keep their parity, neighbouring symbols act three cells
    apart (one idle cell between their regions), and a symbol placed
    further out acts strictly later on every cell it visits.
    """

    def __init__(
        self,
        spec: LiftedQcaSpec,
        n_super: int,
        placements: Sequence[tuple[int, int]],
        data: Mapping[int, int] | None = None,
        data_block: tuple[Sequence[int], np.ndarray] | None = None,
    ):
        self.spec = spec
        self.n_super = n_super
        self.base_cells = 3 * n_super
        occupied = set()
        for slot, _sym in placements:
            ring_slot = slot % n_super
            if ring_slot in occupied:
                raise SizingError(
                    f"program symbols collide on super-slot {ring_slot}",
                    len(placements),
                )
            occupied.add(ring_slot)
        self.placements = list(placements)
        self.tau = 0
        layout = SiteLayout((spec.base_dim,) * self.base_cells)
        digits = [0] * self.base_cells
        for cell, value in (data or {}).items():
            digits[cell % self.base_cells] = int(value)
        self.state = basis_state(layout, digits)
        if data_block is not None:
            cells, vector = data_block
            vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
            amps = np.zeros(layout.total_dim, dtype=np.complex128)
            width = len(cells)
            for value, word in zip(vector, np.ndindex(*([spec.base_dim] * width))):
                full = list(digits)
                for cell, digit in zip(cells, word):
                    full[cell % self.base_cells] = digit
                amps[layout.index_of(full)] = value
            self.state = QuantumState(layout, amps)

    def step(self) -> "LiftedMachine":
        self.tau += 1
        m = self.base_cells
        touched: set[int] = set()
        state = self.state
        for slot, symbol in self.placements:
            c1 = (3 * slot + 2 * self.tau) % m
            c2 = (c1 + 1) % m
            # localisation regions must stay disjoint within a step
            if c1 in touched or c2 in touched:
                raise AssertionError("overlapping localisation regions")
            touched.update((c1, c2))
            state = apply_local_unitary(
                state, (c1, c2), self.spec.block_of(symbol), verify=False
            )
        self.state = state
        return self

    def completion_steps(self, data_hi: int) -> int:
        """First step count after which every symbol has passed cell
        ``data_hi``."""
        if not self.placements:
            return 0
        return max(
            ceil((data_hi + 1 - 3 * slot) / 2) for slot, _ in self.placements
        )

    def assert_no_interference(self, steps: int, data_hi: int) -> None:
        """Raise unless ``steps`` steps stay clear of ring wrap-around.

        Data (and any junk the sweep produces) lives at content cells 0
        upward, so a symbol whose absolute action position reaches one full
        ring (cell ``base_cells``) has wrapped back onto it.
        """
        if not self.placements:
            return
        m = self.base_cells
        reach = max(3 * slot + 2 * steps + 1 for slot, _ in self.placements)
        if reach >= m:
            need = ceil((reach + 1) / 3)
            raise SizingError(
                f"super-cell ring of {self.n_super} wraps a symbol back into "
                f"swept territory; minimal admissible size is {need}",
                need,
            )


def simulate_lifted(
    spec: LiftedQcaSpec,
    n_super: int,
    rule_sequence: Sequence[int],
    data: Mapping[int, int] | None = None,
    data_block: tuple[Sequence[int], np.ndarray] | None = None,
    steps: int | None = None,
    data_hi: int | None = None,
) -> LiftedMachine:
    """Run a rule sequence on the lifted machine and return the machine."""
    placements = spec.symbols_for_rules(rule_sequence)
    machine = LiftedMachine(spec, n_super, placements, data=data, data_block=data_block)
    if data_hi is None:
        cells = sorted((data or {}).keys()) or [0]
        if data_block is not None:
            cells = sorted(set(cells) | {c for c in data_block[0]})
        data_hi = max(cells)
    if steps is None:
        steps = machine.completion_steps(data_hi)
    machine.assert_no_interference(steps, data_hi)
    for _ in range(steps):
        machine.step()
    return machine


def apply_rule_sequence(
    state: QuantumState, spec: LiftedQcaSpec, rule_sequence: Sequence[int]
) -> QuantumState:
    """Sequential reference: each rule's even sublayer then odd sublayer,
    clipped to the state's chain."""
    width = state.layout.site_count
    for rule in rule_sequence:
        even, odd = spec.rules[rule - 1]
        for start in range(0, width - 1, 2):
            state = apply_local_unitary(state, (start, start + 1), even, verify=False)
        for start in range(1, width - 1, 2):
            state = apply_local_unitary(state, (start, start + 1), odd, verify=False)
    return state
