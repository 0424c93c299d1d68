"""Dense state vectors over heterogeneous site dimensions.

Every simulator and every equivalence oracle in this package runs on the
two engines defined here:

* :class:`QuantumState` -- an immutable-by-convention dense amplitude
  vector over a fixed :class:`SiteLayout` (mixed radix, e.g. qubits next to
  qutrits next to 12-dimensional cells).  Basis order is big-endian in site
  order: site 0 is the most significant digit.

* :class:`LiveRegister` -- a mutable qubit register addressed by arbitrary
  integer slot labels, holding dense amplitudes only over the slots that are
  (possibly) not |0>.  Slots outside the live set are exactly |0>.  Swaps
  are performed by relabeling, so they are exact and free; rotations with a
  |0> control are skipped.  This is what makes long program-band runs cheap:
  the quantum content of a lattice with thousands of sites typically lives
  on a dozen slots.

The unitarity of an operator matrix is checked once per distinct matrix and
remembered by content hash, since the same small gate matrices are applied
millions of times.
"""

from __future__ import annotations

import hashlib
import os
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidDigitError, LayoutError, UnitarityError

UNITARITY_TOL = 1e-12
STATE_NORM_TOL = 1e-10
DEFAULT_MAX_AMPLITUDES = 1 << 24
MAX_AMPLITUDES_ENV = "PROGQCA_MAX_AMPLITUDES"

_verified_unitaries: set[bytes] = set()


def max_amplitudes() -> int:
    """Memory budget: the largest amplitude count a layout may declare."""
    raw = os.environ.get(MAX_AMPLITUDES_ENV)
    if raw is None:
        return DEFAULT_MAX_AMPLITUDES
    try:
        value = int(raw)
    except ValueError as exc:
        raise LayoutError(f"bad {MAX_AMPLITUDES_ENV} value: {raw!r}") from exc
    if value < 2:
        raise LayoutError(f"{MAX_AMPLITUDES_ENV} must be at least 2")
    return value


@dataclass(frozen=True)
class SiteLayout:
    """Ordered list of finite site dimensions; fixes the basis once."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if not self.dims:
            raise LayoutError("a layout needs at least one site")
        if any(d < 2 for d in self.dims):
            raise LayoutError(f"site dimensions must be >= 2, got {self.dims}")
        total = prod(self.dims)
        budget = max_amplitudes()
        if total > budget:
            raise LayoutError(
                f"layout of {total} amplitudes exceeds the budget of {budget} "
                f"(override with {MAX_AMPLITUDES_ENV})"
            )

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    @property
    def site_count(self) -> int:
        return len(self.dims)

    def index_of(self, digits: Sequence[int]) -> int:
        """Mixed-radix index of a digit string, big-endian in site order."""
        if len(digits) != len(self.dims):
            raise InvalidDigitError(
                f"expected {len(self.dims)} digits, got {len(digits)}"
            )
        idx = 0
        for site, (digit, dim) in enumerate(zip(digits, self.dims)):
            if not 0 <= digit < dim:
                raise InvalidDigitError(
                    f"digit {digit} out of range for site {site} (dimension {dim})"
                )
            idx = idx * dim + digit
        return idx

    def digits_of(self, index: int) -> tuple[int, ...]:
        digits = []
        for dim in reversed(self.dims):
            digits.append(index % dim)
            index //= dim
        return tuple(reversed(digits))


@dataclass
class QuantumState:
    """Dense complex amplitudes over a layout; kept normalized."""

    layout: SiteLayout
    amplitudes: np.ndarray
    _checked: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if self.amplitudes.shape != (self.layout.total_dim,):
            raise LayoutError(
                f"amplitude count {self.amplitudes.size} does not match layout "
                f"dimension {self.layout.total_dim}"
            )
        if not self._checked:
            n = np.linalg.norm(self.amplitudes)
            if abs(n - 1.0) > STATE_NORM_TOL:
                raise LayoutError(f"state norm {n} is not 1 within {STATE_NORM_TOL}")

    def copy(self) -> "QuantumState":
        return QuantumState(self.layout, self.amplitudes.copy(), _checked=True)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_state(layout: SiteLayout, digits: Sequence[int]) -> QuantumState:
    """Computational basis state with the given per-site digits."""
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    amps[layout.index_of(digits)] = 1.0
    return QuantumState(layout, amps, _checked=True)


def _matrix_key(matrix: np.ndarray) -> bytes:
    h = hashlib.sha1()
    h.update(str(matrix.shape).encode())
    h.update(np.ascontiguousarray(matrix).tobytes())
    return h.digest()


def check_unitary(matrix: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    """Raise :class:`UnitarityError` unless ``matrix`` is unitary within tol.

    Verdicts are cached by content hash: each distinct matrix is checked once.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise UnitarityError(f"matrix must be square, got shape {matrix.shape}", float("inf"))
    key = _matrix_key(matrix)
    if key in _verified_unitaries:
        return
    dev = float(
        np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])).max()
    )
    if dev > tol:
        raise UnitarityError(f"matrix is not unitary (deviation {dev:.3e})", dev)
    _verified_unitaries.add(key)


def apply_local_unitary(
    state: QuantumState,
    sites: Sequence[int],
    matrix: np.ndarray,
    *,
    verify: bool = True,
) -> QuantumState:
    """Apply ``matrix`` to the named sites, identity elsewhere.

    The matrix dimension must equal the product of the named sites'
    dimensions; sites must be distinct.  Returns a new state.
    """
    sites = tuple(sites)
    if len(set(sites)) != len(sites):
        raise LayoutError(f"duplicate site index in {sites}")
    dims = state.layout.dims
    for s in sites:
        if not 0 <= s < len(dims):
            raise LayoutError(f"site {s} outside layout of {len(dims)} sites")
    block = prod(dims[s] for s in sites)
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (block, block):
        raise LayoutError(
            f"matrix of shape {matrix.shape} does not fit sites {sites} "
            f"with joint dimension {block}"
        )
    if verify:
        check_unitary(matrix)
    psi = state.amplitudes.reshape(dims)
    psi = np.moveaxis(psi, sites, range(len(sites)))
    moved_shape = psi.shape
    psi = matrix @ psi.reshape(block, -1)
    psi = np.moveaxis(psi.reshape(moved_shape), range(len(sites)), sites)
    return QuantumState(state.layout, psi.reshape(-1), _checked=True)


def overlap(a: QuantumState, b: QuantumState) -> complex:
    """Inner product <a|b>; layouts must match."""
    if a.layout.dims != b.layout.dims:
        raise LayoutError(f"layout mismatch: {a.layout.dims} vs {b.layout.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


class PhaseComparison(NamedTuple):
    equal: bool
    magnitude: float

    def __bool__(self) -> bool:  # allows `if equal_up_to_phase(...):`
        return self.equal


def equal_up_to_phase(a: QuantumState, b: QuantumState, tol: float = 1e-10) -> PhaseComparison:
    """True iff |<a|b>| >= 1 - tol, with the magnitude reported."""
    mag = abs(overlap(a, b))
    return PhaseComparison(mag >= 1.0 - tol, mag)


def marginal_distribution(
    state: QuantumState, sites: Sequence[int]
) -> dict[tuple[int, ...], float]:
    """Probability table over the digit strings of a site subset.

    Entries sum to 1 within 1e-10; every combination of the subset's digits
    appears as a key.
    """
    sites = tuple(sites)
    if not sites:
        raise LayoutError("marginal over an empty site subset is not defined")
    if len(set(sites)) != len(sites):
        raise LayoutError(f"duplicate site index in {sites}")
    dims = state.layout.dims
    psi = state.amplitudes.reshape(dims)
    keep = sites
    drop = tuple(i for i in range(len(dims)) if i not in keep)
    probs = np.abs(np.moveaxis(psi, keep, range(len(keep)))) ** 2
    if drop:
        probs = probs.reshape([dims[s] for s in keep] + [-1]).sum(axis=-1)
    table: dict[tuple[int, ...], float] = {}
    for digits in product(*[range(dims[s]) for s in keep]):
        table[digits] = float(probs[digits])
    return table


def sample(
    state: QuantumState,
    sites: Sequence[int],
    shot_count: int,
    seed: int,
) -> Counter:
    """Draw i.i.d. digit strings from the marginal; deterministic per seed."""
    if shot_count < 1:
        raise LayoutError("shot_count must be >= 1")
    table = marginal_distribution(state, sites)
    outcomes = sorted(table)
    probs = np.array([table[o] for o in outcomes], dtype=float)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(outcomes), size=shot_count, p=probs)
    return Counter(outcomes[i] for i in draws)


# ---------------------------------------------------------------------------
# Lazily materialized qubit register
# ---------------------------------------------------------------------------

PRUNE_MASS = 1e-20


class LiveRegister:
    """Qubit amplitudes over a dynamic set of integer-labeled slots.

    A slot not in the live set is exactly |0>.  ``apply_swap`` exchanges two
    slots by relabeling (exact, no arithmetic); controlled gates are skipped
    when the control slot is dead; targets are materialized on demand.
    ``prune`` drops slots whose |1>-mass has decayed to numerical zero, so a
    long run's live set tracks the actual quantum support.
    """

    __slots__ = ("_axis", "_order", "_amps", "max_qubits")

    def __init__(self, max_qubits: int = 26):
        self._axis: dict[int, int] = {}
        self._order: list[int] = []
        self._amps = np.ones((), dtype=np.complex128)
        self.max_qubits = max_qubits

    # -- bookkeeping ---------------------------------------------------

    @property
    def live_slots(self) -> tuple[int, ...]:
        return tuple(self._order)

    def is_live(self, slot: int) -> bool:
        return slot in self._axis

    def copy(self) -> "LiveRegister":
        other = LiveRegister(self.max_qubits)
        other._axis = dict(self._axis)
        other._order = list(self._order)
        other._amps = self._amps.copy()
        return other

    def materialize(self, slot: int) -> int:
        """Bring ``slot`` into the live set (in state |0>); return its axis."""
        if slot in self._axis:
            return self._axis[slot]
        if len(self._order) >= self.max_qubits:
            raise LayoutError(
                f"live register exceeded {self.max_qubits} qubits; "
                f"raise the cap or check pruning"
            )
        zero = np.zeros_like(self._amps)
        self._amps = np.stack([self._amps, zero], axis=-1)
        axis = len(self._order)
        self._axis[slot] = axis
        self._order.append(slot)
        return axis

    def set_slot_one(self, slot: int) -> None:
        """Initialize a dead slot to |1> (used only during state preparation)."""
        axis = self.materialize(slot)
        x = np.zeros_like(self._amps)
        idx = [slice(None)] * self._amps.ndim
        idx[axis] = 0
        src = [slice(None)] * self._amps.ndim
        src[axis] = 1
        x[tuple(src)] = self._amps[tuple(idx)]
        self._amps = x

    def load_block(self, slots: Sequence[int], block: np.ndarray) -> None:
        """Tensor a joint state for fresh ``slots`` onto the register.

        ``block`` is a dense vector over the given slots (big-endian in the
        listed order); all slots must currently be dead.
        """
        slots = list(slots)
        block = np.asarray(block, dtype=np.complex128).reshape([2] * len(slots))
        for s in slots:
            if s in self._axis:
                raise LayoutError(f"slot {s} is already live")
        if len(self._order) + len(slots) > self.max_qubits:
            raise LayoutError("live register capacity exceeded by load_block")
        self._amps = np.multiply.outer(self._amps, block)
        for s in slots:
            self._axis[s] = len(self._order)
            self._order.append(s)

    # -- operations ------------------------------------------------------

    def apply_swap(self, s1: int, s2: int) -> None:
        """Exchange slot contents; pure relabeling, exact."""
        a1 = self._axis.get(s1)
        a2 = self._axis.get(s2)
        if a1 is None and a2 is None:
            return
        if a1 is not None and a2 is not None:
            self._axis[s1], self._axis[s2] = a2, a1
            self._order[a1], self._order[a2] = s2, s1
            return
        if a1 is not None:  # live s1 moves into dead s2
            del self._axis[s1]
            self._axis[s2] = a1
            self._order[a1] = s2
        else:
            del self._axis[s2]
            self._axis[s1] = a2
            self._order[a2] = s1

    def apply_controlled(self, matrix2: np.ndarray, control: int, target: int) -> None:
        """Apply ``|0><0| (x) I + |1><1| (x) matrix2`` on (control, target).

        Skipped exactly when the control is dead.
        """
        if control not in self._axis:
            return
        gate = np.eye(4, dtype=np.complex128)
        gate[2:, 2:] = matrix2
        self.apply_two(gate, control, target)

    def apply_two(self, matrix4: np.ndarray, s1: int, s2: int) -> None:
        """Apply a 4x4 matrix on the ordered slot pair (s1, s2)."""
        a1 = self._axis.get(s1)
        if a1 is None:
            a1 = self.materialize(s1)
        a2 = self._axis.get(s2)
        if a2 is None:
            a2 = self.materialize(s2)
        n = self._amps.ndim
        psi = np.moveaxis(self._amps, (a1, a2), (0, 1))
        shape = psi.shape
        psi = np.asarray(matrix4, dtype=np.complex128) @ psi.reshape(4, -1)
        psi = np.moveaxis(psi.reshape(shape), (0, 1), (a1, a2))
        self._amps = np.ascontiguousarray(psi)

    def apply_one(self, matrix2: np.ndarray, slot: int) -> None:
        axis = self._axis.get(slot)
        if axis is None:
            axis = self.materialize(slot)
        psi = np.moveaxis(self._amps, axis, 0)
        shape = psi.shape
        psi = np.asarray(matrix2, dtype=np.complex128) @ psi.reshape(2, -1)
        psi = np.moveaxis(psi.reshape(shape), 0, axis)
        self._amps = np.ascontiguousarray(psi)

    # -- readout ----------------------------------------------------------

    def one_mass(self, slot: int) -> float:
        """Probability that ``slot`` reads 1."""
        axis = self._axis.get(slot)
        if axis is None:
            return 0.0
        psi = np.moveaxis(self._amps, axis, 0)
        return float((np.abs(psi[1]) ** 2).sum())

    def prune(self, threshold: float = PRUNE_MASS) -> None:
        """Drop live slots whose |1>-mass is numerically zero."""
        axis = 0
        while axis < len(self._order):
            psi = np.moveaxis(self._amps, axis, 0)
            mass1 = float((np.abs(psi[1]) ** 2).sum())
            if mass1 < threshold:
                slot = self._order[axis]
                self._amps = np.ascontiguousarray(psi[0])
                del self._axis[slot]
                self._order.pop(axis)
                for s, a in self._axis.items():
                    if a > axis:
                        self._axis[s] = a - 1
                norm = np.linalg.norm(self._amps)
                if norm > 0:
                    self._amps = self._amps / norm
            else:
                axis += 1

    def to_dense(self, slots: Sequence[int]) -> np.ndarray:
        """Dense vector over the given slots (big-endian in listed order).

        Every live slot must appear in ``slots``; dead ones read |0>.
        """
        slots = list(slots)
        missing = [s for s in self._order if s not in slots]
        if missing:
            raise LayoutError(f"live slots {missing} not covered by requested order")
        work = self.copy()
        for s in slots:
            work.materialize(s)
        perm = [work._axis[s] for s in slots]
        return np.ascontiguousarray(np.transpose(work._amps, perm)).reshape(-1)

    def overlap_with(self, other: "LiveRegister") -> complex:
        slots = sorted(set(self._order) | set(other._order))
        if not slots:
            return 1.0 + 0j
        return complex(np.vdot(self.to_dense(slots), other.to_dense(slots)))

    def marginal(self, slots: Sequence[int]) -> dict[tuple[int, ...], float]:
        """Probability table over the listed slots (dead slots read 0)."""
        slots = list(slots)
        live = [s for s in slots if s in self._axis]
        probs = np.abs(self._amps) ** 2
        if live:
            axes = [self._axis[s] for s in live]
            rest = [a for a in range(self._amps.ndim) if a not in axes]
            probs = np.transpose(probs, axes + rest).reshape([2] * len(live) + [-1]).sum(axis=-1)
        total = float(probs.sum()) if not live else None
        table: dict[tuple[int, ...], float] = {}
        for digits in product(*[range(2)] * len(slots)):
            dead_one = any(
                digits[i] == 1 for i, s in enumerate(slots) if s not in self._axis
            )
            if dead_one:
                table[digits] = 0.0
            elif live:
                key = tuple(digits[i] for i, s in enumerate(slots) if s in self._axis)
                table[digits] = float(probs[key])
            else:
                table[digits] = total
        return table
