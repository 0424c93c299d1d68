"""Constant gate matrices used throughout the machine hierarchy.

The whole instruction set is generated by one two-qubit primitive: a
controlled quarter-turn.  With the first qubit as control,

    g = [[1, 0, 0,  0],
         [0, 1, 0,  0],
         [0, 0, c, -c],
         [0, 0, c,  c]]      with c = 1/sqrt(2),

i.e. the target is rotated by pi/4 in the real plane exactly when the
control reads 1.  Eight applications give the identity, which is what every
restoration trick in the compiler relies on.

The 12-dimensional cell unitary of the autonomous machine is block diagonal
over a qutrit: program digit 0 leaves the cell's two qubits alone, digit 1
swaps them, digit 2 applies the controlled quarter-turn.  Cell basis index
is ``4*t + 2*q_even + q_odd``.

1/sqrt(2) is computed once and reused so repeated constructions are
bit-identical (matrices are cached by content hash elsewhere).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .statevec import check_unitary

SQRT_HALF = sqrt(0.5)


@dataclass(frozen=True)
class GateMatrix:
    """A unitary with a fixed side length; entries row-major."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128)
        if arr.shape != (self.dim, self.dim):
            raise ValueError(f"expected {self.dim}x{self.dim} entries, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        check_unitary(arr)

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(self.dim, self.entries @ other.entries)


_gate_cache: dict[str, GateMatrix] = {}


def gate_g() -> GateMatrix:
    """Controlled quarter-turn on (control, target), basis |00>..|11>."""
    if "g" not in _gate_cache:
        c = SQRT_HALF
        m = np.array(
            [
                [1, 0, 0, 0],
                [0, 1, 0, 0],
                [0, 0, c, -c],
                [0, 0, c, c],
            ],
            dtype=np.complex128,
        )
        _gate_cache["g"] = GateMatrix(4, m)
    return _gate_cache["g"]


def gate_swap() -> GateMatrix:
    """Exchange of two qubits: permutation swapping |01> and |10>."""
    if "swap" not in _gate_cache:
        m = np.eye(4, dtype=np.complex128)
        m[[1, 2]] = m[[2, 1]]
        _gate_cache["swap"] = GateMatrix(4, m)
    return _gate_cache["swap"]


def identity(dim: int) -> GateMatrix:
    return GateMatrix(dim, np.eye(dim, dtype=np.complex128))


def matrix_power(m: GateMatrix, k: int) -> GateMatrix:
    """k-fold product of a unitary; power 0 is the identity."""
    if k < 0:
        raise ValueError("power must be non-negative")
    acc = np.eye(m.dim, dtype=np.complex128)
    base = m.entries
    while k:
        if k & 1:
            acc = acc @ base
        base = base @ base
        k >>= 1
    return GateMatrix(m.dim, acc)


def rotation_block(eighths: int) -> np.ndarray:
    """The target-qubit rotation of ``gate_g`` raised to ``eighths``.

    Returns the plain 2x2 block (a real rotation by eighths * pi/4).
    """
    g = matrix_power(gate_g(), eighths % 8)
    return np.asarray(g.entries[2:, 2:])


def cell_unitary() -> GateMatrix:
    """Per-cell unitary of the autonomous machine (12x12).

    Block diagonal over the program qutrit: digit 0 acts as identity on the
    cell's qubit pair, digit 1 as their swap, digit 2 as the controlled
    quarter-turn with the even qubit controlling.  Qutrit values are never
    mixed, which is what keeps a classical program classical.
    """
    if "cell" not in _gate_cache:
        m = np.zeros((12, 12), dtype=np.complex128)
        m[0:4, 0:4] = np.eye(4)
        m[4:8, 4:8] = gate_swap().entries
        m[8:12, 8:12] = gate_g().entries
        _gate_cache["cell"] = GateMatrix(12, m)
    return _gate_cache["cell"]


def qutrit_block(digit: int) -> np.ndarray:
    """The 4x4 qubit-pair action selected by a program digit."""
    if digit == 0:
        return np.eye(4, dtype=np.complex128)
    if digit == 1:
        return np.asarray(gate_swap().entries)
    if digit == 2:
        return np.asarray(gate_g().entries)
    raise ValueError(f"program digit must be 0, 1 or 2, got {digit}")
