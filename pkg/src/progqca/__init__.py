"""Programmable quantum cellular automaton toolkit.

A compiler that lowers circuits of one two-qubit primitive down to a
classical qutrit program band, simulators for every intermediate machine
level, and cross-level equivalence certification.
"""

from .autoqca import (
    FactoredLattice,
    FaithfulLattice,
    ProgramBand,
    assemble_program,
    encode_segment,
    lift_generic,
    qca_step,
    readout,
    simulate_lifted,
    steps_to_completion,
)
from .ccqca import (
    Homomorphism,
    NnOp,
    ThreeBandLattice,
    apply_homomorphism,
    apply_nn_op,
    g_sequence,
    interleave_index,
    interleave_invert,
    lower_to_nn,
    run_program,
)
from .compiler import (
    CompiledProgram,
    GCircuit,
    GateApp,
    QcaConfig,
    ResourceReport,
    compile_circuit,
    estimate_resources,
    lower_named_gates,
    to_band,
    to_ccqca,
    to_nn,
)
from .gatelib import GateMatrix, cell_unitary, gate_g, gate_swap, matrix_power
from .oracle import EquivalenceReport, cross_check, exhaustive_inputs, simulate_circuit
from .statevec import (
    LiveRegister,
    QuantumState,
    SiteLayout,
    apply_local_unitary,
    basis_state,
    equal_up_to_phase,
    marginal_distribution,
    overlap,
    sample,
)
from .universal import (
    Realization,
    known_realizations,
    synthesize,
    verify_realization,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
