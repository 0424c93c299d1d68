import numpy as np
import pytest

from progqca.compiler import GateApp, GCircuit
from progqca.errors import LayoutError, ProgqcaError
from progqca.oracle import (
    cross_check,
    exhaustive_inputs,
    simulate_circuit,
    simulate_circuit_vector,
)
from progqca.statevec import basis_state, overlap, SiteLayout

SQH = 2 ** -0.5


def test_simulate_empty_circuit():
    state = simulate_circuit(GCircuit(2), [0, 0])
    assert np.allclose(state.amplitudes, [1, 0, 0, 0])


def test_simulate_single_gate():
    state = simulate_circuit(GCircuit.from_pairs(2, [(0, 1)]), [1, 0])
    assert np.allclose(state.amplitudes, [0, 0, SQH, SQH])


def test_simulate_eight_turns_is_identity():
    circuit = GCircuit.from_pairs(2, [(0, 1)] * 8)
    for x in range(4):
        digits = [(x >> 1) & 1, x & 1]
        state = simulate_circuit(circuit, digits)
        ref = basis_state(SiteLayout((2, 2)), digits)
        assert abs(overlap(ref, state)) == pytest.approx(1.0)


def test_simulate_named_gates():
    state = simulate_circuit(GCircuit(1, (GateApp("H", (0,)),)), [0])
    assert np.allclose(state.amplitudes, [SQH, SQH])
    toff = GCircuit(3, (GateApp("TOFFOLI", (0, 1, 2)),))
    state = simulate_circuit(toff, [1, 1, 0])
    expected = basis_state(SiteLayout((2, 2, 2)), [1, 1, 1])
    assert abs(overlap(expected, state)) == pytest.approx(1.0)


def test_exhaustive_inputs():
    assert exhaustive_inputs(1) == ["0", "1"]
    assert len(exhaustive_inputs(2)) == 4
    with pytest.raises(LayoutError, match="cap"):
        exhaustive_inputs(7)


def test_cross_check_requires_gate_reference():
    with pytest.raises(ProgqcaError):
        cross_check(GCircuit(2), levels=("ccqca",))


def test_cross_check_gate_vs_ccqca():
    report = cross_check(GCircuit.from_pairs(2, [(0, 1)]), levels=("gate", "ccqca"))
    assert report.verdict
    assert report.min_overlap >= 1 - 1e-9
    assert report.phase_consistent


def test_cross_check_gate_vs_factored():
    report = cross_check(
        GCircuit.from_pairs(2, [(0, 1)]), levels=("gate", "qca-factored")
    )
    assert report.verdict


def test_cross_check_faithful_inadmissible_for_compiled():
    report = cross_check(
        GCircuit.from_pairs(2, [(0, 1)]),
        levels=("gate", "qca-faithful", "qca-factored"),
    )
    # the compiled ring is far beyond any faithful budget; not fatal
    assert not report.outcomes["qca-faithful"].admissible
    assert report.outcomes["qca-factored"].admissible
    assert report.verdict


def test_cross_check_corruption_yields_witness():
    report = cross_check(
        GCircuit.from_pairs(2, [(0, 1)]),
        levels=("gate", "qca-factored"),
        corrupt_band_digit=0,
    )
    assert not report.verdict
    outcome = report.outcomes["qca-factored"]
    assert outcome.min_overlap < 1 - 1e-9
    assert outcome.witness_input is not None


def test_cross_check_level_repeat_consistency():
    # running the same level twice over the same inputs gives identical
    # overlaps: the per-level path is deterministic and self-consistent
    circuit = GCircuit.from_pairs(2, [(0, 1), (1, 0)])
    a = cross_check(circuit, levels=("gate", "nn"))
    b = cross_check(circuit, levels=("gate", "nn"))
    assert a.outcomes["nn"].min_overlap == b.outcomes["nn"].min_overlap
    assert a.verdict and b.verdict


def test_cross_check_report_pairs():
    report = cross_check(GCircuit.from_pairs(2, [(0, 1)]), levels=("gate", "ccqca"))
    keys = [k for k, _ in report.as_pairs()]
    assert "verdict" in keys and "min-overlap" in keys


def test_stage_equivalence_all_levels_random_circuits():
    # direct simulation, pointer layers, nearest-neighbour layers and the
    # autonomous factored run must all agree on every basis input
    for seed in range(3):
        rng = np.random.default_rng(seed)
        wires = int(rng.integers(2, 4))
        pairs = []
        for _ in range(int(rng.integers(1, 3))):
            c, t = rng.choice(wires, size=2, replace=False)
            pairs.append((int(c), int(t)))
        circuit = GCircuit.from_pairs(wires, pairs)
        report = cross_check(circuit, levels=("gate", "ccqca", "nn", "qca-factored"))
        assert report.verdict, (seed, report.as_pairs())
        assert report.min_overlap >= 1 - 1e-9


def test_superposition_vector_reference():
    circuit = GCircuit.from_pairs(2, [(0, 1)])
    uniform = np.full(4, 0.5)
    state = simulate_circuit_vector(circuit, uniform)
    direct = sum(
        simulate_circuit(circuit, [(x >> 1) & 1, x & 1]).amplitudes for x in range(4)
    ) / 2
    assert np.allclose(state.amplitudes, direct)
