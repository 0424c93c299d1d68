import pytest

from progqca import formats
from progqca.cli import main
from progqca.errors import ParseError

CIRCUIT_ONE_GATE = """\
format: progqca-circuit/1
wires: 2
gate: G 0 1
"""

CIRCUIT_EMPTY = """\
format: progqca-circuit/1
wires: 2
"""


@pytest.fixture
def one_gate(tmp_path):
    path = tmp_path / "one.circuit"
    path.write_text(CIRCUIT_ONE_GATE)
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- formats -------------------------------------------------------------------


def test_circuit_round_trip_bytes():
    doc = formats.circuit_from_text(CIRCUIT_ONE_GATE)
    assert formats.circuit_to_text(doc) == CIRCUIT_ONE_GATE
    assert formats.circuit_from_text(formats.circuit_to_text(doc)) == doc


def test_circuit_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        formats.circuit_from_text("format: progqca-circuit/1\nwires: 2\ngate: X 0\n")
    assert err.value.line == 3
    with pytest.raises(ParseError, match="unknown field"):
        formats.circuit_from_text("format: progqca-circuit/1\nwires: 2\nbogus: 1\n")
    with pytest.raises(ParseError, match="format"):
        formats.circuit_from_text("format: something-else/9\n")


def test_band_round_trip_bytes():
    doc = formats.BandDoc(
        digits="100200",
        origin=-1,
        ring_size=24,
        slot_origin=3,
        data_extent=12,
        wires=2,
        completion_steps=17,
    )
    text = formats.band_to_text(doc)
    assert formats.band_from_text(text) == doc
    assert formats.band_to_text(formats.band_from_text(text)) == text


def test_band_rejects_bad_digits():
    text = formats.band_to_text(
        formats.BandDoc("100200", -1, 24, 3, 12, 2, 17)
    ).replace("100200", "100300")
    with pytest.raises(ParseError, match="alphabet"):
        formats.band_from_text(text)


# -- compile --------------------------------------------------------------------


def test_compile_writes_deterministic_band(one_gate, tmp_path, capsys):
    out1 = tmp_path / "a.band"
    out2 = tmp_path / "b.band"
    code1, _, _ = run_cli(capsys, "compile", str(one_gate), "--out", str(out1))
    code2, _, _ = run_cli(capsys, "compile", str(one_gate), "--out", str(out2))
    assert code1 == code2 == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = formats.band_from_text(out1.read_text())
    assert len(doc.digits) % 3 == 0 and len(doc.digits) > 0


def test_compile_empty_circuit(tmp_path, capsys):
    path = tmp_path / "empty.circuit"
    path.write_text(CIRCUIT_EMPTY)
    code, out, _ = run_cli(capsys, "compile", str(path))
    assert code == 0
    assert "digits: \n" in out or "digits:\n" in out.replace("digits: ", "digits:")


def test_compile_reports_resources(one_gate, tmp_path, capsys):
    out = tmp_path / "x.band"
    code, text, _ = run_cli(capsys, "compile", str(one_gate), "--out", str(out))
    assert code == 0
    assert "time-qgc: 1" in text
    assert "space-qca:" in text


def test_compile_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.circuit"
    path.write_text("format: progqca-circuit/1\nwires: 2\ngate: FROB 0 1\n")
    code, _, err = run_cli(capsys, "compile", str(path))
    assert code == 2
    assert "FROB" in err and "line 3" in err


# -- run -------------------------------------------------------------------------


def _parse_table(out):
    table = {}
    for line in out.splitlines():
        if line.startswith("#") or not line.strip():
            continue
        parts = line.split("\t")
        table[parts[0]] = float(parts[1])
    return table


def test_run_gate_level(one_gate, capsys):
    code, out, _ = run_cli(
        capsys, "run", str(one_gate), "--level", "gate", "--input", "10"
    )
    assert code == 0
    table = _parse_table(out)
    assert table["10"] == pytest.approx(0.5)
    assert table["11"] == pytest.approx(0.5)


@pytest.mark.parametrize("level", ["ccqca", "nn", "qca"])
def test_run_other_levels_match_gate(one_gate, capsys, level):
    code, out, _ = run_cli(
        capsys, "run", str(one_gate), "--level", level, "--input", "10"
    )
    assert code == 0
    table = _parse_table(out)
    assert table["10"] == pytest.approx(0.5, abs=1e-9)
    assert table["11"] == pytest.approx(0.5, abs=1e-9)


def test_run_sampling_deterministic(one_gate, capsys):
    args = ("run", str(one_gate), "--level", "gate", "--input", "10",
            "--shots", "50", "--seed", "11")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    assert any(line.count("\t") == 2 for line in out1.splitlines())


def test_run_rejects_wrong_input_length(one_gate, capsys):
    code, _, err = run_cli(
        capsys, "run", str(one_gate), "--level", "gate", "--input", "101"
    )
    assert code == 2
    assert "binary digits" in err


def test_run_faithful_mode_inadmissible(one_gate, capsys):
    code, _, err = run_cli(
        capsys, "run", str(one_gate), "--level", "qca",
        "--mode", "faithful", "--input", "10",
    )
    assert code == 2
    assert "faithful" in err and "cells" in err


# -- verify ----------------------------------------------------------------------


def test_verify_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--levels", "gate,ccqca", "--max-wires", "2",
        "--seeds", "2",
    )
    assert code == 0
    assert "verdict: pass" in out


def test_verify_corruption_hook(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--levels", "gate,qca", "--max-wires", "2",
        "--seeds", "1", "--inject-corruption", "3",
    )
    assert code == 1
    assert "verdict: fail" in out
    assert "witness" in out


# -- trace -----------------------------------------------------------------------


def test_trace_deterministic(one_gate, tmp_path, capsys):
    band = tmp_path / "one.band"
    run_cli(capsys, "compile", str(one_gate), "--out", str(band))
    code1, out1, _ = run_cli(capsys, "trace", str(band), "--steps", "40")
    code2, out2, _ = run_cli(capsys, "trace", str(band), "--steps", "40")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.splitlines()[1].startswith("    0 ")


def test_trace_empty_band_shows_markers(tmp_path, capsys):
    doc = formats.BandDoc("", -1, 6, 0, 8, 2, 0)
    band = tmp_path / "empty.band"
    band.write_text(formats.band_to_text(doc))
    code, out, _ = run_cli(capsys, "trace", str(band), "--steps", "6")
    assert code == 0
    body = [row[6:] for row in out.splitlines()[1:]]
    assert all("D" in row for row in body)
    assert not any(ch in row for row in body for ch in "12SG")


def test_trace_single_segment_fires(one_gate, tmp_path, capsys):
    doc = formats.BandDoc("100", -1, 10, 0, 6, 1, 8)
    band = tmp_path / "seg.band"
    band.write_text(formats.band_to_text(doc))
    code, out, _ = run_cli(capsys, "trace", str(band), "--steps", "8")
    assert code == 0
    fire_rows = [row[6:] for row in out.splitlines()[1:] if "S" in row[6:]]
    assert fire_rows  # the swap digit fires while crossing the data extent


def test_trace_plot_writes_file(one_gate, tmp_path, capsys):
    band = tmp_path / "one.band"
    run_cli(capsys, "compile", str(one_gate), "--out", str(band))
    fig = tmp_path / "trace.png"
    code, out, _ = run_cli(
        capsys, "trace", str(band), "--steps", "30", "--plot", str(fig)
    )
    assert code == 0
    assert fig.exists() and fig.stat().st_size > 1000


# -- resources --------------------------------------------------------------------


def test_resources_table(one_gate, capsys):
    code, out, _ = run_cli(capsys, "resources", str(one_gate))
    assert code == 0
    rows = dict(
        line.split("\t") for line in out.splitlines() if not line.startswith("#")
    )
    assert rows["time-qgc"] == "1"
    assert int(rows["space-qca"]) > 0


def test_resources_families_and_plot(one_gate, tmp_path, capsys):
    fig = tmp_path / "scaling.png"
    code, out, _ = run_cli(
        capsys, "resources", str(one_gate), "--families", "--plot", str(fig)
    )
    assert code == 0
    assert "time-qca-vs-gates\t1\t" in out
    assert "nn-layers-vs-separation\t4\t" in out
    assert fig.exists() and fig.stat().st_size > 1000


def test_missing_file_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "compile", "/nonexistent/x.circuit")
    assert code == 2
    assert "error" in err
