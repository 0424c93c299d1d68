"""On-disk formats for the command-line tools.

One self-describing structured-text convention serves every artifact: a
``format:`` header line, then ``key: value`` lines, with list-valued fields
written as repeated keys.  Comments start with ``#``.  Serialization is
byte-stable (fixed key order, canonical spacing) so artifacts round-trip
exactly and diff cleanly; fixtures double as documentation.

Documents:

* circuit files -- wire count plus an ordered gate list,
* band files -- the compiled program band and its ring geometry,
* realization files -- gate words realizing a named target unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

from .autoqca import ProgramBand
from .errors import ParseError

CIRCUIT_FORMAT = "progqca-circuit/1"
BAND_FORMAT = "progqca-band/1"
REALIZATION_FORMAT = "progqca-realization/1"

GATE_ARITY = {"G": 2, "H": 1, "TOFFOLI": 3}


def _parse_lines(text: str, expected_format: str) -> list[tuple[int, str, str]]:
    """Split a document into (line number, key, value) records."""
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, len(line))
        key, value = line.split(":", 1)
        records.append((lineno, key.strip(), value.strip()))
    if not records:
        raise ParseError("empty document", 1)
    lineno, key, value = records[0]
    if key != "format" or value != expected_format:
        raise ParseError(f"expected 'format: {expected_format}'", lineno)
    return records[1:]


def _int_field(value: str, lineno: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"field {key!r} must be an integer, got {value!r}", lineno)


# ---------------------------------------------------------------------------
# Circuit files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CircuitDoc:
    """Parsed circuit file: wire count and (kind, operands) gate list."""

    wires: int
    gates: tuple[tuple[str, tuple[int, ...]], ...]


def circuit_to_text(doc: CircuitDoc) -> str:
    lines = [f"format: {CIRCUIT_FORMAT}", f"wires: {doc.wires}"]
    for kind, operands in doc.gates:
        lines.append(f"gate: {kind} {' '.join(str(w) for w in operands)}")
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> CircuitDoc:
    wires = None
    gates = []
    for lineno, key, value in _parse_lines(text, CIRCUIT_FORMAT):
        if key == "wires":
            wires = _int_field(value, lineno, "wires")
            if wires < 1:
                raise ParseError("wires must be positive", lineno)
        elif key == "gate":
            parts = value.split()
            if not parts:
                raise ParseError("empty gate line", lineno)
            kind = parts[0]
            if kind not in GATE_ARITY:
                raise ParseError(f"unknown gate type {kind!r}", lineno)
            operands = tuple(_int_field(p, lineno, "operand") for p in parts[1:])
            if len(operands) != GATE_ARITY[kind]:
                raise ParseError(
                    f"gate {kind} takes {GATE_ARITY[kind]} operands, got "
                    f"{len(operands)}",
                    lineno,
                )
            gates.append((kind, operands))
        else:
            raise ParseError(f"unknown field {key!r}", lineno)
    if wires is None:
        raise ParseError("missing 'wires' field", 1)
    for lineno_offset, (kind, operands) in enumerate(gates):
        if len(set(operands)) != len(operands) or any(
            not 0 <= w < wires for w in operands
        ):
            raise ParseError(
                f"gate {kind} {operands} has repeated or out-of-range wires",
                lineno_offset + 3,
            )
    return CircuitDoc(wires, tuple(gates))


# ---------------------------------------------------------------------------
# Band files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BandDoc:
    """Program band plus the ring geometry needed to run and read it."""

    digits: str
    origin: int
    ring_size: int
    slot_origin: int
    data_extent: int
    wires: int
    completion_steps: int

    def band(self) -> ProgramBand:
        return ProgramBand(tuple(int(d) for d in self.digits), origin=self.origin)


def band_to_text(doc: BandDoc) -> str:
    lines = [
        f"format: {BAND_FORMAT}",
        f"ring-size: {doc.ring_size}",
        f"origin: {doc.origin}",
        f"slot-origin: {doc.slot_origin}",
        f"data-extent: {doc.data_extent}",
        f"wires: {doc.wires}",
        f"completion-steps: {doc.completion_steps}",
        f"digits: {doc.digits}",
    ]
    return "\n".join(lines) + "\n"


def band_from_text(text: str) -> BandDoc:
    fields: dict[str, object] = {}
    for lineno, key, value in _parse_lines(text, BAND_FORMAT):
        if key == "digits":
            if any(c not in "012" for c in value):
                raise ParseError("digits must be over the alphabet 012", lineno)
            if len(value) % 3 != 0:
                raise ParseError("digit count must be a multiple of 3", lineno)
            fields["digits"] = value
        elif key in (
            "ring-size",
            "origin",
            "slot-origin",
            "data-extent",
            "wires",
            "completion-steps",
        ):
            fields[key] = _int_field(value, lineno, key)
        else:
            raise ParseError(f"unknown field {key!r}", lineno)
    missing = {
        "ring-size",
        "origin",
        "slot-origin",
        "data-extent",
        "wires",
        "completion-steps",
    } - set(fields)
    if "digits" not in fields:
        fields["digits"] = ""
    if missing:
        raise ParseError(f"missing fields: {sorted(missing)}", 1)
    return BandDoc(
        digits=str(fields["digits"]),
        origin=int(fields["origin"]),
        ring_size=int(fields["ring-size"]),
        slot_origin=int(fields["slot-origin"]),
        data_extent=int(fields["data-extent"]),
        wires=int(fields["wires"]),
        completion_steps=int(fields["completion-steps"]),
    )


# ---------------------------------------------------------------------------
# Realization files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealizationDoc:
    """Gate word over data + ancilla wires realizing a named target."""

    name: str
    target: str
    data_wires: int
    ancilla_inits: tuple[int, ...]
    moves: tuple[tuple[int, int, int], ...]  # (control, target, power)


def realization_to_text(doc: RealizationDoc) -> str:
    lines = [
        f"format: {REALIZATION_FORMAT}",
        f"name: {doc.name}",
        f"target: {doc.target}",
        f"data-wires: {doc.data_wires}",
    ]
    for init in doc.ancilla_inits:
        lines.append(f"ancilla: {init}")
    for control, target, power in doc.moves:
        lines.append(f"move: {control} {target} {power}")
    return "\n".join(lines) + "\n"


def realization_from_text(text: str) -> RealizationDoc:
    name = target = None
    data_wires = None
    ancillas: list[int] = []
    moves: list[tuple[int, int, int]] = []
    for lineno, key, value in _parse_lines(text, REALIZATION_FORMAT):
        if key == "name":
            name = value
        elif key == "target":
            target = value
        elif key == "data-wires":
            data_wires = _int_field(value, lineno, key)
        elif key == "ancilla":
            init = _int_field(value, lineno, key)
            if init not in (0, 1):
                raise ParseError("ancilla init digit must be 0 or 1", lineno)
            ancillas.append(init)
        elif key == "move":
            parts = value.split()
            if len(parts) != 3:
                raise ParseError("move takes 'control target power'", lineno)
            c, t, k = (_int_field(p, lineno, "move") for p in parts)
            if c == t:
                raise ParseError("move control and target coincide", lineno)
            if not 1 <= k <= 7:
                raise ParseError("move power must be in 1..7", lineno)
            moves.append((c, t, k))
        else:
            raise ParseError(f"unknown field {key!r}", lineno)
    if name is None or target is None or data_wires is None:
        raise ParseError("missing name, target or data-wires", 1)
    total = data_wires + len(ancillas)
    for c, t, _ in moves:
        if not (0 <= c < total and 0 <= t < total):
            raise ParseError(f"move wire out of range for {total} wires", 1)
    return RealizationDoc(name, target, data_wires, tuple(ancillas), tuple(moves))


# ---------------------------------------------------------------------------
# Report emission (key/value text)
# ---------------------------------------------------------------------------


def report_lines(pairs: list[tuple[str, object]], header: str) -> str:
    lines = [f"format: {header}"]
    for key, value in pairs:
        if isinstance(value, float):
            lines.append(f"{key}: {value:.12g}")
        elif isinstance(value, bool):
            lines.append(f"{key}: {'true' if value else 'false'}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"
