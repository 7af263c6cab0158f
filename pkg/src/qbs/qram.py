"""QRAM circuit fragments: map an address register to stored data qubits.

The construction is the X-sandwich form: for every address holding a
nonzero entry, X gates turn the matching address pattern into all-ones,
a multi-controlled NOT flips the data qubit(s), and the same X gates
uncompute the pattern. Address qubits are therefore untouched on basis
inputs, and addresses in superposition read all cells at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .circuit import Circuit, controlled_x


def _exponent_of_power_of_two(length: int, what: str) -> int:
    if length < 1 or length & (length - 1):
        raise ValueError(f"{what} length must be a power of two, got {length}")
    return length.bit_length() - 1


@dataclass(frozen=True)
class BitDataArray:
    """Stored bits, one per address; length fixes the address width."""

    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(self.bits))
        _exponent_of_power_of_two(len(self.bits), "bit array")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bit array entries must be 0 or 1")

    @property
    def address_width(self) -> int:
        return _exponent_of_power_of_two(len(self.bits), "bit array")


@dataclass(frozen=True)
class ValueDataArray:
    """Stored non-negative integers in a fixed-width binary encoding."""

    values: tuple[int, ...]
    width: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        _exponent_of_power_of_two(len(self.values), "value array")
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        for v in self.values:
            if not 0 <= v < (1 << self.width):
                raise ValueError(f"value {v} does not fit in {self.width} bits")

    @property
    def address_width(self) -> int:
        return _exponent_of_power_of_two(len(self.values), "value array")


def load_data_array(path: str | Path) -> BitDataArray | ValueDataArray:
    """Read a stored-data file: {"bits": [...]} or {"values": [...], "width": w}."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: expected a JSON object")
    if "bits" in payload:
        return BitDataArray(tuple(payload["bits"]))
    if "values" in payload:
        if "width" not in payload:
            raise ValueError(f"{path}: value arrays need a 'width' field")
        return ValueDataArray(tuple(payload["values"]), int(payload["width"]))
    raise ValueError(f"{path}: expected a 'bits' or 'values' key")


def _address_zeros(address: int, width: int) -> list[int]:
    return [q for q in range(width) if not (address >> q) & 1]


def build_bit_qram(data: BitDataArray) -> Circuit:
    """Lookup fragment over ``address_width`` address qubits plus one data qubit.

    On every basis address |i> with the data qubit cleared, the fragment
    yields |i>|bits[i]>.
    """
    a = data.address_width
    circuit = Circuit(
        a + 1,
        registers={"address": range(0, a), "data": range(a, a + 1)} if a else {"data": range(0, 1)},
    )
    address_qubits = tuple(range(a))
    for address, bit in enumerate(data.bits):
        if not bit:
            continue
        zeros = _address_zeros(address, a)
        for q in zeros:
            circuit.x(q)
        circuit.append(controlled_x(address_qubits, a))
        for q in zeros:
            circuit.x(q)
    return circuit


def build_value_qram(data: ValueDataArray) -> Circuit:
    """Lookup fragment mapping |i>|0..0> to |i>|values[i]>.

    The data register holds the value with its least significant bit on the
    lowest data qubit; all set bits of one value share a single X sandwich.
    """
    a = data.address_width
    w = data.width
    registers = {"data": range(a, a + w)}
    if a:
        registers["address"] = range(0, a)
    circuit = Circuit(a + w, registers=registers)
    address_qubits = tuple(range(a))
    for address, value in enumerate(data.values):
        if value == 0:
            continue
        zeros = _address_zeros(address, a)
        for q in zeros:
            circuit.x(q)
        for k in range(w):
            if (value >> k) & 1:
                circuit.append(controlled_x(address_qubits, a + k))
        for q in zeros:
            circuit.x(q)
    return circuit


def build_qsa(data: BitDataArray) -> Circuit:
    """Resampler circuit: Hadamards over the address register, then the lookup.

    Measuring yields a uniformly random address together with its stored
    bit, and repeated runs repeat addresses freely, which is exactly
    sampling with replacement from the array.
    """
    a = data.address_width
    qsa = Circuit(
        a + 1,
        registers={"address": range(0, a), "data": range(a, a + 1)} if a else {"data": range(0, 1)},
    )
    for q in range(a):
        qsa.h(q)
    qsa.extend(build_bit_qram(data), range(a + 1))
    return qsa


def build_value_qsa(data: ValueDataArray) -> Circuit:
    """Hadamards over the address register followed by the value lookup."""
    a = data.address_width
    registers = {"data": range(a, a + data.width)}
    if a:
        registers["address"] = range(0, a)
    qsa = Circuit(a + data.width, registers=registers)
    for q in range(a):
        qsa.h(q)
    qsa.extend(build_value_qram(data), range(a + data.width))
    return qsa
