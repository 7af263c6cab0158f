"""Binary counter and ripple-carry adder circuit fragments.

The counter accumulates the number of control qubits in |1> into a
little-endian counter register: each control drives a cascade of
multi-controlled NOTs that implements a conditional increment. Carry
propagation needs the counter bits to be consumed most significant first,
so the inner loop must run downward.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, controlled_x, register_bits
from .sim import measure_once


def min_counter_width(num_controls: int) -> int:
    """Smallest counter width that can hold any count 0..num_controls."""
    if num_controls < 1:
        raise ValueError(f"need at least one control qubit, got {num_controls}")
    return num_controls.bit_length()


@dataclass(frozen=True)
class CounterSpec:
    """Register sizes for a popcount circuit: p controls, q counter qubits."""

    p: int
    q: int

    def __post_init__(self):
        needed = min_counter_width(self.p)
        if self.q < needed:
            raise ValueError(
                f"q={self.q} cannot represent counts up to {self.p}; need q >= {needed}"
            )

    @classmethod
    def for_controls(cls, num_controls: int) -> "CounterSpec":
        return cls(num_controls, min_counter_width(num_controls))

    @property
    def num_qubits(self) -> int:
        return self.p + self.q


def _counter_registers(spec: CounterSpec) -> dict[str, range]:
    return {
        "controls": range(0, spec.p),
        "counter": range(spec.p, spec.p + spec.q),
    }


def build_counter(spec: CounterSpec) -> Circuit:
    """Popcount fragment: counter register (entering as |0..0>) gains the
    number of set control qubits, least significant bit first.
    """
    circuit = Circuit(spec.num_qubits, registers=_counter_registers(spec))
    for i in range(spec.p - 1, -1, -1):
        for j in range(spec.q - 1, -1, -1):
            controls = (i,) + tuple(spec.p + k for k in range(j))
            circuit.append(controlled_x(controls, spec.p + j))
    return circuit


def build_inverse_counter(spec: CounterSpec) -> Circuit:
    """Counter gates in reverse order; every gate is self-inverse, so this
    undoes the counter (a conditional decrement per control qubit).
    """
    circuit = Circuit(spec.num_qubits, registers=_counter_registers(spec))
    for gate in reversed(build_counter(spec).gates):
        circuit.append(gate)
    return circuit


def decode_counter(bits: str, width: int) -> int:
    """Value of a measured counter register given MSB-first.

    The rightmost character is the lowest counter qubit, so plain base-2
    evaluation applies.
    """
    if len(bits) != width:
        raise ValueError(f"expected {width} counter bits, got {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"counter bits must be 0/1, got {bits!r}")
    return int(bits, 2)


def measure_counter(
    spec: CounterSpec, control_pattern: int, seed: int | None = None
) -> tuple[str, int]:
    """Run the counter on a classical control pattern and measure.

    Bit k of ``control_pattern`` loads control qubit k. Returns the full
    measured bitstring (MSB-first, counter register leftmost) and the
    decoded count.
    """
    if not 0 <= control_pattern < (1 << spec.p):
        raise ValueError(f"control pattern needs {spec.p} bits")
    circuit = Circuit(spec.num_qubits, registers=_counter_registers(spec))
    for q in range(spec.p):
        if (control_pattern >> q) & 1:
            circuit.x(q)
    circuit.extend(build_counter(spec), range(spec.num_qubits))
    full = measure_once(circuit, seed)
    counter_bits = register_bits(full, range(spec.p, spec.num_qubits))
    return full, decode_counter(counter_bits, spec.q)


def build_ripple_adder(width: int) -> Circuit:
    """In-place ripple-carry adder over registers A and B of ``width`` bits.

    Layout: A at qubits [0, width), B at [width, 2*width), a carry-in
    ancilla, then the carry-out qubit. On basis inputs with cleared
    ancillas B ends holding (a + b) mod 2^width, the carry-out qubit holds
    the overflow bit, and A is restored by the uncompute half.
    """
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    carry_in = 2 * width
    carry_out = 2 * width + 1
    circuit = Circuit(
        2 * width + 2,
        registers={
            "a": range(0, width),
            "b": range(width, 2 * width),
            "carry_in": range(carry_in, carry_in + 1),
            "carry_out": range(carry_out, carry_out + 1),
        },
    )

    def carry_for(k: int) -> int:
        return carry_in if k == 0 else k - 1

    # majority half: after step k, A_k holds the carry into position k+1
    for k in range(width):
        c, b, a = carry_for(k), width + k, k
        circuit.cx(a, b)
        circuit.cx(a, c)
        circuit.ccx(c, b, a)
    circuit.cx(width - 1, carry_out)
    # unmajority-and-add half restores A and the carry chain
    for k in reversed(range(width)):
        c, b, a = carry_for(k), width + k, k
        circuit.ccx(c, b, a)
        circuit.cx(a, c)
        circuit.cx(c, b)
    return circuit
