"""Exact statevector simulation with shot-based measurement sampling.

Gates act in place on a ``(2,)*n`` view of the amplitude array; axis k of
that view holds qubit ``n-1-k`` (qubit 0 is the least significant bit of
the basis index). Controlled NOTs swap the two target slices inside the
all-controls-on subspace, so no gate matrix is ever expanded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GateKind, GateOp, bitstring_of, qubit_capacity
from .errors import CapacityError, QbsError
from .rng import fresh_seed, make_rng

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Unitary gates cannot drift the norm beyond rounding; larger drift means a bug.
NORM_DRIFT_LIMIT = 1e-9


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the 2^n computational basis states."""

    amplitudes: np.ndarray
    num_qubits: int

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def to_json(self) -> str:
        """Debug dump as a JSON array of [re, im] pairs."""
        pairs = [[float(z.real), float(z.imag)] for z in self.amplitudes]
        return json.dumps(pairs)


@dataclass(frozen=True)
class CountsTable:
    """Measured bitstrings and their occurrence counts over repeated shots."""

    shots: int
    entries: dict[str, int]
    num_qubits: int

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        total = 0
        for bits, count in self.entries.items():
            if len(bits) != self.num_qubits or set(bits) - {"0", "1"}:
                raise ValueError(f"bad bitstring key {bits!r}")
            if count < 0:
                raise ValueError(f"negative count for {bits!r}")
            total += count
        if total != self.shots:
            raise ValueError(f"counts sum to {total}, expected {self.shots}")

    def count(self, bits: str) -> int:
        return self.entries.get(bits, 0)


def apply_gate(state: np.ndarray, gate: GateOp, num_qubits: int) -> None:
    """Apply one gate in place to a length-2^n amplitude array."""
    tensor = state.reshape((2,) * num_qubits)

    def axis(qubit: int) -> int:
        return num_qubits - 1 - qubit

    if gate.kind is GateKind.H:
        view = np.moveaxis(tensor, axis(gate.target), 0)
        lo = view[0].copy()
        hi = view[1].copy()
        view[0] = (lo + hi) * _INV_SQRT2
        view[1] = (lo - hi) * _INV_SQRT2
        return

    # X / CX / CCX / MCX: swap target slices where every control is 1
    index_on: list = [slice(None)] * num_qubits
    for control in gate.controls:
        index_on[axis(control)] = 1
    index_off = list(index_on)
    index_on[axis(gate.target)] = 1
    index_off[axis(gate.target)] = 0
    on, off = tuple(index_on), tuple(index_off)
    swapped = tensor[off].copy()
    tensor[off] = tensor[on]
    tensor[on] = swapped


def simulate(circuit: Circuit) -> StateVector:
    """Run ``circuit`` from |0...0> and return the exact final statevector."""
    n = circuit.num_qubits
    capacity = qubit_capacity()
    if n > capacity:
        raise CapacityError(
            f"simulating {n} qubits exceeds the capacity of {capacity}"
        )
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    for gate in circuit.gates:
        apply_gate(state, gate, n)
    drift = abs(float(np.linalg.norm(state)) - 1.0)
    if drift > NORM_DRIFT_LIMIT:
        raise QbsError(f"statevector norm drifted by {drift:.3e}")
    state.setflags(write=False)
    return StateVector(state, n)


def _outcome_probabilities(state: StateVector) -> np.ndarray:
    probs = state.probabilities()
    # The statevector itself is never renormalized; dividing the sampling
    # weights by their sum (1 within NORM_DRIFT_LIMIT) only satisfies the
    # RNG's exact-simplex requirement.
    return probs / probs.sum()


def draw_basis_index(state: StateVector, rng: np.random.Generator) -> int:
    """One measurement outcome: a basis index drawn from |amplitude|^2."""
    return int(rng.choice(state.amplitudes.size, p=_outcome_probabilities(state)))


def sample(circuit: Circuit, shots: int, seed: int | None = None) -> CountsTable:
    """Measure ``circuit`` for ``shots`` independent shots.

    Deterministic for a fixed seed; with ``seed=None`` a fresh entropy seed
    is drawn.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if seed is None:
        seed = fresh_seed()
    state = simulate(circuit)
    rng = make_rng(seed)
    per_state = rng.multinomial(shots, _outcome_probabilities(state))
    entries = {
        bitstring_of(i, circuit.num_qubits): int(c)
        for i, c in enumerate(per_state)
        if c
    }
    return CountsTable(shots=shots, entries=entries, num_qubits=circuit.num_qubits)


def measure_once(circuit: Circuit, seed: int | None = None) -> str:
    """Single-shot measurement, returned as an MSB-first bitstring."""
    if seed is None:
        seed = fresh_seed()
    state = simulate(circuit)
    return bitstring_of(draw_basis_index(state, make_rng(seed)), circuit.num_qubits)
