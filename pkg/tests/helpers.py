"""Independent oracles the tests check the package against.

Everything here recomputes expected behavior through a different route
than the implementation: dense matrices and index permutations instead of
axis slicing, ``math.comb`` instead of sampling, direct array lookups,
and a trivial row interpreter for predicates.
"""

from __future__ import annotations

import math
import operator
from functools import reduce

import numpy as np

from qbs.circuit import Circuit, GateKind

_ID2 = np.eye(2, dtype=complex)
_H2 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def oracle_statevector(circuit: Circuit) -> np.ndarray:
    """Statevector from |0..0> via dense kron products and index permutations."""
    n = circuit.num_qubits
    dim = 1 << n
    state = np.zeros(dim, dtype=complex)
    state[0] = 1.0
    indices = np.arange(dim)
    for gate in circuit.gates:
        if gate.kind is GateKind.H:
            mats = [_ID2] * n
            mats[gate.target] = _H2
            # qubit 0 is the least significant bit, so it sits rightmost in the chain
            full = reduce(np.kron, reversed(mats))
            state = full @ state
        else:
            mask = 0
            for c in gate.controls:
                mask |= 1 << c
            flipped = np.where(
                (indices & mask) == mask, indices ^ (1 << gate.target), indices
            )
            permuted = np.empty_like(state)
            permuted[flipped] = state
            state = permuted
    return state


def binom_pmf(k: int, n: int, p: float) -> float:
    return math.comb(n, k) * p**k * (1 - p) ** (n - k)


def binom_pmf_vector(n: int, p: float) -> np.ndarray:
    return np.array([binom_pmf(k, n, p) for k in range(n + 1)])


def popcount(x: int) -> int:
    return bin(x).count("1")


_OPS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


def interpret_row(columns, row, conditions) -> bool:
    """Reference predicate interpreter: plain operator lookups per condition."""
    lookup = dict(zip(columns, row))
    return all(_OPS[c.op](lookup[c.column], c.value) for c in conditions)


def stdev_by_hand(values) -> float:
    """Direct evaluation of the B-1 standard deviation formula."""
    values = list(values)
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))


def basis_prep(num_qubits: int, pattern: int) -> Circuit:
    """Circuit loading a basis pattern via X gates, bit k onto qubit k."""
    prep = Circuit(num_qubits)
    for q in range(num_qubits):
        if (pattern >> q) & 1:
            prep.x(q)
    return prep
