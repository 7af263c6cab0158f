"""Bootstrap replication engines.

A replication resamples the tuple results with replacement and totals
them. Three interchangeable engines produce the same distribution:

* ``quantum_sequential``: run the resampler circuit once per draw, then
  total the measured bits with the counter circuit (values go through the
  ripple-carry adder instead).
* ``quantum_parallel``: one wide circuit holding every resampler block
  plus the counter; a single measurement of the counter register is one
  replication. Qubit count grows fast, so this engine is for small n.
* ``classical_oracle``: plain seeded resampling, the reference the
  quantum engines are validated against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, bitstring_of, qubit_capacity, register_bits
from .counter import CounterSpec, build_counter, build_ripple_adder, decode_counter
from .errors import CapacityError, QbsError
from .qram import BitDataArray, ValueDataArray, build_qsa, build_value_qsa
from .rng import derive_seed, fresh_seed, make_rng
from .sim import StateVector, draw_basis_index, simulate

MODE_SEQUENTIAL = "quantum_sequential"
MODE_PARALLEL = "quantum_parallel"
MODE_ORACLE = "classical_oracle"
MODES = (MODE_SEQUENTIAL, MODE_PARALLEL, MODE_ORACLE)

AGGREGATES = ("COUNT", "SUM", "AVG")


@dataclass(frozen=True)
class SampleResults:
    """Per-tuple query results for a drawn sample.

    ``values`` holds one result per sampled row: 0/1 predicate outcomes for
    COUNT, non-negative integers for SUM and AVG. ``match_count`` is the
    number of rows satisfying the predicate (needed by the AVG estimator,
    where a matching row may still contribute a zero value).
    """

    values: tuple[int, ...]
    population_size: int
    aggregate: str = "COUNT"
    match_count: int | None = None

    def __post_init__(self):
        coerced = []
        for v in self.values:
            as_int = int(v)
            if as_int != v:
                raise ValueError(f"tuple results must be integers, got {v!r}")
            coerced.append(as_int)
        object.__setattr__(self, "values", tuple(coerced))
        if self.aggregate not in AGGREGATES:
            raise ValueError(f"aggregate must be one of {AGGREGATES}")
        if not self.values:
            raise ValueError("sample must contain at least one tuple result")
        if self.population_size < len(self.values):
            raise ValueError(
                f"population size {self.population_size} smaller than sample "
                f"size {len(self.values)}"
            )
        if self.aggregate == "COUNT":
            if any(v not in (0, 1) for v in self.values):
                raise ValueError("COUNT tuple results must be 0 or 1")
        elif any(v < 0 for v in self.values):
            raise ValueError("SUM/AVG tuple results must be non-negative")
        if self.match_count is not None and not 0 <= self.match_count <= len(self.values):
            raise ValueError(f"match_count {self.match_count} outside 0..{len(self.values)}")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def f(self) -> float:
        """Sampling fraction n/N."""
        return self.n / self.population_size


@dataclass(frozen=True)
class Replication:
    """One resample total (raw_count) and its scaled estimate."""

    raw_count: int
    estimate: float


@dataclass(frozen=True)
class ReplicationSet:
    replications: tuple[Replication, ...]
    mode: str
    seed: int
    sampling_fraction: float

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not self.replications:
            raise ValueError("a replication set cannot be empty")

    @property
    def B(self) -> int:
        return len(self.replications)

    def raw_counts(self) -> np.ndarray:
        return np.array([r.raw_count for r in self.replications], dtype=np.int64)

    def estimates(self) -> np.ndarray:
        return np.array([r.estimate for r in self.replications], dtype=np.float64)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "B": self.B,
            "f": self.sampling_fraction,
            "replications": [
                {"raw": r.raw_count, "estimate": r.estimate} for r in self.replications
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ReplicationSet":
        reps = tuple(
            Replication(int(r["raw"]), float(r["estimate"]))
            for r in payload["replications"]
        )
        got = len(reps)
        if payload.get("B", got) != got:
            raise ValueError(f"B={payload['B']} but {got} replications present")
        return cls(reps, payload["mode"], int(payload["seed"]), float(payload["f"]))


def _estimate_from_raw(sample: SampleResults, raw: int) -> float:
    if sample.aggregate == "AVG":
        return raw / sample.n
    return raw / sample.f


def _require_power_of_two(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(
            f"quantum engines need a power-of-two sample size, got {n}"
        )
    return n.bit_length() - 1


def _draw(probs: np.ndarray, rng: np.random.Generator) -> int:
    return int(rng.choice(probs.size, p=probs))


def _normalized_probs(state: StateVector) -> np.ndarray:
    probs = state.probabilities()
    return probs / probs.sum()


class _SequentialEngine:
    """Precomputed circuits for repeated sequential replications.

    The resampler statevector is fixed across runs, so it is simulated once
    and each run only draws fresh measurements from it.
    """

    def __init__(self, sample: SampleResults):
        self.sample = sample
        self.n = sample.n
        _require_power_of_two(self.n)
        if sample.aggregate == "COUNT":
            qsa = build_qsa(BitDataArray(sample.values))
            self.spec = CounterSpec.for_controls(self.n)
            self.totaler = build_counter(self.spec)
            self.acc_width = None
        else:
            width = max(1, max(sample.values).bit_length())
            array = ValueDataArray(sample.values, width)
            qsa = build_value_qsa(array)
            # width + log2(n) bits always hold the full resample total
            self.acc_width = width + _require_power_of_two(self.n)
            self.totaler = build_ripple_adder(self.acc_width)
            self.spec = None
        self.data_register = qsa.register("data")
        self.qsa_probs = _normalized_probs(simulate(qsa))

    def _draw_results(self, seed: int) -> list[int]:
        drawn = []
        for k in range(self.n):
            rng = make_rng(derive_seed(seed, k))
            index = _draw(self.qsa_probs, rng)
            drawn.append(
                (index >> self.data_register.start)
                & ((1 << len(self.data_register)) - 1)
            )
        return drawn

    def _total_bits(self, bits: list[int], seed: int) -> int:
        spec = self.spec
        prep = Circuit(spec.num_qubits)
        for qubit, bit in enumerate(bits):
            if bit:
                prep.x(qubit)
        prep.extend(self.totaler, range(spec.num_qubits))
        state = simulate(prep)
        index = draw_basis_index(state, make_rng(seed))
        full = bitstring_of(index, spec.num_qubits)
        counter_bits = register_bits(full, range(spec.p, spec.p + spec.q))
        return decode_counter(counter_bits, spec.q)

    def _add_on_basis(self, addend: int, acc: int, seed: int) -> int:
        w = self.acc_width
        prep = Circuit(2 * w + 2)
        for k in range(w):
            if (addend >> k) & 1:
                prep.x(k)
            if (acc >> k) & 1:
                prep.x(w + k)
        prep.extend(self.totaler, range(2 * w + 2))
        state = simulate(prep)
        index = draw_basis_index(state, make_rng(seed))
        if (index >> (2 * w + 1)) & 1:
            raise QbsError("accumulator overflow; widths were sized wrong")
        return (index >> w) & ((1 << w) - 1)

    def run(self, seed: int) -> Replication:
        drawn = self._draw_results(seed)
        if self.sample.aggregate == "COUNT":
            raw = self._total_bits(drawn, derive_seed(seed, self.n))
        else:
            raw = 0
            for step, value in enumerate(drawn):
                raw = self._add_on_basis(value, raw, derive_seed(seed, self.n + step))
        return Replication(raw, _estimate_from_raw(self.sample, raw))


def run_replication_sequential(sample: SampleResults, seed: int | None = None) -> Replication:
    """One bootstrap replication via repeated resampler runs plus the totaling circuit."""
    if seed is None:
        seed = fresh_seed()
    return _SequentialEngine(sample).run(seed)


def build_parallel_replication_circuit(sample: SampleResults) -> Circuit:
    """One circuit holding n resampler blocks feeding the counter.

    Only COUNT fits this layout. Needs n*(log2(n)+1) + counter qubits, so
    it exceeds the simulator capacity already for n=8 over 8 addresses;
    the error says to fall back to the sequential engine.
    """
    if sample.aggregate != "COUNT":
        raise ValueError("the parallel engine supports COUNT samples only")
    n = sample.n
    a = _require_power_of_two(n)
    spec = CounterSpec.for_controls(n)
    block = a + 1
    total = n * block + spec.q
    capacity = qubit_capacity()
    if total > capacity:
        raise CapacityError(
            f"parallel replication of n={n} needs {total} qubits, over the "
            f"capacity of {capacity}; use {MODE_SEQUENTIAL} instead"
        )
    registers: dict[str, range] = {}
    for k in range(n):
        if a:
            registers[f"address{k}"] = range(k * block, k * block + a)
        registers[f"data{k}"] = range(k * block + a, (k + 1) * block)
    registers["counter"] = range(n * block, total)
    circuit = Circuit(total, registers=registers)
    qsa = build_qsa(BitDataArray(sample.values))
    for k in range(n):
        circuit.extend(qsa, range(k * block, (k + 1) * block))
    data_qubits = [k * block + a for k in range(n)]
    counter_qubits = list(range(n * block, total))
    circuit.extend(build_counter(spec), data_qubits + counter_qubits)
    return circuit


def replicate(
    sample: SampleResults,
    B: int,
    mode: str = MODE_SEQUENTIAL,
    seed: int | None = None,
) -> ReplicationSet:
    """B independent replications with seeds derived from the master seed."""
    if B < 2:
        raise ValueError(f"need B >= 2 replications, got {B}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if seed is None:
        seed = fresh_seed()
    if mode == MODE_ORACLE:
        return classical_bootstrap_oracle(sample, B, seed)
    if mode == MODE_SEQUENTIAL:
        engine = _SequentialEngine(sample)
        reps = tuple(engine.run(derive_seed(seed, j)) for j in range(B))
        return ReplicationSet(reps, mode, seed, sample.f)
    # parallel: the circuit and its pure state are fixed, so simulate once
    # and draw one counter measurement per replication
    circuit = build_parallel_replication_circuit(sample)
    probs = _normalized_probs(simulate(circuit))
    counter_range = circuit.register("counter")
    reps = []
    for j in range(B):
        rng = make_rng(derive_seed(seed, j))
        index = _draw(probs, rng)
        full = bitstring_of(index, circuit.num_qubits)
        raw = decode_counter(register_bits(full, counter_range), len(counter_range))
        reps.append(Replication(raw, _estimate_from_raw(sample, raw)))
    return ReplicationSet(tuple(reps), mode, seed, sample.f)


def classical_bootstrap_oracle(
    sample: SampleResults, B: int, seed: int | None = None
) -> ReplicationSet:
    """Reference engine: seeded resampling with replacement, summed classically."""
    if B < 2:
        raise ValueError(f"need B >= 2 replications, got {B}")
    if seed is None:
        seed = fresh_seed()
    rng = make_rng(seed)
    values = np.asarray(sample.values, dtype=np.int64)
    picks = rng.integers(0, sample.n, size=(B, sample.n))
    raws = values[picks].sum(axis=1)
    reps = tuple(
        Replication(int(raw), _estimate_from_raw(sample, int(raw))) for raw in raws
    )
    return ReplicationSet(reps, MODE_ORACLE, seed, sample.f)
