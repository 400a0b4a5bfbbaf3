"""Registry of constructible operations: builders, oracles, verification.

Everything the CLI and the claims harness touch goes through this module so
that op-class and algorithm names stay consistent (and `list` output stays
stable across runs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import adders, modexp, muldiv
from .circuit import Circuit, CircuitError, encode_register, register_value
from .resources import LogicalCounts, SynthesisParams, lower
from .sim import (
    extract_basis,
    simulate_permutation_batch,
    simulate_statevector,
)

DEFAULT_SEED = 12345
RANDOM_CASE_LIMIT = 4096  # above this many exhaustive cases, sample 1000
RANDOM_SAMPLES = 1000

OP_CLASSES = (
    "inplace_adder",
    "outofplace_adder",
    "const_adder",
    "subtractor",
    "multiplier",
    "divider",
    "modexp",
    "modmul_const",
    "table_lookup",
)

_LISTED_ALGORITHMS: dict[str, tuple[str, ...]] = {
    "inplace_adder": adders.IN_PLACE_ADDERS,
    "outofplace_adder": adders.OUT_OF_PLACE_ADDERS,
    "const_adder": adders.CONST_ADDERS,
    "subtractor": adders.IN_PLACE_ADDERS,
    "multiplier": ("Schoolbook", "Karatsuba", "Karatsuba-8"),
    "divider": tuple(
        f"{k}+{a}" for k in muldiv.DIVIDER_KINDS for a in muldiv.DIVIDER_ADDERS
    ),
    "modexp": ("LYY", "LYYWindowed(1)", "LYYWindowed(11)", "LYYWindowedOpt"),
    "modmul_const": ("LYY",),
    "table_lookup": ("UnaryIteration",),
}

_PARAM_SLOTS: dict[str, str] = {
    "inplace_adder": "n",
    "outofplace_adder": "n",
    "const_adder": "n (constant: sum of 4^i, i <= ceil(n/2))",
    "subtractor": "n",
    "multiplier": "n (also Karatsuba(piece_size))",
    "divider": "n",
    "modexp": "n (N = 2^n - 1; also LYYWindowed(w))",
    "modmul_const": "n (N = 2^n - 1)",
    "table_lookup": "n (n address bits, n data bits, seeded random table)",
}


def catalog() -> list[tuple[str, str, str]]:
    """(op_class, algorithm, parameter slots) rows in stable order."""
    rows = []
    for op in OP_CLASSES:
        for algo in _LISTED_ALGORITHMS[op]:
            rows.append((op, algo, _PARAM_SLOTS[op]))
    return rows


def modexp_constants(n: int) -> tuple[int, int]:
    """Benchmark (a, N): N = 2^n - 1 and a from 5^24 + 24^5, made coprime."""
    N = (1 << n) - 1
    a = (5**24 + 24**5) % N
    while a < 2 or math.gcd(a, N) != 1:
        a += 1
    return a, N


def _lookup_table(n: int, seed: int) -> modexp.LookupTable:
    rng = np.random.default_rng(seed)
    entries = tuple(int(v) for v in rng.integers(0, 1 << n, size=1 << n))
    return modexp.LookupTable(n, entries)


def build(op_class: str, algorithm: str, n: int, counting: bool = False,
          seed: int = DEFAULT_SEED):
    """Construct the named operation at size n (Circuit or CountSummary)."""
    if op_class == "inplace_adder":
        return adders.build_inplace_adder(algorithm, n, counting)
    if op_class == "outofplace_adder":
        return adders.build_outofplace_adder(algorithm, n, counting)
    if op_class == "const_adder":
        return adders.build_const_adder(algorithm, n, adders.spec_constant(n), counting)
    if op_class == "subtractor":
        return adders.build_subtractor(algorithm, n, counting)
    if op_class == "multiplier":
        return muldiv.build_multiplier(algorithm, n, counting)
    if op_class == "divider":
        return muldiv.build_divider(algorithm, n, counting)
    if op_class == "modexp":
        a, N = modexp_constants(n)
        return modexp.build_modexp(algorithm, a, N, n, counting)
    if op_class == "modmul_const":
        if algorithm != "LYY":
            raise CircuitError(f"unknown modmul algorithm {algorithm!r}")
        a, N = modexp_constants(n)
        return modexp.build_modmul_const(a, N, n, counting)
    if op_class == "table_lookup":
        if algorithm != "UnaryIteration":
            raise CircuitError(f"unknown lookup algorithm {algorithm!r}")
        return modexp.build_table_lookup(_lookup_table(n, seed), n, counting)
    raise CircuitError(f"unknown op class {op_class!r}")


def measure(op_class: str, algorithm: str, n: int,
            synthesis: SynthesisParams | None = None,
            recorded: bool = False) -> LogicalCounts:
    """Lowered Clifford+T counts for one operation instance."""
    return lower(build(op_class, algorithm, n, counting=not recorded), synthesis)


# -- verification ------------------------------------------------------------------

@dataclass
class VerifyReport:
    op_class: str
    algorithm: str
    n: int
    cases: int
    ok: bool
    failure: str | None = None
    exhaustive: bool = True


def _uses_statevector(op_class: str, algorithm: str) -> bool:
    return algorithm == "QFT" and op_class in (
        "inplace_adder", "const_adder", "subtractor"
    )


def _input_space(op_class: str, n: int, seed: int):
    """(register value ranges, oracle) for one op instance."""
    size = 1 << n
    if op_class in ("inplace_adder",):
        return {"a": range(size), "b": range(size)}, (
            lambda a, b: {"b": (a + b) % size}
        )
    if op_class == "subtractor":
        return {"a": range(size), "b": range(size)}, (
            lambda a, b: {"b": (b - a) % size}
        )
    if op_class == "outofplace_adder":
        return {"a": range(size), "b": range(size), "sum": [0]}, (
            lambda a, b, sum: {"sum": (a + b) % size}
        )
    if op_class == "const_adder":
        k = adders.spec_constant(n)
        return {"b": range(size)}, (lambda b: {"b": (b + k) % size})
    if op_class == "multiplier":
        return {"a": range(size), "b": range(size), "prod": [0]}, (
            lambda a, b, prod: {"prod": a * b}
        )
    if op_class == "divider":
        return {"a": range(size), "b": range(1, size), "q": [0]}, (
            lambda a, b, q: {"a": a % b, "q": a // b}
        )
    if op_class == "modexp":
        a, N = modexp_constants(n)
        return {"x": range(size), "out": [0]}, (
            lambda x, out: {"out": pow(a, x, N)}
        )
    if op_class == "modmul_const":
        a, N = modexp_constants(n)
        return {"x": range(N)}, (lambda x: {"x": a * x % N})
    if op_class == "table_lookup":
        table = _lookup_table(n, seed)
        return {"addr": range(size), "y": range(size)}, (
            lambda addr, y: {"y": y ^ table.entries[addr]}
        )
    raise CircuitError(f"unknown op class {op_class!r}")


def _case_list(inputs: dict, seed: int):
    names = list(inputs)
    spaces = [list(inputs[name]) for name in names]
    total = 1
    for s in spaces:
        total *= len(s)
    if total <= RANDOM_CASE_LIMIT:
        combos: list[tuple[int, ...]] = [()]
        for s in spaces:
            combos = [c + (v,) for c in combos for v in s]
        return names, combos, True
    rng = np.random.default_rng(seed)
    combos = [
        tuple(int(s[rng.integers(len(s))]) for s in spaces)
        for _ in range(RANDOM_SAMPLES)
    ]
    return names, combos, False


def verify(op_class: str, algorithm: str, n: int,
           seed: int = DEFAULT_SEED) -> VerifyReport:
    """Check one operation instance against its classical oracle.

    Exhaustive over all basis inputs when the case count permits, otherwise
    a seeded random sample.  Ancillas are required to end clean on every
    case; the first counterexample is reported.
    """
    circuit = build(op_class, algorithm, n, seed=seed)
    inputs, oracle = _input_space(op_class, n, seed)
    names, combos, exhaustive = _case_list(inputs, seed)
    regs = {r.name: r for r in circuit.data_registers}
    anc_mask = 0
    for q in circuit.ancilla_qubits:
        anc_mask |= 1 << q
    statevector = _uses_statevector(op_class, algorithm)

    states = [
        sum(encode_register(v, regs[name]) for name, v in zip(names, combo))
        for combo in combos
    ]
    if statevector:
        outs = [extract_basis(simulate_statevector(circuit, s)) for s in states]
    else:
        dtype = np.uint64 if circuit.num_qubits <= 63 else object
        outs = simulate_permutation_batch(circuit, np.array(states, dtype=dtype))

    for combo, raw in zip(combos, outs):
        vals = dict(zip(names, combo))
        state = int(raw)
        if state & anc_mask:
            return VerifyReport(
                op_class, algorithm, n, len(combos), False,
                f"dirty ancillas for input {vals}", exhaustive,
            )
        expected = oracle(**vals)
        for rname, reg in regs.items():
            want = expected.get(rname, vals.get(rname, 0))
            got = register_value(state, reg)
            if got != want:
                return VerifyReport(
                    op_class, algorithm, n, len(combos), False,
                    f"register {rname} = {got}, want {want} for input {vals}",
                    exhaustive,
                )
    return VerifyReport(op_class, algorithm, n, len(combos), True, None, exhaustive)


def verify_range(op_class: str, algorithm: str, n_max: int,
                 seed: int = DEFAULT_SEED) -> list[VerifyReport]:
    """Verify every size from the class minimum up to n_max."""
    n_min = 2 if op_class in ("modexp", "modmul_const") else 1
    if _uses_statevector(op_class, algorithm):
        n_min = max(n_min, 1)
        n_max = min(n_max, 5)
    return [
        verify(op_class, algorithm, n, seed) for n in range(n_min, n_max + 1)
    ]
