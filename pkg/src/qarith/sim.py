"""Verification simulators.

Two substrates: a bit-parallel permutation simulator for Toffoli-class
circuits (arbitrary width, with a vectorised batch path up to 63 qubits) and
a dense statevector simulator for rotation-bearing circuits (QFT adders).
Global phase is ignored everywhere; arithmetic semantics live in the
computational basis.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .circuit import (
    CCX,
    CNOT,
    CPHASE,
    H,
    MCX,
    PERMUTATION_KINDS,
    RZ,
    S,
    SDG,
    SWAP,
    T,
    TDG,
    X,
    Circuit,
)

PERMUTATION_TABLE_LIMIT = 16
STATEVECTOR_LIMIT = 22
_BASIS_TOL = 1e-9


class SimulationError(ValueError):
    pass


def simulate_permutation(c: Circuit, basis_in: int) -> int:
    """Apply a permutation-only circuit to one basis state (any width)."""
    if not 0 <= basis_in < (1 << c.num_qubits):
        raise SimulationError("input state out of range")
    s = basis_in
    for i, g in enumerate(c.gates):
        k = g.kind
        if k == X:
            s ^= 1 << g.qubits[0]
        elif k == CNOT:
            cq, t = g.qubits
            if (s >> cq) & 1:
                s ^= 1 << t
        elif k == CCX:
            c1, c2, t = g.qubits
            if (s >> c1) & (s >> c2) & 1:
                s ^= 1 << t
        elif k == MCX:
            *controls, t = g.qubits
            if all((s >> q) & 1 for q in controls):
                s ^= 1 << t
        elif k == SWAP:
            a, b = g.qubits
            d = ((s >> a) ^ (s >> b)) & 1
            s ^= (d << a) | (d << b)
        else:
            raise SimulationError(
                f"non-permutation gate {k} at gate {i}"
            )
    return s


def simulate_permutation_batch(c: Circuit, states: np.ndarray) -> np.ndarray:
    """Vectorised permutation simulation of many basis states at once.

    Falls back to the single-state path above when the circuit is wider than
    a uint64 can hold.
    """
    if c.num_qubits > 63:
        return np.array(
            [simulate_permutation(c, int(s)) for s in states], dtype=object
        )
    s = np.asarray(states, dtype=np.uint64).copy()
    one = np.uint64(1)
    for i, g in enumerate(c.gates):
        k = g.kind
        if k == X:
            s ^= one << np.uint64(g.qubits[0])
        elif k == CNOT:
            cq, t = g.qubits
            bit = (s >> np.uint64(cq)) & one
            s ^= bit << np.uint64(t)
        elif k == CCX:
            c1, c2, t = g.qubits
            bit = (s >> np.uint64(c1)) & (s >> np.uint64(c2)) & one
            s ^= bit << np.uint64(t)
        elif k == MCX:
            *controls, t = g.qubits
            bit = (s >> np.uint64(controls[0])) & one
            for q in controls[1:]:
                bit &= s >> np.uint64(q)
            bit &= one
            s ^= bit << np.uint64(t)
        elif k == SWAP:
            a, b = g.qubits
            d = ((s >> np.uint64(a)) ^ (s >> np.uint64(b))) & one
            s ^= (d << np.uint64(a)) | (d << np.uint64(b))
        else:
            raise SimulationError(f"non-permutation gate {k} at gate {i}")
    return s


def permutation_table(c: Circuit, limit: int = PERMUTATION_TABLE_LIMIT) -> np.ndarray:
    """Full truth table of a permutation circuit as an int array."""
    if c.num_qubits > limit:
        raise SimulationError(
            f"{c.num_qubits} qubits exceeds table limit {limit}"
        )
    table = simulate_permutation_batch(c, np.arange(1 << c.num_qubits))
    return np.asarray(table, dtype=np.int64)


def is_bijection(table: np.ndarray) -> bool:
    return len(np.unique(table)) == len(table)


def _apply_single_qubit(state: np.ndarray, q: int, u00, u01, u10, u11) -> np.ndarray:
    view = state.reshape(-1, 2, 1 << q)
    lo = view[:, 0, :].copy()
    hi = view[:, 1, :]
    view[:, 0, :] = u00 * lo + u01 * hi
    view[:, 1, :] = u10 * lo + u11 * hi
    return state


def simulate_statevector(
    c: Circuit, basis_in: int, limit: int = STATEVECTOR_LIMIT
) -> np.ndarray:
    """Exact dense evolution of one basis input through the full alphabet."""
    n = c.num_qubits
    if n > limit:
        raise SimulationError(f"{n} qubits exceeds statevector limit {limit}")
    if not 0 <= basis_in < (1 << n):
        raise SimulationError("input state out of range")
    dim = 1 << n
    state = np.zeros(dim, dtype=np.complex128)
    state[basis_in] = 1.0
    idx = np.arange(dim)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for g in c.gates:
        k = g.kind
        if k in PERMUTATION_KINDS:
            perm = _permutation_indices(g, idx)
            state = state[perm]
        elif k == H:
            state = _apply_single_qubit(
                state, g.qubits[0], inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2
            )
        elif k in (S, SDG, T, TDG):
            angle = {S: math.pi / 2, SDG: -math.pi / 2,
                     T: math.pi / 4, TDG: -math.pi / 4}[k]
            mask = (idx >> g.qubits[0]) & 1 == 1
            state[mask] *= cmath.exp(1j * angle)
        elif k == RZ:
            mask = (idx >> g.qubits[0]) & 1 == 1
            state[~mask] *= cmath.exp(-0.5j * g.angle)
            state[mask] *= cmath.exp(0.5j * g.angle)
        elif k == CPHASE:
            cq, t = g.qubits
            mask = (((idx >> cq) & (idx >> t)) & 1) == 1
            state[mask] *= cmath.exp(1j * g.angle)
        else:  # pragma: no cover - alphabet is closed
            raise SimulationError(f"unsupported gate kind {k}")
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > 1e-9:
        raise SimulationError(f"norm drifted to {norm}")
    return state


def _permutation_indices(g, idx: np.ndarray) -> np.ndarray:
    # All permutation gates are involutions, so new[i] = old[P(i)].
    k = g.kind
    if k == X:
        return idx ^ (1 << g.qubits[0])
    if k == CNOT:
        c, t = g.qubits
        return idx ^ (((idx >> c) & 1) << t)
    if k == CCX:
        c1, c2, t = g.qubits
        return idx ^ ((((idx >> c1) & (idx >> c2)) & 1) << t)
    if k == MCX:
        *controls, t = g.qubits
        bit = (idx >> controls[0]) & 1
        for q in controls[1:]:
            bit &= idx >> q
        return idx ^ ((bit & 1) << t)
    if k == SWAP:
        a, b = g.qubits
        d = ((idx >> a) ^ (idx >> b)) & 1
        return idx ^ ((d << a) | (d << b))
    raise SimulationError(f"not a permutation gate: {k}")


def extract_basis(state: np.ndarray, tol: float = _BASIS_TOL) -> int:
    """Index of the basis state the vector has collapsed to.

    Raises if no basis amplitude carries probability >= 1 - tol, which
    signals a broken circuit rather than a tolerance issue.
    """
    probs = np.abs(state) ** 2
    idx = int(np.argmax(probs))
    if probs[idx] < 1.0 - tol:
        raise SimulationError(
            f"state is not within {tol} of a basis state "
            f"(best |amp|^2 = {probs[idx]:.6f} at {idx})"
        )
    return idx
