"""Clifford+T accounting.

`count_raw` tallies a circuit without decomposition.  `lower_to_clifford_t`
expands Toffoli-class and rotation gates into Clifford+T and recomputes depth
on the expanded stream with greedy as-soon-as-possible layering.  For
counting-mode builds (no materialised gate list) `lower_summary` applies the
same tallies with serial depth composition, mirroring the conservative
scheduling stance of the estimation methodology this model follows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

from .circuit import (
    CCX,
    CNOT,
    CPHASE,
    H,
    MCX,
    RZ,
    S,
    SDG,
    SWAP,
    T,
    TDG,
    X,
    Builder,
    Circuit,
    CountSummary,
    Gate,
)

_SINGLE_CLIFFORD = frozenset({X, H, S, SDG})
_T_KINDS = frozenset({T, TDG})
_ROTATION_KINDS = frozenset({RZ, CPHASE})


@dataclass(frozen=True)
class SynthesisParams:
    """Rotation-synthesis cost model: T per rotation = ceil(slope*log2(1/eps)+offset)."""

    epsilon_syn: float = 1e-10
    t_per_rotation_slope: float = 0.53
    t_per_rotation_offset: float = 5.3

    def __post_init__(self):
        if not 0.0 < self.epsilon_syn < 1.0:
            raise ValueError("epsilon_syn must lie in (0, 1)")

    def t_per_rotation(self) -> int:
        return math.ceil(
            self.t_per_rotation_slope * math.log2(1.0 / self.epsilon_syn)
            + self.t_per_rotation_offset
        )


@dataclass
class LogicalCounts:
    qubits: int = 0
    t_count: int = 0
    toffoli_count: int = 0
    cnot_count: int = 0
    single_qubit_clifford: int = 0
    rotation_count: int = 0
    depth: int = 0
    t_depth: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


# Standard 7-T decomposition of CCX over roles (c1, c2, t); verified by a
# statevector self-test in the test suite.
CCX_TEMPLATE: tuple[tuple[str, tuple[int, ...]], ...] = (
    (H, (2,)),
    (CNOT, (1, 2)),
    (TDG, (2,)),
    (CNOT, (0, 2)),
    (T, (2,)),
    (CNOT, (1, 2)),
    (TDG, (2,)),
    (CNOT, (0, 2)),
    (T, (1,)),
    (T, (2,)),
    (H, (2,)),
    (CNOT, (0, 1)),
    (T, (0,)),
    (TDG, (1,)),
    (CNOT, (0, 1)),
)


def ccx_decomposition(c1: int, c2: int, t: int) -> list[Gate]:
    roles = (c1, c2, t)
    out = []
    for kind, qs in CCX_TEMPLATE:
        out.append(Gate(kind, tuple(roles[i] for i in qs)))
    return out


def _greedy_layers(stream) -> tuple[int, int]:
    """Greedy ASAP layering of (kind, qubits) events.

    Returns (depth, t_depth) where t_depth counts layers containing at least
    one T or T-dagger.
    """
    frontier: dict[int, int] = {}
    t_layers: set[int] = set()
    depth = 0
    for kind, qubits in stream:
        layer = 1 + max((frontier.get(q, 0) for q in qubits), default=0)
        for q in qubits:
            frontier[q] = layer
        if layer > depth:
            depth = layer
        if kind in _T_KINDS:
            t_layers.add(layer)
    return depth, len(t_layers)


def count_raw(c: Circuit) -> LogicalCounts:
    """Tally gates by class without decomposition.

    MCX gates land in `toffoli_count` (multi-controlled class) and SWAP in
    `cnot_count` (two-qubit Clifford class).
    """
    out = LogicalCounts(qubits=c.num_qubits)
    for g in c.gates:
        k = g.kind
        if k in _T_KINDS:
            out.t_count += 1
        elif k in (CCX, MCX):
            out.toffoli_count += 1
        elif k in (CNOT, SWAP):
            out.cnot_count += 1
        elif k in _ROTATION_KINDS:
            out.rotation_count += 1
        else:
            out.single_qubit_clifford += 1
    out.depth, out.t_depth = _greedy_layers(
        (g.kind, g.qubits) for g in c.gates
    )
    return out


def _mcx_ladder(controls: tuple[int, ...], target: int, anc_base: int):
    """Ancilla-ladder MCX expansion: k-1 Toffolis each way plus one CNOT."""
    k = len(controls)
    ancs = list(range(anc_base, anc_base + k - 1))
    ups = [(CCX, (controls[0], controls[1], ancs[0]))]
    for j in range(2, k):
        ups.append((CCX, (ancs[j - 2], controls[j], ancs[j - 1])))
    yield from ups
    yield (CNOT, (ancs[-1], target))
    yield from reversed(ups)


def _expanded_stream(c: Circuit, t_per_rotation: int):
    anc_base = c.num_qubits
    for g in c.gates:
        k = g.kind
        if k == CCX:
            for kind, qs in CCX_TEMPLATE:
                yield (kind, tuple(g.qubits[i] for i in qs))
        elif k == MCX:
            for sub in _mcx_ladder(g.qubits[:-1], g.qubits[-1], anc_base):
                if sub[0] == CCX:
                    for kind, qs in CCX_TEMPLATE:
                        yield (kind, tuple(sub[1][i] for i in qs))
                else:
                    yield sub
        elif k == SWAP:
            a, b = g.qubits
            yield (CNOT, (a, b))
            yield (CNOT, (b, a))
            yield (CNOT, (a, b))
        elif k in _ROTATION_KINDS:
            # Synthesized as a serial T ladder on the gate's qubits: the
            # Clifford interleaving of the synthesis is not scheduled.
            for _ in range(t_per_rotation):
                yield (T, g.qubits)
        else:
            yield (k, g.qubits)


def _lowered_tallies(
    kinds: dict[str, int], mcx_controls: dict[int, int], params: SynthesisParams
) -> LogicalCounts:
    out = LogicalCounts()
    per_rot = params.t_per_rotation()
    ccx_total = kinds.get(CCX, 0)
    for k, count in mcx_controls.items():
        ccx_total += 2 * (k - 1) * count
    rotations = kinds.get(RZ, 0) + kinds.get(CPHASE, 0)
    out.toffoli_count = ccx_total
    out.rotation_count = rotations
    out.t_count = (
        7 * ccx_total
        + per_rot * rotations
        + kinds.get(T, 0)
        + kinds.get(TDG, 0)
    )
    out.cnot_count = (
        kinds.get(CNOT, 0)
        + 3 * kinds.get(SWAP, 0)
        + 6 * ccx_total
        + sum(mcx_controls.values())  # one CNOT per MCX ladder
    )
    out.single_qubit_clifford = (
        kinds.get(X, 0)
        + kinds.get(H, 0)
        + kinds.get(S, 0)
        + kinds.get(SDG, 0)
        + 2 * ccx_total  # two H per expanded Toffoli
    )
    return out


_CCX_DEPTH, _CCX_T_DEPTH = _greedy_layers(iter(CCX_TEMPLATE))


def lower_to_clifford_t(
    c: Circuit, params: SynthesisParams | None = None
) -> LogicalCounts:
    """Lower a recorded circuit; depth recomputed on the expanded sequence."""
    params = params or SynthesisParams()
    kinds: dict[str, int] = {}
    mcx: dict[int, int] = {}
    max_k = 0
    for g in c.gates:
        kinds[g.kind] = kinds.get(g.kind, 0) + 1
        if g.kind == MCX:
            k = len(g.qubits) - 1
            mcx[k] = mcx.get(k, 0) + 1
            max_k = max(max_k, k)
    out = _lowered_tallies(kinds, mcx, params)
    out.qubits = c.num_qubits + (max_k - 1 if max_k else 0)
    out.depth, out.t_depth = _greedy_layers(
        _expanded_stream(c, params.t_per_rotation())
    )
    return out


def lower_summary(
    s: CountSummary, params: SynthesisParams | None = None
) -> LogicalCounts:
    """Lower counting-mode tallies; depth is composed serially.

    Gate tallies agree exactly with `lower_to_clifford_t` on the same
    construction; only depth/t_depth differ (serial upper bound instead of
    greedy layering, since no gate list exists).
    """
    params = params or SynthesisParams()
    out = _lowered_tallies(s.kinds, s.mcx_controls, params)
    max_k = max(s.mcx_controls, default=0)
    out.qubits = s.num_qubits + (max_k - 1 if max_k else 0)
    per_rot = params.t_per_rotation()
    depth_weights = {
        X: 1, H: 1, S: 1, SDG: 1, T: 1, TDG: 1, CNOT: 1,
        SWAP: 3, CCX: _CCX_DEPTH, RZ: per_rot, CPHASE: per_rot,
    }
    t_weights = {
        T: 1, TDG: 1, CCX: _CCX_T_DEPTH, RZ: per_rot, CPHASE: per_rot,
    }
    depth = 0
    t_depth = 0
    for kind, count in s.kinds.items():
        if kind == MCX:
            continue
        depth += depth_weights[kind] * count
        t_depth += t_weights.get(kind, 0) * count
    for k, count in s.mcx_controls.items():
        depth += (2 * (k - 1) * _CCX_DEPTH + 1) * count
        t_depth += 2 * (k - 1) * _CCX_T_DEPTH * count
    out.depth = depth
    out.t_depth = t_depth
    return out


def lower(obj, params: SynthesisParams | None = None) -> LogicalCounts:
    """Lower either a recorded Circuit or a CountSummary."""
    if isinstance(obj, Circuit):
        return lower_to_clifford_t(obj, params)
    return lower_summary(obj, params)
