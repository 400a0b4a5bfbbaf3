"""Gate alphabet, registers, and the circuit builder.

All registers are little-endian: the least significant bit of an encoded
integer lives in the first qubit of the register.  Circuits are purely
unitary -- there is no measurement and no reset in the gate alphabet, and
ancilla registers allocated through the builder are expected to return to
|0> on every basis input (checked by the simulators).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

# Gate kinds.  Permutation gates first, then Clifford/T single-qubit gates,
# then parameterised phase gates.
X = "X"
CNOT = "CNOT"
CCX = "CCX"
MCX = "MCX"
SWAP = "SWAP"
H = "H"
S = "S"
SDG = "SDG"
T = "T"
TDG = "TDG"
RZ = "RZ"
CPHASE = "CPHASE"

PERMUTATION_KINDS = frozenset({X, CNOT, CCX, MCX, SWAP})
ANGLE_KINDS = frozenset({RZ, CPHASE})
ALL_KINDS = frozenset(
    {X, CNOT, CCX, MCX, SWAP, H, S, SDG, T, TDG, RZ, CPHASE}
)

_ADJOINT_KIND = {S: SDG, SDG: S, T: TDG, TDG: T}


class CircuitError(ValueError):
    """Raised for malformed gates, registers or builder misuse."""


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def adjoint(self) -> "Gate":
        if self.kind in ANGLE_KINDS:
            return Gate(self.kind, self.qubits, -self.angle)
        return Gate(_ADJOINT_KIND.get(self.kind, self.kind), self.qubits)


@dataclass(frozen=True)
class Register:
    """Ordered, little-endian run of qubit ids."""

    qubits: tuple[int, ...]
    name: str = "r"

    def __len__(self) -> int:
        return len(self.qubits)

    def __getitem__(self, i):
        return self.qubits[i]

    def __iter__(self):
        return iter(self.qubits)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...]
    data_registers: tuple[Register, ...] = ()
    ancilla_registers: tuple[Register, ...] = ()
    name: str = "circuit"

    def __post_init__(self):
        seen: set[int] = set()
        for reg in self.data_registers + self.ancilla_registers:
            for q in reg:
                if q in seen:
                    raise CircuitError(f"registers overlap at qubit {q}")
                if not 0 <= q < self.num_qubits:
                    raise CircuitError(f"register qubit {q} out of range")
                seen.add(q)
        for i, g in enumerate(self.gates):
            _validate_gate(g, self.num_qubits, i)

    @property
    def ancilla_qubits(self) -> tuple[int, ...]:
        return tuple(q for reg in self.ancilla_registers for q in reg)


def _validate_gate(g: Gate, num_qubits: int, index: int | None = None) -> None:
    where = "" if index is None else f" at gate {index}"
    if g.kind not in ALL_KINDS:
        raise CircuitError(f"unknown gate kind {g.kind!r}{where}")
    if len(set(g.qubits)) != len(g.qubits):
        raise CircuitError(f"duplicate operand in {g.kind}{g.qubits}{where}")
    for q in g.qubits:
        if not 0 <= q < num_qubits:
            raise CircuitError(
                f"operand {q} out of range for {num_qubits} qubits{where}"
            )
    if g.kind in ANGLE_KINDS:
        if g.angle is None or not math.isfinite(g.angle):
            raise CircuitError(f"{g.kind} needs a finite angle{where}")
    expected = {X: 1, CNOT: 2, CCX: 3, SWAP: 2, H: 1, S: 1, SDG: 1,
                T: 1, TDG: 1, RZ: 1, CPHASE: 2}
    if g.kind == MCX:
        if len(g.qubits) < 4:
            raise CircuitError(f"MCX needs >= 3 controls{where}")
    elif len(g.qubits) != expected[g.kind]:
        raise CircuitError(f"{g.kind} takes {expected[g.kind]} operands{where}")


@dataclass
class CountSummary:
    """Raw gate tallies from a counting-mode build (no gate list kept).

    ``kinds`` maps gate kind to count; MCX gates are additionally broken out
    by control count in ``mcx_controls``.  ``num_qubits`` is the peak width
    including every allocated ancilla.
    """

    num_qubits: int = 0
    kinds: dict[str, int] = field(default_factory=dict)
    mcx_controls: dict[int, int] = field(default_factory=dict)
    name: str = "circuit"

    def add_kind(self, kind: str, count: int = 1) -> None:
        self.kinds[kind] = self.kinds.get(kind, 0) + count

    def merge(self, other: "CountSummary", times: int = 1) -> None:
        for k, v in other.kinds.items():
            self.kinds[k] = self.kinds.get(k, 0) + v * times
        for k, v in other.mcx_controls.items():
            self.mcx_controls[k] = self.mcx_controls.get(k, 0) + v * times


# Cache of CountSummary deltas for cached() blocks, shared across builders.
# Keys are fully self-describing tuples, so identical keys always describe
# identical gate sequences up to qubit relabeling.
_BLOCK_CACHE: dict[tuple, tuple[CountSummary, int]] = {}


def clear_block_cache() -> None:
    _BLOCK_CACHE.clear()


class Builder:
    """Single-owner circuit builder with append-only qubit allocation.

    In recording mode (default) every gate is kept and ``finalize`` returns a
    Circuit.  In counting mode only tallies are kept; ``cached`` blocks are
    memoised by key so that repeated structures cost O(1) after the first
    emission, which keeps sweep-scale builds (n ~ 2^13) tractable.
    """

    def __init__(self, counting: bool = False, name: str = "circuit"):
        self.counting = counting
        self.name = name
        self.num_qubits = 0
        self.gates: list[Gate] = []
        self._data_regs: list[Register] = []
        self._anc_regs: list[Register] = []
        self._summary = CountSummary(name=name) if counting else None
        self._finalized = False

    # -- allocation --------------------------------------------------------

    def _alloc(self, size: int, name: str) -> Register:
        if self._finalized:
            raise CircuitError("builder already finalized")
        if size < 1:
            raise CircuitError("register size must be >= 1")
        reg = Register(tuple(range(self.num_qubits, self.num_qubits + size)), name)
        self.num_qubits += size
        return reg

    def alloc_register(self, size: int, name: str = "r") -> Register:
        reg = self._alloc(size, name)
        self._data_regs.append(reg)
        return reg

    def alloc_ancilla(self, size: int, name: str = "anc") -> Register:
        reg = self._alloc(size, name)
        self._anc_regs.append(reg)
        return reg

    # -- gate emission -----------------------------------------------------

    def append(self, gate: Gate) -> None:
        if self._finalized:
            raise CircuitError("builder already finalized")
        if self.counting:
            self._summary.add_kind(gate.kind)
            if gate.kind == MCX:
                k = len(gate.qubits) - 1
                self._summary.mcx_controls[k] = (
                    self._summary.mcx_controls.get(k, 0) + 1
                )
            return
        _validate_gate(gate, self.num_qubits)
        self.gates.append(gate)

    def x(self, t: int) -> None:
        self.append(Gate(X, (t,)))

    def cnot(self, c: int, t: int) -> None:
        self.append(Gate(CNOT, (c, t)))

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.append(Gate(CCX, (c1, c2, t)))

    def mcx(self, controls, t: int) -> None:
        controls = tuple(controls)
        if len(controls) == 0:
            self.x(t)
        elif len(controls) == 1:
            self.cnot(controls[0], t)
        elif len(controls) == 2:
            self.ccx(controls[0], controls[1], t)
        else:
            self.append(Gate(MCX, controls + (t,)))

    def swap(self, a: int, b: int) -> None:
        self.append(Gate(SWAP, (a, b)))

    def h(self, t: int) -> None:
        self.append(Gate(H, (t,)))

    def s(self, t: int) -> None:
        self.append(Gate(S, (t,)))

    def sdg(self, t: int) -> None:
        self.append(Gate(SDG, (t,)))

    def t(self, q: int) -> None:
        self.append(Gate(T, (q,)))

    def tdg(self, q: int) -> None:
        self.append(Gate(TDG, (q,)))

    def rz(self, t: int, angle: float) -> None:
        self.append(Gate(RZ, (t,), angle))

    def cphase(self, c: int, t: int, angle: float) -> None:
        self.append(Gate(CPHASE, (c, t), angle))

    def bulk(self, kind: str, count: int, mcx_k: int | None = None) -> None:
        """Tally `count` gates of `kind` without materialising them.

        Only legal in counting mode; recording builders must emit real gates.
        """
        if not self.counting:
            raise CircuitError("bulk tallies are only valid in counting mode")
        if count:
            self._summary.add_kind(kind, count)
            if kind == MCX:
                self._summary.mcx_controls[mcx_k] = (
                    self._summary.mcx_controls.get(mcx_k, 0) + count
                )

    # -- structure helpers ---------------------------------------------------

    def mark(self) -> int:
        return len(self.gates)

    def adjoint_since(self, mark: int) -> None:
        """Replace everything emitted after `mark` with its adjoint.

        In counting mode this is a no-op: the adjoint of a gate sequence has
        the same tallies (T and T-dagger are pooled in the T tally).
        """
        if self.counting:
            return
        tail = self.gates[mark:]
        self.gates[mark:] = [g.adjoint() for g in reversed(tail)]

    def replay_adjoint(self, start_mark: int, emit_again, end_mark: int | None = None) -> None:
        """Append the adjoint of the gates recorded in [start_mark, end_mark).

        Recording builders reverse the recorded slice, reusing the registers
        it already allocated.  Counting builders re-run `emit_again` (same
        tallies as the adjoint) with the qubit counter rolled back, since an
        adjoint block allocates nothing new.
        """
        if self.counting:
            before = self.num_qubits
            emit_again()
            self.num_qubits = before
            return
        tail = self.gates[start_mark:end_mark]
        self.gates.extend(g.adjoint() for g in reversed(tail))

    def cached(self, key: tuple, emit) -> None:
        """Emit a block, memoising its tallies by `key` in counting mode.

        `emit` must be deterministic given `key`: same key, same gate counts
        and same number of ancilla allocations.  Recording builders always
        call `emit` so simulations see real gates.
        """
        if not self.counting:
            emit()
            return
        hit = _BLOCK_CACHE.get(key)
        if hit is not None:
            delta, alloc = hit
            self._summary.merge(delta)
            self.num_qubits += alloc
            return
        before = CountSummary(
            kinds=dict(self._summary.kinds),
            mcx_controls=dict(self._summary.mcx_controls),
        )
        qubits_before = self.num_qubits
        emit()
        delta = CountSummary()
        for k, v in self._summary.kinds.items():
            d = v - before.kinds.get(k, 0)
            if d:
                delta.kinds[k] = d
        for k, v in self._summary.mcx_controls.items():
            d = v - before.mcx_controls.get(k, 0)
            if d:
                delta.mcx_controls[k] = d
        _BLOCK_CACHE[key] = (delta, self.num_qubits - qubits_before)

    # -- finalization --------------------------------------------------------

    def finalize(self, name: str | None = None) -> Circuit:
        if self.counting:
            raise CircuitError("counting builder finalizes to a summary")
        self._finalized = True
        return Circuit(
            num_qubits=self.num_qubits,
            gates=tuple(self.gates),
            data_registers=tuple(self._data_regs),
            ancilla_registers=tuple(self._anc_regs),
            name=name or self.name,
        )

    def summary(self) -> CountSummary:
        if not self.counting:
            raise CircuitError("recording builder finalizes to a Circuit")
        self._finalized = True
        self._summary.num_qubits = self.num_qubits
        return self._summary


def new_builder(counting: bool = False, name: str = "circuit") -> Builder:
    return Builder(counting=counting, name=name)


def adjoint(c: Circuit) -> Circuit:
    """Reverse the gate list, adjointing each gate."""
    return Circuit(
        num_qubits=c.num_qubits,
        gates=tuple(g.adjoint() for g in reversed(c.gates)),
        data_registers=c.data_registers,
        ancilla_registers=c.ancilla_registers,
        name=c.name + "_adj",
    )


def _controlled_gate(g: Gate, ctrl: int) -> list[Gate]:
    """Lift one gate to its controlled version over the fixed alphabet."""
    k, q = g.kind, g.qubits
    if k == X:
        return [Gate(CNOT, (ctrl, q[0]))]
    if k == CNOT:
        return [Gate(CCX, (ctrl, q[0], q[1]))]
    if k in (CCX, MCX):
        return [Gate(MCX, (ctrl,) + q)]
    if k == SWAP:
        a, b = q
        return [Gate(CNOT, (b, a)), Gate(CCX, (ctrl, a, b)), Gate(CNOT, (b, a))]
    if k == S:
        return [Gate(CPHASE, (ctrl, q[0]), math.pi / 2)]
    if k == SDG:
        return [Gate(CPHASE, (ctrl, q[0]), -math.pi / 2)]
    if k == T:
        return [Gate(CPHASE, (ctrl, q[0]), math.pi / 4)]
    if k == TDG:
        return [Gate(CPHASE, (ctrl, q[0]), -math.pi / 4)]
    if k == RZ:
        # controlled-Rz(theta) = Rz(ctrl, -theta/2) . CPhase(ctrl, t, theta)
        # up to global phase.
        return [Gate(RZ, (ctrl,), -g.angle / 2), Gate(CPHASE, (ctrl, q[0]), g.angle)]
    if k == CPHASE:
        c, t = q
        half = g.angle / 2
        return [
            Gate(CPHASE, (c, t), half),
            Gate(CNOT, (ctrl, c)),
            Gate(CPHASE, (c, t), -half),
            Gate(CNOT, (ctrl, c)),
            Gate(CPHASE, (ctrl, t), half),
        ]
    if k == H:
        # Basis change Ry(pi/4) mapping Z to (X+Z)/sqrt(2) around CPhase(pi):
        # CH = A . CZ . A^dagger with A = Ry(pi/4) = S H T H S^dagger.
        t = q[0]
        a_dag = [Gate(SDG, (t,)), Gate(H, (t,)), Gate(TDG, (t,)),
                 Gate(H, (t,)), Gate(S, (t,))]
        a_fwd = [Gate(SDG, (t,)), Gate(H, (t,)), Gate(T, (t,)),
                 Gate(H, (t,)), Gate(S, (t,))]
        return a_dag + [Gate(CPHASE, (ctrl, t), math.pi)] + a_fwd
    raise CircuitError(f"cannot control gate kind {k!r}")


def controlled(c: Circuit, control: int) -> Circuit:
    """Circuit acting as identity when `control`=0 and as `c` when it is 1."""
    if control < 0:
        raise CircuitError("control qubit id must be non-negative")
    used = {q for g in c.gates for q in g.qubits}
    for reg in c.data_registers + c.ancilla_registers:
        used.update(reg)
    if control in used:
        raise CircuitError(f"control qubit {control} collides with the circuit")
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(_controlled_gate(g, control))
    return Circuit(
        num_qubits=max(c.num_qubits, control + 1),
        gates=tuple(gates),
        data_registers=c.data_registers,
        ancilla_registers=c.ancilla_registers,
        name=c.name + "_ctrl",
    )


def circuit_to_text(c: Circuit) -> str:
    """Plain-text dump, one gate per line; used by golden tests."""
    lines = [f"qubits={c.num_qubits}"]
    for g in c.gates:
        body = f"{g.kind} " + ",".join(str(q) for q in g.qubits)
        if g.kind in ANGLE_KINDS:
            body += f";angle={g.angle!r}"
        lines.append(body)
    return "\n".join(lines) + "\n"


def register_value(state: int, reg: Register) -> int:
    """Little-endian read of a register's bits out of a basis-state index."""
    v = 0
    for j, q in enumerate(reg):
        v |= ((state >> q) & 1) << j
    return v


def encode_register(value: int, reg: Register) -> int:
    """Basis-state bits for `value` placed on `reg` (other bits zero)."""
    if not 0 <= value < (1 << len(reg)):
        raise CircuitError(f"value {value} does not fit register of {len(reg)}")
    s = 0
    for j, q in enumerate(reg):
        if (value >> j) & 1:
            s |= 1 << q
    return s
