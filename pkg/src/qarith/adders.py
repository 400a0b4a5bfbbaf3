"""Adder circuit constructors.

In-place adders map |a>|b> to |a>|(a+b) mod 2^n>, out-of-place adders write
the sum into a third zero register, constant adders add a classical value,
and the subtractor wraps an in-place adder in the binary-complement trick.
All constructions are fully unitary with clean ancillas (Toffoli-based
uncomputation, no measurement).

The emit_* functions write gates into a caller-owned Builder so that larger
circuits (multipliers, dividers, modexp) can reuse scratch registers; the
build_* functions wrap them into standalone circuits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Builder, CCX, CNOT, X, CircuitError, new_builder

IN_PLACE_ADDERS = ("Gidney", "TTK", "CDKM", "DKRS", "QFT")
OUT_OF_PLACE_ADDERS = ("Gidney", "DKRS")
CONST_ADDERS = tuple(f"ViaInPlace({a})" for a in IN_PLACE_ADDERS[:4]) + ("QFT",)
RIPPLE_CARRY_ADDERS = ("Gidney", "TTK", "CDKM")


def _check_n(n: int) -> None:
    if n < 1:
        raise CircuitError("register size n must be >= 1")


# -- generic emission helpers ------------------------------------------------

def emit_adjoint(bld: Builder, emit) -> None:
    """Emit the adjoint of whatever `emit` produces.

    Counting builders emit forward: a reversed/adjointed sequence has
    identical tallies.
    """
    if bld.counting:
        emit()
        return
    m = bld.mark()
    emit()
    bld.adjoint_since(m)


def emit_const_load(bld: Builder, reg, constant: int) -> None:
    """X-load a classical constant's set bits onto `reg` (self-inverse)."""
    mask = constant & ((1 << len(reg)) - 1)
    if bld.counting:
        bld.bulk(X, mask.bit_count())
        return
    for j in range(len(reg)):
        if (mask >> j) & 1:
            bld.x(reg[j])


def emit_const_load_ctrl(bld: Builder, ctrl: int, reg, constant: int) -> None:
    """CNOT-load a constant under one control (loads 0 when ctrl=0)."""
    mask = constant & ((1 << len(reg)) - 1)
    if bld.counting:
        bld.bulk(CNOT, mask.bit_count())
        return
    for j in range(len(reg)):
        if (mask >> j) & 1:
            bld.cnot(ctrl, reg[j])


def emit_const_load_cctrl(bld: Builder, c1: int, c2: int, reg, constant: int) -> None:
    """Toffoli-load a constant under two controls."""
    mask = constant & ((1 << len(reg)) - 1)
    if bld.counting:
        bld.bulk(CCX, mask.bit_count())
        return
    for j in range(len(reg)):
        if (mask >> j) & 1:
            bld.ccx(c1, c2, reg[j])


def emit_copy(bld: Builder, src, dst) -> None:
    """XOR-copy src into dst qubit-wise (a plain CNOT fan)."""
    if bld.counting:
        bld.bulk(CNOT, len(src))
        return
    for s, d in zip(src, dst):
        bld.cnot(s, d)


def emit_copy_ctrl(bld: Builder, ctrl: int, src, dst) -> None:
    """Controlled XOR-copy: dst ^= src when ctrl=1."""
    if bld.counting:
        bld.bulk(CCX, len(src))
        return
    for s, d in zip(src, dst):
        bld.ccx(ctrl, s, d)


def emit_complement(bld: Builder, reg) -> None:
    if bld.counting:
        bld.bulk(X, len(reg))
        return
    for q in reg:
        bld.x(q)


# -- Gidney-style ripple accumulate ------------------------------------------

def emit_accumulate_add(bld: Builder, x, y, carries) -> None:
    """y += x mod 2^len(y) with len(x) <= len(y) (x zero-extended).

    Ripple with temporary AND carries in the style of the Gidney adder;
    `carries` must provide len(y)-1 clean ancilla qubits and is returned
    clean.  Used both as the Gidney in-place adder (equal widths) and as the
    accumulator primitive inside multipliers and modular arithmetic.
    """
    k, m = len(x), len(y)
    if not 1 <= k <= m:
        raise CircuitError("need 1 <= len(x) <= len(y)")
    if m == 1:
        bld.cnot(x[0], y[0])
        return
    c = carries
    for i in range(m - 1):
        if i < k:
            if i > 0:
                bld.cnot(c[i - 1], x[i])
                bld.cnot(c[i - 1], y[i])
            bld.ccx(x[i], y[i], c[i])
            if i > 0:
                bld.cnot(c[i - 1], c[i])
        else:
            bld.ccx(c[i - 1], y[i], c[i])
    bld.cnot(c[m - 2], y[m - 1])
    if k == m:
        bld.cnot(x[m - 1], y[m - 1])
    for i in reversed(range(m - 1)):
        if i < k:
            if i > 0:
                bld.cnot(c[i - 1], c[i])
            bld.ccx(x[i], y[i], c[i])
            if i > 0:
                bld.cnot(c[i - 1], x[i])
            bld.cnot(x[i], y[i])
        else:
            bld.ccx(c[i - 1], y[i], c[i])
            bld.cnot(c[i - 1], y[i])


def emit_accumulate_sub(bld: Builder, x, y, carries) -> None:
    """y -= x mod 2^len(y); exact adjoint of emit_accumulate_add."""
    emit_adjoint(bld, lambda: emit_accumulate_add(bld, x, y, carries))


# -- TTK ripple adder (no ancilla) --------------------------------------------

def emit_ttk(bld: Builder, a, b) -> None:
    n = len(a)
    if n == 1:
        bld.cnot(a[0], b[0])
        return
    for i in range(1, n):
        bld.cnot(a[i], b[i])
    for i in range(n - 1, 1, -1):
        bld.cnot(a[i - 1], a[i])
    for i in range(n - 1):
        bld.ccx(a[i], b[i], a[i + 1])
    for i in range(n - 1, 0, -1):
        bld.cnot(a[i], b[i])
        bld.ccx(a[i - 1], b[i - 1], a[i])
    for i in range(1, n - 1):
        bld.cnot(a[i], a[i + 1])
    for i in range(n):
        bld.cnot(a[i], b[i])


# -- CDKM ripple adder (one ancilla) -------------------------------------------

def emit_cdkm(bld: Builder, a, b, z: int) -> None:
    n = len(a)
    carries = [z] + list(a[: n - 1])
    for i in range(n):
        c, bb, aa = carries[i], b[i], a[i]
        bld.cnot(aa, bb)
        bld.cnot(aa, c)
        bld.ccx(c, bb, aa)
    for i in reversed(range(n)):
        c, bb, aa = carries[i], b[i], a[i]
        bld.ccx(c, bb, aa)
        bld.cnot(aa, c)
        bld.cnot(c, bb)


# -- DKRS carry-lookahead --------------------------------------------------------

def _cla_plan(m_carries: int):
    """Brent-Kung schedule over scan elements 1..M.

    Returns (p_nodes, g_rounds, c_rounds): p_nodes are (level, pos) block
    propagates that need ancillas, in emission order.
    """
    M = m_carries
    if M < 2:
        return (), (), ()
    L = M.bit_length() - 1
    g_rounds = []
    for t in range(1, L + 1):
        step = 1 << t
        g_rounds.extend((t, j) for j in range(step, M + 1, step))
    c_rounds = []
    for t in range(L, 0, -1):
        half = 1 << (t - 1)
        c_rounds.extend((t, j) for j in range(3 * half, M + 1, 1 << t))
    needed = {(t - 1, j) for t, j in g_rounds + c_rounds if t - 1 >= 1}
    stack = list(needed)
    while stack:
        lvl, j = stack.pop()
        for parent in ((lvl - 1, j - (1 << (lvl - 1))), (lvl - 1, j)):
            if parent[0] >= 1 and parent not in needed:
                needed.add(parent)
                stack.append(parent)
    return tuple(sorted(needed)), tuple(g_rounds), tuple(c_rounds)


def cla_bp_count(n: int) -> int:
    """Block-propagate ancillas the DKRS tree needs for n-bit operands."""
    return len(_cla_plan(n - 1)[0])


def _emit_cla_tree(bld: Builder, prop, carry, bp) -> None:
    """Transform carry[e-1] from generate bits into carries c_e (e=1..M).

    prop[e-1] must hold the propagate bit feeding scan element e; bp is the
    block-propagate ancilla pool (clean in, clean out).
    """
    M = len(carry)
    p_nodes, g_rounds, c_rounds = _cla_plan(M)
    index = {node: bp[i] for i, node in enumerate(p_nodes)}

    def bpq(lvl, j):
        return prop[j - 1] if lvl == 0 else index[(lvl, j)]

    for lvl, j in p_nodes:
        bld.ccx(bpq(lvl - 1, j - (1 << (lvl - 1))), bpq(lvl - 1, j), bpq(lvl, j))
    for t, j in g_rounds:
        bld.ccx(carry[j - (1 << (t - 1)) - 1], bpq(t - 1, j), carry[j - 1])
    for t, j in c_rounds:
        bld.ccx(carry[j - (1 << (t - 1)) - 1], bpq(t - 1, j), carry[j - 1])
    for lvl, j in reversed(p_nodes):
        bld.ccx(bpq(lvl - 1, j - (1 << (lvl - 1))), bpq(lvl - 1, j), bpq(lvl, j))


def emit_dkrs_inplace(bld: Builder, a, b, carry, bp) -> None:
    """DKRS carry-lookahead in-place addition b += a.

    carry: n-1 clean ancillas, bp: cla_bp_count(n) clean ancillas.  The
    carry network is uncomputed through the borrow relation of (a, sum), so
    everything is restored without measurement.
    """
    n = len(a)
    if n == 1:
        bld.cnot(a[0], b[0])
        return
    for i in range(n - 1):
        bld.ccx(a[i], b[i], carry[i])
    for i in range(n):
        bld.cnot(a[i], b[i])
    _emit_cla_tree(bld, b[: n - 1], carry, bp)
    for i in range(1, n):
        bld.cnot(carry[i - 1], b[i])
    for i in range(n - 1):
        bld.x(b[i])
    for i in range(1, n - 1):
        bld.cnot(a[i], b[i])
    emit_adjoint(bld, lambda: _emit_cla_tree(bld, b[: n - 1], carry, bp))
    for i in range(1, n - 1):
        bld.cnot(a[i], b[i])
    for i in range(n - 1):
        bld.ccx(a[i], b[i], carry[i])
    for i in range(n - 1):
        bld.x(b[i])


def emit_dkrs_outofplace(bld: Builder, a, b, s, carry, bp) -> None:
    """DKRS carry-lookahead out-of-place addition s ^= (a+b) mod 2^n."""
    n = len(a)
    if n == 1:
        bld.cnot(a[0], s[0])
        bld.cnot(b[0], s[0])
        return
    for i in range(n - 1):
        bld.ccx(a[i], b[i], carry[i])
    for i in range(1, n):
        bld.cnot(a[i], b[i])
    _emit_cla_tree(bld, b[: n - 1], carry, bp)
    bld.cnot(a[0], s[0])
    bld.cnot(b[0], s[0])
    for i in range(1, n):
        bld.cnot(b[i], s[i])
        bld.cnot(carry[i - 1], s[i])
    emit_adjoint(bld, lambda: _emit_cla_tree(bld, b[: n - 1], carry, bp))
    for i in range(1, n):
        bld.cnot(a[i], b[i])
    for i in range(n - 1):
        bld.ccx(a[i], b[i], carry[i])


# -- QFT adder -------------------------------------------------------------------

def emit_qft(bld: Builder, reg) -> None:
    """QFT without the final swap layer; angles are exact pi/2^k."""
    n = len(reg)
    for j in reversed(range(n)):
        bld.h(reg[j])
        for k in reversed(range(j)):
            bld.cphase(reg[k], reg[j], math.pi / (1 << (j - k)))


def emit_inverse_qft(bld: Builder, reg) -> None:
    emit_adjoint(bld, lambda: emit_qft(bld, reg))


def emit_qft_inplace_add(bld: Builder, a, b) -> None:
    """|a>|b> -> |a>|a+b> via phase accumulation in the Fourier basis."""
    emit_qft(bld, b)
    n = len(b)
    for j in range(len(a)):
        for k in range(n - j):
            bld.cphase(a[j], b[j + k], math.pi / (1 << k))
    emit_inverse_qft(bld, b)


def emit_qft_const_add(bld: Builder, b, constant: int) -> None:
    """|b> -> |b + constant> using single-qubit phases in the Fourier basis."""
    emit_qft(bld, b)
    for j in range(len(b)):
        c = constant % (1 << (j + 1))
        if c:
            bld.rz(b[j], math.pi * c / (1 << j))
    emit_inverse_qft(bld, b)


# -- unified in-place adder interface -----------------------------------------

@dataclass
class InPlaceScratch:
    """Clean ancillas an in-place adder needs at a given width."""

    algo: str
    width: int
    carries: tuple[int, ...] = ()
    cdkm_z: int | None = None
    bp: tuple[int, ...] = ()


def alloc_inplace_scratch(bld: Builder, algo: str, width: int) -> InPlaceScratch:
    if algo == "Gidney":
        reg = bld.alloc_ancilla(width - 1, "cg_carry") if width > 1 else None
        return InPlaceScratch(algo, width, carries=reg.qubits if reg else ())
    if algo == "TTK" or algo == "QFT":
        return InPlaceScratch(algo, width)
    if algo == "CDKM":
        return InPlaceScratch(algo, width, cdkm_z=bld.alloc_ancilla(1, "cdkm_z")[0])
    if algo == "DKRS":
        carry = bld.alloc_ancilla(width - 1, "cla_carry") if width > 1 else None
        nbp = cla_bp_count(width)
        bp = bld.alloc_ancilla(nbp, "cla_bp") if nbp else None
        return InPlaceScratch(
            algo, width,
            carries=carry.qubits if carry else (),
            bp=bp.qubits if bp else (),
        )
    raise CircuitError(f"unknown in-place adder {algo!r}")


def emit_inplace_adder(bld: Builder, algo: str, a, b, scratch: InPlaceScratch) -> None:
    """b += a mod 2^len(b) using the chosen algorithm (len(a) == len(b))."""
    if len(a) != len(b) or len(b) != scratch.width:
        raise CircuitError("operand widths must match the scratch width")
    if algo == "Gidney":
        emit_accumulate_add(bld, a, b, scratch.carries)
    elif algo == "TTK":
        emit_ttk(bld, a, b)
    elif algo == "CDKM":
        emit_cdkm(bld, a, b, scratch.cdkm_z)
    elif algo == "DKRS":
        emit_dkrs_inplace(bld, a, b, scratch.carries, scratch.bp)
    elif algo == "QFT":
        emit_qft_inplace_add(bld, a, b)
    else:
        raise CircuitError(f"unknown in-place adder {algo!r}")


# -- standalone circuit builders ------------------------------------------------

def _finish(bld: Builder):
    return bld.summary() if bld.counting else bld.finalize()


def build_inplace_adder(algo: str, n: int, counting: bool = False):
    """|a>|b> -> |a>|(a+b) mod 2^n>."""
    if algo not in IN_PLACE_ADDERS:
        raise CircuitError(f"unknown in-place adder {algo!r}")
    _check_n(n)
    bld = new_builder(counting, f"inplace_adder[{algo},{n}]")
    a = bld.alloc_register(n, "a")
    b = bld.alloc_register(n, "b")
    scratch = alloc_inplace_scratch(bld, algo, n)
    emit_inplace_adder(bld, algo, a.qubits, b.qubits, scratch)
    return _finish(bld)


def build_outofplace_adder(algo: str, n: int, counting: bool = False):
    """|a>|b>|0> -> |a>|b>|(a+b) mod 2^n>."""
    if algo not in OUT_OF_PLACE_ADDERS:
        raise CircuitError(f"unknown out-of-place adder {algo!r}")
    _check_n(n)
    bld = new_builder(counting, f"outofplace_adder[{algo},{n}]")
    a = bld.alloc_register(n, "a")
    b = bld.alloc_register(n, "b")
    s = bld.alloc_register(n, "sum")
    if algo == "Gidney":
        _emit_gidney_outofplace(bld, a.qubits, b.qubits, s.qubits)
    else:
        carry = bld.alloc_ancilla(n - 1, "cla_carry") if n > 1 else None
        nbp = cla_bp_count(n)
        bp = bld.alloc_ancilla(nbp, "cla_bp") if nbp else None
        emit_dkrs_outofplace(
            bld, a.qubits, b.qubits, s.qubits,
            carry.qubits if carry else (), bp.qubits if bp else (),
        )
    return _finish(bld)


def _emit_gidney_outofplace(bld: Builder, a, b, s) -> None:
    # Carries ripple through the sum register itself, so no ancillas and a
    # single Toffoli per position.
    n = len(a)
    for i in range(n):
        if i < n - 1:
            if i > 0:
                bld.cnot(s[i], a[i])
                bld.cnot(s[i], b[i])
            bld.ccx(a[i], b[i], s[i + 1])
            if i > 0:
                bld.cnot(s[i], s[i + 1])
                bld.cnot(s[i], a[i])
                bld.cnot(s[i], b[i])
        bld.cnot(a[i], s[i])
        bld.cnot(b[i], s[i])


def parse_const_adder(algo: str) -> tuple[str, str | None]:
    """'ViaInPlace(TTK)' -> ('ViaInPlace', 'TTK'); 'QFT' -> ('QFT', None)."""
    if algo == "QFT":
        return ("QFT", None)
    if algo.startswith("ViaInPlace(") and algo.endswith(")"):
        inner = algo[len("ViaInPlace("):-1]
        if inner in IN_PLACE_ADDERS:
            return ("ViaInPlace", inner)
    raise CircuitError(f"unknown constant adder {algo!r}")


def build_const_adder(algo: str, n: int, constant: int, counting: bool = False):
    """|b> -> |(constant + b) mod 2^n>."""
    _check_n(n)
    if not 0 <= constant < (1 << n):
        raise CircuitError(f"constant {constant} out of range for n={n}")
    kind, inner = parse_const_adder(algo)
    bld = new_builder(counting, f"const_adder[{algo},{n}]")
    b = bld.alloc_register(n, "b")
    if kind == "QFT":
        emit_qft_const_add(bld, b.qubits, constant)
    else:
        kreg = bld.alloc_ancilla(n, "k")
        scratch = alloc_inplace_scratch(bld, inner, n)
        emit_const_load(bld, kreg.qubits, constant)
        emit_inplace_adder(bld, inner, kreg.qubits, b.qubits, scratch)
        emit_const_load(bld, kreg.qubits, constant)
    return _finish(bld)


def build_subtractor(algo: str, n: int, counting: bool = False):
    """|a>|b> -> |a>|(b - a) mod 2^n> via the complement trick around `algo`."""
    if algo not in IN_PLACE_ADDERS:
        raise CircuitError(f"unknown in-place adder {algo!r}")
    _check_n(n)
    bld = new_builder(counting, f"subtractor[{algo},{n}]")
    a = bld.alloc_register(n, "a")
    b = bld.alloc_register(n, "b")
    scratch = alloc_inplace_scratch(bld, algo, n)
    emit_complement(bld, b.qubits)
    emit_inplace_adder(bld, algo, a.qubits, b.qubits, scratch)
    emit_complement(bld, b.qubits)
    return _finish(bld)


def spec_constant(n: int) -> int:
    """Benchmark constant for quantum-classical addition: sum 4^i, i=0..ceil(n/2)."""
    total = sum(4 ** i for i in range(math.ceil(n / 2) + 1))
    return total % (1 << n)
