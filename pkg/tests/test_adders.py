import json
import math
import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qarith.adders import (
    CONST_ADDERS,
    IN_PLACE_ADDERS,
    OUT_OF_PLACE_ADDERS,
    RIPPLE_CARRY_ADDERS,
    build_const_adder,
    build_inplace_adder,
    build_outofplace_adder,
    build_subtractor,
    spec_constant,
)
from qarith.circuit import CircuitError, encode_register, register_value
from qarith.resources import lower_to_clifford_t
from qarith.sim import extract_basis, simulate_statevector

GOLDEN = pathlib.Path(__file__).parent / "golden_widths.json"

NON_QFT_INPLACE = tuple(a for a in IN_PLACE_ADDERS if a != "QFT")


@pytest.mark.parametrize("algo", NON_QFT_INPLACE)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_inplace_adder_exhaustive(algo, n, oracle_runner):
    c = build_inplace_adder(algo, n)
    oracle_runner(
        c,
        {"a": range(1 << n), "b": range(1 << n)},
        lambda a, b: {"b": (a + b) % (1 << n)},
    )


def test_ttk_spec_example(oracle_runner):
    c = build_inplace_adder("TTK", 3)
    oracle_runner(c, {"a": [5], "b": [6]}, lambda a, b: {"b": 3})


def test_inplace_rejects_zero():
    for algo in IN_PLACE_ADDERS:
        with pytest.raises(CircuitError):
            build_inplace_adder(algo, 0)


def _qft_check(circuit, inputs, expected):
    regs = {r.name: r for r in circuit.data_registers}
    state = 0
    for name, v in inputs.items():
        state |= encode_register(v, regs[name])
    out = extract_basis(simulate_statevector(circuit, state))
    for q in circuit.ancilla_qubits:
        assert (out >> q) & 1 == 0
    for name, want in expected.items():
        assert register_value(out, regs[name]) == want


@pytest.mark.parametrize("n", [1, 2, 3])
def test_qft_inplace_adder_exhaustive(n):
    c = build_inplace_adder("QFT", n)
    for a in range(1 << n):
        for b in range(1 << n):
            _qft_check(c, {"a": a, "b": b}, {"a": a, "b": (a + b) % (1 << n)})


def test_qft_adder_spec_example():
    c = build_inplace_adder("QFT", 3)
    _qft_check(c, {"a": 2, "b": 7}, {"b": 1})


@pytest.mark.parametrize("algo", OUT_OF_PLACE_ADDERS)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_outofplace_adder_exhaustive(algo, n, oracle_runner):
    c = build_outofplace_adder(algo, n)
    oracle_runner(
        c,
        {"a": range(1 << n), "b": range(1 << n), "sum": [0]},
        lambda a, b, sum: {"a": a, "b": b, "sum": (a + b) % (1 << n)},
    )


def test_gidney_outofplace_spec_example(oracle_runner):
    c = build_outofplace_adder("Gidney", 4)
    oracle_runner(
        c, {"a": [9], "b": [9], "sum": [0]}, lambda a, b, sum: {"sum": 2}
    )


@pytest.mark.parametrize("algo", [a for a in CONST_ADDERS if a != "QFT"])
@pytest.mark.parametrize("n", [1, 3, 5])
def test_const_adder_exhaustive(algo, n, oracle_runner):
    k = spec_constant(n)
    c = build_const_adder(algo, n, k)
    oracle_runner(c, {"b": range(1 << n)}, lambda b: {"b": (b + k) % (1 << n)})


def test_const_adder_gidney_spec_example(oracle_runner):
    c = build_const_adder("ViaInPlace(Gidney)", 4, 15)
    oracle_runner(c, {"b": [1]}, lambda b: {"b": 0})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_qft_const_adder_exhaustive(n):
    for k in range(1 << n):
        c = build_const_adder("QFT", n, k)
        for b in range(1 << n):
            _qft_check(c, {"b": b}, {"b": (b + k) % (1 << n)})


def test_qft_const_adder_zero_is_identity():
    c = build_const_adder("QFT", 3, 0)
    for b in range(8):
        _qft_check(c, {"b": b}, {"b": b})


def test_const_adder_range_check():
    with pytest.raises(CircuitError):
        build_const_adder("ViaInPlace(TTK)", 3, 8)


@pytest.mark.parametrize("algo", NON_QFT_INPLACE)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_subtractor_exhaustive(algo, n, oracle_runner):
    c = build_subtractor(algo, n)
    oracle_runner(
        c,
        {"a": range(1 << n), "b": range(1 << n)},
        lambda a, b: {"b": (b - a) % (1 << n)},
    )


def test_subtractor_spec_example(oracle_runner):
    c = build_subtractor("TTK", 3)
    oracle_runner(c, {"a": [2], "b": [5]}, lambda a, b: {"b": 3})


@pytest.mark.parametrize("n", [2, 3])
def test_qft_subtractor(n):
    c = build_subtractor("QFT", n)
    for a in range(1 << n):
        for b in range(1 << n):
            _qft_check(c, {"a": a, "b": b}, {"b": (b - a) % (1 << n)})


@given(a=st.integers(0, 255), b=st.integers(0, 255))
@settings(max_examples=60, deadline=None)
def test_inplace_adders_random_n8(a, b):
    for algo in NON_QFT_INPLACE:
        c = build_inplace_adder(algo, 8)
        regs = {r.name: r for r in c.data_registers}
        from qarith.sim import simulate_permutation

        out = simulate_permutation(
            c, encode_register(a, regs["a"]) | encode_register(b, regs["b"])
        )
        assert register_value(out, regs["b"]) == (a + b) % 256
        assert register_value(out, regs["a"]) == a


def test_widths_match_golden():
    widths = {}
    for algo in IN_PLACE_ADDERS:
        for n in (4, 8):
            widths[f"inplace/{algo}/{n}"] = build_inplace_adder(algo, n).num_qubits
    for algo in OUT_OF_PLACE_ADDERS:
        for n in (4, 8):
            widths[f"outofplace/{algo}/{n}"] = build_outofplace_adder(algo, n).num_qubits
    for algo in CONST_ADDERS:
        for n in (4, 8):
            widths[f"const/{algo}/{n}"] = build_const_adder(
                algo, n, spec_constant(n)
            ).num_qubits
    if not GOLDEN.exists():
        GOLDEN.write_text(json.dumps(widths, indent=1, sort_keys=True) + "\n")
    golden = json.loads(GOLDEN.read_text())
    assert widths == golden


def test_inplace_width_accounting():
    # TTK is ancilla-free; CDKM uses exactly one ancilla.
    assert build_inplace_adder("TTK", 8).num_qubits == 16
    assert build_inplace_adder("CDKM", 8).num_qubits == 17


def test_ripple_t_count_linearity():
    for algo in RIPPLE_CARRY_ADDERS:
        for n in (64, 128, 256):
            t1 = lower_to_clifford_t(build_inplace_adder(algo, n)).t_count
            t2 = lower_to_clifford_t(build_inplace_adder(algo, 2 * n)).t_count
            assert 1.9 <= t2 / t1 <= 2.1, (algo, n, t2 / t1)


def test_counting_mode_tallies_match_recorded():
    from qarith.circuit import clear_block_cache
    from qarith.resources import count_raw

    clear_block_cache()
    for algo in IN_PLACE_ADDERS:
        rec = build_inplace_adder(algo, 5)
        cnt = build_inplace_adder(algo, 5, counting=True)
        raw = count_raw(rec)
        kinds = cnt.kinds
        assert kinds.get("CCX", 0) == raw.toffoli_count
        assert cnt.num_qubits == rec.num_qubits
        assert kinds.get("CNOT", 0) + kinds.get("SWAP", 0) == raw.cnot_count
        assert kinds.get("RZ", 0) + kinds.get("CPHASE", 0) == raw.rotation_count
