"""Regression harness binding the comparative claims to executable checks.

Each acceptance criterion is one ClaimCheck.  Comparative claims stated on
physical qubits/runtime are checked on logical proxies (qubit count,
T count); where that substitution happens the claim description says so.
The claim list is closed: `run_claims` fails its self-audit if the checks
drift out of sync with EXPECTED_CLAIM_IDS.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, asdict

from . import catalog
from .adders import IN_PLACE_ADDERS, OUT_OF_PLACE_ADDERS, RIPPLE_CARRY_ADDERS
from .analysis import SweepSeries, find_tipping_point, fit_power_law, log_grid
from .circuit import Circuit, adjoint, encode_register, register_value
from .modexp import build_modexp, optimal_window
from .muldiv import DIVIDER_ADDERS, divider_design_space
from .physical import PhysicalParams, pareto_frontier
from .resources import lower, lower_summary
from .sim import (
    extract_basis,
    is_bijection,
    permutation_table,
    simulate_permutation,
    simulate_statevector,
)

EXPECTED_CLAIM_IDS = tuple(f"AC{i}" for i in range(1, 12))


@dataclass
class ClaimCheck:
    claim_id: str
    description: str
    status: str  # "pass" | "fail" | "skipped"
    observed: str

    def as_dict(self) -> dict:
        return asdict(self)


def _claim(claim_id, description, ok, observed) -> ClaimCheck:
    return ClaimCheck(claim_id, description, "pass" if ok else "fail", observed)


def _verify_all(specs, seed) -> tuple[bool, int, list[str]]:
    failures = []
    total = 0
    for op, algo, n_lo, n_hi in specs:
        for n in range(n_lo, n_hi + 1):
            report = catalog.verify(op, algo, n, seed)
            total += report.cases
            if not report.ok:
                failures.append(f"{op}/{algo} n={n}: {report.failure}")
    return not failures, total, failures


def _check_adders(seed) -> ClaimCheck:
    specs = []
    for algo in IN_PLACE_ADDERS:
        specs.append(("inplace_adder", algo, 2 if algo == "QFT" else 1,
                      5 if algo == "QFT" else 6))
        specs.append(("subtractor", algo, 2 if algo == "QFT" else 1,
                      5 if algo == "QFT" else 6))
    for algo in OUT_OF_PLACE_ADDERS:
        specs.append(("outofplace_adder", algo, 1, 6))
    for algo in ("ViaInPlace(Gidney)", "ViaInPlace(TTK)", "ViaInPlace(CDKM)",
                 "ViaInPlace(DKRS)"):
        specs.append(("const_adder", algo, 1, 6))
    specs.append(("const_adder", "QFT", 2, 5))
    start = time.monotonic()
    ok, cases, failures = _verify_all(specs, seed)
    dt = time.monotonic() - start
    ok = ok and dt < 600.0
    return _claim(
        "AC1",
        "Adder oracle equivalence: exhaustive basis-state checks for every "
        "in-place, out-of-place, constant adder and subtractor (n 1..6; QFT "
        "variants via statevector, n 2..5), within the 10-minute budget",
        ok,
        failures[0] if failures else f"{cases} cases, all match, {dt:.1f}s",
    )


def _check_multipliers(seed) -> ClaimCheck:
    specs = [
        ("multiplier", "Schoolbook", 2, 4),
        ("multiplier", "Karatsuba", 2, 4),
        ("multiplier", "Karatsuba(2)", 2, 4),  # forces real recursion
        ("multiplier", "Karatsuba-8", 8, 8),   # randomized 1000 cases
    ]
    ok, cases, failures = _verify_all(specs, seed)
    return _claim(
        "AC2",
        "Multiplier equivalence: Schoolbook and Karatsuba exhaustive for "
        "n 2..4 (plus piece-size-2 recursion), Karatsuba-8 with 1000 seeded "
        "random cases at n=8",
        ok,
        failures[0] if failures else f"{cases} cases, all products equal a*b",
    )


def _check_dividers(seed) -> ClaimCheck:
    specs = [
        ("divider", f"{kind}+{adder}", 2, 4)
        for kind in ("Restoring", "NonRestoring")
        for adder in DIVIDER_ADDERS
    ]
    ok, cases, failures = _verify_all(specs, seed)
    return _claim(
        "AC3",
        "Divider equivalence: both kinds x {Gidney, TTK, CDKM}, exhaustive "
        "over all a and b > 0 for n 2..4, outputs (a mod b, floor(a/b))",
        ok,
        failures[0] if failures else f"{cases} cases (b > 0), all match",
    )


def _check_modexp(seed) -> ClaimCheck:
    failures = []
    cases = 0
    for n in (2, 3, 4):
        N = (1 << n) - 1
        coprime = [a for a in range(2, N) if math.gcd(a, N) == 1]
        for algo in ("LYY", "LYYWindowed(1)", "LYYWindowed(2)", "LYYWindowed(3)"):
            for a in coprime:
                c = build_modexp(algo, a, N, n)
                regs = {r.name: r for r in c.data_registers}
                anc = 0
                for qb in c.ancilla_qubits:
                    anc |= 1 << qb
                for x in range(1 << n):
                    out = simulate_permutation(c, encode_register(x, regs["x"]))
                    cases += 1
                    got = register_value(out, regs["out"])
                    if got != pow(a, x, N) or (out & anc):
                        failures.append(
                            f"{algo} a={a} N={N} x={x}: out={got}, "
                            f"want {pow(a, x, N)}"
                        )
    return _claim(
        "AC4",
        "ModExp equivalence: LYY and LYYWindowed(w), w in {1,2,3}, n 2..4, "
        "N = 2^n - 1, every coprime a, all x match a^x mod N",
        not failures,
        failures[0] if failures else f"{cases} cases, all match",
    )


def _check_structure(seed) -> ClaimCheck:
    from .circuit import ALL_KINDS

    sample = [
        catalog.build("inplace_adder", "TTK", 5),
        catalog.build("inplace_adder", "Gidney", 3),
        catalog.build("inplace_adder", "CDKM", 4),
        catalog.build("outofplace_adder", "DKRS", 3),
        catalog.build("multiplier", "Karatsuba(2)", 2),
        catalog.build("divider", "NonRestoring+TTK", 2),
        catalog.build("modexp", "LYYWindowed(2)", 3),
        catalog.build("table_lookup", "UnaryIteration", 3),
    ]
    problems = []
    for c in sample:
        # The alphabet is measurement- and reset-free by construction; the
        # scan guards against alphabet drift.
        bad = [g.kind for g in c.gates if g.kind not in ALL_KINDS]
        if bad:
            problems.append(f"{c.name}: non-unitary kinds {bad}")
        if c.num_qubits <= 16:
            combined = Circuit(
                num_qubits=c.num_qubits, gates=c.gates + adjoint(c).gates
            )
            table = permutation_table(combined)
            if not all(int(v) == i for i, v in enumerate(table)):
                problems.append(f"{c.name}: adjoint composition is not identity")
        else:
            for basis in (0, 1, (1 << c.num_qubits) - 1):
                combined = Circuit(
                    num_qubits=c.num_qubits, gates=c.gates + adjoint(c).gates
                )
                if simulate_permutation(combined, basis) != basis:
                    problems.append(f"{c.name}: adjoint composition broken")
                    break
    qft = catalog.build("inplace_adder", "QFT", 3)
    qft_combined = Circuit(num_qubits=6, gates=qft.gates + adjoint(qft).gates)
    for basis in range(64):
        if extract_basis(simulate_statevector(qft_combined, basis)) != basis:
            problems.append("QFT adder adjoint composition broken")
            break
    return _claim(
        "AC5",
        "Structural invariants: unitary gate alphabet (no measurement or "
        "reset), adjoint composition is the identity permutation, ancillas "
        "end clean on every tested input (enforced by every oracle check)",
        not problems,
        problems[0] if problems else "alphabet scan + adjoint identity hold",
    )


SLOPE_RANGES = {
    "ripple_adder": (0.9, 1.15),
    "schoolbook": (1.85, 2.3),
    "karatsuba8": (1.4, 1.95),
    "modexp_opt": (2.6, 3.3),
}


def slope_of(op_class, algo, grid) -> float:
    points = tuple(
        (n, float(catalog.measure(op_class, algo, n).t_count)) for n in grid
    )
    slope, _ = fit_power_law(SweepSeries(f"{op_class}/{algo}", points))
    return slope


def _check_slopes(seed) -> ClaimCheck:
    start = time.monotonic()
    observed = []
    ok = True

    def record(label, slope, lo, hi):
        nonlocal ok
        inside = lo <= slope <= hi
        ok = ok and inside
        observed.append(f"{label}={slope:.3f}{'' if inside else f' OUTSIDE [{lo},{hi}]'}")

    lo, hi = SLOPE_RANGES["ripple_adder"]
    for algo in RIPPLE_CARRY_ADDERS:
        record(f"adder[{algo}]", slope_of("inplace_adder", algo, log_grid(16, 4096)), lo, hi)
    lo, hi = SLOPE_RANGES["schoolbook"]
    record("schoolbook", slope_of("multiplier", "Schoolbook", log_grid(16, 1024)), lo, hi)
    lo, hi = SLOPE_RANGES["karatsuba8"]
    record(
        "karatsuba8",
        slope_of("multiplier", "Karatsuba-8", [1 << k for k in range(5, 13)]),
        lo, hi,
    )
    lo, hi = SLOPE_RANGES["modexp_opt"]
    record("modexp_opt", slope_of("modexp", "LYYWindowedOpt", log_grid(8, 128)), lo, hi)
    dt = time.monotonic() - start
    ok = ok and dt < 3600.0
    return _claim(
        "AC6",
        "Asymptotic T-count slopes over the 2^(1/4) grid: ripple adders in "
        "[0.9, 1.15], Schoolbook in [1.85, 2.3], Karatsuba-8 (power-of-2 "
        "2^5..2^12) in [1.4, 1.95], windowed-opt ModExp (2^3..2^7) in "
        "[2.6, 3.3]; T-count is the logical proxy for the runtime slopes; "
        "sweep must finish inside an hour",
        ok,
        "; ".join(observed) + f" ({dt:.1f}s)",
    )


def _check_tipping(seed) -> ClaimCheck:
    grid = [1 << k for k in range(3, 14)]
    school = tuple(
        (n, float(catalog.measure("multiplier", "Schoolbook", n).toffoli_count))
        for n in grid
    )
    kara = tuple(
        (n, float(catalog.measure("multiplier", "Karatsuba-8", n).toffoli_count))
        for n in grid
    )
    n_star = find_tipping_point(
        SweepSeries("Schoolbook", school), SweepSeries("Karatsuba-8", kara)
    )
    ok = n_star is not None and n_star <= (1 << 13)
    return _claim(
        "AC7",
        "Tipping point: Karatsuba-8 Toffoli count drops below Schoolbook at "
        "some power-of-2 n* <= 2^13 and stays below through the grid",
        ok,
        f"n* = {n_star}" if n_star else "no sustained crossover up to 2^13",
    )


def _check_window_optimum(seed) -> ClaimCheck:
    observed = []
    ok = True
    for n in (16, 32):
        costs = {
            w: catalog.measure("modexp", f"LYYWindowed({w})", n).t_count
            for w in range(1, min(n, 16) + 1)
        }
        best = min(costs, key=lambda w: (costs[w], w))
        predicted = optimal_window(n)
        ok = ok and abs(best - predicted) <= 3
        observed.append(f"n={n}: argmin w={best}, formula w={predicted}")
    return _claim(
        "AC8",
        "Window optimum: brute-force argmin of LYYWindowed(w) T-count over "
        "w in 1..min(n,16) at n in {16, 32} lies within 3 of "
        "floor(2 log2 n + 0.5)",
        ok,
        "; ".join(observed),
    )


def _check_design_space(seed) -> ClaimCheck:
    observed = []
    ok = True
    for n in (8, 16, 32):
        rows = divider_design_space(n)
        best_spec, best_counts = rows[0]
        if best_spec.adder != "TTK":
            ok = False
            observed.append(f"n={n}: min-qubit adder {best_spec.adder}")
        else:
            observed.append(
                f"n={n}: min qubits {best_counts.qubits} ({best_spec.name})"
            )
        tmap = {(s.kind, s.adder): c.t_count for s, c in rows}
        for adder in DIVIDER_ADDERS:
            if not tmap[("NonRestoring", adder)] < tmap[("Restoring", adder)]:
                ok = False
                observed.append(f"n={n}: NR not below R for {adder}")
    return _claim(
        "AC9",
        "Design-space ordering among the 6 divider configurations at n in "
        "{8, 16, 32}: a TTK-based divider minimises logical qubit count and "
        "non-restoring beats restoring on T-count at equal adder (logical "
        "proxies for the physical-qubit/runtime claims)",
        ok,
        "; ".join(observed),
    )


def _frontier(op_class, algo, n, params):
    counts = lower(catalog.build(op_class, algo, n))
    return pareto_frontier(counts, params)


def _check_pareto(seed, params) -> ClaimCheck:
    problems = []
    fronts = {
        ("multiplier", "Schoolbook", 32): None,
        ("const_adder", "QFT", 32): None,
        ("const_adder", "ViaInPlace(Gidney)", 32): None,
        ("divider", "NonRestoring+TTK", 16): None,
    }
    for key in fronts:
        front = _frontier(*key, params)
        fronts[key] = front
        for prev, nxt in zip(front, front[1:]):
            if not (
                nxt.runtime_seconds > prev.runtime_seconds
                and nxt.physical_qubits < prev.physical_qubits
            ):
                problems.append(f"{key}: dominated or unordered point")
                break
    ratio = {}
    for key in (("const_adder", "QFT", 32), ("const_adder", "ViaInPlace(Gidney)", 32)):
        front = fronts[key]
        ratio[key[1]] = front[-1].runtime_seconds / front[0].runtime_seconds
    if not ratio["QFT"] > ratio["ViaInPlace(Gidney)"]:
        problems.append(
            f"QFT ratio {ratio['QFT']:.1f} not above Gidney "
            f"{ratio['ViaInPlace(Gidney)']:.1f}"
        )
    school_points = len(fronts[("multiplier", "Schoolbook", 32)])
    if school_points > 8:
        problems.append(f"Schoolbook n=32 frontier has {school_points} points")
    return _claim(
        "AC10",
        "Pareto properties: every frontier is non-dominated and ordered; the "
        "QFT constant adder frontier at n=32 spans a strictly larger max/min "
        "runtime ratio than the Gidney-based constant adder frontier",
        not problems,
        problems[0] if problems else (
            f"ratios: QFT {ratio['QFT']:.1f} vs Gidney "
            f"{ratio['ViaInPlace(Gidney)']:.1f}; Schoolbook frontier "
            f"{school_points} points"
        ),
    )


def _check_non_reproduction(seed) -> ClaimCheck:
    return _claim(
        "AC11",
        "Explicit non-reproduction: absolute physical qubit counts and "
        "runtimes of the reference figures are not reproduced bit-exact; the "
        "independent cost model plus the property suite above substitutes "
        "for figure matching",
        True,
        "documented model boundary; no figure-matching assertions exist",
    )


def run_claims(params: PhysicalParams | None = None,
               seed: int = catalog.DEFAULT_SEED) -> list[ClaimCheck]:
    """Execute every acceptance criterion at desk scale."""
    params = params or PhysicalParams()
    checks = [
        _check_adders(seed),
        _check_multipliers(seed),
        _check_dividers(seed),
        _check_modexp(seed),
        _check_structure(seed),
        _check_slopes(seed),
        _check_tipping(seed),
        _check_window_optimum(seed),
        _check_design_space(seed),
        _check_pareto(seed, params),
        _check_non_reproduction(seed),
    ]
    ids = [c.claim_id for c in checks]
    if tuple(ids) != EXPECTED_CLAIM_IDS or len(set(ids)) != len(ids):
        raise RuntimeError(
            f"claim self-audit failed: got {ids}, expected {EXPECTED_CLAIM_IDS}"
        )
    return checks


def claims_markdown(checks: list[ClaimCheck]) -> str:
    lines = ["# Acceptance claim report", ""]
    lines.append("| claim | status | observed |")
    lines.append("|-------|--------|----------|")
    for c in checks:
        lines.append(f"| {c.claim_id} | {c.status} | {c.observed} |")
    lines.append("")
    for c in checks:
        lines.append(f"## {c.claim_id}")
        lines.append(c.description)
        lines.append("")
    return "\n".join(lines)


def claims_json(checks: list[ClaimCheck]) -> str:
    return json.dumps([c.as_dict() for c in checks], indent=2) + "\n"


def write_reports(checks, md_path, json_path) -> None:
    with open(md_path, "w") as fh:
        fh.write(claims_markdown(checks))
    with open(json_path, "w") as fh:
        fh.write(claims_json(checks))
