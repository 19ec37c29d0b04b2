"""Acceptance criteria A1 to A9.

Each test prints one ``A<k> PASS`` or ``A<k> FAIL`` line and asserts its runtime
budget.  The lines are also collected in ``SUMMARY`` and repeated at the end of the
pytest run by ``conftest.py``.
"""

import time
from fractions import Fraction

import test_properties as props
from nerveforms import catalog
from nerveforms.algebra import differentiate
from nerveforms.catalog import COEFFICIENTS
from nerveforms.chernweil import (
    InvariantPoly,
    bss_cochain,
    bss_cochain_ng,
    bss_generate,
    ch_cocycle_thm36,
    cs_transgress,
)
from nerveforms.scalars import Scalar, pi2_convert
from nerveforms.simplicial import PG, PT, Cochain, cup_cochains, d_doubleprime, d_prime, section_pullback, total_D
from nerveforms.suites import SUITES, SuiteOptions
from nerveforms.torus import torus_bss_c, torus_bss_ch, torus_cs_c, torus_cs_c_square, torus_cs_ch


SUMMARY = []


def report(label, checks, started, budget):
    elapsed = time.perf_counter() - started
    failed = [name for name, ok in checks if not ok]
    ok = not failed and elapsed < budget
    detail = f"{elapsed:.1f}s of {budget}s"
    if failed:
        detail += "; failed: " + ", ".join(failed)
    line = f"{label} {'PASS' if ok else 'FAIL'} ({detail})"
    SUMMARY.append(line)
    print(line)
    assert not failed, failed
    assert elapsed < budget


def test_a1_powers_of_first_chern_class():
    start = time.perf_counter()
    checks = []
    c1 = catalog.c1_power_cochain(1)
    power = c1
    for p in range(1, 4):
        if p > 1:
            power = cup_cochains(power, c1)
        stated = catalog.c1_power_cochain(p)
        sign = (-1) ** (p * (p - 1) // 2)
        coef = Scalar.two_pi_i(-p) * sign
        checks.append((f"coefficient p={p}", next(iter(stated[p].monomials()))[0].scalar == coef))
        checks.append((f"cup power p={p}", power == stated))
        checks.append((f"closed p={p}", total_D(stated).is_zero()))
    report("A1", checks, start, 5)


def test_a2_third_chern_class_on_nerve():
    start = time.perf_counter()
    stated = catalog.ng_c3_cochain()
    ch = {k: bss_cochain_ng(InvariantPoly.ch(k)) for k in (1, 2, 3)}
    combo = 2 * ch[3] - cup_cochains(ch[2], ch[1]) \
        + Fraction(1, 6) * cup_cochains(cup_cochains(ch[1], ch[1]), ch[1])
    checks = [
        ("stated cochain closed", total_D(stated).is_zero()),
        ("pipeline combination closed", total_D(combo).is_zero()),
        ("pipeline combination differs", combo != stated),
    ]
    report("A2", checks, start, 120)


def test_a3_torus_transgressions():
    start = time.perf_counter()
    checks = []
    for p in range(1, 5):
        for n in range(1, 5):
            for fam, cs, bss in (("ch", torus_cs_ch, torus_bss_ch), ("c", torus_cs_c, torus_bss_c)):
                T = cs(p, n)
                lhs = total_D(Cochain(PT, {p - 1: T}))
                checks.append((f"{fam} p={p} n={n}", lhs == Cochain(PT, {p: bss(p, n)})))
        checks.append((f"closed form p={p}", torus_cs_c(p, p) == torus_cs_c_square(p)))
    report("A3", checks, start, 5)


def test_a4_combinatorial_third_character():
    start = time.perf_counter()
    stated = catalog.ch3_components()
    checks = [(f"q={q}", ch_cocycle_thm36(3, q) == stated[3 - q]) for q in (2, 1, 0)]
    shown = {"C15": Fraction(1, 10), "C24_a": Fraction(1, 2), "C24_b": Fraction(1, 4), "C24_c": Fraction(1, 2),
             "C33": Fraction(1, 2)}
    for key, value in shown.items():
        checks.append((f"coefficient {key}", COEFFICIENTS[key] == value))
    report("A4", checks, start, 30)


def test_a5_chern_simons_components():
    start = time.perf_counter()
    C, T = catalog.ch3_components(), catalog.ch3_cs_components()
    checks = [
        ("d'' TC05 = 0", d_doubleprime(T[0], 0).is_zero()),
        ("C15", d_prime(T[0], PG, 0) + d_doubleprime(T[1], 1) == C[1]),
        ("C24", d_prime(T[1], PG, 1) + d_doubleprime(T[2], 2) == C[2]),
        ("C33", d_prime(T[2], PG, 2) == C[3]),
    ]
    for pid, kind, lvl, x, rhs in catalog.ch3_proof_equations():
        lhs = d_prime(x, PG, lvl) if kind == "d'" else differentiate(x)
        checks.append((f"proof step {pid}", lhs == rhs))
    report("A5", checks, start, 60)


def test_a6_euler_transgression():
    start = time.perf_counter()
    pf = InvariantPoly.pf()
    stated = catalog.euler_cs_components()
    checks = []
    for p, kind, rat in ((0, "03", Fraction(-1, 96)), (1, "12", Fraction(-1, 64))):
        gen = cs_transgress(pf, p)
        checks.append((f"TE level {p}", gen == stated[p]))
        checks.append((f"coefficient {rat}/pi^2", gen == pi2_convert(rat, -2) * catalog.euler_sum(kind)))
    rep = SUITES["euler"](SuiteOptions(numeric=False))
    entry = next(e for e in rep.entries if e.id == "D(TE) = E")
    checks.append(("D(TE) = E up to one global sign", entry.passed))
    checks.append(("convention reported", "global sign" in entry.note))
    print(f"A6 note: {entry.note}")
    report("A6", checks, start, 60)


def test_a7_pipeline_ground_truth():
    start = time.perf_counter()
    ch1 = InvariantPoly.ch(1)
    checks = []
    for p, P in ((1, ch1), (2, ch1 * ch1)):
        ng = section_pullback(Cochain(PG, {p: bss_generate(P, p)}))
        checks.append((f"p={p}", ng == catalog.c1_power_cochain(p)))
    report("A7", checks, start, 30)


def _numeric_entries(rep):
    return [e for e in rep.entries if "[numeric" in e.id]


def test_a8_numeric_oracle(monkeypatch):
    start = time.perf_counter()
    checks = []
    for name in ("ng-c1", "ng-c3", "torus", "thm36", "ch3-cs", "euler"):
        opts = SuiteOptions(seed=0, trials=20, tol=1e-9, sizes=(2, 3))
        rep = SUITES[name](opts)
        numeric = _numeric_entries(rep)
        checks.append((f"{name} has numeric checks", bool(numeric)))
        checks.append((f"{name} numeric", all(e.passed for e in numeric)))
    monkeypatch.setitem(COEFFICIENTS, "C15", Fraction(1, 9))
    rep = SUITES["thm36"](SuiteOptions(q=2, p=1))
    status = {e.id: e.passed for e in rep.entries}
    checks.append(("mutation caught symbolically", status["generated (p=3, q=2) = stated C1,5"] is False))
    checks.append(("mutation caught numerically",
                   status["generated (p=3, q=2) = stated C1,5 [numeric n=3]"] is False))
    print("A8 note: the mutated fifth-power term vanishes identically at n=2, "
          f"numeric n=2 entry passed={status['generated (p=3, q=2) = stated C1,5 [numeric n=2]']}")
    report("A8", checks, start, 600)


PROPERTY_TESTS = [
    props.test_d_squared_vanishes,
    props.test_d_prime_squared_vanishes,
    props.test_face_and_form_differentials_anticommute,
    props.test_face_pullback_commutes_with_d,
    props.test_gamma_pullback_commutes_with_d,
    props.test_inverse_cancellation_is_confluent,
    props.test_cyclic_normal_form_is_idempotent,
    props.test_cyclic_normal_form_ignores_rotation,
    props.test_degree_is_additive,
    props.test_json_round_trip,
    props.test_parse_print_round_trip,
    props.test_sum_is_independent_of_order,
]


def test_a9_structural_properties():
    start = time.perf_counter()
    checks = []
    for fn in PROPERTY_TESTS:
        try:
            fn()
            checks.append((fn.__name__, True))
        except Exception as exc:  # noqa: BLE001 - reported as a failed criterion
            checks.append((f"{fn.__name__}: {type(exc).__name__}", False))
    report("A9", checks, start, 60)

