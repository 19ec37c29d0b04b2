"""Verification suites: each one checks a family of identities symbolically and,
optionally, with the numeric oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

from . import catalog
from .algebra import AlgebraElement, differentiate
from .chernweil import (
    InvariantPoly,
    bss_cochain,
    bss_cochain_ng,
    bss_generate,
    ch_cocycle_thm36,
    ch_cocycle_total,
    cs_cochain,
    cs_transgress,
)
from .oracle import (
    SectionContext,
    eval_cup,
    eval_d_doubleprime,
    eval_d_prime,
    eval_form,
    random_identity_check,
)
from .report import VerificationReport
from .scalars import pi2_convert
from .simplicial import NG, PG, PT, Cochain, cup_cochains, d_doubleprime, d_prime, section_pullback, total_D
from .textio import scalar_latex
from .torus import torus_bss_c, torus_bss_ch, torus_cs_c, torus_cs_ch, verify_torus

__all__ = ["SuiteOptions", "SUITES", "run_suite", "verify_ch3", "verify_euler", "verify_examples",
           "verify_thm36"]


@dataclass
class SuiteOptions:
    p: Optional[int] = None
    n: Optional[int] = None
    q: Optional[int] = None
    seed: int = 0
    trials: int = 20
    tol: float = 1e-9
    numeric: bool = True
    sizes: Tuple[int, ...] = (2, 3)


def _numeric(rep: VerificationReport, id: str, lhs, rhs, opts: SuiteOptions,
             degree: Optional[int] = None, sizes: Optional[Sequence[int]] = None) -> None:
    if not opts.numeric:
        return
    for n in sizes or opts.sizes:
        sub = random_identity_check(lhs, rhs, trials=opts.trials, tol=opts.tol, n=n, seed=opts.seed,
                                    degree=degree, id=f"{id} [numeric n={n}]")
        rep.extend(sub)


def _numeric_D(rep: VerificationReport, id: str, X: Cochain, target: Cochain, opts: SuiteOptions,
               sizes: Optional[Sequence[int]] = None) -> None:
    """Numeric check of ``D X = target`` level by level (faces act on contexts)."""
    if not opts.numeric or X.is_zero():
        return
    total = X.total_degree()
    levels = X.levels()
    for L in range(levels[0], levels[-1] + 2):
        prev, cur, tgt = X[L - 1], X[L], target[L]

        def lhs(c, prev=prev, L=L):
            return eval_d_prime(prev, X.space, L - 1, c) if prev else 0j

        def rhs(c, cur=cur, tgt=tgt, L=L):
            v = eval_form(tgt, c) if tgt else 0j
            return v - (eval_d_doubleprime(cur, L, c) if cur else 0j)

        _numeric(rep, f"{id} level {L}", lhs, rhs, opts, degree=total + 1 - L, sizes=sizes)


# -- ng-c1: powers of the first Chern class ----------------------------------------------

def verify_examples(opts: SuiteOptions = SuiteOptions()) -> VerificationReport:
    rep = VerificationReport("ng-c1", seed=opts.seed)
    top = opts.p or 3
    c1 = catalog.c1_power_cochain(1)
    cup = c1
    for p in range(1, top + 1):
        if p > 1:
            cup = cup_cochains(cup, c1)
        target = catalog.c1_power_cochain(p)
        rep.check_equal(f"c1 cup^{p} = stated cochain", cup, target)
        rep.check_equal(f"D(c1^{p}) = 0", lambda: total_D(target), Cochain(NG))
        if p > 1:
            prev = catalog.c1_power(p - 1)
            one = catalog.c1_power(1)
            _numeric(rep, f"c1 cup^{p}", lambda c, prev=prev, p=p: eval_cup(prev, p - 1, one, 1, c),
                     catalog.c1_power(p), opts, degree=p)
        _numeric_D(rep, f"D(c1^{p}) = 0", target, Cochain(NG), opts)
    ch1 = InvariantPoly.ch(1)
    for p in range(1, top + 1):
        P = ch1
        for _ in range(p - 1):
            P = P * ch1
        pg = bss_generate(P, p)
        ng = section_pullback(Cochain(PG, {p: pg}))
        rep.check_equal(f"pipeline ch1^{p} on NG = stated cochain", ng, catalog.c1_power_cochain(p))
        _numeric(rep, f"pipeline ch1^{p} on NG", lambda c, pg=pg, p=p: eval_form(pg, SectionContext(c, p)),
                 catalog.c1_power(p), opts)
    return rep


# -- ng-c3: the third Chern class on NG ------------------------------------------------------

def verify_ng_c3(opts: SuiteOptions = SuiteOptions()) -> VerificationReport:
    rep = VerificationReport("ng-c3", seed=opts.seed)
    stated = catalog.ng_c3_cochain()
    rep.check_equal("D(c15 + c24 + c33) = 0", lambda: total_D(stated), Cochain(NG))
    _numeric_D(rep, "D(c15 + c24 + c33) = 0", stated, Cochain(NG), opts)

    ch = {k: bss_cochain_ng(InvariantPoly.ch(k)) for k in (1, 2, 3)}
    combo = 2 * ch[3] - cup_cochains(ch[2], ch[1]) \
        + Fraction(1, 6) * cup_cochains(cup_cochains(ch[1], ch[1]), ch[1])
    rep.check_equal("D(2ch3 - ch2 cup ch1 + ch1^3/6) = 0", lambda: total_D(combo), Cochain(NG))
    _numeric_D(rep, "D(2ch3 - ch2 cup ch1 + ch1^3/6) = 0", combo, Cochain(NG), opts)
    differs = combo != stated
    rep.add("2ch3 - ch2 cup ch1 + ch1^3/6 differs from c15 + c24 + c33", differs,
            None if differs else "the two cochains coincide",
            "levels that differ: " + ", ".join(str(p) for p in sorted(set(combo.levels()) | set(stated.levels()))
                                              if combo[p] != stated[p]))
    c3 = bss_cochain_ng(InvariantPoly.chern_class(3))
    same = c3 == stated
    rep.add("diagnostic: stated c3 = s*(I_Delta(c3(Omega)))", True, None,
            "coincide" if same else "differ (diagnostic only)")
    return rep


# -- torus ----------------------------------------------------------------------------------

def verify_torus_suite(opts: SuiteOptions = SuiteOptions()) -> VerificationReport:
    rep = VerificationReport("torus", seed=opts.seed)
    ps = [opts.p] if opts.p else range(1, 5)
    ns = [opts.n] if opts.n else range(1, 5)
    for p in ps:
        for n in ns:
            rep.extend(verify_torus(p, n), prefix=f"(p={p}, n={n}) ")
            for fam, cs, bss in (("ch", torus_cs_ch, torus_bss_ch), ("c", torus_cs_c, torus_bss_c)):
                T, B = cs(p, n), bss(p, n)
                _numeric(rep, f"(p={p}, n={n}) {fam}{p}: d'T = cocycle",
                         lambda c, T=T, p=p: eval_d_prime(T, PT, p - 1, c), B, opts, degree=p, sizes=(n,))
    return rep


# -- thm36: the combinatorial ch_3 cocycle -------------------------------------------------

def verify_thm36(opts: SuiteOptions = SuiteOptions()) -> VerificationReport:
    rep = VerificationReport("thm36", seed=opts.seed)
    stated = catalog.ch3_components()
    chosen = None
    for conv in ("interior", "cyclic"):
        ok = all(ch_cocycle_thm36(3, q, conv) == stated[3 - q] for q in range(3))
        if ok:
            chosen = conv
            break
    rep.add("insertion-slot convention reproduces all three components", chosen is not None, None,
            f"convention: {chosen}" if chosen else "no convention matched")
    conv = chosen or "cyclic"
    for q in ([opts.q] if opts.q is not None else range(3)):
        gen = ch_cocycle_thm36(3, q, conv)
        rep.check_equal(f"generated (p=3, q={q}) = stated C{3 - q},{3 + q}", gen, stated[3 - q],
                        note=f"convention: {conv}")
        _numeric(rep, f"generated (p=3, q={q}) = stated C{3 - q},{3 + q}", gen, stated[3 - q], opts)
    for p in range(1, (opts.p or 3) + 1):
        tot = ch_cocycle_total(p, conv)
        rep.check_equal(f"D(ch{p} combinatorial cocycle) = 0", lambda: total_D(tot), Cochain(PG))
        _numeric_D(rep, f"D(ch{p} combinatorial cocycle) = 0", tot, Cochain(PG), opts)
        same = tot == bss_cochain(InvariantPoly.ch(p))
        rep.add(f"diagnostic: ch{p} combinatorial = I_Delta(ch{p}(Omega))", True, None,
                "coincide" if same else "differ (diagnostic only)")
    return rep


# -- ch3-cs: Chern-Simons form of ch_3 --------------------------------------------------------

def verify_ch3(opts: SuiteOptions = SuiteOptions()) -> VerificationReport:
    rep = VerificationReport("ch3-cs", seed=opts.seed)
    C = catalog.ch3_components()
    T = catalog.ch3_cs_components()
    rep.check_equal("d'' TC05 = 0", d_doubleprime(T[0], 0), AlgebraElement.zero())
    rep.check_equal("d' TC05 + d'' TC14 = C15", d_prime(T[0], PG, 0) + d_doubleprime(T[1], 1), C[1])
    rep.check_equal("d' TC14 + d'' TC23 = C24", d_prime(T[1], PG, 1) + d_doubleprime(T[2], 2), C[2])
    rep.check_equal("d' TC23 = C33", d_prime(T[2], PG, 2), C[3])
    for id, (a, b, lvl) in {"d' TC05 + d'' TC14 = C15": (0, 1, 1),
                            "d' TC14 + d'' TC23 = C24": (1, 2, 2)}.items():
        _numeric(rep, id, lambda c, a=a, b=b: eval_d_prime(T[a], PG, a, c) + eval_d_doubleprime(T[b], b, c),
                 C[lvl], opts)
    _numeric(rep, "d' TC23 = C33", lambda c: eval_d_prime(T[2], PG, 2, c), C[3], opts)
    _numeric(rep, "d'' TC05 = 0", lambda c: eval_d_doubleprime(T[0], 0, c), lambda c: 0j, opts, degree=6)
    for pid, kind, lvl, x, rhs in catalog.ch3_proof_equations():
        lhs = d_prime(x, PG, lvl) if kind == "d'" else differentiate(x)
        rep.check_equal(f"proof step: {pid}", lhs, rhs)
        if kind == "d'":
            _numeric(rep, f"proof step: {pid}", lambda c, x=x, lvl=lvl: eval_d_prime(x, PG, lvl, c), rhs, opts)
        else:
            _numeric(rep, f"proof step: {pid}", lambda c, x=x: eval_d_doubleprime(x, 0, c), rhs, opts,
                     degree=x.degree() + 1)
    rep.check_equal("D(TC) = C", lambda: total_D(catalog.ch3_cs_cochain()), catalog.ch3_cochain())
    _numeric_D(rep, "D(TC) = C", catalog.ch3_cs_cochain(), catalog.ch3_cochain(), opts)
    rep.check_equal("D(C15 + C24 + C33) = 0", lambda: total_D(catalog.ch3_cochain()), Cochain(PG))
    _numeric_D(rep, "D(C15 + C24 + C33) = 0", catalog.ch3_cochain(), Cochain(PG), opts)
    same = catalog.ch3_cs_cochain() == cs_cochain(InvariantPoly.ch(3))
    rep.add("diagnostic: stated TC = degree-3 transgression", True, None,
            "coincide" if same else "differ (diagnostic only)")
    return rep


# -- euler --------------------------------------------------------------------------------

def _coef_text(c: Fraction, k: int) -> str:
    neg, body = scalar_latex(pi2_convert(c, k))
    return ("-" if neg else "") + body


def verify_euler(opts: SuiteOptions = SuiteOptions()) -> VerificationReport:
    rep = VerificationReport("euler", seed=opts.seed)
    pf = InvariantPoly.pf()
    stated = catalog.euler_cs_components()
    for p, kind in ((0, "03"), (1, "12")):
        gen = cs_transgress(pf, p)
        coef = catalog.COEFFICIENTS["TE" + kind]
        rep.check_equal(f"transgression level {p} = stated TE{kind[0]},{kind[1]}", gen, stated[p],
                        note=f"coefficient {_coef_text(coef, -2)}")
        expected_rat = Fraction(-1, 96) if p == 0 else Fraction(-1, 64)
        expected = pi2_convert(expected_rat, -2) * catalog.euler_sum(kind)
        ok = gen == expected
        rep.add(f"coefficient {_coef_text(expected_rat, -2)}", ok, None if ok else str(gen - expected))
        _numeric(rep, f"transgression level {p} = stated TE{kind[0]},{kind[1]}", gen, stated[p], opts,
                 sizes=(4,))
    TE = catalog.euler_cs_cochain()
    E = bss_cochain(pf)
    rep.check_equal("D(E) = 0", lambda: total_D(E), Cochain(PG))
    DT = total_D(TE)
    sign = "+1" if DT == E else ("-1" if DT == -E else None)
    rep.add("D(TE) = E", sign is not None, None if sign else str((DT - E).components),
            f"closes with global sign {sign} under D = d' + (-1)^p d" if sign else "no global sign closes")
    target = E if sign != "-1" else -E
    _numeric_D(rep, "D(TE) = E", TE, target, opts, sizes=(4,))
    return rep


SUITES: Dict[str, Callable[[SuiteOptions], VerificationReport]] = {
    "ng-c1": verify_examples,
    "ng-c3": verify_ng_c3,
    "torus": verify_torus_suite,
    "thm36": verify_thm36,
    "ch3-cs": verify_ch3,
    "euler": verify_euler,
}


def run_suite(name: str, opts: SuiteOptions = SuiteOptions()) -> VerificationReport:
    if name == "all":
        rep = VerificationReport("all", seed=opts.seed)
        for key, fn in SUITES.items():
            rep.extend(fn(opts), prefix=f"{key}: ")
        return rep
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name](opts)
