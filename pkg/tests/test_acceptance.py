"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from thermoform import (
    GeneralisedPotential,
    RestrictedPotential,
    ScalarWeights,
    SingularValuePotential,
    Subspace,
    SubspaceClass,
    affinity_dimension,
    catalog,
    classify,
    decompose_equivariant,
    partition_sum,
    pressure,
    recode_system,
)
from thermoform import multilinear as ml
from thermoform.classes import find_finite_orbit_classes, find_simultaneous_proximal_word, orbit_of
from thermoform.gibbs import correlation_ratio_scan, ergodic_average, gibbs_table, psi_mixing_precondition
from thermoform.potentials import check_submultiplicative
from thermoform.symbolic import Word, enumerate_words, recode_word

LINES: list[str] = []

E1 = Subspace.axis(2, 1)
E2 = Subspace.axis(2, 2)


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {number:2d}  {title}: {detail}"
    LINES.append(line)
    print(line)
    assert ok, line


def nottot():
    return catalog.build("nottot").system


def recoded():
    return catalog.build("nottot-recoded").system


def test_01_trivial_pressure():
    t0 = time.perf_counter()
    est = pressure(ScalarWeights([1.0, 1.0]), 10)
    elapsed = time.perf_counter() - t0
    err = max(abs(v - math.log(2)) for v in (est.upper, est.lower, est.point))
    report(1, "trivial pressure", err <= 1e-12 and elapsed < 1.0, f"max error {err:.1e}, {elapsed:.3f} s")


def test_02_affinity_dimension():
    cases = [
        ("similarity 3 x Id/2", [0.5 * np.eye(2)] * 3, math.log(3) / math.log(2)),
        ("2 x diag(1/2,1/3)", [np.diag([0.5, 1 / 3])] * 2, 1.0),
        ("4 x Id/2", [0.5 * np.eye(2)] * 4, 2.0),
    ]
    ok, parts = True, []
    for name, gens, want in cases:
        t0 = time.perf_counter()
        res = affinity_dimension(gens, n_max=10, tol=1e-6)
        elapsed = time.perf_counter() - t0
        err = abs(res.point - want)
        ok &= err <= 1e-6 and elapsed < 30
        parts.append(f"{name} err {err:.1e} in {elapsed:.2f} s")
    report(2, "affinity dimension closed forms", ok, "; ".join(parts))


def test_03_multilinear_identities():
    rng = np.random.default_rng(2024)
    worst = 0.0

    def rel(a, b):
        return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))

    for _ in range(200):
        d = int(rng.integers(1, 5))
        A, B = rng.normal(size=(2, d, d))
        sv = ml.singular_values(A)
        worst = max(worst, rel(np.prod(sv), abs(np.linalg.det(A))))
        worst = max(worst, rel(ml.operator_norm(ml.tensor_product([A, B])), ml.operator_norm(A) * ml.operator_norm(B)))
        for k in range(1, d + 1):
            worst = max(worst, rel(ml.operator_norm(ml.exterior_power(A, k)), np.prod(sv[:k])))
            worst = max(worst, rel(ml.exterior_power(A @ B, k), ml.exterior_power(A, k) @ ml.exterior_power(B, k)))
    report(3, "multilinear identities", worst <= 1e-9, f"worst relative error {worst:.1e} over 200 matrices")


def test_04_submultiplicativity():
    sys = nottot()
    w0 = orbit_of((E1, E1), sys)
    rng = np.random.default_rng(4)
    rand = rng.normal(size=(2, 3, 3))
    pots = [("generalised", GeneralisedPotential(sys)), ("restricted W0", RestrictedPotential(sys, w0))]
    for s in (0.3, 1.0, 1.5, 1.9):
        pots.append((f"phi^{s} (nottot A)", SingularValuePotential(sys.generators[0], s)))
        pots.append((f"phi^{s} (random 3x3)", SingularValuePotential(rand, s)))
    bad, worst = [], -math.inf
    for name, p in pots:
        rep = check_submultiplicative(p, 7, max_total=8)
        worst = max(worst, rep.max_excess)
        if not (rep.exhaustive and rep.passed):
            bad.append(name)
    report(4, "submultiplicativity to combined length 8", not bad,
           f"{len(pots)} potentials, max excess {worst:.1e}" + (f", violations in {bad}" if bad else ""))


def test_05_counterexample_classes():
    sys = nottot()
    found = find_finite_orbit_classes(sys, (1, 1), cap=64)
    w0 = found[0] if len(found) == 1 else None
    c0 = classify(w0) if w0 is not None else None
    ok_a = w0 is not None and len(w0) == 4 and c0.transitive and c0.period == 2 and not c0.primitive

    rec = recoded()
    W0 = SubspaceClass.from_members([(a, b) for a in (E1, E2) for b in (E1, E2)], rec)
    parts = decompose_equivariant(W0, rec)
    w1 = SubspaceClass.from_members([(E1, E1), (E2, E2)], rec)
    w2 = SubspaceClass.from_members([(E1, E2), (E2, E1)], rec)
    matched = sorted(int(p.same_members(w1)) + 2 * int(p.same_members(w2)) for p in parts) == [1, 2]
    flags = [classify(p) for p in parts]
    ok_b = len(parts) == 2 and matched and all(f.transitive and f.primitive and f.exponent == 1 for f in flags)
    report(5, "counterexample classes", ok_a and ok_b,
           f"nottot: {len(found)} class(es), size {len(w0) if w0 else '-'}, period {c0.period if c0 else '-'}; "
           f"recoded W0 splits into {len(parts)} primitive parts of exponent "
           f"{[f.exponent for f in flags]}")


def test_06_ratio_divergence():
    rec = recoded()
    phi = GeneralisedPotential(rec)
    w1 = RestrictedPotential(rec, SubspaceClass.from_members([(E1, E1), (E2, E2)], rec))
    w2 = RestrictedPotential(rec, SubspaceClass.from_members([(E1, E2), (E2, E1)], rec))
    alpha = beta = 1.0
    worst = 0.0
    for n in range(1, 9):
        i = Word((1,) * n + (4,) * n, 4)
        j = Word((3,) + (1,) * (n - 1) + (2,) + (4,) * (n - 1), 4)
        full = n * (alpha + beta) * math.log(4)
        restricted = max(n * alpha, n * beta) * math.log(4)
        worst = max(worst,
                    abs(phi.log_evaluate(i) - full), abs(w1.log_evaluate(i) - restricted),
                    abs(phi.log_evaluate(j) - full), abs(w2.log_evaluate(j) - restricted))
    report(6, "ratio divergence oracle", worst <= 1e-9, f"max log error {worst:.1e} for n = 1..8")


def test_07_recoding_identities():
    sys = nottot()
    phi = GeneralisedPotential(sys)
    psi = GeneralisedPotential(recode_system(sys, 2))
    word_err = 0.0
    for n in (2, 4, 6, 8):
        vals = phi.log_values(n)
        for k, w in enumerate(enumerate_words(2, n)):
            word_err = max(word_err, abs(psi.log_evaluate(recode_word(w, 2)) - vals[k]))
    point_err = 0.0
    for q in range(2, 5):
        point_err = max(point_err, abs(pressure(psi, q).log_sums[-1] / q - 2 * pressure(phi, 2 * q).log_sums[-1] / (2 * q)))
    point_err = max(point_err, abs(partition_sum(psi, 1) - 2 * partition_sum(phi, 2) / 2))
    ok = word_err <= 1e-12 and point_err <= 1e-12
    report(7, "recoding identities", ok, f"word error {word_err:.1e}, point error {point_err:.1e}")


def test_08_proximal_word():
    sys = nottot()
    res = find_simultaneous_proximal_word(sys, max_len=4)
    gaps = [float(ml.is_proximal(A).gap_ratio) for A in sys.product(res.word)] if res.found else []
    eig_ok = res.found and all(
        sorted(np.abs(np.linalg.eigvals(A)))[-1] > sorted(np.abs(np.linalg.eigvals(A)))[-2] for A in sys.product(res.word)
    )
    rot = catalog.build("rotation").system
    miss = find_simultaneous_proximal_word(rot, max_len=6)
    ok = res.found and str(res.word) == "1122" and all(g > 1 for g in gaps) and eig_ok and not miss.found
    report(8, "simultaneous proximal word", ok,
           f"word {res.word}, gap ratios {[round(g, 6) for g in gaps]}, rotation found={miss.found}")


def test_09_variational_consistency():
    phi = GeneralisedPotential(nottot())
    t = gibbs_table(phi, 10)
    avg = ergodic_average(t, phi)
    est = pressure(phi, 10)
    gap = abs(avg.entropy + avg.value - est.log_sums[-1] / 10)
    report(9, "variational consistency", gap <= est.width + 1e-9,
           f"|h + Lambda - a_n/n| = {gap:.1e}, bracket width {est.width:.4f}")


def test_10_mixing_diagnostics():
    bern = correlation_ratio_scan(ScalarWeights([0.5, 0.5]), range(1, 7), 2)
    bern_max = max(r.deviation for r in bern)
    scan = {r.gap: r.deviation for r in correlation_ratio_scan(GeneralisedPotential(nottot()), range(1, 7), 2)}
    parity_ok = all(scan[g] > scan[g + 1] for g in (1, 3, 5)) and all(scan[g] > scan[g - 1] for g in (3, 5))
    rec = recoded()
    w1 = RestrictedPotential(rec, SubspaceClass.from_members([(E1, E1), (E2, E2)], rec))
    deltas = [float(psi_mixing_precondition(w1, m, 3).delta) for m in (1, 2, 3)]
    spread = max(deltas) / min(deltas) if min(deltas) > 0 else math.inf
    delta_ok = min(deltas) > 0 and spread < 4
    ok = bern_max <= 1e-12 and parity_ok and delta_ok
    report(10, "mixing diagnostics", ok,
           f"Bernoulli max deviation {bern_max:.1e}; odd>even at adjacent gaps {parity_ok} "
           f"({', '.join(f'{g}:{scan[g]:.3f}' for g in sorted(scan))}); "
           f"delta_m on W1 for m=1,2,3 = {[round(d, 6) for d in deltas]}, spread {spread:.1f} (needs < 4)")


def catalog_potentials():
    out = []
    for name in catalog.names():
        sys = catalog.build(name).system
        out.append((name, GeneralisedPotential(sys)))
        if sys.factor_count == 1:
            for s in (0.5, 1.5):
                out.append((f"{name} phi^{s}", SingularValuePotential(sys.generators[0], s)))
    return out


def test_11_bracket_sanity():
    bad = []
    checked = 0
    for name, p in catalog_potentials():
        uppers = []
        for n in range(2, 11):
            est = pressure(p, n)
            checked += 1
            uppers.append(est.upper)
            if est.lower is not None and not (est.lower <= est.point <= est.upper):
                bad.append(f"{name}@{n}")
            elif not est.point <= est.upper:
                bad.append(f"{name}@{n}")
        if any(b > a for a, b in zip(uppers, uppers[1:])):
            bad.append(f"{name} upper not monotone")
    report(11, "bracket sanity", not bad, f"{checked} runs" + (f", failures {bad}" if bad else ", all nested and monotone"))


if __name__ == "__main__":
    import sys

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
