"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from gate import record
from liftkit import (
    build_lift,
    eig_all,
    gram_nondefect_check,
    make_2x2,
    make_large,
    poisson_block,
    random_lift_vectors,
    solve_nullpair,
    sweep,
    verify_alpha,
)
from liftkit.experiments import Large, Small, run_cell, run_trials
from liftkit.lifting import LiftVectors
from liftkit.mmio import read_matrix, write_matrix
from oracles import ratio_plus_mp, to_complex


def _lift_norms(a, beta, n_trials, seed=42):
    n = a.shape[0]
    return np.array([np.linalg.norm(build_lift(a, random_lift_vectors(n, beta, beta, (seed, t))).L)
                     for t in range(n_trials)])


def test_1_exactly_defective():
    t0 = time.perf_counter()
    rec = run_cell(Small(0.0), 1.0, 1000, seed=42)
    elapsed = time.perf_counter() - t0
    ok = rec.mean_error <= 1e-12 and rec.mean_lambda0_abs <= 1e-13 and elapsed <= 10.0
    assert record(1, "eps=0 beta=1 1000 trials", ok,
                  f"mean E={rec.mean_error:.2e} <= 1e-12, mean |lambda0|="
                  f"{rec.mean_lambda0_abs:.2e} <= 1e-13, {elapsed:.2f}s <= 10s")


def test_2_near_defective_beats_baseline():
    parts, ok = [], True
    for eps in (1e-12, 1e-10, 1e-8):
        rec = run_cell(Small(eps), 1.0, 1000, seed=42)
        ratio = rec.mean_error / rec.baseline_error
        ok &= rec.n_flagged == 0 and ratio <= 1e-2
        parts.append(f"eps={eps:g}: {rec.mean_error:.2e}/{rec.baseline_error:.2e}={ratio:.1e}")
    assert record(2, "lifted <= 1e-2 x baseline", ok, "; ".join(parts))


def test_3_error_decreases_with_beta():
    big = run_cell(Small(1e-10), 1.0, 1000, seed=42).mean_error
    small = run_cell(Small(1e-10), 1e-3, 1000, seed=42).mean_error
    assert record(3, "eps=1e-10 beta=1 vs 1e-3", 10 * big <= small,
                  f"{big:.2e} x 10 <= {small:.2e}")


def test_4_condition_improves_with_beta():
    s_big = run_trials(Small(1e-12), 1.0, 1, seed=42)[0].cond_recip
    s_small = run_trials(Small(1e-12), 1e-3, 1, seed=42)[0].cond_recip
    ok = 1 / s_big <= (1 / s_small) / 10
    assert record(4, "eps=1e-12 condition 1/s(0)", ok,
                  f"beta=1: {1 / s_big:.2e} <= beta=1e-3: {1 / s_small:.2e} / 10")


def test_5_large_problem():
    t0 = time.perf_counter()
    problem = Large(100, 1e-12, 42)
    rec = run_cell(problem, 1.0, 50, seed=42)
    elapsed = time.perf_counter() - t0
    norm_l = _lift_norms(make_large(100, 1e-12, 42).a, 1.0, 50).min()
    ok = (rec.mean_error < rec.baseline_error
          and rec.mean_lambda0_abs <= 1e-11 * norm_l and elapsed <= 60.0)
    assert record(5, "N=100 eps=1e-12 beta=1 50 trials", ok,
                  f"mean E={rec.mean_error:.2e} < baseline {rec.baseline_error:.2e}, "
                  f"mean |lambda0|={rec.mean_lambda0_abs:.2e} <= {1e-11 * norm_l:.2e}, "
                  f"{elapsed:.2f}s <= 60s")


def _defective_lifts():
    fam = make_2x2(0.0)
    for seed in range(200):
        yield build_lift(fam.a, random_lift_vectors(2, 1.0, 1.0, seed=seed))
    tm = make_large(20, 0.0, 42)
    for seed in range(20):
        yield build_lift(tm.a, random_lift_vectors(20, 1.0, 1.0, seed=seed),
                         tm.right_nullvector(), tm.left_nullvector())


def test_6_recovery_identities():
    worst = dict(xi=0.0, alpha=0.0, inner=0.0, inner_rs=0.0)
    count = 0
    for sys in _defective_lifts():
        if not sys.checks.passed:
            continue
        count += 1
        pair = solve_nullpair(sys)
        want_xi = -(sys.lift.w @ sys.phi) / sys.lift.omega
        worst["xi"] = max(worst["xi"], abs(pair.xi / pair.r - want_xi) / abs(want_xi))
        worst["alpha"] = max(worst["alpha"], abs(verify_alpha(sys, pair)))
        lhs = pair.psi_lifted @ pair.phi_lifted
        # with the projections x = r phi, y = s psi standing in for phi, psi
        worst["inner"] = max(worst["inner"], abs(lhs - (pair.y @ pair.x + pair.zeta * pair.xi)))
        rs = pair.r * pair.s * (sys.psi @ sys.phi) + pair.zeta * pair.xi
        worst["inner_rs"] = max(worst["inner_rs"], abs(lhs - rs))
    ok = (count > 0 and worst["xi"] <= 1e-10 and worst["alpha"] <= 1e-12
          and worst["inner"] <= 1e-10 and worst["inner_rs"] <= 1e-10)
    assert record(6, f"recovery identities on {count} passing lifts", ok,
                  ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_7_pathological_lift_detected():
    fam = make_2x2(0.0)
    phi, psi = fam.right_nullvector(), fam.left_nullvector()
    rng = np.random.default_rng(42)
    failed = 0
    for _ in range(100):
        w = rng.uniform(-1, 1, 2)
        lift = LiftVectors(phi, -1.0, w, complex(w @ phi))
        rep = build_lift(fam.a, lift, phi, psi).checks
        failed += not rep.lifted_inner_ok
    assert record(7, "pathological v=phi, eta=-1, omega=w.phi", failed == 100,
                  f"lifted_inner guard failed {failed}/100")


def test_8_oracle_equivalence():
    parts, ok = [], True
    for eps in (1e-2, 1e-1):
        fam = make_2x2(eps)
        oracle = to_complex(ratio_plus_mp(eps))
        analytic_gap = abs(fam.ratio_plus - oracle)
        worst = 0.0
        for seed in range(20):
            x = solve_nullpair(build_lift(fam.a, random_lift_vectors(2, seed=seed))).recovered_right
            worst = max(worst, abs(x[1] / x[0] - fam.ratio_plus), abs(x[1] / x[0] - oracle))
        ok &= analytic_gap <= 1e-10 and worst <= 1e-10
        parts.append(f"eps={eps:g}: lifted {worst:.1e}, analytic vs oracle {analytic_gap:.1e}")
    assert record(8, "ratio vs extended-precision oracle", ok, "; ".join(parts))


def test_9_property_suite(tmp_path):
    checks = {}
    args = ([1e-12, 1e-8], [1e-2, 1.0], "small", 20, 5)
    checks["sweep determinism"] = sweep(*args, workers=1) == sweep(*args, workers=3)

    rt = True
    tm = make_large(12, 1e-6, 7)
    fam = make_2x2(0.0)
    for m in (fam.m, fam.a, tm.a, tm.q, poisson_block(10),
              build_lift(fam.a, random_lift_vectors(2)).L):
        for fmt in ("array", "coordinate"):
            write_matrix(m, tmp_path / "m.mtx", fmt=fmt)
            rt &= np.array_equal(read_matrix(tmp_path / "m.mtx"), m)
    checks["matrix market round trip"] = rt

    pair = solve_nullpair(build_lift(fam.a, random_lift_vectors(2, seed=3)))
    g, _ = gram_nondefect_check([pair.phi_lifted], [pair.psi_lifted])
    checks["gram reduces at nu=1"] = g.shape == (1, 1) and abs(g[0, 0]) == abs(
        pair.psi_lifted @ pair.phi_lifted)

    n = 10
    tm = make_large(n, 1e-4, 3)
    c = np.zeros((n, n))
    c[:2, :2] = make_2x2(1e-4).m
    c[2:, 2:] = poisson_block(n - 2, tm.poisson_variant)
    want = np.linalg.eigvals(c - tm.mu_plus * np.eye(n))
    got = eig_all(tm.a).values
    checks["similarity spectrum"] = all(np.min(np.abs(got - lam)) <= 1e-10 for lam in want)

    failed = [k for k, v in checks.items() if not v]
    assert record(9, "property suite", not failed,
                  "all of: " + ", ".join(checks) if not failed else "failed: " + ", ".join(failed))
