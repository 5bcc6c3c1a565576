"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`.  Tolerances are fixed here;
the slowest item is the Monte Carlo diversity validation (criterion 7).
"""

import itertools
import math
import time

import numpy as np
import pytest

from fdsc import dmt, gdof
from fdsc.capacity import (
    PowerSplit,
    achievable_mi_exact,
    gap_constants,
    inner_bound_bc,
    outer_bound,
)
from fdsc.channel import make_rng, sample_rayleigh, snrs_from_levels
from fdsc.lp import LpBuilder, check_certificate, solve
from fdsc.model import AntennaConfig, LinkLevels, NetworkSpec, eval_pl, ptp_dmt_unit
from fdsc.outage import OutageConfig, simulate_outage

GRID_POINTS = 200


def spec_of(m_dl, n_dl, m_ul, n_ul, w=0.0, alpha_s=1.0):
    return NetworkSpec(
        antennas=AntennaConfig(m_dl, n_dl, m_ul, n_ul),
        levels=LinkLevels(alpha_s=alpha_s),
        w=w,
    )


def lp_symmetric_dmt(spec, csit, r):
    a = spec.antennas
    fn = dmt.d_sum_csit if csit else dmt.d_sum_nocsit
    return min(
        eval_pl(ptp_dmt_unit(a.m_dl, a.n_dl), min(r, float(min(a.m_dl, a.n_dl)))),
        eval_pl(ptp_dmt_unit(a.m_ul, a.n_ul), min(r, float(min(a.m_ul, a.n_ul)))),
        fn(spec, 2.0 * r),
    )


def max_curve_lp_gap(m, n_dl, m_ul, w, alpha_s, csit, points=GRID_POINTS):
    curve = (
        dmt.closed_form_m11m(m, w, alpha_s, csit)
        if (n_dl == 1 and m_ul == 1)
        else dmt.closed_form_general(m, n_dl, m_ul, w, alpha_s, csit)
    )
    spec = spec_of(m, n_dl, m_ul, m, w=w, alpha_s=alpha_s)
    worst = 0.0
    for i in range(points):
        r = curve.x_max * i / (points - 1)
        worst = max(worst, abs(eval_pl(curve, r) - lp_symmetric_dmt(spec, csit, r)))
    return worst


def test_criterion_1_m11m_lp_matches_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    combos = 0
    for m in (1, 2, 4):
        w_list = (0.0, 1.0 / (2 * m + 1), 1.0 / (m + 1), 0.5, 2.0)
        a_list = (m / 4.0, m / 2.0, float(m))
        for w, a_s, csit in itertools.product(w_list, a_list, (True, False)):
            worst = max(worst, max_curve_lp_gap(m, 1, 1, w, a_s, csit))
            combos += 1
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-6, f"worst LP/closed-form gap {worst:.3e}"
    assert elapsed < 60.0, f"criterion 1 took {elapsed:.1f}s (limit 60s)"
    print(
        f"\nPASS criterion 1: (m,1,1,m) LP = closed form over {combos} parameter "
        f"sets x {GRID_POINTS} points (worst {worst:.2e}, {elapsed:.1f}s < 60s)"
    )


def _csit_w_samples(m, n_dl, m_ul):
    hi_i, lo_ii, hi_ii, lo_iii = dmt._w_regimes_csit(m, n_dl, m_ul)
    hi_ii_f = min(hi_ii, lo_iii + 1.0)
    ws = [0.0, 0.6 * hi_i, hi_i, lo_ii, 0.5 * (lo_ii + hi_ii_f), hi_ii_f, lo_iii, lo_iii + 0.4]
    return sorted({round(w, 12) for w in ws if w >= 0.0})


def _nocsit_w_samples(m, n_dl, m_ul):
    s = m_ul + n_dl
    ws = [0.0]
    if m_ul >= 2 * (n_dl - 1):
        hi_a = (m_ul - n_dl + 1) / (m + s - 1)
        lo_b = (s - 1) / (m + m_ul - n_dl + 1)
        ws += [0.6 * hi_a, hi_a, lo_b, lo_b + 0.4, 2 * lo_b]
    if n_dl >= m_ul and m_ul <= 2:
        delta = n_dl - m_ul
        hi_a = (delta + 1) / (m + s - 1)
        lo_b = (s - 1) / (m + delta + 1)
        hi_b = math.inf if (m + delta - 1) <= 0 else (delta + 1) / (m + delta - 1)
        lo_c = (s - 1) / (m - delta + 1)
        ws += [0.6 * hi_a, hi_a, lo_c, lo_c + 0.5]
        if lo_b <= hi_b:
            ws += [lo_b, 0.5 * (lo_b + min(hi_b, lo_b + 1.0))]
    return sorted({round(w, 12) for w in ws if w >= 0.0})


def test_criterion_2_general_lp_matches_stated_closed_forms():
    t0 = time.perf_counter()
    configs = [(2, 1, 2), (3, 2, 2), (3, 2, 3), (4, 2, 3), (3, 3, 2)]
    worst = 0.0
    curves = 0
    skipped = 0
    for (m, n_dl, m_ul) in configs:
        for csit in (True, False):
            w_list = _csit_w_samples(m, n_dl, m_ul) if csit else _nocsit_w_samples(m, n_dl, m_ul)
            for w in w_list:
                for a_s in (0.5, 1.0, 2.0):
                    try:
                        gap = max_curve_lp_gap(m, n_dl, m_ul, w, a_s, csit)
                    except dmt.NoClosedFormError:
                        skipped += 1
                        continue
                    worst = max(worst, gap)
                    curves += 1
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-6, f"worst general LP/closed-form gap {worst:.3e}"
    assert curves >= 150
    print(
        f"\nPASS criterion 2: general closed forms = LP on {curves} curves x "
        f"{GRID_POINTS} points across all stated regimes "
        f"({skipped} between-regime points skipped; worst {worst:.2e}, {elapsed:.1f}s)"
    )


def test_criterion_3_no_side_channel_closed_form_exact():
    for m in (1, 2, 4):
        knee_c = (m + 1) / (3 * m + 2)
        want_csit = [(0.0, float(m)), (knee_c, m * (1 - knee_c)), (0.5, 0.0)]
        got_csit = dmt.closed_form_m11m(m, 0.0, 1.0, True).breakpoints
        assert got_csit == want_csit, f"CSIT breakpoints differ at m={m}: {got_csit}"

        knee_n = 1.0 / (m + 2)
        want_nc = [(0.0, float(m)), (knee_n, m * (1 - knee_n)), (0.5, 0.0)]
        got_nc = dmt.closed_form_m11m(m, 0.0, 1.0, False).breakpoints
        assert got_nc == want_nc, f"no-CSIT breakpoints differ at m={m}: {got_nc}"
    print("\nPASS criterion 3: w = 0 curves equal the no-side-channel formulas "
          "exactly at breakpoints (m in {1, 2, 4})")


def test_criterion_4_bandwidth_tradeoffs():
    # CSIT compensation: both pipelines must coincide
    comp_cases = [(1, 1, 1), (2, 1, 1), (4, 1, 1), (3, 2, 2), (4, 2, 2), (3, 2, 1)]
    for (m, n_dl, m_ul) in comp_cases:
        base_alpha = m / 2.0 if (n_dl == 1 and m_ul == 1) else 1.0
        req = dmt.compensate_csit_bandwidth(m, n_dl, m_ul, base_alpha)
        if n_dl == 1 and m_ul == 1:
            assert req.w == pytest.approx(1.0 / (m + 1)), f"(m,1,1,m) needs w = 1/(m+1)"
            assert req.alpha_s_min == pytest.approx(m / 2.0)
        a_eff = max(base_alpha, req.alpha_s_min)
        spec = spec_of(m, n_dl, m_ul, m, w=req.w, alpha_s=a_eff)
        rmax = float(min(n_dl, m_ul))
        for i in range(61):
            r = rmax * i / 60
            dc = lp_symmetric_dmt(spec, True, r)
            dn = lp_symmetric_dmt(spec, False, r)
            assert abs(dc - dn) <= 1e-6, (m, n_dl, m_ul, r, dc, dn)

    # interference elimination: reach the parallel-link benchmark
    for (m, n_dl, m_ul) in ((2, 1, 1), (3, 2, 2), (3, 2, 3), (3, 3, 2), (4, 2, 3)):
        bench = dmt.no_interference_curve(m, n_dl, m_ul)
        for csit in (True, False):
            probe = dmt.interference_free_bandwidth(m, n_dl, m_ul, 1.0, csit)
            a_eff = max(1.0, probe.alpha_s_min)
            req = dmt.interference_free_bandwidth(m, n_dl, m_ul, a_eff, csit)
            assert req.sufficient
            spec = spec_of(m, n_dl, m_ul, m, w=req.w, alpha_s=a_eff)
            for i in range(61):
                r = bench.x_max * i / 60
                got = lp_symmetric_dmt(spec, csit, r)
                assert abs(got - eval_pl(bench, r)) <= 1e-6, (m, n_dl, m_ul, csit, r)
    print("\nPASS criterion 4: CSIT-compensation and interference-free bandwidths "
          "reproduce the matched curves within 1e-6 "
          "(incl. (m,1,1,m): w = 1/(m+1), alpha_s = m/2)")


def test_criterion_5_gdof_consistency():
    # sum-event diversity reaches zero exactly at the GDoF sum cap
    zero_cases = [
        spec_of(1, 1, 1, 1, w=0.0),
        spec_of(1, 1, 1, 1, w=1.0, alpha_s=1.0),
        spec_of(2, 1, 1, 2, w=0.3, alpha_s=1.0),
        spec_of(3, 2, 2, 3, w=0.5, alpha_s=1.0),
        spec_of(3, 2, 3, 3, w=1.0, alpha_s=2.0),
        spec_of(2, 2, 2, 2, w=0.25, alpha_s=0.5),
    ]
    for spec in zero_cases:
        for csit in (True, False):
            cap = dmt.sum_multiplexing_cap(spec, csit)
            fn = dmt.d_sum_csit if csit else dmt.d_sum_nocsit
            at_cap = fn(spec, cap)
            below = fn(spec, cap * 0.98)
            assert at_cap <= 1e-6, (spec, csit, at_cap)
            assert below > 1e-6, (spec, csit, below)

    # case formulas against the general regions on 200+ parameter points
    pts = 0
    for ai, ws in itertools.product(
        (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0), (0.0, 0.25, 0.5, 1.0, 1.75, 2.0)
    ):
        for (m, n) in ((1, 1), (2, 2), (2, 1), (3, 2)):
            sp = NetworkSpec(AntennaConfig(m, n, m, n), LinkLevels(alpha_i=ai, alpha_s=1.0), ws)
            got = gdof.gdof_csit(sp).sum_gdof() / min(m, n)
            want = gdof.sum_gdof_per_antenna_case_a(m, n, ai, ws, 1.0)
            assert abs(got - want) <= 1e-12
            pts += 1
        for (m, n_dl, m_ul) in ((2, 1, 1), (3, 2, 2), (3, 1, 2), (4, 2, 3)):
            ant = AntennaConfig(m, n_dl, m_ul, m)
            sp = NetworkSpec(ant, LinkLevels(alpha_i=ai, alpha_s=1.0), ws)
            got = gdof.gdof_csit(sp).sum_gdof() / min(m_ul, n_dl)
            want = gdof.sum_gdof_per_antenna_case_b(ant, ai, ws, 1.0)
            assert abs(got - want) <= 1e-12
            pts += 1
    assert pts >= 200

    # required bandwidth round trips
    for ai in (0.25, 0.5, 1.0, 1.5, 2.0):
        for (m, n) in ((1, 1), (2, 2), (2, 1), (3, 2), (2, 4)):
            w = gdof.required_w_gdof(AntennaConfig(m, n, m, n), ai, 1.0, True, "A")
            assert abs(gdof.sum_gdof_per_antenna_case_a(m, n, ai, w, 1.0) - 2.0) <= 1e-12
        for (m, n_dl, m_ul) in ((2, 1, 1), (3, 2, 2), (3, 1, 2), (4, 2, 3)):
            ant = AntennaConfig(m, n_dl, m_ul, m)
            w = gdof.required_w_gdof(ant, ai, 1.0, True, "B")
            want = max(m_ul, n_dl) / min(m_ul, n_dl) + 1.0
            assert abs(gdof.sum_gdof_per_antenna_case_b(ant, ai, w, 1.0) - want) <= 1e-12
    for (m, n) in ((1, 1), (2, 2), (2, 1), (3, 2), (2, 4), (1, 3)):
        w = gdof.required_w_gdof(AntennaConfig(m, n, m, n), 1.0, 1.0, False, "A")
        reg = gdof.gdof_nocsit(NetworkSpec(AntennaConfig(m, n, m, n), LinkLevels(), w))
        assert abs(reg.sum_gdof() - 2 * min(m, n)) <= 1e-12
    for (m, n_dl, m_ul) in ((2, 1, 1), (3, 2, 2), (3, 1, 2), (4, 2, 3), (3, 3, 2)):
        ant = AntennaConfig(m, n_dl, m_ul, m)
        w = gdof.required_w_gdof(ant, 1.0, 1.0, False, "B")
        reg = gdof.gdof_nocsit(NetworkSpec(ant, LinkLevels(), w))
        assert abs(reg.sum_gdof() - (max(m_ul, n_dl) + min(m_ul, n_dl))) <= 1e-12
    print(f"\nPASS criterion 5: diversity zero exactly at the GDoF caps; case "
          f"formulas match the general regions on {pts} parameter points (1e-12); "
          f"required-bandwidth round trips exact")


def test_criterion_6_capacity_sandwich_and_gap():
    t0 = time.perf_counter()
    # SISO gap constants are exactly one bit
    for w in (0.0, 0.5, 1.0):
        c1, c2 = gap_constants(AntennaConfig(1, 1, 1, 1), w)
        assert c1 == 1.0 and c2 == 1.0

    split = PowerSplit(0.5)
    w = 1.0
    draws = 500
    checked = 0
    for ant in (AntennaConfig(1, 1, 1, 1), AntennaConfig(2, 2, 2, 2), AntennaConfig(3, 2, 2, 3)):
        c1, c2 = gap_constants(ant, w)
        budget = (1.0 + w) * max(c1, c2)
        for snr_db in (10.0, 20.0, 30.0, 40.0):
            rng = make_rng([17, ant.m_dl, ant.n_dl, ant.m_ul, ant.n_ul, int(snr_db)])
            snr = snrs_from_levels(10 ** (snr_db / 10.0), LinkLevels())
            for _ in range(draws):
                h = sample_rayleigh(ant, rng)
                inner = inner_bound_bc(h, snr, w, split)
                exact = achievable_mi_exact(h, snr, w, split)
                outer = outer_bound(h, snr, w, split)
                assert inner.componentwise_leq(exact, tol=1e-9)
                assert exact.componentwise_leq(outer, tol=1e-9)
                assert outer.c_dl - exact.c_dl <= budget + 1e-9
                assert outer.c_ul - exact.c_ul <= budget + 1e-9
                assert outer.c_sum - exact.c_sum <= budget + 1e-9
                checked += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0, f"criterion 6 took {elapsed:.1f}s (limit 120s)"
    print(f"\nPASS criterion 6: sandwich and (1+w)max(c1,c2) gap hold on "
          f"{checked} realizations (3 configs x 4 SNRs x {draws} draws, "
          f"{elapsed:.1f}s < 120s); SISO gap constants exactly 1")


def test_criterion_7_monte_carlo_diversity():
    t0 = time.perf_counter()
    spec0 = spec_of(1, 1, 1, 1, w=0.0)
    grid = (15.0, 20.0, 25.0, 30.0, 35.0)
    trials = 10**6

    est_c = simulate_outage(OutageConfig(
        spec=spec0, r_dl=0.25, r_ul=0.25, rho_grid_db=grid,
        trials_per_rho=trials, csit=True, seed=20240817,
    ))
    assert est_c.slope is not None
    assert abs(est_c.slope - 0.75) <= 0.3, f"CSIT slope {est_c.slope}"

    est_n = simulate_outage(OutageConfig(
        spec=spec0, r_dl=0.25, r_ul=0.25, rho_grid_db=grid,
        trials_per_rho=trials, csit=False, seed=20240818,
    ))
    assert est_n.slope is not None
    assert abs(est_n.slope - 0.75) <= 0.3, f"no-CSIT slope {est_n.slope}"

    # side-channel strictly reduces outage at r = 0.6 (w = 0 has zero diversity)
    spec1 = spec_of(1, 1, 1, 1, w=1.0, alpha_s=1.0)
    t2 = 200000
    a = simulate_outage(OutageConfig(
        spec=spec0, r_dl=0.6, r_ul=0.6, rho_grid_db=grid,
        trials_per_rho=t2, csit=True, seed=7,
    ))
    b = simulate_outage(OutageConfig(
        spec=spec1, r_dl=0.6, r_ul=0.6, rho_grid_db=grid,
        trials_per_rho=t2, csit=True, seed=8,
    ))
    for pa, pb in zip(a.p_out, b.p_out):
        sigma = math.sqrt(pa * (1 - pa) / t2 + pb * (1 - pb) / t2)
        assert pb < pa - 3 * sigma, f"side-channel did not help: {pb} vs {pa}"

    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0, f"criterion 7 took {elapsed:.1f}s (limit 600s)"
    print(f"\nPASS criterion 7: fitted slopes csit={est_c.slope:.3f}, "
          f"no-csit={est_n.slope:.3f} (analytic 0.75 +- 0.3, 1e6 trials); "
          f"w=1 outage below w=0 by >3 sigma at every SNR ({elapsed:.1f}s < 600s)")


def _random_pl_program(rng):
    """Random convex piecewise-linear program over a box, optionally with a
    positive-part budget row; returns (builder-factory, objective, feasibility)."""
    d = int(rng.integers(1, 3))
    box = float(rng.uniform(1.0, 2.0))
    nterms = int(rng.integers(1, 4))
    terms = []
    for _ in range(nterms):
        a = rng.uniform(-1.5, 1.5, size=d)
        c = float(rng.uniform(-0.5, 1.5))
        wgt = float(rng.uniform(0.2, 2.0))
        terms.append((c, a, wgt))
    g = rng.uniform(0.0, 1.0, size=d)
    use_budget = bool(rng.random() < 0.5)
    edges = rng.uniform(0.2, box, size=d)
    budget = float(rng.uniform(0.3, 1.5 * d))

    def objective(x):
        # x: (..., d)
        val = x @ g
        for c, a, wgt in terms:
            val = val + wgt * np.maximum(c - x @ a, 0.0)
        return val

    def feasible(x):
        if not use_budget:
            return np.ones(x.shape[:-1], dtype=bool)
        return np.maximum(edges - x, 0.0).sum(axis=-1) <= budget + 1e-12

    def build():
        b = LpBuilder()
        xs = [b.new_var(f"x{i}", ub=box) for i in range(d)]
        for i in range(d):
            b.add_objective(xs[i], float(g[i]))
        for c, a, wgt in terms:
            b.add_pos_part_in_objective((c, {xs[i]: -float(a[i]) for i in range(d)}), wgt)
        if use_budget:
            b.add_pos_part_budget(
                [(float(edges[i]), {xs[i]: -1.0}) for i in range(d)], budget
            )
        return b.build()

    return build, objective, feasible, d, box


def _grid_search_min(objective, feasible, d, box, rounds=4, pts=121):
    lo = np.zeros(d)
    hi = np.full(d, box)
    best_val = None
    for _ in range(rounds):
        axes = [np.linspace(lo[i], hi[i], pts) for i in range(d)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        mask = feasible(mesh)
        if not mask.any():
            return None
        vals = objective(mesh[mask])
        k = int(np.argmin(vals))
        xbest = mesh[mask][k]
        best_val = float(vals[k])
        h = (hi - lo) / (pts - 1)
        lo = np.maximum(xbest - 2 * h, 0.0)
        hi = np.minimum(xbest + 2 * h, box)
    return best_val


def test_criterion_8_lp_soundness():
    rng = np.random.default_rng(424242)
    checked = 0
    worst = 0.0
    while checked < 50:
        build, objective, feasible, d, box = _random_pl_program(rng)
        ref = _grid_search_min(objective, feasible, d, box)
        if ref is None:
            continue
        sol = solve(build())
        assert sol.status == "optimal"
        check_certificate(sol)  # dual feasibility + complementary slackness + gap
        worst = max(worst, abs(sol.value - ref))
        assert abs(sol.value - ref) <= 1e-4, (checked, sol.value, ref)
        checked += 1
    print(f"\nPASS criterion 8: {checked} random piecewise-linear programs match "
          f"refined grid search (worst {worst:.2e} <= 1e-4); dual certificates "
          f"verified on every optimum")
