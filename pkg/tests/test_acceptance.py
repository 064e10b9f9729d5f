"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line with the measured
figure of merit. Run with ``pytest -v tests/test_acceptance.py``.
"""

import gc
import math
import time

import numpy as np
import pytest

from schwarz_signal import catalog, conic, engine, interstellar, metric, moving, signal, straight

from oracles import ALPHA_NS, C, GFSP_NS_2R_INF, R_NS, R_SUN, planar_cos_psi, sr_radial


@pytest.fixture
def report(capsys):
    def emit(crit, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {crit}: {detail}")
        return ok
    return emit


def _rel(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.abs(np.asarray(b))))


def _random_states(rng, n):
    alpha = rng.uniform(1.0, 1e4, n)
    r1 = alpha * 10 ** rng.uniform(0.001, 4, n)
    r2 = alpha * 10 ** rng.uniform(0.001, 4, n)
    u = rng.uniform(0, 0.99, n) * C
    cos = rng.uniform(-1, 1, n)
    return alpha, r1, r2, u, cos


def test_criterion_1_composition_identity(report, rng):
    t0 = time.perf_counter()
    worst = 0.0
    for p in catalog.builtin_presets():
        n = min(p.resolution, 2049)
        s = engine.build_series(p, p.duration, n)
        worst = max(worst, _rel(s.beta1 * s.beta2, s.beta))
    alpha, r1, r2, u, cos = _random_states(rng, 100_000)
    beta, b1, b2 = metric.fsp_components(u, cos, r1, r2, alpha)
    worst = max(worst, _rel(b1 * b2, beta))
    # random points along a curved orbit: fused kernel against the pointwise formula
    traj = catalog.preset("fig8_ns_ellipse").build()
    phi = rng.uniform(-10, 10, 100_000)
    b1, b2, _, _ = traj.path().evaluate(phi)
    o = traj.orbit
    beta = metric.fsp_components(conic.ug_conic(o, phi), conic.cos_psi_conic(o, traj.geometry, phi),
                                 traj.geometry.r1, conic.radius_of_phi(o, phi), o.alpha)[0]
    worst = max(worst, _rel(b1 * b2, beta))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 5.0
    report(1, ok, f"max rel |beta - beta1*beta2| = {worst:.2e} (< 1e-12), {elapsed:.2f} s (< 5 s)")
    assert worst < 1e-12
    assert elapsed < 5.0


def test_criterion_2_static_limit(report, rng):
    alpha, r1, r2, _, cos = _random_states(rng, 1000)
    worst = 0.0
    for a, x1, x2, c in zip(alpha, r1, r2, cos):
        body = catalog.GravBody("x", a * catalog.C**2 / (2 * catalog.G), 1.001 * a)
        a = body.alpha
        ref = math.sqrt((1 - a / x1) / (1 - a / x2))
        beta = metric.fsp_point(metric.KinematicState(0.0, float(c)), x1, x2, a)[0]
        series = engine.StaticReceiver(body, x1, x2).fsp_series(np.array([0.0, 1.0]))
        worst = max(worst, abs(beta / ref - 1), abs(series.beta[1] / ref - 1))
    ok = report(2, worst < 1e-14, f"max rel deviation from closed form = {worst:.2e} (< 1e-14)")
    assert ok


def _flat_conic_reference(o, phi, r1):
    out = []
    for f in phi:
        r = conic.radius_of_phi(o, f)
        vr, vt = conic.radial_rate(o, f), r * conic.angular_rate(o, f)
        out.append(metric.sr_doppler(math.hypot(vr, vt), planar_cos_psi(r1, r, f, vr, vt)))
    return np.array(out)


def _flat_interstellar_reference(link, phi):
    o = link.orbit_b
    out = []
    for f in phi:
        vr, vt = conic.radial_rate(o, f), conic.radius_of_phi(o, f) * conic.angular_rate(o, f)
        vx = vr * math.cos(f) - vt * math.sin(f)
        v = math.hypot(vr, vt)
        out.append(sr_radial(link.v_h) * metric.sr_doppler(v, -vx / v))
    return np.array(out)


def test_criterion_3_flat_space_reduction(report):
    flat = catalog.body("neutron_star").flat()
    u = 1e7
    s = engine.build_series(straight.StraightTrajectory(flat, 2 * R_NS, 5 * R_NS, u), 250.0, 4096)
    e_straight = _rel(s.beta, np.full(len(s), sr_radial(u)))

    o = conic.ConicOrbit.from_axis(flat, 0.2, 5 * R_NS)
    cs = engine.build_series(conic.ConicTrajectory(o, conic.OrbitGeometry(2 * R_NS)),
                             2 * o.newtonian_period, 1025)
    e_conic = _rel(cs.beta, _flat_conic_reference(o, cs.extras["phi"], 2 * R_NS))

    lk = interstellar.InterstellarLink(flat, 2 * R_NS, 1e7, conic.ConicOrbit.from_axis(flat, 0.2, 5 * R_NS))
    ls = engine.build_series(lk, 2 * o.newtonian_period, 1025)
    e_link = _rel(ls.beta, _flat_interstellar_reference(lk, ls.extras["phi"]))

    worst = max(e_straight, e_conic, e_link)
    ok = report(3, worst < 1e-9, f"straight {e_straight:.1e}, conic {e_conic:.1e}, "
                                 f"interstellar {e_link:.1e} (< 1e-9)")
    assert ok


def test_criterion_4_chirp_regime(report):
    t0 = time.perf_counter()
    p = catalog.preset("fig5a")
    traj = p.build()
    assert (traj.r1, traj.r0, traj.u_h) == (2 * R_SUN, 5 * R_SUN, 16700.0)
    exact = straight.fsp_exact(traj, engine.uniform_grid(250.0, 250_001))
    approx = straight.fsp_linear_approx(traj, exact.tau)
    e_lin = _rel(approx.beta, exact.beta)
    omega = 2 * math.pi * 100.0
    fit = signal.chirp_fit(signal.warp_tone(omega, exact))
    want = straight.chirp_constants(traj).C3 * omega / (2 * math.pi)
    e_rate = abs(fit.rate / want - 1)
    elapsed = time.perf_counter() - t0
    ok = e_lin < 1e-5 and e_rate < 0.01 and elapsed < 10.0
    report(4, ok, f"linear vs exact {e_lin:.2e} (< 1e-5), chirp rate {fit.rate:.6e} vs "
                  f"{want:.6e} off {e_rate:.2%} (< 1%), {elapsed:.2f} s (< 10 s)")
    assert e_lin < 1e-5 and e_rate < 0.01 and elapsed < 10.0


def test_criterion_5_ode_convergence(report):
    worst, where = 0.0, ""
    for p in catalog.builtin_presets():
        a = engine.build_series(p)
        n = a.extras.get("substeps")
        if n is None:  # static receiver, closed form
            continue
        end = (float(a.beta[-1]), float(a.B[-1]))
        del a
        gc.collect()
        b = engine.build_series(p, substeps=2 * n)
        d = max(abs(b.beta[-1] / end[0] - 1), abs(b.B[-1] / end[1] - 1))
        del b
        gc.collect()
        if d > worst:
            worst, where = d, p.id
    ok = report(5, worst < 1e-10, f"worst rel change on halving the step = {worst:.2e} "
                                  f"({where}) (< 1e-10)")
    assert ok


def test_criterion_6_neutron_star_gravitational_shift(report):
    ns = catalog.body("neutron_star")
    alpha = 2 * catalog.G * (2.01 * 1.9891e30) / catalog.C**2
    got = metric.gfsp_static(2 * ns.radius, math.inf, ns.alpha)
    err = abs(got / GFSP_NS_2R_INF - 1)
    ok = report(6, err < 1e-12 and abs(alpha / ALPHA_NS - 1) < 1e-15,
                f"beta2 = {got:.15f} vs hand value {GFSP_NS_2R_INF:.15f}, rel {err:.1e} (< 1e-12)")
    assert ns.alpha == pytest.approx(alpha, rel=1e-15)
    assert ok


def test_criterion_7_fig8_bandwidth_ordering(report):
    t0 = time.perf_counter()
    p = catalog.preset("fig8_ns_ellipse")
    s = engine.build_series(p)
    fs = 1.0 / s.step
    tone = 1e5
    bw = {}
    for mode in ("gmdfsp", "gfsp", "full"):
        buf = signal.warp_tone(2 * math.pi * tone, s, mode)
        rep = signal.spectrum(buf)
        bw[mode], bin_w = rep.occupied_bw, rep.bin_width
        del buf, rep
        gc.collect()
    del s
    gc.collect()
    elapsed = time.perf_counter() - t0
    close = abs(bw["full"] / bw["gmdfsp"] - 1)
    ok = (bw["gmdfsp"] >= bw["gfsp"] > bin_w) and close <= 0.10 and elapsed < 60.0
    report(7, ok, f"fs/tone = {fs / tone:.3f}; bw beta1-only {bw['gmdfsp']:.1f} Hz >= beta2-only "
                  f"{bw['gfsp']:.1f} Hz > bin {bin_w:.4f} Hz; full {bw['full']:.1f} Hz within "
                  f"{close:.1%} (<= 10%); {elapsed:.1f} s (< 60 s)")
    assert bw["gmdfsp"] >= bw["gfsp"] > bin_w
    assert close <= 0.10
    assert elapsed < 60.0


@pytest.fixture(scope="module")
def fig6():
    p = catalog.preset("fig6_ns")
    traj = p.build()
    return traj, engine.build_series(p), metric.sr_doppler(traj.u_h, 1.0)


def test_criterion_8_fig6_time_map(report, fig6):
    _, s, _ = fig6
    d = s.tau - s.T
    d2 = np.diff(d, 2)
    ok = (bool(np.all(s.dT_dtau > 1)) and bool(np.all(d[1:] < 0)) and bool(np.all(np.diff(d) < 0))
          and abs(d2[-1]) < 1e-3 * abs(d2[0]) and bool(np.all(np.diff(np.abs(d2)) < 0)))
    report("8a", ok, f"min dT/dtau = {s.dT_dtau.min():.6f} (> 1); tau-T negative and decreasing; "
                     f"second difference {d2[0]:.2e} -> {d2[-1]:.2e}")
    assert ok


def test_criterion_8_fig6_gap_shrinks(report, fig6):
    # the gap between the curved-space and flat Doppler factors closes
    # monotonically as the receiver leaves the well
    _, s, sr = fig6
    gap = np.abs(s.beta1 - sr)
    ok = bool(np.all(np.diff(gap) < 0)) and gap[-1] < 0.02 * gap[0]
    report("8b", ok, f"|beta1 - sr_doppler| shrinks monotonically {gap[0]:.2e} -> {gap[-1]:.2e}; "
                     f"beta1 deviates from 1 more than sr_doppler everywhere: "
                     f"{bool(np.all(np.abs(1 - s.beta1) > abs(1 - sr)))}")
    assert ok
    assert np.all(np.abs(1 - s.beta1) > abs(1 - sr))


@pytest.mark.xfail(strict=True, reason="for a receding receiver beta1 = sqrt((m-b)/(m+b)) lies "
                                       "below the flat value sqrt((1-b)/(1+b)) whenever m < 1")
def test_criterion_8_fig6_literal_beta1_at_least_sr(report, fig6):
    _, s, sr = fig6
    n_ok = int(np.sum(s.beta1 >= sr))
    ok = n_ok == len(s)
    report("8c", ok, f"literal beta1 >= sr_doppler holds at {n_ok}/{len(s)} samples "
                     f"(max beta1 {s.beta1.max():.9f}, sr_doppler {sr:.9f})")
    assert ok


def test_criterion_9_conic_conservation(report):
    worst = 0.0
    for pid in ("fig7_ellipse", "fig7_parabola", "fig7_hyperbola",
                "fig7_wd_ellipse", "fig7_wd_parabola", "fig7_wd_hyperbola",
                "fig7_ns_ellipse", "fig7_ns_parabola", "fig7_ns_hyperbola"):
        p = catalog.preset(pid)
        o = p.build().orbit
        phi = engine.build_series(p).extras["phi"]
        lo, hi = o.phi_range()
        dense = np.linspace(max(lo, -50.0), min(hi, 50.0), 20001)
        for f in (phi, dense):
            r = conic.radius_of_phi(o, f)
            worst = max(worst, float(np.max(np.abs(r * r * conic.angular_rate(o, f) / o.h - 1))))
    ok = report(9, worst < 1e-12, f"max rel |r^2 dphi/dT - h| / h = {worst:.2e} (< 1e-12)")
    assert ok


def test_criterion_10_moving_endpoints(report, rng):
    alpha = 5938.0
    def state():
        return moving.EndpointState(alpha * 10 ** rng.uniform(0.001, 4), rng.uniform(0, 0.95) * C,
                                    rng.uniform(-1, 1))
    recip = red = 0.0
    for _ in range(1000):
        tx, rx = state(), state()
        recip = max(recip, abs(moving.end_to_end_fsp(tx, rx, alpha) * moving.end_to_end_fsp(rx, tx, alpha) - 1))
        r1 = tx.r
        got = moving.end_to_end_fsp(moving.EndpointState(r1), rx, alpha)
        want = metric.fsp_point(metric.KinematicState(rx.u_g, rx.cos_psi), r1, rx.r, alpha)[0]
        red = max(red, abs(got / want - 1))
    ok = report(10, recip < 1e-12 and red < 1e-12,
                f"reciprocity {recip:.1e}, static-transmitter reduction {red:.1e} (< 1e-12)")
    assert ok
