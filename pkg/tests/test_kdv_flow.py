import numpy as np
import pytest

import centrokdv.periodic_fn as pf
import centrokdv.curve_core as cc
import centrokdv.invariants as iv
import centrokdv.kdv_flow as kf
from centrokdv.errors import BranchJump, StepUnstable
from centrokdv.riccati_monodromy import spectral_scan


def wave_potential(n=128):
    t = pf.grid(n)
    return pf.PeriodicFn(-1.0 + 0.1 * np.cos(2 * t), "periodic")


def gentle_curve(n=128, amp=0.1):
    t = pf.grid(n)
    return cc.lift(cc.ProjectiveCurve(pf.PeriodicFn(amp * np.sin(2 * t), "periodic")))


def seeded_curve(seed, n=128):
    rng = np.random.default_rng(seed)
    return cc.lift(cc.random_projective(rng, n))


def wronskian_defect(G):
    w = G.gamma1 * pf.differentiate(G.gamma2) - G.gamma2 * pf.differentiate(G.gamma1)
    return float(np.max(np.abs(w.samples - 1.0)))


def test_rhs_of_constant_vanishes():
    out = kf.kdv_rhs(pf.constant(-1.0, 64))
    assert np.max(np.abs(out.samples)) < 1e-13


def test_rhs_matches_hand_computed():
    # p = -1 + 0.1 cos 2t gives -1/2 p''' + 3 p' p = 0.2 sin 2t - 0.03 sin 4t
    t = pf.grid(128)
    out = kf.kdv_rhs(wave_potential())
    expected = 0.2 * np.sin(2 * t) - 0.03 * np.sin(4 * t)
    assert np.max(np.abs(out.samples - expected)) < 1e-9


def test_rhs_integral_vanishes():
    rng = np.random.default_rng(3)
    p = pf.random_band_limited(rng, 128, parity="periodic", max_mode=6)
    assert abs(pf.integrate_period(kf.kdv_rhs(p))) < 1e-12


def test_rhs_rejects_antiperiodic_input():
    rng = np.random.default_rng(4)
    f = pf.random_band_limited(rng, 64, parity="antiperiodic", max_mode=3)
    with pytest.raises(ValueError):
        kf.kdv_rhs(f)


def test_potential_flow_fixes_constant():
    out = kf.evolve_potential(pf.constant(-1.0, 128), 0.05)
    assert np.max(np.abs(out.samples + 1.0)) < 1e-12


def test_potential_flow_zero_time_returns_input():
    p = wave_potential()
    assert kf.evolve_potential(p, 0.0) is p


def test_potential_flow_rejects_bad_inputs():
    rng = np.random.default_rng(4)
    f = pf.random_band_limited(rng, 64, parity="antiperiodic", max_mode=3)
    with pytest.raises(ValueError):
        kf.evolve_potential(f, 0.01)
    with pytest.raises(ValueError):
        kf.evolve_potential(wave_potential(), 0.01, ds=0.0)


def test_potential_flow_conserves_hamiltonians():
    p0 = wave_potential()
    h1a, h2a = iv.hamiltonians(p0)
    h1b, h2b = iv.hamiltonians(kf.evolve_potential(p0, 0.05))
    # the mean mode is static in both integrator pieces, so H1 is exact
    assert abs(h1b - h1a) < 1e-12
    assert abs(h2b - h2a) / abs(h2a) < 1e-8


def test_potential_flow_is_fourth_order_in_step():
    t = pf.grid(128)
    p0 = pf.PeriodicFn(-1.0 + 0.8 * np.cos(2 * t) + 0.4 * np.sin(4 * t), "periodic")
    ref = kf.evolve_potential(p0, 0.05, ds=6.25e-5)
    errs = [
        np.max(np.abs(kf.evolve_potential(p0, 0.05, ds=ds).samples - ref.samples))
        for ds in (2e-3, 1e-3)
    ]
    ratio = errs[0] / errs[1]
    assert 8.0 < ratio < 32.0


def test_potential_flow_detects_blowup():
    t = pf.grid(128)
    steep = pf.PeriodicFn(-1.0 + 20.0 * np.cos(2 * t), "periodic")
    with pytest.raises(StepUnstable):
        kf.evolve_potential(steep, 0.1, ds=0.01)


def test_curve_flow_translates_circle():
    # constant curvature -1 reduces the transport field to -Gamma'
    circ = cc.lift(cc.make_circle(128))
    moved = kf.evolve_curve(circ, 0.03)
    expected = pf.shift(circ.gamma1, -0.03)
    assert np.max(np.abs(moved.gamma1.samples - expected.samples)) < 1e-9
    assert moved.gamma1.parity == "antiperiodic"


def test_curve_flow_zero_time_returns_input():
    G = gentle_curve()
    assert kf.evolve_curve(G, 0.0) is G


def test_curve_flow_keeps_unit_wronskian():
    moved = kf.evolve_curve(seeded_curve(5), 0.05)
    assert wronskian_defect(moved) < 1e-7


def test_curve_flow_matches_potential_flow():
    G = gentle_curve()
    moved = kf.evolve_curve(G, 0.02)
    direct = kf.evolve_potential(cc.curvature(G), 0.02)
    assert np.max(np.abs(cc.curvature(moved).samples - direct.samples)) < 1e-6


def test_curve_flow_rough_input_raises_and_refined_grid_recovers():
    rng = np.random.default_rng(7)
    psi = 0.05 * pf.random_band_limited(rng, 128, max_mode=5)
    with pytest.raises(StepUnstable):
        kf.evolve_curve(cc.lift(cc.ProjectiveCurve(psi)), 0.02)
    fine = cc.lift(cc.ProjectiveCurve(pf.upsample(psi, 256)))
    moved = kf.evolve_curve(fine, 0.02, ds=2.5e-5)
    assert wronskian_defect(moved) < 1e-9


def test_flow_preserves_invariants():
    G = seeded_curve(5)
    before = iv.invariant_report(G)
    after = iv.invariant_report(kf.evolve_curve(G, 0.05))
    for key in ("H1", "H2", "I", "J", "K"):
        rel = abs(after[key] - before[key]) / max(1.0, abs(before[key]))
        assert rel < 1e-7


def test_flow_preserves_spectrum():
    G = seeded_curve(5)
    moved = kf.evolve_curve(G, 0.05)
    lams = np.linspace(-2.0, 0.9, 21)
    before = spectral_scan(cc.project(G), lams)
    after = spectral_scan(cc.project(moved), lams)
    rel = np.abs(after.tr2 - before.tr2) / np.maximum(1.0, np.abs(before.tr2))
    assert np.max(rel) < 1e-5


def test_flow_grid_doubling_agrees():
    rng = np.random.default_rng(7)
    psi = 0.05 * pf.random_band_limited(rng, 128, max_mode=3, parity="periodic")
    coarse = kf.evolve_curve(cc.lift(cc.ProjectiveCurve(psi)), 0.02)
    fine = kf.evolve_curve(cc.lift(cc.ProjectiveCurve(pf.upsample(psi, 256))), 0.02)
    ra, rb = iv.invariant_report(coarse), iv.invariant_report(fine)
    for key in ("H1", "H2", "I", "J", "K"):
        assert abs(rb[key] - ra[key]) / max(1.0, abs(ra[key])) < 1e-8


def test_recursion_circle_residuals_vanish():
    t = pf.grid(128)
    fields = [pf.constant(1.0, 128), pf.PeriodicFn(np.sin(2 * t), "periodic")]
    circ = cc.lift(cc.make_circle(128))
    res1 = kf.recursion_check(circ, 1, fields)
    assert np.max(res1["second_form"]) < 1e-9
    assert np.max(res1["first_form"]) < 1e-9
    res2 = kf.recursion_check(circ, 2, fields)
    assert np.max(res2["second_form"]) < 1e-9
    assert res2["first_form"] is None


def test_recursion_random_curves():
    for seed in (3, 4, 5):
        rng = np.random.default_rng(100 + seed)
        G = seeded_curve(seed)
        fields = [
            pf.random_band_limited(rng, 128, parity="periodic", max_mode=6)
            for _ in range(12)
        ]
        res1 = kf.recursion_check(G, 1, fields)
        assert np.max(res1["second_form"]) < 1e-6
        assert np.max(res1["first_form"]) < 1e-6
        res2 = kf.recursion_check(G, 2, fields)
        assert np.max(res2["second_form"]) < 1e-6


def test_recursion_residual_is_linear_in_field():
    rng = np.random.default_rng(103)
    G = seeded_curve(3)
    g1 = pf.random_band_limited(rng, 128, parity="periodic", max_mode=6)
    g2 = pf.random_band_limited(rng, 128, parity="periodic", max_mode=6)
    res = kf.recursion_check(G, 1, [g1, g2, g1 + 2.0 * g2])["second_form"]
    # the pairing and the derivative are both linear, so signed residuals add
    assert res[2] <= res[0] + 2.0 * res[1] + 1e-8


def test_recursion_rejects_bad_index():
    with pytest.raises(ValueError):
        kf.recursion_check(gentle_curve(), 3, [])


def test_commutation_circle():
    assert kf.commutation_check(cc.lift(cc.make_circle(128)), 0.5) < 1e-9


def test_commutation_exemplar():
    assert kf.commutation_check(gentle_curve(amp=0.05), 0.5, s=0.02) < 1e-5


def test_commutation_seeded_curves():
    for seed in (1, 2):
        assert kf.commutation_check(seeded_curve(seed), 0.5, s=0.02) < 1e-5


def test_branch_tracking_follows_value_across_label_swap():
    # the labels trade places immediately; continuity must follow the value
    def sample(s):
        if s == 0.0:
            return {"plus": 1.0, "minus": -1.0}
        return {"plus": -1.0 - s, "minus": 1.0 + s}

    label = kf._track_branch(sample, 0.02, 1.0, min_step=0.0025)
    assert label == "minus"


def test_branch_tracking_reports_jump():
    def sample(s):
        return {"plus": 10.0, "minus": -10.0}

    with pytest.raises(BranchJump):
        kf._track_branch(sample, 0.02, 1.0, min_step=0.0025)


def test_flow_trace_states():
    G = gentle_curve()
    states = kf.flow_trace(G, 0.02, samples=4)
    assert [st.s for st in states] == [0.0, 0.005, 0.01, 0.015, 0.02]
    assert states[0].Gamma is G
    assert np.array_equal(states[0].p.samples, cc.curvature(G).samples)
    direct = kf.evolve_curve(G, 0.02)
    assert np.array_equal(states[-1].Gamma.gamma1.samples, direct.gamma1.samples)
    h1s = [iv.hamiltonians(st.p)[0] for st in states]
    assert max(h1s) - min(h1s) < 1e-9
    drift = np.abs(states[-1].p.samples - kf.evolve_potential(states[0].p, 0.02).samples)
    assert np.max(drift) < 1e-6


def test_flow_trace_rejects_bad_sample_count():
    with pytest.raises(ValueError):
        kf.flow_trace(gentle_curve(), 0.02, samples=0)


def test_flow_trace_csv(tmp_path):
    states = kf.flow_trace(gentle_curve(), 0.02, samples=4)
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    kf.flow_trace_to_csv(states, first)
    kf.flow_trace_to_csv(states, second)
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().strip().splitlines()
    assert lines[0] == "s,H1,H2,I,J,K"
    assert len(lines) == 6
    table = np.array([[float(x) for x in row.split(",")] for row in lines[1:]])
    assert np.allclose(table[:, 0], [0.0, 0.005, 0.01, 0.015, 0.02], atol=1e-15)
    assert np.max(np.abs(table[:, 1] - table[0, 1])) < 1e-9
