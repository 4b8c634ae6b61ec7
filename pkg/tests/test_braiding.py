"""Schedules, edge frames, the exchange protocol, disorder, and wire arrays."""
import numpy as np
import pytest

from mtcsim.chain import uniform_chain
from mtcsim.propagate import one_period_propagator, mode_of_site
from mtcsim.schedule import (Stage, StageSchedule, canonical_schedule,
                             apply_deformation, instantaneous_bonds)
from mtcsim.braiding import (edge_frame, run_protocol, normalized_fidelity,
                             multiwire_protocol, EdgeModeError)
from mtcsim.disorder import DisorderSpec, apply_disorder

PI = np.pi
SPECIAL = dict(JT=PI, DeltaT=PI, mu1T=0.0, mu2T=PI)


def special_chain(N, T=1.0):
    return uniform_chain(N, **SPECIAL, T=T)


# ---------------------------------------------------------------------------
# schedule construction
# ---------------------------------------------------------------------------

def test_canonical_schedule_shape():
    sched = canonical_schedule(special_chain(10), 200)
    assert len(sched.stages) == 6
    assert sched.total_periods == 1200
    assert [st.every_other for st in sched.stages] == [False, False, True] * 2


def test_zero_period_schedule_rejected():
    with pytest.raises(ValueError):
        canonical_schedule(special_chain(10), 0)


def test_stage_boundary_values():
    # the alternate-period stage starts at the imaginary-bond configuration
    # reached by the second stage and ends on the original chain
    T = 1.0
    sched = canonical_schedule(special_chain(10, T), 100)
    s2_end = sched.stages[1].bond_values(1.0)
    s3_start = sched.stages[2].bond_values(0.0)
    s3_end = sched.stages[2].bond_values(1.0)
    assert s2_end["J0"] == pytest.approx(PI / T)
    assert s2_end["D0"] == pytest.approx(-PI / T)
    assert s3_start["D0"] == pytest.approx(-PI / T)
    assert s3_start["J1"] == pytest.approx(-1j * PI / T)
    assert s3_start["D1"] == pytest.approx(+1j * PI / T)
    for key in ("J0", "D0", "J1", "D1"):
        assert s3_start[key] == pytest.approx(s2_end[key], abs=1e-12)
        assert s3_end[key] == pytest.approx(PI / T, abs=1e-12)


def test_every_other_cadence_advances_on_even_periods():
    st = Stage("s", 10, {"J0": lambda s: s}, every_other=True)
    progress = [st.progress(k) for k in range(1, 11)]
    assert progress == [0.0, 0.2, 0.2, 0.4, 0.4, 0.6, 0.6, 0.8, 0.8, 1.0]


def test_deformation_validation_and_identity():
    sched = canonical_schedule(special_chain(8), 20)
    with pytest.raises(ValueError):
        apply_deformation(sched, {"J1": lambda s: 0.1 + np.sin(PI * s)})
    same = apply_deformation(sched, {"J1": lambda s: 0.0 * s})
    vals = sched.stages[2].bond_values(0.37)
    vals2 = same.stages[2].bond_values(0.37)
    for key in vals:
        assert vals[key] == pytest.approx(vals2[key], abs=1e-15)


# ---------------------------------------------------------------------------
# instantaneous eigenmode identities (N = 20, five sampled ramp angles each)
# ---------------------------------------------------------------------------

def _identity_residuals(spec, v0, vpi):
    prop = one_period_propagator(spec)
    return (np.linalg.norm(prop.R @ v0 - v0),
            np.linalg.norm(prop.R @ vpi + vpi))


def _stage_spec(sched, stage_idx, s):
    vals = sched.stages[stage_idx].bond_values(s)
    return sched.base.replace_bonds(instantaneous_bonds(sched, sched.base, vals))


@pytest.mark.parametrize("phi", [0.0, PI / 8, PI / 4, 3 * PI / 8, PI / 2])
def test_stage_one_instantaneous_modes(phi):
    # zero mode cos(phi)(g1A + g1B) - sin(phi)(g3A + g3B); pi mode the
    # relative-sign partner
    N = 20
    sched = canonical_schedule(special_chain(N), 10)
    spec = _stage_spec(sched, 0, phi / (PI / 2))
    c, s = np.cos(phi), np.sin(phi)
    v0 = np.zeros(2 * N)
    v0[[0, 1, 4, 5]] = [c, c, -s, -s]
    vpi = np.zeros(2 * N)
    vpi[[0, 1, 4, 5]] = [c, -c, -s, s]
    v0 /= np.linalg.norm(v0)
    vpi /= np.linalg.norm(vpi)
    r0, rpi = _identity_residuals(spec, v0, vpi)
    assert r0 < 1e-10 and rpi < 1e-10


@pytest.mark.parametrize("phi", [0.0, PI / 8, PI / 4, 3 * PI / 8, PI / 2])
def test_stage_two_instantaneous_modes(phi):
    # with this package's drive orientation (conjugate imaginary components,
    # chosen so the exchange runs forward) the stage-two instantaneous modes
    # carry third-site components of the opposite sign relative to the
    # orientation with J2 = +i|J2|; the two orientations are connected by the
    # relabeling g_j -> -g_j for j >= 3.
    N = 20
    sched = canonical_schedule(special_chain(N), 10)
    spec = _stage_spec(sched, 1, phi / (PI / 2))
    c, s = np.cos(phi), np.sin(phi)
    v0 = np.zeros(2 * N)
    v0[[0, 1, 4, 5]] = [-s, s, c, c]
    vpi = np.zeros(2 * N)
    vpi[[0, 1, 4, 5]] = [s, s, c, -c]
    v0 /= np.linalg.norm(v0)
    vpi /= np.linalg.norm(vpi)
    r0, rpi = _identity_residuals(spec, v0, vpi)
    assert r0 < 1e-10 and rpi < 1e-10


# ---------------------------------------------------------------------------
# protocol runs
# ---------------------------------------------------------------------------

def test_edge_frame_special_point():
    frame = edge_frame(one_period_propagator(special_chain(30)))
    assert np.abs(frame.gLA - mode_of_site(30, 0, "A").c).max() < 1e-10
    assert abs(abs(frame.gLB @ mode_of_site(30, 0, "B").c) - 1.0) < 1e-10
    g = frame.matrix()
    assert np.abs(g.T @ g - np.eye(4)).max() < 1e-10


def test_edge_frame_requires_modes():
    with pytest.raises(EdgeModeError):
        edge_frame(one_period_propagator(uniform_chain(30, 0.2, 0.2, 0.0, 2.0)))


def test_empty_schedule_is_identity():
    spec = special_chain(16)
    sched = StageSchedule((), spec)
    res = run_protocol(sched, record_every=1)
    assert res.report.theta == 0.0
    fin = res.final
    assert fin.c_AA == pytest.approx(1.0, abs=1e-12)
    assert fin.c_BB == pytest.approx(1.0, abs=1e-12)
    assert fin.c_AB == pytest.approx(0.0, abs=1e-12)
    assert fin.c_BA == pytest.approx(0.0, abs=1e-12)


def test_stage_one_endpoint_moves_mode_to_third_site():
    spec = special_chain(20)
    sched = canonical_schedule(spec, 100)
    first = StageSchedule(sched.stages[:1], spec)
    res = run_protocol(first, record_every=100, track_leakage=False)
    # reconstruct the evolved mode from the records is indirect; rerun the
    # accumulation by hand for the overlap with -g3A
    from mtcsim.braiding import _PeriodCache
    cache = _PeriodCache(spec, (0, 1))
    w = np.eye(2 * spec.N)
    for _, _, _, values in first.period_values():
        w = cache.rotation(instantaneous_bonds(first, spec, values)) @ w
    evolved = w @ res.frame.gLA
    minus_g3a = -mode_of_site(20, 2, "A").c
    assert float(evolved @ minus_g3a) > 0.99


def test_half_protocol_quarter_rotation_and_theta_doubling():
    spec = special_chain(40)
    sched = canonical_schedule(spec, 100)
    res = run_protocol(sched, record_every=50)
    # theta after three stages ~ pi/4, after all six ~ pi/2.  The default ramp
    # carries a small rate-independent geometric offset (~6.8e-3 per pass,
    # verified against the many-body oracle), so the per-milestone targets are
    # met at the 2e-2 level while the doubling relation is essentially exact.
    assert res.theta_by_stage[2] == pytest.approx(PI / 4, abs=2e-2)
    assert res.theta_by_stage[5] == pytest.approx(PI / 2, abs=4e-2)
    assert res.theta_by_stage[5] == pytest.approx(2 * res.theta_by_stage[2], abs=1e-3)
    fin = res.final
    assert abs(fin.c_AB - 1.0) < 1e-2
    assert abs(fin.c_BA + 1.0) < 1e-2
    assert abs(fin.c_AA) < 2.5e-2 and abs(fin.c_BB) < 2.5e-2
    assert res.leakage_max < 1e-2
    assert not res.leakage_flagged


def test_correlations_bounded_and_block_orthogonal_when_in_span():
    spec = special_chain(30)
    sched = canonical_schedule(spec, 60)
    res = run_protocol(sched, record_every=10)
    for rec in res.records:
        for val in (rec.c_AA, rec.c_BB, rec.c_AB, rec.c_BA):
            assert -1.0 - 1e-9 <= val <= 1.0 + 1e-9
    # wherever the evolved modes lie inside the initial frame, the projected
    # block is a rotation (orthogonal, det +1)
    for rec in res.records:
        block = np.array([[rec.c_AA, rec.c_BA], [rec.c_AB, rec.c_BB]])
        weight = (block ** 2).sum(axis=0)
        if weight.min() > 1.0 - 1e-6:
            assert np.abs(block.T @ block - np.eye(2)).max() < 1e-6
            assert np.linalg.det(block) > 0


def test_fidelity_formula():
    rep = normalized_fidelity(PI / 2)
    assert rep.overlap == pytest.approx(1.0)
    assert rep.normalized_fidelity == pytest.approx(1.0)
    rep0 = normalized_fidelity(0.0)
    assert rep0.overlap == pytest.approx(1.0 / np.sqrt(2.0))
    assert rep0.normalized_fidelity == pytest.approx(0.0, abs=1e-15)


# ---------------------------------------------------------------------------
# disorder
# ---------------------------------------------------------------------------

def test_disorder_zero_ranges_identity():
    spec = special_chain(10)
    d = DisorderSpec(dJ=0, dDelta=0, dmu1=0, dmu2=0, h2_mean=0, dh2=0,
                     realizations=3, master_seed=1)
    out = apply_disorder(spec, d, 0)
    assert np.array_equal(out.J, spec.J)
    assert np.array_equal(out.Delta, spec.Delta)
    assert np.array_equal(out.mu1, spec.mu1)
    assert np.array_equal(out.mu2, spec.mu2)
    assert np.array_equal(out.h2_hopping, spec.h2_hopping)


def test_disorder_deterministic_and_distinct():
    spec = special_chain(12)
    d = DisorderSpec(realizations=4, master_seed=7)
    a = apply_disorder(spec, d, 2)
    b = apply_disorder(spec, d, 2)
    c = apply_disorder(spec, d, 3)
    assert np.array_equal(a.J, b.J) and np.array_equal(a.mu2, b.mu2)
    assert not np.array_equal(a.J, c.J)
    assert np.abs(a.J - spec.J).max() <= 0.1 / spec.T + 1e-15
    assert np.abs(a.h2_hopping - 0.025 / spec.T).max() <= 0.01 / spec.T + 1e-15
    with pytest.raises(ValueError):
        apply_disorder(spec, d, 4)


def test_disordered_run_stays_close_to_clean():
    spec = special_chain(30)
    sched = canonical_schedule(spec, 80)
    d = DisorderSpec(realizations=2, master_seed=3)
    real = apply_disorder(spec, d, 0)
    res = run_protocol(sched, real, record_every=80, track_leakage=False)
    assert abs(res.final.c_AB - 1.0) < 0.2
    assert abs(res.final.c_BA + 1.0) < 0.2


# ---------------------------------------------------------------------------
# wire arrays
# ---------------------------------------------------------------------------

def test_multiwire_requires_two_wires():
    with pytest.raises(ValueError):
        multiwire_protocol([special_chain(8)], 0, 10)


def test_multiwire_decoupled_wires_stay_independent():
    wires = [special_chain(8), special_chain(8)]
    res = multiwire_protocol(wires, 0, 20, interwire_off=True)
    for (src, dst), val in res.overlaps.items():
        cross = src.endswith("l") != dst.endswith("l")
        if cross:
            assert abs(val) < 1e-8


def test_multiwire_exchange_small():
    wires = [special_chain(8), special_chain(8)]
    res = multiwire_protocol(wires, 0, 80)
    assert res.overlaps[("A_l1", "B_l")] < -0.98
    assert res.overlaps[("B_l1", "A_l")] > 0.98
    assert res.overlaps[("A_l", "A_l1")] > 0.98
    assert res.overlaps[("B_l", "B_l1")] > 0.98
    assert res.leakage_max < 0.05


def test_random_smooth_deformations_keep_high_fidelity():
    # ten seeded random smooth deformations at five-percent relative
    # magnitude; the recorded calibration (against the two reference
    # deformation runs at ~ten percent) puts every fidelity well above 0.98
    spec = special_chain(30)
    base = canonical_schedule(spec, 60)
    scale = 0.05 * PI
    fids = []
    for seed in range(10):
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, 31], np.uint64)))
        amps = rng.uniform(-1, 1, 6)
        curves = {
            "J1": lambda s, a=amps: scale * (a[0] + 1j * a[1]) * np.sin(PI * s),
            "D1": lambda s, a=amps: scale * (a[2] + 1j * a[3]) * np.sin(PI * s),
            "D0": lambda s, a=amps: scale * (a[4] + a[5]) * (s - s * s),
        }
        sched = apply_deformation(base, curves)
        res = run_protocol(sched, record_every=10 ** 9, track_leakage=False)
        fids.append(res.report.normalized_fidelity)
    assert min(fids) > 0.98
