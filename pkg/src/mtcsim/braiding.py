"""Run the adiabatic exchange protocol and track Majorana correlations.

The protocol transports the two left edge species through the chain and back;
their coefficient vectors are carried along period by period with the
oracle-pinned rotation (chronological product, later periods on the left).
Correlations against the frozen right modes are obtained by projecting the
evolved left modes onto the initial four-mode edge frame and contracting with
the initial correlation values (diagonal pairs = 1, cross pairs = 0); only
those four numbers are fixed by the assumed even-parity initial state.

Leakage is the weight of an evolved left mode outside the instantaneous
degenerate edge space of the two-period propagator (the space the adiabatic
drive is supposed to follow).  Projection loss against the *initial* frame is
order one mid-protocol, by design: the modes pass through the third site.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .chain import ChainSpec, build_h1_coupling, build_h2_coupling, coupling_from_bonds
from .propagate import OrthogonalPropagator, one_period_propagator, reorthogonalize
from .schedule import StageSchedule, Stage, _step1_curves, _step2_curves, _step3_curves, default_f, instantaneous_bonds
from .spectrum import find_edge_modes

__all__ = [
    "EdgeFrame",
    "CorrelationRecord",
    "FidelityReport",
    "ProtocolResult",
    "edge_frame",
    "run_protocol",
    "normalized_fidelity",
    "multiwire_protocol",
    "MultiwireResult",
]

SQRT_HALF = 1.0 / np.sqrt(2.0)
LEAK_ABORT_DEFAULT = 0.05


@dataclass(frozen=True)
class EdgeFrame:
    """Orthonormal frame of the four initial edge modes (columns LA, LB, RA, RB)."""

    gLA: np.ndarray
    gLB: np.ndarray
    gRA: np.ndarray
    gRB: np.ndarray

    def matrix(self):
        return np.column_stack([self.gLA, self.gLB, self.gRA, self.gRB])


class EdgeModeError(RuntimeError):
    """The initial chain does not host the required zero and pi edge modes."""

    def __init__(self, message, phases):
        super().__init__(message)
        self.phases = phases


def _pair_frame(v0, vpi, R):
    g_even = v0 + vpi
    g_even /= np.linalg.norm(g_even)
    g_odd = R @ g_even
    return g_even, g_odd


def edge_frame(prop: OrthogonalPropagator, phase_tol=1e-2, loc_threshold=0.9) -> EdgeFrame:
    """Build gamma_L^A, gamma_L^B, gamma_R^A, gamma_R^B from the initial rotation.

    The even-time species is the normalized sum of the zero and pi modes of one
    edge (signs fixed by the localization routine); the odd-time partner is its
    one-period image.  At the fine-tuned starting point this frame is exactly
    gamma_1 and gamma_N.
    """
    modes = find_edge_modes(prop, phase_tol=phase_tol, loc_threshold=loc_threshold)
    by_tag = {m.label: m.c for m in modes.zero_modes + modes.pi_modes}
    missing = [t for t in ("zero_L", "pi_L", "zero_R", "pi_R") if t not in by_tag]
    if missing:
        from .spectrum import quasienergies
        raise EdgeModeError(
            "missing edge modes %s at the protocol start" % missing,
            quasienergies(prop, check=False))
    gLA, gLB = _pair_frame(by_tag["zero_L"], by_tag["pi_L"], prop.R)
    gRA, gRB = _pair_frame(by_tag["zero_R"], by_tag["pi_R"], prop.R)
    f = EdgeFrame(gLA, gLB, gRA, gRB)
    g = f.matrix()
    if np.abs(g.T @ g - np.eye(4)).max() > 1e-6:
        raise EdgeModeError("edge frame not orthonormal", None)
    return f


@dataclass(frozen=True)
class CorrelationRecord:
    """Correlations of the evolved left modes with the frozen right modes."""

    period: int
    c_AA: float
    c_BB: float
    c_AB: float
    c_BA: float
    leakage: float


@dataclass(frozen=True)
class FidelityReport:
    """Exchange angle in the left-edge plane and the rescaled state overlap."""

    theta: float
    overlap: float
    normalized_fidelity: float


@dataclass(frozen=True)
class ProtocolResult:
    records: tuple
    report: FidelityReport
    theta_by_stage: tuple
    leakage_max: float
    leakage_flagged: bool
    frame: EdgeFrame

    @property
    def final(self):
        return self.records[-1]


def normalized_fidelity(theta: float) -> FidelityReport:
    """Fidelity of the full exchange, rescaled so 0 means 'nothing happened'.

    The left-plane rotation by theta acts on the encoded qubit as
    exp(-(theta/2) g_L^A g_L^B), so the overlap with the ideal post-exchange
    state is cos(theta/2 - pi/4); the ideal full exchange has theta = pi/2.
    """
    overlap = float(np.cos(theta / 2.0 - np.pi / 4.0))
    fid = (overlap - SQRT_HALF) / (1.0 - SQRT_HALF)
    return FidelityReport(float(theta), overlap, fid)


class _PeriodCache:
    """One-period rotations keyed by the driven-bond values of that period."""

    def __init__(self, spec: ChainSpec, owned_bonds):
        self.spec = spec
        self.owned_bonds = tuple(owned_bonds)
        tau = spec.T / 2.0
        self.r2 = expm(tau * build_h2_coupling(spec).A)
        self.tau = tau
        self._cache = {}

    def rotation(self, owned_values):
        key = tuple(sorted((b, complex(j), complex(d))
                           for b, (j, d) in owned_values.items()))
        r = self._cache.get(key)
        if r is None:
            inst = self.spec.replace_bonds(owned_values)
            r = self.r2 @ expm(self.tau * build_h1_coupling(inst).A)
            self._cache[key] = r
        return r


def _near_zero_space(r2, count=4):
    """Orthonormal real basis of the `count` eigenphases of r2 closest to zero."""
    from .spectrum import orthonormal_columns
    w, v = np.linalg.eig(r2)
    ph = np.abs(np.angle(w))
    idx = np.argsort(ph)[:count]
    return orthonormal_columns(np.hstack([v[:, idx].real, v[:, idx].imag]))


def run_protocol(schedule: StageSchedule, spec: ChainSpec = None, record_every=2,
                 leak_abort=LEAK_ABORT_DEFAULT, track_leakage=True) -> ProtocolResult:
    """Accumulate the exchange protocol period by period.

    Parameters
    ----------
    schedule : StageSchedule
        the stage curves; its base chain is used when `spec` is omitted.
    spec : ChainSpec, optional
        the actual chain (e.g. a disordered realization).  Static offsets of
        the driven bonds relative to the schedule base ride on the curves.
    record_every : int
        correlation recording cadence in periods (records always include the
        initial and final period).
    leak_abort : float
        leakage threshold; exceeding it flags the run (the run continues).
    """
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if spec is None:
        spec = schedule.base
    prop0 = one_period_propagator(spec)
    frame = edge_frame(prop0)
    cache = _PeriodCache(spec, schedule.owned_bonds)

    # per-period bond values, resolved once
    period_list = [instantaneous_bonds(schedule, spec, values)
                   for _, _, _, values in schedule.period_values()]
    stage_ends = np.cumsum([st.duration_periods for st in schedule.stages])

    w = np.eye(spec.n_majorana)
    records = []
    theta_by_stage = []
    leak_max = 0.0

    def snapshot(period, wmat):
        uA = wmat @ frame.gLA
        uB = wmat @ frame.gLB
        leak = 0.0
        if track_leakage:
            base_vals = {b: (spec.J[b], spec.Delta[b]) for b in schedule.owned_bonds}
            nxt = period_list[period] if period < len(period_list) else base_vals
            cur = period_list[period - 1] if period > 0 else nxt
            q2 = cache.rotation(nxt) @ cache.rotation(cur)
            basis = _near_zero_space(q2)
            for u in (uA, uB):
                proj = basis.T @ u
                leak = max(leak, 1.0 - float(proj @ proj), 0.0)
        records.append(CorrelationRecord(
            period,
            c_AA=float(frame.gLA @ uA), c_BB=float(frame.gLB @ uB),
            c_AB=float(frame.gLB @ uA), c_BA=float(frame.gLA @ uB),
            leakage=leak))
        return leak

    leak_max = max(leak_max, snapshot(0, w))
    for period, owned in enumerate(period_list, start=1):
        w = cache.rotation(owned) @ w
        if period % 512 == 0:
            w = reorthogonalize(w)
        if period % record_every == 0 or period == len(period_list):
            leak_max = max(leak_max, snapshot(period, w))
        if period in stage_ends:
            uA = w @ frame.gLA
            theta_by_stage.append(float(np.arctan2(frame.gLB @ uA, frame.gLA @ uA)))

    report = normalized_fidelity(theta_by_stage[-1] if theta_by_stage else 0.0)
    return ProtocolResult(tuple(records), report, tuple(theta_by_stage),
                          leak_max, leak_max > leak_abort, frame)


# ---------------------------------------------------------------------------
# wire arrays
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiwireResult:
    overlaps: dict
    frames: tuple
    leakage_max: float


def _reversed_curve(g):
    return lambda s: g(1.0 - s)


def _multiwire_stages(T, periods_per_step):
    """Seven stages moving the left modes of wire l and wire l+1 past each other.

    Keys "J0","D0","J1","D1" drive wire-l bonds; "JW","DW" drive the bond from
    site 2 of wire l to site 1 of wire l+1.  The inter-wire ramps reuse the
    imaginary-axis curve of step 2; their shapes are not otherwise pinned.
    """
    s1 = _step1_curves(T)
    s2 = _step2_curves(T)
    zero = lambda s: 0.0 + 0j
    st1 = Stage("mw1", periods_per_step, s1)
    st2 = Stage("mw2", periods_per_step, {
        "J0": s2["J0"], "D0": s2["D0"],
        "J1": zero, "D1": zero,
        "JW": s2["J1"], "DW": s2["D1"],
    })
    st3 = Stage("mw3", periods_per_step, {
        "J0": lambda s: s2["J0"](1.0),
        "D0": lambda s: s2["D0"](1.0),
        "J1": s2["J1"], "D1": s2["D1"],
        "JW": _reversed_curve(s2["J1"]), "DW": _reversed_curve(s2["D1"]),
    })
    s3c = _step3_curves(T, default_f, default_f, default_f)
    st4 = Stage("mw4", periods_per_step, s3c, every_other=True)
    st5 = Stage("mw5", periods_per_step, s1)
    st6 = Stage("mw6", periods_per_step, s2)
    st7 = Stage("mw7", periods_per_step, s3c, every_other=True)
    return (st1, st2, st3, st4, st5, st6, st7)


def multiwire_protocol(wires, wire_index, periods_per_step, interwire_off=False):
    """Exchange the left modes of wires `wire_index` and `wire_index`+1.

    Each wire is a ChainSpec; all share the driving period.  The protocol
    drives the first two bonds of wire l and a transient bond between site 2
    of wire l and site 1 of wire l+1, then restores the array.  Returns the
    overlap of each evolved left mode with the four initial left modes.

    With `interwire_off` the transient bond is forced to zero; the wires then
    evolve independently (a consistency control).
    """
    if len(wires) < 2:
        raise ValueError("need at least two wires")
    l = wire_index
    if not (0 <= l < len(wires) - 1):
        raise ValueError("wire_index must address a pair of adjacent wires")
    T = wires[0].T
    if any(abs(wsp.T - T) > 0 for wsp in wires):
        raise ValueError("wires must share the driving period")

    offsets = np.cumsum([0] + [wsp.N for wsp in wires])
    n_total = int(offsets[-1])
    mu1 = np.concatenate([wsp.mu1 for wsp in wires])
    mu2 = np.concatenate([wsp.mu2 for wsp in wires])
    a_iw = offsets[l] + 1          # site 2 of wire l (0-based site 1)
    b_iw = offsets[l + 1]          # site 1 of wire l+1

    def bonds(owned):
        out = []
        for wi, wsp in enumerate(wires):
            for b in range(wsp.N - 1):
                jv, dv = wsp.J[b], wsp.Delta[b]
                if wi == l and b in (0, 1):
                    jv, dv = owned["J%d" % b], owned["D%d" % b]
                out.append((offsets[wi] + b, offsets[wi] + b + 1, jv, dv))
        jw = owned.get("JW", 0.0)
        dw = owned.get("DW", 0.0)
        if interwire_off:
            jw = dw = 0.0
        out.append((a_iw, b_iw, jw, dw))
        return out

    tau = T / 2.0
    a2 = coupling_from_bonds(n_total, mu2, [])
    r2 = expm(tau * a2.A)

    cache = {}

    def rotation(owned):
        key = tuple(sorted((k, complex(v)) for k, v in owned.items()))
        r = cache.get(key)
        if r is None:
            a1 = coupling_from_bonds(n_total, mu1, bonds(owned))
            r = r2 @ expm(tau * a1.A)
            cache[key] = r
        return r

    # initial per-wire frames, embedded into the array
    frames = []
    for wi, wsp in enumerate(wires):
        f = edge_frame(one_period_propagator(wsp))
        emb = {}
        for name in ("gLA", "gLB", "gRA", "gRB"):
            v = np.zeros(2 * n_total)
            v[2 * offsets[wi]: 2 * (offsets[wi] + wsp.N)] = getattr(f, name)
            emb[name] = v
        frames.append(EdgeFrame(**emb))

    base_owned = {"J0": wires[l].J[0], "D0": wires[l].Delta[0],
                  "J1": wires[l].J[1], "D1": wires[l].Delta[1], "JW": 0.0, "DW": 0.0}
    stages = _multiwire_stages(T, periods_per_step)
    # continuity of the driven values, including the hand-off from the base
    prev = base_owned
    for st in stages:
        cur = st.bond_values(0.0)
        for key, val in cur.items():
            if abs(prev.get(key, 0.0) - val) > 1e-9:
                raise ValueError("multiwire stage %s discontinuous on %r" % (st.name, key))
        prev = st.bond_values(1.0)

    w = np.eye(2 * n_total)
    period = 0
    for st in stages:
        for k in range(1, st.duration_periods + 1):
            owned = st.bond_values(st.progress(k))
            owned.setdefault("JW", 0.0)
            owned.setdefault("DW", 0.0)
            w = rotation(owned) @ w
            period += 1
            if period % 512 == 0:
                w = reorthogonalize(w)

    labels = {
        "A_l": frames[l].gLA, "B_l": frames[l].gLB,
        "A_l1": frames[l + 1].gLA, "B_l1": frames[l + 1].gLB,
    }
    overlaps = {}
    leak = 0.0
    basis = np.column_stack(list(labels.values()))
    for src, v in labels.items():
        u = w @ v
        for dst, t in labels.items():
            overlaps[(src, dst)] = float(t @ u)
        proj = basis.T @ u
        leak = max(leak, 1.0 - float(proj @ proj), 0.0)
    return MultiwireResult(overlaps, tuple(frames), leak)
