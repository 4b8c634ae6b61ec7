"""Quasienergy spectra, zero/pi edge-mode detection, and parameter sweeps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec
from .propagate import ModeVector, OrthogonalPropagator, one_period_propagator

__all__ = [
    "SpectrumTable",
    "EdgeModeSet",
    "quasienergies",
    "find_edge_modes",
    "spectrum_sweep",
    "two_period_spectrum",
    "SWEEP_PARAMETERS",
]

# fine-tuned points have numerically exact 0/pi phases; generic parameters
# only have exponentially small splittings, so the sweep uses a loose filter
PHASE_TOL_FINE = 1e-6
PHASE_TOL_GENERIC = 1e-2
LOC_THRESHOLD = 0.9
EDGE_SITES = 5


def quasienergies(prop: OrthogonalPropagator, check=True):
    """Sorted eigenphases of the one-period rotation, in (-pi, pi]."""
    if check:
        prop.check()
    phases = np.angle(np.linalg.eigvals(prop.R))
    phases[phases <= -np.pi + 1e-15] = np.pi
    return np.sort(phases)


def orthonormal_columns(cols, rtol=1e-8):
    """Rank-revealing orthonormal basis of the column span (SVD-based, safe
    for nearly duplicate columns such as conjugate eigenvector pairs)."""
    if cols.size == 0:
        return cols.reshape(cols.shape[0], 0)
    u, sv, _ = np.linalg.svd(cols, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return cols[:, :0]
    return u[:, sv > rtol * sv[0]]


def _real_eigenspace(R, target, tol):
    """Orthonormal real basis of the eigenspace with phases near `target` (0 or pi)."""
    w, v = np.linalg.eig(R)
    ph = np.angle(w)
    if target == 0.0:
        mask = np.abs(ph) < tol
    else:
        mask = np.abs(np.abs(ph) - np.pi) < tol
    if not mask.any():
        return np.zeros((R.shape[0], 0))
    return orthonormal_columns(np.hstack([v[:, mask].real, v[:, mask].imag]))


def _edge_weight_profile(n_sites, n_edge_sites):
    """Diagonal weights selecting the outermost sites of the left edge.

    The window never exceeds half the chain so the two edges stay disjoint
    (short chains would otherwise defeat the left/right assignment)."""
    w = np.zeros(2 * n_sites)
    m = max(1, min(n_edge_sites, n_sites // 2))
    w[: 2 * m] = 1.0
    return w


def _split_by_edge(basis, n_sites, n_edge_sites):
    """Rotate a degenerate real eigenspace to maximize single-edge localization.

    Returns the basis columns reordered so the first is the most left-localized
    combination, the last the most right-localized; intermediate columns (if
    any) interpolate.  This gives a deterministic left/right assignment for the
    doubly degenerate zero/pi spaces of a topological wire.
    """
    wl = _edge_weight_profile(n_sites, n_edge_sites)
    m = basis.T @ (wl[:, None] * basis)
    ev, q = np.linalg.eigh(m)
    out = basis @ q
    return out[:, ::-1]  # descending left-edge weight


def _canonical_sign(v):
    """Fix a mode's overall sign: largest |A-sublattice| component positive."""
    a = v[0::2]
    i = int(np.argmax(np.abs(a)))
    if abs(a[i]) < 1e-12:
        b = v[1::2]
        i = int(np.argmax(np.abs(b)))
        return v if b[i] > 0 else -v
    return v if a[i] > 0 else -v


@dataclass(frozen=True)
class EdgeModeSet:
    """Zero and pi edge modes of a one-period rotation, with localization data."""

    zero_modes: tuple
    pi_modes: tuple
    localization: dict

    def has_both(self):
        return len(self.zero_modes) > 0 and len(self.pi_modes) > 0


def find_edge_modes(prop: OrthogonalPropagator, phase_tol=PHASE_TOL_GENERIC,
                    loc_threshold=LOC_THRESHOLD, n_edge_sites=EDGE_SITES) -> EdgeModeSet:
    """Edge-localized eigenmodes with eigenphase near 0 and near pi.

    Degenerate eigenspaces are orthonormalized and rotated to maximize weight
    on one edge before the localization filter is applied; reported modes are
    real unit vectors with a deterministic sign convention.
    """
    if not (0 < phase_tol < np.pi / 4):
        raise ValueError("phase_tol out of range")
    if not (0 < loc_threshold < 1):
        raise ValueError("loc_threshold out of range")
    R = prop.R
    n_sites = R.shape[0] // 2
    wl = _edge_weight_profile(n_sites, n_edge_sites)
    wr = wl[::-1]
    out = {0.0: [], np.pi: []}
    loc = {}
    for target in (0.0, np.pi):
        basis = _real_eigenspace(R, target, phase_tol)
        if basis.shape[1] == 0:
            continue
        rotated = _split_by_edge(basis, n_sites, n_edge_sites)
        for k in range(rotated.shape[1]):
            v = rotated[:, k]
            v = v / np.linalg.norm(v)
            weight = max(float(v @ (wl * v)), float(v @ (wr * v)))
            if weight <= loc_threshold:
                continue
            v = _canonical_sign(v)
            side = "L" if float(v @ (wl * v)) >= float(v @ (wr * v)) else "R"
            tag = ("zero" if target == 0.0 else "pi") + "_" + side
            mode = ModeVector(v, tag)
            out[target].append(mode)
            loc[tag] = weight
    return EdgeModeSet(tuple(out[0.0]), tuple(out[np.pi]), loc)


SWEEP_PARAMETERS = ("mu2", "JDelta", "mu1")


@dataclass(frozen=True)
class SpectrumTable:
    """Eigenphases along a parameter sweep, with per-phase edge flags."""

    parameter: str
    grid: np.ndarray          # dimensionless products (mu2*T, J*T, ...)
    eigenphases: np.ndarray   # (n_grid, 2N), sorted rows
    flags: np.ndarray         # (n_grid, 2N) ints, 0 bulk / 1 zero-edge / 2 pi-edge

    def rows(self):
        for i, g in enumerate(self.grid):
            for ph, fl in zip(self.eigenphases[i], self.flags[i]):
                yield g, ph, fl


def _flag_phases(phases, modes, phase_tol):
    flags = np.zeros(len(phases), dtype=int)
    def mark(count, target, code):
        if count == 0:
            return
        d = np.abs(phases - target)
        if target == np.pi:
            d = np.minimum(d, np.abs(phases + np.pi))
        for i in np.argsort(d)[:count]:
            flags[i] = code
    mark(len(modes.zero_modes), 0.0, 1)
    mark(len(modes.pi_modes), np.pi, 2)
    return flags


def spectrum_sweep(base: ChainSpec, parameter: str, grid,
                   phase_tol=PHASE_TOL_GENERIC, loc_threshold=LOC_THRESHOLD) -> SpectrumTable:
    """Quasienergy spectrum along a one-parameter family of chains.

    `parameter` selects which dimensionless product is swept: "mu2", "mu1",
    or "JDelta" (J and Delta locked equal).  Grid values are the main-text
    products (value * T).
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError("unknown sweep parameter %r" % parameter)
    grid = np.asarray(grid, float)
    if grid.size > 1 and not (np.all(np.diff(grid) > 0) or np.all(np.diff(grid) < 0)):
        raise ValueError("sweep grid must be monotone")
    phases = np.empty((grid.size, 2 * base.N))
    flags = np.empty((grid.size, 2 * base.N), dtype=int)
    for i, g in enumerate(grid):
        val = g / base.T
        if parameter == "mu2":
            spec = ChainSpec(base.N, base.T, base.mu1, np.full(base.N, val),
                             base.J, base.Delta, base.h2_hopping)
        elif parameter == "mu1":
            spec = ChainSpec(base.N, base.T, np.full(base.N, val), base.mu2,
                             base.J, base.Delta, base.h2_hopping)
        else:
            arr = np.full(base.N - 1, val, complex)
            spec = ChainSpec(base.N, base.T, base.mu1, base.mu2, arr, arr,
                             base.h2_hopping)
        prop = one_period_propagator(spec)
        ph = quasienergies(prop, check=False)
        modes = find_edge_modes(prop, phase_tol, loc_threshold)
        phases[i] = ph
        flags[i] = _flag_phases(ph, modes, phase_tol)
    return SpectrumTable(parameter, grid, phases, flags)


def two_period_spectrum(spec_a: ChainSpec, spec_b: ChainSpec = None):
    """Eigenphases of the product of two consecutive one-period rotations.

    Returns (sorted phases of R_b @ R_a, gap) where the gap is the distance
    between the near-zero eigenphases and the nearest bulk phase.  During the
    alternate-period braiding stage the two consecutive periods differ, which
    is why the snapshot takes two specs.
    """
    ra = one_period_propagator(spec_a)
    rb = one_period_propagator(spec_b if spec_b is not None else spec_a)
    r2 = rb.R @ ra.R
    phases = np.angle(np.linalg.eigvals(r2))
    phases[phases <= -np.pi + 1e-15] = np.pi
    phases = np.sort(phases)
    absph = np.sort(np.abs(phases))
    n_zero = int(np.searchsorted(absph, 0.5))
    n_zero = max(n_zero, 0)
    gap = float(absph[n_zero]) if n_zero < len(absph) else np.pi
    return phases, gap
