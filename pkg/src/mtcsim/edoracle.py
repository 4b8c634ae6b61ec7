"""Brute-force many-body checks on the full 2^N Fock space (N <= 8).

Everything the cheap single-particle machinery claims is re-derived here the
expensive way: the Floquet unitary is built by exponentiating the
second-quantized Hamiltonians, the mode rotation is extracted from traces of
conjugated Majorana operators, and the spin-chain image of the drive is
diagonalized independently.  This module pins every sign and ordering
convention used elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .chain import ChainSpec
from .propagate import one_period_propagator
from .braiding import edge_frame
from .schedule import StageSchedule

__all__ = [
    "ManyBodyFloquet",
    "fock_annihilators",
    "fock_majoranas",
    "fermion_hamiltonian",
    "fermion_floquet",
    "ising_floquet",
    "extract_mode_rotation",
    "free_fermion_sum_rule",
    "match_phase_multisets",
    "magic_state_check",
    "qubit_states",
    "MAX_SITES",
]

MAX_SITES = 8


@dataclass(frozen=True)
class ManyBodyFloquet:
    """A full many-body one-period unitary and its eigenphase multiset."""

    U: np.ndarray
    eigenphases: np.ndarray
    provenance: str

    @property
    def dimension(self):
        return self.U.shape[0]

    def check_unitary(self, tol=1e-12):
        dev = np.abs(self.U @ self.U.conj().T - np.eye(self.dimension)).max()
        if dev > tol:
            raise ValueError("propagator not unitary: %.3e" % dev)
        return dev


def fock_annihilators(N):
    """Dense annihilation operators c_j; occupation bit j of the basis index,
    site 1 is the least significant bit, Jordan-Wigner sign strings."""
    if N > MAX_SITES:
        raise ValueError("N > %d is not desk-scale for full Fock matrices" % MAX_SITES)
    dim = 1 << N
    ops = []
    for j in range(N):
        c = np.zeros((dim, dim), dtype=complex)
        for n in range(dim):
            if (n >> j) & 1:
                sign = (-1) ** bin(n & ((1 << j) - 1)).count("1")
                c[n ^ (1 << j), n] = sign
        ops.append(c)
    return ops


def fock_majoranas(N):
    """Majorana matrices in the shared index layout (2j : A, 2j+1 : B)."""
    cs = fock_annihilators(N)
    gam = []
    for c in cs:
        gam.append(c + c.conj().T)
        gam.append(1j * (c - c.conj().T))
    return gam


def fermion_hamiltonian(cs, J, Delta, mu):
    """Second-quantized H = sum(-J c+c + Delta c+c+ + h.c.) + sum mu c+c."""
    N = len(cs)
    dim = cs[0].shape[0]
    H = np.zeros((dim, dim), dtype=complex)
    for j in range(N - 1):
        hop = -J[j] * cs[j + 1].conj().T @ cs[j]
        pair = Delta[j] * cs[j + 1].conj().T @ cs[j].conj().T
        H += hop + hop.conj().T + pair + pair.conj().T
    for j in range(N):
        H += mu[j] * cs[j].conj().T @ cs[j]
    return H


def _half_unitaries(spec: ChainSpec, cs):
    tau = spec.T / 2.0
    h1 = fermion_hamiltonian(cs, spec.J, spec.Delta, spec.mu1)
    nb = spec.N - 1
    h2 = fermion_hamiltonian(cs, spec.h2_hopping.astype(complex),
                             np.zeros(nb, complex), spec.mu2)
    return expm(-1j * tau * h1), expm(-1j * tau * h2)


def fermion_floquet(spec: ChainSpec) -> ManyBodyFloquet:
    """One-period unitary U = exp(-i H2 T/2) exp(-i H1 T/2) on the Fock space."""
    cs = fock_annihilators(spec.N)
    u1, u2 = _half_unitaries(spec, cs)
    U = u2 @ u1
    phases = np.sort(np.angle(np.linalg.eigvals(U)))
    return ManyBodyFloquet(U, phases, "fermion")


def _spin_ops(N):
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], complex)
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], complex)
    def site_op(op, j):
        return np.kron(np.eye(1 << (N - 1 - j)), np.kron(op, np.eye(1 << j)))
    return [site_op(sx, j) for j in range(N)], [site_op(sz, j) for j in range(N)]


def ising_floquet(J_ising, f, N, T) -> ManyBodyFloquet:
    """Two-step driven spin chain: bond zz couplings, then a transverse field.

    First half-period H = -J_ising * sum sz_j sz_{j+1}, second half
    H = -f * sum sx_j.  Open boundaries, so the fermionized image matches a
    wire with J = Delta = -J_ising and mu2 = 2 f up to a constant shift.
    """
    if N > MAX_SITES:
        raise ValueError("N > %d" % MAX_SITES)
    sxs, szs = _spin_ops(N)
    dim = 1 << N
    hzz = np.zeros((dim, dim), complex)
    for j in range(N - 1):
        hzz -= J_ising * szs[j] @ szs[j + 1]
    hx = -f * sum(sxs)
    tau = T / 2.0
    U = expm(-1j * tau * hx) @ expm(-1j * tau * hzz)
    phases = np.sort(np.angle(np.linalg.eigvals(U)))
    return ManyBodyFloquet(U, phases, "spin")


def extract_mode_rotation(mb: ManyBodyFloquet, gam):
    """Mode map R_mp = (1/dim) Tr(gamma_m  U gamma_p U^dag).

    For a quadratic drive this equals the single-particle rotation exactly; it
    is the object that pins the exponent sign and half-period ordering.
    """
    dim = mb.dimension
    n = len(gam)
    R = np.empty((n, n))
    for p in range(n):
        conj = mb.U @ gam[p] @ mb.U.conj().T
        for m in range(n):
            R[m, p] = np.real(np.trace(gam[m] @ conj)) / dim
    return R


def match_phase_multisets(a, b, tol=1e-10, align=False):
    """Max circular distance between two phase multisets.

    Sorting happens on the circle after rotating both sets by a common safe
    offset (retried if a value sits at the seam).  With `align`, every global
    rotation pairing a[0] with some element of b is tried and the best match
    is returned -- this absorbs the constant shift dropped from a Hamiltonian.
    """
    a = np.asarray(a, float).ravel()
    b = np.asarray(b, float).ravel()
    if a.shape != b.shape:
        raise ValueError("multisets differ in size")

    def dist(x, y):
        for seam in (0.123456, 1.654321, 2.565656):
            xs = np.sort(np.mod(x + seam, 2 * np.pi))
            ys = np.sort(np.mod(y + seam, 2 * np.pi))
            edge = min(xs[0], ys[0], 2 * np.pi - xs[-1], 2 * np.pi - ys[-1])
            if edge > 1e-6:
                d = np.abs(xs - ys)
                return float(np.minimum(d, 2 * np.pi - d).max())
        d = np.abs(xs - ys)
        return float(np.minimum(d, 2 * np.pi - d).max())

    if not align:
        return dist(a, b)
    best = np.inf
    for k in range(len(b)):
        best = min(best, dist(a, b + (a[0] - b[k])))
        if best < tol:
            break
    return best


def free_fermion_sum_rule(spec: ChainSpec, tol=1e-10):
    """Many-body eigenphases vs subset sums of single-particle quasienergies.

    Builds the predicted multiset {phi0 - sum_{k in S} eps_k} from the mode
    rotation's positive quasienergies, with the reference phase phi0 taken
    from the trace identity Tr U = e^{i phi0} prod_k (1 + e^{-i eps_k}).
    Returns the maximal circular deviation.
    """
    mb = fermion_floquet(spec)
    sp = one_period_propagator(spec)
    eigs = np.angle(np.linalg.eigvals(sp.R))
    eps = np.sort(eigs[eigs > 0])
    if len(eps) != spec.N:
        # zero modes broke the pairing; perturb the caller's parameters instead
        raise ValueError("degenerate single-particle phases; sum rule needs a generic spec")
    prod = np.prod(1.0 + np.exp(-1j * eps))
    if abs(prod) < 1e-12:
        raise ValueError("quasienergy at pi; reference phase undefined")
    phi0 = np.angle(np.trace(mb.U) / prod)
    sums = np.zeros(1)
    for e in eps:
        sums = np.concatenate([sums, sums - e])
    predicted = phi0 + sums
    return match_phase_multisets(mb.eigenphases, predicted, align=False)


# ---------------------------------------------------------------------------
# qubit encoding and the magic-state run
# ---------------------------------------------------------------------------

def _lift(v, gam):
    out = np.zeros_like(gam[0])
    for m, c in enumerate(v):
        if c != 0.0:
            out = out + c * gam[m]
    return out


def qubit_states(spec: ChainSpec):
    """|0> and |1> encoded in the edge-pair parities, bulk modes empty.

    |0> is the simultaneous +1 eigenstate of i g_L^A g_R^A and i g_L^B g_R^B
    with every bulk quasiparticle of the initial propagator unoccupied;
    |1> = g_L^A g_L^B |0>.  Returns (psi0, psi1, frame, gam).
    """
    if spec.N > 6:
        raise ValueError("qubit encoding is intended for N <= 6")
    gam = fock_majoranas(spec.N)
    dim = gam[0].shape[0]
    prop = one_period_propagator(spec)
    frame = edge_frame(prop)
    g = {name: _lift(getattr(frame, name), gam)
         for name in ("gLA", "gLB", "gRA", "gRB")}
    p_a = 1j * g["gLA"] @ g["gRA"]
    p_b = 1j * g["gLB"] @ g["gRB"]

    # bulk annihilators: orthonormalized positive-phase eigenvectors away from 0/pi
    w, v = np.linalg.eig(prop.R)
    ph = np.angle(w)
    fvecs = frame.matrix()
    proj_edge = fvecs @ fvecs.T
    mask = ph > 1e-9
    sel = []
    for i in np.where(mask)[0]:
        vec = v[:, i]
        if np.linalg.norm(proj_edge @ vec) > 0.5:
            continue  # edge-dominated eigenvector (possible at loose splittings)
        sel.append(i)
    cols = v[:, sel]
    phs = ph[sel]
    order = np.argsort(phs)
    cols = cols[:, order]
    phs = phs[order]
    proj = (np.eye(dim) + p_a) @ (np.eye(dim) + p_b) / 4.0
    i = 0
    n_bulk = 0
    while i < len(phs):
        j = i
        while j < len(phs) and phs[j] - phs[i] < 1e-8:
            j += 1
        u, sv, _ = np.linalg.svd(cols[:, i:j], full_matrices=False)
        for k in range(j - i):
            if sv[k] < 1e-8 * sv[0]:
                continue
            d = _lift(u[:, k], gam) / np.sqrt(2.0)
            proj = proj @ (np.eye(dim) - d.conj().T @ d)
            n_bulk += 1
        i = j
    if n_bulk != spec.N - 2:
        raise RuntimeError("expected %d bulk modes, found %d" % (spec.N - 2, n_bulk))
    rng = np.random.Generator(np.random.Philox(key=np.array([17, 0], np.uint64)))
    psi0 = None
    for _ in range(64):
        trial = proj @ (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
        nrm = np.linalg.norm(trial)
        if nrm > 1e-6:
            psi0 = trial / nrm
            break
    if psi0 is None:
        raise RuntimeError("failed to build the encoded |0> state")
    psi1 = g["gLA"] @ g["gLB"] @ psi0
    return psi0, psi1, frame, gam


def magic_state_check(spec: ChainSpec, schedule: StageSchedule):
    """Evolve the encoded |0> through the scheduled periods, exactly.

    Returns |<target|psi_final>| where the target is the ideal image of |0>:
    cos(pi/8)|0> - sin(pi/8)|1> after the three-stage half protocol,
    (|0> - |1>)/sqrt(2) after the full six-stage exchange, and |0> itself for
    an empty schedule.
    """
    if spec.N > 6:
        raise ValueError("N too large for the magic-state oracle")
    psi0, psi1, frame, gam = qubit_states(spec)
    cs = fock_annihilators(spec.N)
    tau = spec.T / 2.0
    nb = spec.N - 1
    u2 = expm(-1j * tau * fermion_hamiltonian(
        cs, spec.h2_hopping.astype(complex), np.zeros(nb, complex), spec.mu2))
    cache = {}
    psi = psi0.copy()
    from .schedule import instantaneous_bonds
    for _, _, _, values in schedule.period_values():
        owned = instantaneous_bonds(schedule, spec, values)
        key = tuple(sorted((b, complex(j), complex(d)) for b, (j, d) in owned.items()))
        u = cache.get(key)
        if u is None:
            inst = spec.replace_bonds(owned)
            u = u2 @ expm(-1j * tau * fermion_hamiltonian(cs, inst.J, inst.Delta, inst.mu1))
            cache[key] = u
        psi = u @ psi
    n_stages = len(schedule.stages)
    if n_stages == 0:
        target = psi0
    elif n_stages == 3:
        target = np.cos(np.pi / 8) * psi0 - np.sin(np.pi / 8) * psi1
    elif n_stages == 6:
        target = (psi0 - psi1) / np.sqrt(2.0)
    else:
        raise ValueError("schedule must have 0, 3 or 6 stages")
    return float(np.abs(target.conj() @ psi))
