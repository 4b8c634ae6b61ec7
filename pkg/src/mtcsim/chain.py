"""Driven Kitaev wires and their quadratic Majorana coupling matrices.

The wire alternates between two quadratic Hamiltonians within each driving
period T.  During the first half-period,

    H1 = sum_j ( -J_j c_{j+1}^dag c_j + Delta_j c_{j+1}^dag c_j^dag + h.c. )
         + sum_j mu1_j c_j^dag c_j

and during the second half-period,

    H2 = sum_j mu2_j c_j^dag c_j - sum_j ( K_j c_{j+1}^dag c_j + h.c. )

where K_j is an optional small residual hopping.  With Majorana operators
g_j^A = c_j + c_j^dag and g_j^B = i(c_j - c_j^dag), any such Hamiltonian is
H = (i/4) gamma^T A gamma (+ const) for a real antisymmetric A.  Expanding the
fermion bilinears gives the per-channel weights (H contains i*w*g_m*g_n, and
A_mn = 2*w_mn):

    w(jA, j+1 A) =  Im(J_j - Delta_j)/2
    w(jA, j+1 B) =  Re(J_j - Delta_j)/2
    w(jB, j+1 A) = -Re(J_j + Delta_j)/2
    w(jB, j+1 B) =  Im(J_j + Delta_j)/2
    w(jA, jB)    = -mu_j/2

These weights are fixed by an exact Fock-space expansion (see the test suite);
all modules share them and the index layout m = 2j for g_j^A, m = 2j+1 for
g_j^B.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChainSpec",
    "MajoranaCoupling",
    "uniform_chain",
    "build_h1_coupling",
    "build_h2_coupling",
    "coupling_from_bonds",
    "chain_from_coupling",
    "idx_a",
    "idx_b",
]


def idx_a(j):
    """Majorana index of g_j^A (0-based site j)."""
    return 2 * j


def idx_b(j):
    """Majorana index of g_j^B (0-based site j)."""
    return 2 * j + 1


def _readonly(a):
    a = np.asarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ChainSpec:
    """Full parameterization of one driven wire.

    Bond arrays have length N-1; chemical potentials are per-site arrays of
    length N so that static disorder can be represented.  All parameters carry
    units of inverse time; the dimensionless combinations J*T etc. are what
    the physics depends on.
    """

    N: int
    T: float
    mu1: np.ndarray
    mu2: np.ndarray
    J: np.ndarray
    Delta: np.ndarray
    h2_hopping: np.ndarray = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.T <= 0:
            raise ValueError("T must be > 0")
        mu1 = np.broadcast_to(np.asarray(self.mu1, float), (self.N,)).copy()
        mu2 = np.broadcast_to(np.asarray(self.mu2, float), (self.N,)).copy()
        nb = self.N - 1
        J = np.broadcast_to(np.asarray(self.J, complex), (nb,)).copy()
        Delta = np.broadcast_to(np.asarray(self.Delta, complex), (nb,)).copy()
        h2 = self.h2_hopping
        if h2 is None:
            h2 = np.zeros(nb)
        h2 = np.broadcast_to(np.asarray(h2, float), (nb,)).copy()
        for name, arr, n in (("J", J, nb), ("Delta", Delta, nb),
                             ("mu1", mu1, self.N), ("mu2", mu2, self.N),
                             ("h2_hopping", h2, nb)):
            if arr.shape != (n,):
                raise ValueError("%s must have length %d, got %s" % (name, n, arr.shape))
        object.__setattr__(self, "mu1", _readonly(mu1))
        object.__setattr__(self, "mu2", _readonly(mu2))
        object.__setattr__(self, "J", _readonly(J))
        object.__setattr__(self, "Delta", _readonly(Delta))
        object.__setattr__(self, "h2_hopping", _readonly(h2))

    @property
    def n_majorana(self):
        return 2 * self.N

    def replace_bonds(self, owned):
        """New spec with bond values overridden; `owned` maps bond index -> (J, Delta)."""
        J = self.J.copy()
        D = self.Delta.copy()
        for b, (jv, dv) in owned.items():
            J[b] = jv
            D[b] = dv
        return ChainSpec(self.N, self.T, self.mu1, self.mu2, J, D, self.h2_hopping)

    def assert_unowned_bonds_real(self, owned_bonds, tol=0.0):
        """Bonds not manipulated by a schedule must be real."""
        for b in range(self.N - 1):
            if b in owned_bonds:
                continue
            if abs(self.J[b].imag) > tol or abs(self.Delta[b].imag) > tol:
                raise ValueError(
                    "bond %d is complex but not owned by the schedule" % b)


def uniform_chain(N, JT, DeltaT, mu1T=0.0, mu2T=0.0, T=1.0, h2T=0.0):
    """ChainSpec with uniform bonds from the dimensionless products J*T etc."""
    nb = max(N - 1, 0)
    return ChainSpec(
        N=N, T=T,
        mu1=np.full(N, mu1T / T),
        mu2=np.full(N, mu2T / T),
        J=np.full(nb, JT / T, complex),
        Delta=np.full(nb, DeltaT / T, complex),
        h2_hopping=np.full(nb, h2T / T),
    )


@dataclass(frozen=True)
class MajoranaCoupling:
    """Real antisymmetric coefficient array A with H = (i/4) gamma^T A gamma."""

    A: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A must be square")
        object.__setattr__(self, "A", _readonly(A))

    @property
    def n_sites(self):
        return self.A.shape[0] // 2

    def check_antisymmetric(self):
        if not np.array_equal(self.A, -self.A.T):
            raise ValueError("coupling array is not exactly antisymmetric")


def coupling_from_bonds(n_sites, mu, bonds):
    """Assemble the coupling array of a quadratic Hamiltonian on a site graph.

    Parameters
    ----------
    n_sites : int
        total number of lattice sites.
    mu : array (n_sites,)
        on-site chemical potentials (mu_j c_j^dag c_j terms).
    bonds : iterable of (a, b, J, Delta)
        oriented bonds; each contributes -J c_b^dag c_a + Delta c_b^dag c_a^dag
        + h.c.  For a chain, a = j and b = j+1.

    Antisymmetry is exact by construction: each channel is written once into
    (m, n) and once negated into (n, m).
    """
    A = np.zeros((2 * n_sites, 2 * n_sites))

    def put(m, n, w):
        A[m, n] += 2.0 * w
        A[n, m] -= 2.0 * w

    mu = np.broadcast_to(np.asarray(mu, float), (n_sites,))
    for j in range(n_sites):
        put(idx_a(j), idx_b(j), -mu[j] / 2.0)
    for a, b, J, Delta in bonds:
        J = complex(J)
        Delta = complex(Delta)
        put(idx_a(a), idx_a(b), (J - Delta).imag / 2.0)
        put(idx_a(a), idx_b(b), (J - Delta).real / 2.0)
        put(idx_b(a), idx_a(b), -(J + Delta).real / 2.0)
        put(idx_b(a), idx_b(b), (J + Delta).imag / 2.0)
    return MajoranaCoupling(A)


def build_h1_coupling(spec: ChainSpec) -> MajoranaCoupling:
    """Majorana coupling of the Kitaev half-period Hamiltonian H1."""
    bonds = [(j, j + 1, spec.J[j], spec.Delta[j]) for j in range(spec.N - 1)]
    return coupling_from_bonds(spec.N, spec.mu1, bonds)


def build_h2_coupling(spec: ChainSpec) -> MajoranaCoupling:
    """Majorana coupling of the chemical-potential half-period Hamiltonian H2.

    The constant -mu2/2 per site is dropped; it only contributes a global
    phase.  A nonzero h2_hopping adds real bond channels identical to an H1
    bond with J = h2_hopping and Delta = 0.
    """
    bonds = [(j, j + 1, spec.h2_hopping[j], 0.0) for j in range(spec.N - 1)]
    return coupling_from_bonds(spec.N, spec.mu2, bonds)


def chain_from_coupling(coupling: MajoranaCoupling):
    """Invert a chain coupling array back to (J, Delta, mu) parameters.

    Returns the complex bond arrays and the per-site chemical potential of the
    unique nearest-neighbour chain Hamiltonian represented by A.  Used as a
    round-trip consistency check against build_h1_coupling.
    """
    A = coupling.A
    N = coupling.n_sites
    mu = np.array([-A[idx_a(j), idx_b(j)] for j in range(N)])
    J = np.zeros(N - 1, complex)
    Delta = np.zeros(N - 1, complex)
    for j in range(N - 1):
        w_aa = A[idx_a(j), idx_a(j + 1)] / 2.0
        w_ab = A[idx_a(j), idx_b(j + 1)] / 2.0
        w_ba = A[idx_b(j), idx_a(j + 1)] / 2.0
        w_bb = A[idx_b(j), idx_b(j + 1)] / 2.0
        J[j] = (w_ab - w_ba) + 1j * (w_aa + w_bb)
        Delta[j] = (-w_ab - w_ba) + 1j * (w_bb - w_aa)
    return J, Delta, mu
