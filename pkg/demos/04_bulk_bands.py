"""Closed-form bulk bands of the translation-invariant wire.

In momentum space each period is a pair of 2x2 Nambu rotations, so the
quasienergy band theta(k) and its rotation axis come in closed form.  The two
gaps -- at quasienergy 0 and at pi -- are what protect the two edge-mode
species of the open wire.
"""
import numpy as np

from mtcsim import bulk_angle, bulk_gaps, bulk_params_from_products, phs_residual

PI = np.pi

# fine-tuned point: both gaps close, at k=0 and k=pi respectively
J, Delta, mu1, mu2 = bulk_params_from_products(PI, PI, 0.0, PI)
print("fine-tuned point:")
print("  theta(0)  = %.2e" % bulk_angle(0.0, mu1, mu2, J, Delta).theta)
print("  theta(pi) = pi - %.2e" % (PI - bulk_angle(PI, mu1, mu2, J, Delta).theta))

for JT in (0.7, 2.0, 2.9):
    J, Delta, mu1, mu2 = bulk_params_from_products(JT, JT, 0.0, PI)
    g0, gp = bulk_gaps(mu1, mu2, J, Delta)
    print("J*T = Delta*T = %.1f, mu2*T = pi:  gap(0) = %.3f  gap(pi) = %.3f"
          % (JT, g0, gp))

# particle-hole symmetry holds identically for the reconstructed Bloch
# generator: tau_x K conjugation maps h_f(k) to -h_f(-k)
rng = np.random.default_rng(1)
worst = 0.0
for _ in range(20):
    m1, m2, jj, dd = rng.uniform(-1.4, 1.4, 4)
    try:
        worst = max(worst, phs_residual(rng.uniform(0.1, 3.0), m1, m2, jj, dd))
    except ValueError:
        continue
print("largest particle-hole residual over random draws: %.2e" % worst)
