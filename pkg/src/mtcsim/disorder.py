"""Static disorder ensembles with counter-based, realization-indexed draws."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec

__all__ = ["DisorderSpec", "apply_disorder", "ensemble_mean_final"]


@dataclass(frozen=True)
class DisorderSpec:
    """Uniform static offsets, in units of the dimensionless products (x*T).

    Each realization draws, once, offsets dJ_j, dDelta_j, dmu1_j, dmu2_j and a
    residual second-half hopping (h2_mean + jitter) per bond; all are constant
    in time.  Draws depend only on (master_seed, realization_index) through a
    counter-based generator, so any execution order gives identical ensembles.
    """

    dJ: float = 0.1
    dDelta: float = 0.1
    dmu1: float = 0.1
    dmu2: float = 0.1
    h2_mean: float = 0.025
    dh2: float = 0.01
    realizations: int = 100
    master_seed: int = 0

    def __post_init__(self):
        for name in ("dJ", "dDelta", "dmu1", "dmu2", "dh2"):
            if getattr(self, name) < 0:
                raise ValueError("%s must be >= 0" % name)
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")


def apply_disorder(spec: ChainSpec, d: DisorderSpec, realization_index: int) -> ChainSpec:
    """Disordered copy of a chain; offsets are real and drawn once."""
    if not (0 <= realization_index < d.realizations):
        raise ValueError("realization_index out of range")
    key = np.array([d.master_seed, realization_index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    nb = spec.N - 1
    T = spec.T
    dJ = rng.uniform(-d.dJ, d.dJ, nb) / T
    dD = rng.uniform(-d.dDelta, d.dDelta, nb) / T
    dm1 = rng.uniform(-d.dmu1, d.dmu1, spec.N) / T
    dm2 = rng.uniform(-d.dmu2, d.dmu2, spec.N) / T
    h2 = (d.h2_mean + rng.uniform(-d.dh2, d.dh2, nb)) / T
    return ChainSpec(
        spec.N, spec.T,
        spec.mu1 + dm1, spec.mu2 + dm2,
        spec.J + dJ, spec.Delta + dD,
        spec.h2_hopping + h2,
    )


def ensemble_mean_final(results):
    """Mean of the final correlation records, accumulated in index order."""
    keys = ("c_AA", "c_BB", "c_AB", "c_BA", "leakage")
    total = {k: 0.0 for k in keys}
    n = 0
    for res in results:
        fin = res.final
        for k in keys:
            total[k] += getattr(fin, k)
        n += 1
    return {k: v / n for k, v in total.items()}
