"""Stroboscopic time-crystal dynamics and the subharmonic power spectrum."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec
from .propagate import mode_of_site, one_period_propagator

__all__ = ["ZSeries", "PowerSpectrum", "stroboscopic_z", "power_spectrum"]


@dataclass(frozen=True)
class ZSeries:
    """Z(nT) = c_{1A}(nT)^2 - c_{1B}(nT)^2 for the mode started as gamma_1^A."""

    values: np.ndarray
    spec: ChainSpec
    n_max: int

    def __post_init__(self):
        v = np.asarray(self.values, float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class PowerSpectrum:
    """|Z~(w)|^2 on the stroboscopic frequency grid w*T in [0, 2*pi)."""

    omega_T: np.ndarray
    magnitude_sq: np.ndarray

    def peak_omega_T(self):
        """Frequency (times T) of the dominant bin."""
        return float(self.omega_T[int(np.argmax(self.magnitude_sq))])


def stroboscopic_z(spec: ChainSpec, n_max: int) -> ZSeries:
    """Evolve gamma_1^A stroboscopically and record the site-1 weight imbalance.

    values[n] for n = 0..n_max; norm conservation keeps every entry in [-1, 1].
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    R = one_period_propagator(spec).R
    v = mode_of_site(spec.N, 0, "A").c.copy()
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        out[n] = v[0] ** 2 - v[1] ** 2
        v = R @ v
    return ZSeries(out, spec, n_max)


def power_spectrum(series: ZSeries) -> PowerSpectrum:
    """Discrete power spectrum Z~(w) = sum_n Z(nT) exp(i n w T), no windowing.

    The window is the first n_max periods, giving grid resolution 2*pi/n_max;
    with even n_max an exactly period-doubled signal lands on the w*T = pi bin.
    """
    z = np.asarray(series.values, float)
    n = z.size - 1 if z.size % 2 else z.size  # drop the endpoint sample
    if n < 16:
        raise ValueError("series too short for a spectrum (need >= 16 points)")
    z = z[:n]
    amp = np.fft.fft(z)  # |sum z_n e^{-i...}| == |sum z_n e^{+i...}| for real z
    omega_T = 2.0 * np.pi * np.arange(n) / n
    return PowerSpectrum(omega_T, np.abs(amp) ** 2)
