"""mtcsim: a desk-scale simulator for periodically driven Majorana wires.

The package covers the stroboscopic physics of a two-step driven Kitaev chain:

- `chain`, `propagate`: quadratic Majorana couplings and the orthogonal
  one-period mode rotations, with conventions pinned against an exact
  many-body oracle.
- `spectrum`: quasienergies, zero/pi edge-mode detection, parameter sweeps.
- `dtc`: period-doubled stroboscopic dynamics and the subharmonic spectrum.
- `schedule`, `braiding`, `disorder`: the four-step adiabatic exchange of the
  two left edge species, schedule deformations, static-disorder ensembles,
  and the wire-array variant.
- `edoracle`: full 2^N Fock-space cross-checks (N <= 8).
- `bulkbands`: closed-form bulk Floquet bands of the translation-invariant
  wire.
- `cli`: config-driven experiments with deterministic tabular output.
"""

__version__ = "0.1.0"

from .chain import (ChainSpec, MajoranaCoupling, uniform_chain,
                    build_h1_coupling, build_h2_coupling, coupling_from_bonds,
                    chain_from_coupling)
from .propagate import (OrthogonalPropagator, ModeVector, half_period_rotation,
                        one_period_propagator, mode_of_site)
from .spectrum import (SpectrumTable, EdgeModeSet, quasienergies,
                       find_edge_modes, spectrum_sweep, two_period_spectrum)
from .dtc import ZSeries, PowerSpectrum, stroboscopic_z, power_spectrum
from .schedule import (Stage, StageSchedule, canonical_schedule,
                       apply_deformation, default_f, F_SETS)
from .braiding import (EdgeFrame, CorrelationRecord, FidelityReport,
                       ProtocolResult, edge_frame, run_protocol,
                       normalized_fidelity, multiwire_protocol)
from .disorder import DisorderSpec, apply_disorder, ensemble_mean_final
from .bulkbands import (BulkBandPoint, bulk_angle, phs_residual, bulk_gaps,
                        bulk_params_from_products, open_vs_bulk_consistency)
