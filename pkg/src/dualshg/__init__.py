"""Quantum noise, twin-beam correlations and entanglement of the two harmonic
outputs of a singly resonant, dual-ported frequency doubler."""

from .coupling import KNBO3, CouplingResult, CrystalSpec, boyd_kleinman_h, compute_enl, optimal_waist
from .entanglement import (EntanglementResult, TwinBeamResult, beamsplitter_mix, epr_dgcz,
                           twin_beam)
from .mean_field import (REFERENCE_CAVITY, CavitySpec, OperatingPoint, intensity_ratio,
                         solve_conversion)
from .network import (NoiseReport, OutputCoefficients, build_network, cavity_noise,
                      noise_report, output_coefficients, output_quadratures, solve_intracavity)
from .propagation import QuadTransfer, transfer_matrix
from .sweep import SweepConfig, emit_csv, run_sweep

__version__ = "0.1.0"
