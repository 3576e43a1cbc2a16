"""Distributed two-mode-squeezing GKP codes as phase-space lattices.

Build encoders and lattices, compute code distances with LLL reduction and
bounded closest-point enumeration, search code parameters, and simulate the
two-stage linear decoder under additive Gaussian noise.
"""
from .codes import (Code, CodeSpec, Family, build_code, catalog, distance_upper_bound,
                    encoder_for, fixture, initial_generator, tesseract_decomposition,
                    verify_fixture_relation)
from .decoder import (NoiseModel, ResidualPdfParams, SimReport, VarianceEstimate,
                      asymptotic_o2o, asymptotic_px, asymptotic_px_two_qubit,
                      correlated_noise_cov, effective_distance, effective_distance_two_qubit,
                      error_rate_integral, estimator_matrix, gain_lownoise, gain_two_qubit,
                      o2o_correct, o2o_variance_lattice_sum, qudit_correct,
                      residual_pdf_params, simulate_error_rate, simulate_o2o_variance,
                      wilson_interval)
from .errors import (DegenerateLatticeError, DimensionError, DomainError, DtmsError,
                     ModeIndexError, NotGKPLatticeError, UnsupportedDecoderError,
                     UnsupportedError, VerificationError)
from .lattice import (ELL, ClosestPoint, DistanceReport, LatticeSolver, babai_nearest,
                      closest_point, code_distance, dual, gram, is_unimodular, lll_reduce,
                      pauli_distance, syndrome)
from .optimize import (OptimizationResult, balance_report, distance_grid,
                       explore_transmissivities, optimize_distance, optimize_gain_lownoise,
                       saturation_check)
from .symplectic import (beamsplitter, dtms2_encoder, dtms_decoder, dtms_encoder, gain_to_db,
                         is_symplectic, omega, rotation, single_mode_squeeze, sum_gate,
                         symplectic_inverse, tms, uniform_bs_array)

__version__ = "0.1.0"
