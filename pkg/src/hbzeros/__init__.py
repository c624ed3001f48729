"""Zeros of the L^1-minimal entire function of exponential type pi with f(0) = 1.

The zeros tau_n = n + 1/2 - delta_n solve A delta + Q delta = w, where A is a
Hilbert-type matrix with an explicit inverse B; ``fixed_point_solve`` runs the
contraction delta <- B(w - Q delta), and ``extremal`` turns the zeros back
into the function, its L^1 norm and the point-evaluation constant.
"""

__version__ = "0.1.0"

from .errors import (DeltaTooLarge, DimensionMismatch, HBZerosError, InvariantViolation,
                     NoConvergence, NonFiniteIntegrand, OutOfRange, UnsupportedArity,
                     UnsupportedOrder)
from .extremal import (ConstantBracket, L1Estimate, PhiEvaluator, constant_bracket, eval_phi,
                       l1_norm_phi, residual_start)
from .operators import (OperatorTruncation, QDecomposition, RhsVector, a_entry, apply_A, apply_B,
                        apply_Q, b_entry, compute_w, decompose_Q, partial_fraction_constant)
from .seqspace import CoeffSequence, ZeroTable, deltas_to_zeros, l2_norm, zeros_to_deltas
from .solver import (CertificateResult, ConvergenceTable, SolveReport, SolverConfig, certify_ball,
                     extend_deltas, extended_zeros, fixed_point_solve, truncation_study)
from .special import (QuadratureRule, adaptive_integrate, gauss_legendre, integrate,
                      sine_integral)
