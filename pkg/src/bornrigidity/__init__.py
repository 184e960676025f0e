"""Readout geometry on the probability simplex and projective Hilbert space.

Sampled checks that a pure-state readout for a fixed orthonormal basis is
forced to be the Born rule once it is calibrated, Fisher non-expanding and
continuous.
"""

__version__ = "0.1.0"

from ._validation import TOL_EQ, TOL_INEQ, DomainError
from .admissibility import (
    AdmissibilityReport,
    CheckResult,
    CurveSuite,
    Witness,
    born_deviation,
    check_admissibility,
    check_H1,
    check_H2,
    check_H3,
    classical_fisher_along,
    default_suite,
)
from .escort import (
    GeneratorScanReport,
    cauchy_scan,
    escort_rigidity_test,
    linear_fit_conclusion,
    markov_invariance_residual,
    markov_scan,
    normalization_scan,
)
from .projective import (
    PureCurve,
    basis_ray,
    fs_distance,
    fs_geodesic,
    haar_random_ray,
    quantum_fisher,
)
from .readouts import (
    BornReadout,
    EscortReadout,
    PermutedBornReadout,
    PerturbedBornReadout,
    PowerGenerator,
    TabulatedGenerator,
    UniformReadout,
    parse_generator,
    parse_readout,
)
from .replay import replay_witness
from .rigidity import (
    BORN_CONFIRMED,
    IDENTITY_CONFIRMED,
    INCONCLUSIVE,
    PREMISE_VIOLATED,
    RigidityVerdict,
    lipschitz_witness_search,
    readout_rigidity_check,
    simplex_rigidity_check,
    vertex_dominance_residuals,
)
from .simplex import SqrtChart, conjugate, fisher_norm_sq, round_distance, sqrt_chart, sqrt_chart_inverse

__all__ = [
    "__version__",
    "AdmissibilityReport",
    "BORN_CONFIRMED",
    "BornReadout",
    "CheckResult",
    "CurveSuite",
    "DomainError",
    "EscortReadout",
    "GeneratorScanReport",
    "IDENTITY_CONFIRMED",
    "INCONCLUSIVE",
    "PREMISE_VIOLATED",
    "PermutedBornReadout",
    "PerturbedBornReadout",
    "PowerGenerator",
    "PureCurve",
    "RigidityVerdict",
    "SqrtChart",
    "TOL_EQ",
    "TOL_INEQ",
    "TabulatedGenerator",
    "UniformReadout",
    "Witness",
    "basis_ray",
    "born_deviation",
    "cauchy_scan",
    "check_H1",
    "check_H2",
    "check_H3",
    "check_admissibility",
    "classical_fisher_along",
    "conjugate",
    "default_suite",
    "escort_rigidity_test",
    "fisher_norm_sq",
    "fs_distance",
    "fs_geodesic",
    "haar_random_ray",
    "linear_fit_conclusion",
    "lipschitz_witness_search",
    "markov_invariance_residual",
    "markov_scan",
    "normalization_scan",
    "parse_generator",
    "parse_readout",
    "quantum_fisher",
    "readout_rigidity_check",
    "replay_witness",
    "round_distance",
    "simplex_rigidity_check",
    "sqrt_chart",
    "sqrt_chart_inverse",
    "vertex_dominance_residuals",
]
