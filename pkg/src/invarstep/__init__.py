"""Invariance-preserving steplength analysis for Euler discretizations of linear systems.

Given a linear system x' = Ax and a candidate invariant set (polyhedron,
ellipsoid, Lorenz cone, polyhedral cone), this package decides whether the
explicit or implicit Euler step preserves the set, computes certified local
and uniform steplength thresholds, finds optimal thresholds by bisection
against exact one-step checks, and cross-validates everything with a
sampling oracle.
"""

__version__ = "0.1.0"

from . import errors
from .invariance import (Outcome, Verdict, continuous_ellipsoid,
                         continuous_lorenz_necessary, continuous_polyhedron,
                         cross_positive_polyhedral, discrete_ellipsoid,
                         discrete_lorenz, discrete_polyhedral_cone,
                         discrete_polyhedron)
from .linalg import (Definiteness, DefinitenessVerdict, Inertia, Spectrum,
                     definiteness, general_spectrum, inertia_of, mat_exp,
                     solve_shifted, spectral_norm, sym_eigen)
from .oracle import (SampleReport, empirical_threshold, lipschitz_estimate,
                     sample_verify, singularity_scan)
from .sets import (ConeBase, Ellipsoid, HPolyhedron, Location, LocationKind,
                   LorenzCone, PolyhedralCone, PolyhedronPair, SetSpec,
                   VPolyhedron, classify_point, cone_base, sample_points,
                   validate_set)
from .systems import (CustomStepMap, EulerMap, LinearSystem, MatrixFamilyMap,
                      Method, SimulationResult, StepMap, backward_step,
                      exact_flow, forward_step, simulate, step_matrix)
from .thresholds import (ThresholdKind, ThresholdReport, backward_euler_uniform,
                         forward_euler_uniform_polyhedron, local_backward_euler,
                         optimal_uniform, tau_bar)

__all__ = [
    "__version__", "errors",
    # linalg
    "Definiteness", "DefinitenessVerdict", "Inertia", "Spectrum", "definiteness",
    "general_spectrum", "inertia_of", "mat_exp", "solve_shifted", "spectral_norm",
    "sym_eigen",
    # sets
    "ConeBase", "Ellipsoid", "HPolyhedron", "Location", "LocationKind",
    "LorenzCone", "PolyhedralCone", "PolyhedronPair", "SetSpec", "VPolyhedron",
    "classify_point", "cone_base", "sample_points", "validate_set",
    # systems
    "CustomStepMap", "EulerMap", "LinearSystem", "MatrixFamilyMap", "Method",
    "SimulationResult", "StepMap", "backward_step", "exact_flow", "forward_step",
    "simulate", "step_matrix",
    # invariance
    "Outcome", "Verdict", "continuous_ellipsoid", "continuous_lorenz_necessary",
    "continuous_polyhedron", "cross_positive_polyhedral", "discrete_ellipsoid",
    "discrete_lorenz", "discrete_polyhedral_cone", "discrete_polyhedron",
    # thresholds
    "ThresholdKind", "ThresholdReport", "backward_euler_uniform",
    "forward_euler_uniform_polyhedron", "local_backward_euler", "optimal_uniform",
    "tau_bar",
    # oracle
    "SampleReport", "empirical_threshold", "lipschitz_estimate", "sample_verify",
    "singularity_scan",
]
