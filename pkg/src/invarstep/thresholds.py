"""Invariance-preserving steplength thresholds.

Three flavours are computed here:

* local thresholds at a point, from closed-form bounds on the power series of
  the implicit-Euler step (branches gamma1 / gamma2 / gamma3);
* certified uniform thresholds from the structure theorems (ratio tests on
  polyhedra, the nonsingular-shift bound tau_bar, infinity for ellipsoids);
* optimal uniform thresholds by bisection against the exact one-step checks.

All matrix norms entering the gamma formulas are spectral (operator-2) norms;
reports record that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Union

import numpy as np

from . import invariance, linalg, sets, systems
from .errors import (BranchPreconditionFailed, NotFlowInvariant, NotInSet,
                     PredicateFalseAtZero, SingularShift, UnsupportedSet)
from .sets import Ellipsoid, LorenzCone, PolyhedralCone, PolyhedronPair
from .systems import LinearSystem, Method

DEFAULT_TOL = 1e-9
DEFAULT_TOL_DT = 1e-9


class ThresholdKind(Enum):
    LOCAL = "local"
    UNIFORM_CERTIFIED = "uniform-certified"
    UNIFORM_OPTIMAL = "uniform-optimal"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class ThresholdReport:
    """A steplength threshold plus the facts needed to audit it.

    ``inclusive`` says whether the endpoint itself is certified. ``basis``
    names the rule that produced the value; ``diagnostics`` carries branch
    tags, margins and search traces.
    """

    kind: ThresholdKind
    value: float                   # nonnegative, may be math.inf
    inclusive: bool
    basis: str
    diagnostics: Dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# tau_bar: the nonsingular-shift steplength bound
# ---------------------------------------------------------------------------

def tau_bar(A, tol: float = DEFAULT_TOL) -> ThresholdReport:
    """sup{tau : I - dt*A nonsingular for all dt in [0, tau]}.

    I - dt*A is singular exactly when 1/dt is a real positive eigenvalue of A,
    so the bound is the reciprocal of the largest such eigenvalue (infinite
    when none exists). The endpoint itself is singular, hence exclusive.
    """
    spec = linalg.general_spectrum(A)
    eigs = spec.eigenvalues
    candidates = []
    for lam in eigs:
        scale = max(1.0, abs(lam))
        if abs(lam.imag) <= tol * scale and lam.real > tol * scale:
            candidates.append(lam.real)
    if not candidates:
        return ThresholdReport(ThresholdKind.UNIFORM_CERTIFIED, math.inf, False,
                               "no real positive eigenvalue makes I - dt*A singular",
                               {"eigenvalues": [complex(z) for z in eigs]})
    blocking = max(candidates)
    return ThresholdReport(
        ThresholdKind.UNIFORM_CERTIFIED, 1.0 / blocking, False,
        "reciprocal of the largest real positive eigenvalue of A",
        {"blocking_eigenvalue": blocking,
         "singular_steplengths": sorted(1.0 / c for c in candidates),
         "eigenvalues": [complex(z) for z in eigs]})


# ---------------------------------------------------------------------------
# Local thresholds for the implicit Euler step (gamma formulas)
# ---------------------------------------------------------------------------

def _gamma1(beta: float) -> float:
    return 1.0 - 1.0 / math.sqrt(1.0 + beta)

def _gamma2(beta: float) -> float:
    return (2.0 * beta + 3.0 - math.sqrt(4.0 * beta + 9.0)) / (2.0 * beta + 4.0)

def _gamma3(beta: float) -> float:
    return (beta + 2.0 - math.sqrt(beta + 4.0)) / (beta + 3.0)


def local_backward_euler(A, s: Union[Ellipsoid, LorenzCone], x,
                         tol: float = DEFAULT_TOL) -> ThresholdReport:
    """Certified local steplength threshold for the implicit Euler step at x.

    The set must be flow invariant and contain x. Dispatch:

    * interior point: the slack of the quadratic constraint absorbs the whole
      series tail (branch gamma1);
    * boundary with strictly inward derivative (Ax)'Qx < 0: the first-order
      decrease absorbs the tail (branch gamma2);
    * boundary with tangential derivative: the second-order decrease
      -x'(A''Q + A'QA + QA'')x > 0 absorbs the tail (branch gamma3).

    The returned interval [0, gamma) is open, and gamma < 1/||A|| always.
    """
    a = linalg.as_matrix(A, "A")
    v = linalg.as_vector(x)
    if not isinstance(s, (Ellipsoid, LorenzCone)):
        raise UnsupportedSet("local thresholds are defined for ellipsoids and Lorenz cones")
    loc = sets.classify_point(s, v, tol)
    if loc.kind == sets.LocationKind.OUTSIDE:
        raise NotInSet(f"point lies outside the set (margin {loc.margin:.3e})")
    Q = s.Q
    norm_a = linalg.spectral_norm(a)
    norm_q = linalg.spectral_norm(Q)
    nx2 = float(v @ v)
    diag: Dict = {"norm": "spectral", "location": loc.kind.value}

    if norm_a == 0.0 or np.linalg.norm(a @ v) <= tol * max(1.0, norm_a * math.sqrt(nx2)):
        # the step fixes x (or the whole space): any dt keeps it in place
        diag["branch"] = "fixed-point"
        return ThresholdReport(ThresholdKind.LOCAL, math.inf, True,
                               "Ax = 0 so the implicit step leaves x unchanged", diag)

    level = 1.0 if isinstance(s, Ellipsoid) else 0.0
    quad = float(v @ Q @ v)

    if loc.kind == sets.LocationKind.INSIDE:
        slack = level - quad
        beta1 = slack / (norm_q * nx2)
        gamma = _gamma1(beta1) / norm_a
        diag.update(branch="gamma1", delta=quad, beta=beta1)
    else:
        g = float((a @ v) @ (Q @ v))
        scale_g = norm_a * norm_q * nx2
        if g < -tol * scale_g:
            delta2 = -float(v @ (a.T @ Q + Q @ a) @ v)
            beta2 = delta2 / scale_g
            gamma = _gamma2(beta2) / norm_a
            diag.update(branch="gamma2", delta=delta2, beta=beta2)
        elif g <= tol * scale_g:
            a2 = a @ a
            delta3 = -float(v @ (a2.T @ Q + a.T @ Q @ a + Q @ a2) @ v)
            scale3 = norm_a ** 2 * norm_q * nx2
            if delta3 <= tol * scale3:
                raise BranchPreconditionFailed(
                    "tangential boundary point with vanishing second-order decrease; "
                    "no positive threshold can be certified here")
            beta3 = delta3 / scale3
            gamma = _gamma3(beta3) / norm_a
            diag.update(branch="gamma3", delta=delta3, beta=beta3)
        else:
            raise BranchPreconditionFailed(
                "the derivative points outward at this boundary point "
                "(the set is not flow invariant there)")

    assert 0.0 < gamma < 1.0 / norm_a  # all three branches land in (0, 1/||A||)
    return ThresholdReport(ThresholdKind.LOCAL, gamma, False,
                           "series-tail bound for the implicit Euler step", diag)


# ---------------------------------------------------------------------------
# Certified uniform thresholds
# ---------------------------------------------------------------------------

def forward_euler_uniform_polyhedron(A, p: PolyhedronPair,
                                     tol: float = DEFAULT_TOL) -> ThresholdReport:
    """Uniform explicit-Euler threshold on a polyhedron via per-generator ratio tests.

    Each vertex contributes min over rows with G_j'Av > 0 of
    (b_j - G_j'v) / (G_j'Av); each ray contributes the homogeneous analog.
    The ratio test is exact for linear constraints, so the minimum over all
    generators is attained (closed interval).
    """
    a = linalg.as_matrix(A, "A")
    verdict = invariance.continuous_polyhedron(a, p, tol)
    if not verdict.holds:
        raise NotFlowInvariant("the polyhedron is not invariant for the flow")
    G, b = p.h.G, p.h.b
    row_norms = np.linalg.norm(G, axis=1)
    best = math.inf
    argbest = None
    for v in p.v.vertices:
        d = G @ (a @ v)
        pos = d > tol * np.maximum(1.0, row_norms * max(np.linalg.norm(a @ v), 1.0))
        if pos.any():
            ratios = (b[pos] - G[pos] @ v) / d[pos]
            eps = float(np.clip(ratios, 0.0, None).min())
            if eps < best:
                best, argbest = eps, ("vertex", v)
    for r in p.v.rays:
        d = G @ (a @ r)
        pos = d > tol * np.maximum(1.0, row_norms * max(np.linalg.norm(a @ r), 1.0))
        if pos.any():
            ratios = (-(G[pos] @ r)) / d[pos]
            eps = float(np.clip(ratios, 0.0, None).min())
            if eps < best:
                best, argbest = eps, ("ray", r)
    diag: Dict = {"basis_check": verdict.certificate}
    if argbest is not None:
        diag["binding_generator"] = argbest[0]
        diag["binding_point"] = argbest[1]
    return ThresholdReport(ThresholdKind.UNIFORM_CERTIFIED, best, True,
                           "per-generator ratio test on the halfspace description",
                           diag)


def backward_euler_uniform(A, s, tol: float = DEFAULT_TOL,
                           necessary_samples: int = 2000,
                           seed: int = 0) -> ThresholdReport:
    """Certified uniform implicit-Euler threshold for a flow-invariant set.

    Ellipsoids admit every steplength (value infinity). Polyhedra and proper
    cones are covered on [0, tau_bar) where tau_bar is the nonsingular-shift
    bound; the endpoint is excluded because the shift is singular there.
    """
    a = linalg.as_matrix(A, "A")
    if isinstance(s, Ellipsoid):
        verdict = invariance.continuous_ellipsoid(a, s, tol)
        if not verdict.holds:
            raise NotFlowInvariant("A'Q + QA is not negative semidefinite")
        return ThresholdReport(
            ThresholdKind.UNIFORM_CERTIFIED, math.inf, True,
            "A'Q + QA <= 0 implies A'Q + QA - t*A'QA <= 0 for every t >= 0",
            {"flow_margin": verdict.margin})
    if isinstance(s, PolyhedronPair):
        verdict = invariance.continuous_polyhedron(a, s, tol)
        if not verdict.holds:
            raise NotFlowInvariant("the polyhedron is not invariant for the flow")
        tb = tau_bar(a, tol)
        return ThresholdReport(ThresholdKind.UNIFORM_CERTIFIED, tb.value, False,
                               "nonsingular-shift bound for a flow-invariant polyhedron",
                               dict(tb.diagnostics, flow_margin=verdict.margin))
    if isinstance(s, PolyhedralCone):
        verdict = invariance.cross_positive_polyhedral(a, s, tol)
        if not verdict.holds:
            raise NotFlowInvariant("A is not cross-positive on the cone")
        tb = tau_bar(a, tol)
        return ThresholdReport(ThresholdKind.UNIFORM_CERTIFIED, tb.value, False,
                               "nonsingular-shift bound for a flow-invariant proper cone",
                               dict(tb.diagnostics, flow_margin=verdict.margin))
    if isinstance(s, LorenzCone):
        # flow invariance itself has no finite certificate here; the sampled
        # necessary condition must pass and the rest is the caller's assertion
        necessary = invariance.continuous_lorenz_necessary(
            a, s, n_samples=necessary_samples, seed=seed, tol=tol)
        if necessary.outcome == invariance.Outcome.FAILS:
            raise NotFlowInvariant(
                "a sampled boundary point has outward derivative; "
                "the cone is not flow invariant")
        tb = tau_bar(a, tol)
        return ThresholdReport(
            ThresholdKind.UNIFORM_CERTIFIED, tb.value, False,
            "nonsingular-shift bound for a flow-invariant proper cone",
            dict(tb.diagnostics,
                 flow_invariance="caller-supplied assertion; necessary test passed",
                 necessary_margin=necessary.margin))
    raise UnsupportedSet(
        f"no certified uniform threshold for {type(s).__name__}; polyhedra need "
        "the paired generator description")


# ---------------------------------------------------------------------------
# Optimal uniform thresholds by bisection on the exact one-step checks
# ---------------------------------------------------------------------------

def _discrete_check(s) -> Callable[[np.ndarray], invariance.Verdict]:
    if isinstance(s, Ellipsoid):
        return lambda m: invariance.discrete_ellipsoid(m, s)
    if isinstance(s, PolyhedronPair):
        return lambda m: invariance.discrete_polyhedron(m, s)
    if isinstance(s, LorenzCone):
        return lambda m: invariance.discrete_lorenz(m, s)
    if isinstance(s, PolyhedralCone):
        return lambda m: invariance.discrete_polyhedral_cone(m, s)
    raise UnsupportedSet(
        f"no exact one-step check for {type(s).__name__}; membership needs a "
        "halfspace or quadratic description")


def optimal_uniform(A, s, m: Method, dt_max: Optional[float] = None,
                    tol: float = DEFAULT_TOL,
                    tol_dt: float = DEFAULT_TOL_DT) -> ThresholdReport:
    """Largest steplength passing the exact one-step invariance check.

    Bisection assumes the feasible steplengths form an interval starting at 0;
    that assumption is verified afterwards by a 100-point scan of [0, value]
    and any non-monotonicity is flagged in the diagnostics (the raw algebraic
    condition can have spurious feasible branches beyond a singular shift).
    """
    a = linalg.as_matrix(A, "A")
    sys = LinearSystem(a)
    check = _discrete_check(s)

    def predicate(dt: float) -> bool:
        try:
            mat = systems.step_matrix(sys, m, dt)
        except SingularShift:
            return False
        return check(mat).holds

    if not predicate(0.0):
        raise PredicateFalseAtZero(
            "the one-step check fails already at dt = 0; the set is not "
            "invariant even for the identity step")
    if dt_max is None:
        tb = tau_bar(a, tol).value
        dt_max = 10.0 * max(1.0, tb if math.isfinite(tb) else 1.0)

    diag: Dict = {"dt_max": dt_max, "tol_dt": tol_dt}
    if predicate(dt_max):
        value = dt_max
        diag["hit_search_ceiling"] = True
        iterations = 0
    else:
        lo, hi = 0.0, dt_max
        iterations = 0
        while hi - lo > tol_dt:
            mid = 0.5 * (lo + hi)
            if predicate(mid):
                lo = mid
            else:
                hi = mid
            iterations += 1
        value = lo
        diag["bracket"] = (lo, hi)
    diag["iterations"] = iterations

    grid = np.linspace(0.0, value, 100) if value > 0 else np.array([0.0])
    bad = [float(dt) for dt in grid if not predicate(float(dt))]
    diag["grid_scan_ok"] = not bad
    if bad:
        diag["non_monotone_at"] = bad[:10]
    return ThresholdReport(ThresholdKind.UNIFORM_OPTIMAL, value, True,
                           "bisection against the exact one-step invariance check",
                           diag)
