"""Independent sampling-based verification and empirical threshold estimation.

Nothing here produces a certificate: estimates are labeled as such and every
report carries its sample count and seed so runs are reproducible. Half of
all samples sit on the boundary, because that is where one-step invariance
breaks first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import linalg, sets, thresholds
from .errors import PredicateFalseAtZero, SingularShift, ValidationError
from .sets import LorenzCone, PolyhedralCone, SetSpec
from .systems import StepMap
from .thresholds import ThresholdKind, ThresholdReport

DEFAULT_TOL = 1e-9


@dataclass
class SampleReport:
    violations: int
    witnesses: List[np.ndarray]
    max_excursion: float        # worst outward margin among images, >= 0
    n: int
    seed: int
    min_margin: float
    warnings: List[str] = field(default_factory=list)


def _is_cone(s: SetSpec) -> bool:
    return isinstance(s, (LorenzCone, PolyhedralCone))


def _draw(s: SetSpec, n: int, seed: int, base_only: bool = False) -> np.ndarray:
    scale_range = (1.0, 1.0) if base_only else (0.1, 10.0)
    n_half = n // 2
    interior, boundary = sets.sample_arrays(s, n_half, n - n_half, seed=seed,
                                            cone_scale_range=scale_range)
    return np.vstack([interior, boundary])


def _declaration_warnings(step: StepMap, dt: float, points: np.ndarray,
                          rng: np.random.Generator) -> List[str]:
    """Spot-check declared linearity/homogeneity on a few samples."""
    warnings: List[str] = []
    if points.shape[0] < 2:
        return warnings
    idx = rng.integers(points.shape[0], size=2)
    x, y = points[idx[0]], points[idx[1]]
    try:
        if step.linear:
            lhs = step(dt, x + y)
            rhs = step(dt, x) + step(dt, y)
            scale = max(1.0, float(np.linalg.norm(lhs)))
            if np.linalg.norm(lhs - rhs) > 1e-6 * scale:
                warnings.append("declared linear but D(x+y) != D(x)+D(y) on a sample")
        p = step.homogeneous_degree
        if p is not None:
            alpha = 2.0
            lhs = step(dt, alpha * x)
            rhs = alpha ** p * step(dt, x)
            scale = max(1.0, float(np.linalg.norm(lhs)))
            if np.linalg.norm(lhs - rhs) > 1e-6 * scale:
                warnings.append(
                    f"declared homogeneous of degree {p} but a sample disagrees")
    except SingularShift:
        pass
    return warnings


def sample_verify(step: StepMap, dt: float, s: SetSpec, n: int = 10000,
                  seed: int = 0, tol: float = DEFAULT_TOL,
                  max_witnesses: int = 10) -> SampleReport:
    """Push sampled set points through one step and count membership violations."""
    points = _draw(s, n, seed)
    images = step.apply_batch(dt, points)
    margins = sets.membership_margins(s, images)
    violating = np.where(margins < -tol)[0]
    order = violating[np.argsort(margins[violating])]
    witnesses = [points[i] for i in order[:max_witnesses]]
    min_margin = float(margins.min()) if margins.size else 0.0
    rng = np.random.default_rng(seed + 1)
    warnings = _declaration_warnings(step, dt, points, rng)
    return SampleReport(violations=int(violating.size), witnesses=witnesses,
                        max_excursion=max(0.0, -min_margin), n=n, seed=seed,
                        min_margin=min_margin, warnings=warnings)


def empirical_threshold(step: StepMap, s: SetSpec, n: int = 10000,
                        dt_hi: float = 10.0, seed: int = 0,
                        tol: float = DEFAULT_TOL,
                        tol_dt: float = 1e-4) -> ThresholdReport:
    """Estimate the largest violation-free steplength by bisection on samples.

    For cones the map must declare a homogeneity degree; sampling is then
    restricted to a base of the cone, which decides invariance for every
    positive multiple as well. The value is an estimate, never a certificate.
    """
    base_only = _is_cone(s)
    if base_only and step.homogeneous_degree is None:
        raise ValidationError(
            "empirical thresholds on a cone need the map to declare a "
            "homogeneity degree; base sampling is unsound without it")
    points = _draw(s, n, seed, base_only=base_only)

    def margins_at(dt: float) -> Optional[np.ndarray]:
        try:
            images = step.apply_batch(dt, points)
        except SingularShift:
            return None
        return sets.membership_margins(s, images)

    def ok(dt: float) -> bool:
        m = margins_at(dt)
        return m is not None and bool(np.all(m >= -tol))

    if not ok(0.0):
        raise PredicateFalseAtZero(
            "sampled points leave the set already at dt = 0")

    diag = {
        "samples": n,
        "seed": seed,
        "lipschitz_declared": step.lipschitz_bound,
        "homogeneity_degree": step.homogeneous_degree,
        "base_restricted": base_only,
        "estimate_only": True,
    }
    if not base_only and step.lipschitz_bound is None:
        diag["confidence"] = "downgraded: no Lipschitz bound declared on a compact set"

    if ok(dt_hi):
        value = dt_hi
        diag["hit_search_ceiling"] = True
    else:
        lo, hi = 0.0, dt_hi
        while hi - lo > tol_dt:
            mid = 0.5 * (lo + hi)
            if ok(mid):
                lo = mid
            else:
                hi = mid
        value = lo
        diag["bracket"] = (lo, hi)

    final = margins_at(value)
    if final is not None:
        diag["boundary_grazing"] = bool(final.min() <= tol)
    rng = np.random.default_rng(seed + 1)
    warns = _declaration_warnings(step, min(value, dt_hi), points, rng)
    if warns:
        diag["declaration_warnings"] = warns
    return ThresholdReport(ThresholdKind.EMPIRICAL, value, False,
                           "bisection on sampled one-step verification", diag)


def singularity_scan(A, dt_hi: float, grid: int = 100000,
                     tol: float = DEFAULT_TOL) -> List[Tuple[float, float]]:
    """Grid scan for steplengths where det(I - dt*A) vanishes.

    Cells with a determinant sign change, or with |det| inside the tolerance
    band, are merged into intervals. This is the independent check for the
    nonsingular-shift bound.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    a = linalg.as_matrix(A, "A")
    ts = np.linspace(0.0, dt_hi, grid)
    eye = np.eye(a.shape[0])
    stack = eye[None, :, :] - ts[:, None, None] * a[None, :, :]
    dets = np.linalg.det(stack)
    scale = max(1.0, float(np.abs(dets).max()))
    small = np.abs(dets) <= tol * scale
    flips = np.sign(dets[:-1]) * np.sign(dets[1:]) < 0
    suspicious = small[:-1] | small[1:] | flips
    intervals: List[Tuple[float, float]] = []
    i = 0
    while i < suspicious.size:
        if suspicious[i]:
            j = i
            while j + 1 < suspicious.size and suspicious[j + 1]:
                j += 1
            intervals.append((float(ts[i]), float(ts[j + 1])))
            i = j + 1
        i += 1
    return intervals


def lipschitz_estimate(step: StepMap, s: SetSpec, dt: float,
                       n_pairs: int = 10000, seed: int = 0) -> float:
    """Max sampled difference quotient of the map; a lower bound on the true constant."""
    base_only = _is_cone(s)
    points = _draw(s, 2 * n_pairs, seed, base_only=base_only)
    rng = np.random.default_rng(seed + 2)
    idx = rng.permutation(points.shape[0])
    xs = points[idx[:n_pairs]]
    ys = points[idx[n_pairs:2 * n_pairs]]
    fx = step.apply_batch(dt, xs)
    fy = step.apply_batch(dt, ys)
    num = np.linalg.norm(fx - fy, axis=1)
    den = np.linalg.norm(xs - ys, axis=1)
    good = den > 1e-12
    if not good.any():
        return 0.0
    return float((num[good] / den[good]).max())
