"""Exact and necessary-condition checks that a set is invariant for a flow or a step matrix.

Each check returns a :class:`Verdict`. A ``FAILS`` verdict always carries a
witness that violates the stated condition by more than the tolerance; checks
that cannot certify either way return ``INCONCLUSIVE``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from . import linalg, sets
from .errors import DimensionMismatch, InconsistentPair
from .sets import (Ellipsoid, LocationKind, LorenzCone, PolyhedralCone,
                   PolyhedronPair)

DEFAULT_TOL = 1e-9


class Outcome(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class Verdict:
    outcome: Outcome
    margin: float
    certificate: str
    witness: Optional[np.ndarray] = None

    @property
    def holds(self) -> bool:
        return self.outcome == Outcome.HOLDS


def _check_dims(a: np.ndarray, n: int):
    if a.shape != (n, n):
        raise DimensionMismatch(f"matrix {a.shape} against a set of dimension {n}")


# ---------------------------------------------------------------------------
# Ellipsoids
# ---------------------------------------------------------------------------

def continuous_ellipsoid(A, e: Ellipsoid, tol: float = DEFAULT_TOL) -> Verdict:
    """Flow invariance of {x'Qx <= 1}: A'Q + QA negative semidefinite."""
    a = linalg.as_matrix(A, "A")
    _check_dims(a, e.dim)
    s = a.T @ e.Q + e.Q @ a
    verdict = linalg.definiteness(s, tol)
    margin = -verdict.eig_max
    if verdict.is_nsd:
        return Verdict(Outcome.HOLDS, margin, "A'Q + QA <= 0")
    # top eigenvector scaled to the boundary witnesses the outward derivative
    spec = linalg.sym_eigen(s, tol)
    v = spec.eigenvectors[:, 0]
    w = v / np.sqrt(float(v @ e.Q @ v))
    return Verdict(Outcome.FAILS, margin, "A'Q + QA has a positive eigenvalue",
                   witness=w)


def discrete_ellipsoid(M, e: Ellipsoid, tol: float = DEFAULT_TOL) -> Verdict:
    """One-step invariance of {x'Qx <= 1} under x -> Mx: M'QM - Q <= 0."""
    m = linalg.as_matrix(M, "M")
    _check_dims(m, e.dim)
    s = m.T @ e.Q @ m - e.Q
    verdict = linalg.definiteness(s, tol)
    margin = -verdict.eig_max
    if verdict.is_nsd:
        return Verdict(Outcome.HOLDS, margin, "M'QM - Q <= 0")
    spec = linalg.sym_eigen(s, tol)
    v = spec.eigenvectors[:, 0]
    w = v / np.sqrt(float(v @ e.Q @ v))  # boundary point whose image leaves the set
    return Verdict(Outcome.FAILS, margin, "M'QM - Q has a positive eigenvalue",
                   witness=w)


# ---------------------------------------------------------------------------
# Polyhedra
# ---------------------------------------------------------------------------

def _validated_pair(p: PolyhedronPair, tol: float) -> PolyhedronPair:
    report = sets.validate_set(p, tol=max(tol, 1e-12))
    if not report.ok:
        raise InconsistentPair("; ".join(m for _, _, m in report.failures))
    return p


def continuous_polyhedron(A, p: PolyhedronPair, tol: float = DEFAULT_TOL) -> Verdict:
    """Sub-tangentiality of the vector field at the generators.

    At every vertex, active rows j (G_j'v = b_j) must satisfy G_j'Av <= 0;
    at every ray, rows with G_j'r = 0 must satisfy G_j'Ar <= 0.
    """
    a = linalg.as_matrix(A, "A")
    _check_dims(a, p.dim)
    _validated_pair(p, tol)
    G, b = p.h.G, p.h.b
    worst = np.inf
    witness = None
    row_norms = np.linalg.norm(G, axis=1)
    for v in p.v.vertices:
        act = np.abs(G @ v - b) <= tol * np.maximum(1.0, np.abs(b) + row_norms * np.linalg.norm(v))
        if not act.any():
            continue
        d = G[act] @ (a @ v)
        scale = np.maximum(1.0, row_norms[act] * max(np.linalg.norm(a @ v), 1.0))
        slack = -d / scale
        j = int(np.argmin(slack))
        if slack[j] < worst:
            worst = float(slack[j])
            witness = v
    for r in p.v.rays:
        act = np.abs(G @ r) <= tol * np.maximum(1.0, row_norms * np.linalg.norm(r))
        if not act.any():
            continue
        d = G[act] @ (a @ r)
        scale = np.maximum(1.0, row_norms[act] * max(np.linalg.norm(a @ r), 1.0))
        slack = -d / scale
        j = int(np.argmin(slack))
        if slack[j] < worst:
            worst = float(slack[j])
            witness = r
    if worst == np.inf:
        worst = 0.0  # no active constraints anywhere (generators strictly inside)
    if worst >= -tol:
        return Verdict(Outcome.HOLDS, worst, "A points sub-tangentially at all generators")
    return Verdict(Outcome.FAILS, worst,
                   "A points outward at an active constraint of a generator",
                   witness=witness)


def discrete_polyhedron(M, p: PolyhedronPair, tol: float = DEFAULT_TOL) -> Verdict:
    """One-step invariance: vertex images satisfy Gx <= b, ray images stay in the recession cone."""
    m = linalg.as_matrix(M, "M")
    _check_dims(m, p.dim)
    _validated_pair(p, tol)
    G, b = p.h.G, p.h.b
    worst = np.inf
    witness = None
    vert_slack = b[None, :] - p.v.vertices @ m.T @ G.T
    i, j = np.unravel_index(np.argmin(vert_slack), vert_slack.shape)
    if vert_slack[i, j] < worst:
        worst = float(vert_slack[i, j])
        witness = p.v.vertices[i]
    if p.v.rays.shape[0]:
        ray_slack = -(p.v.rays @ m.T @ G.T)
        scale = np.maximum(1.0, np.linalg.norm(p.v.rays @ m.T, axis=1))[:, None]
        ray_slack = ray_slack / scale
        i, j = np.unravel_index(np.argmin(ray_slack), ray_slack.shape)
        if ray_slack[i, j] < worst:
            worst = float(ray_slack[i, j])
            witness = p.v.rays[i]
    if worst >= -tol:
        return Verdict(Outcome.HOLDS, worst, "images of all generators stay in the set")
    return Verdict(Outcome.FAILS, worst, "a generator image leaves the set",
                   witness=witness)


def discrete_polyhedral_cone(M, c: PolyhedralCone, tol: float = DEFAULT_TOL) -> Verdict:
    """One-step invariance of a polyhedral cone: every ray image satisfies the facets."""
    m = linalg.as_matrix(M, "M")
    _check_dims(m, c.dim)
    report = sets.validate_set(c, tol=max(tol, 1e-12))
    if not report.ok:
        raise InconsistentPair("; ".join(msg for _, _, msg in report.failures))
    images = c.rays @ m.T
    margins = sets.membership_margins(c, images)
    i = int(np.argmin(margins))
    worst = float(margins[i])
    if worst >= -tol:
        return Verdict(Outcome.HOLDS, worst, "ray images stay in the cone")
    return Verdict(Outcome.FAILS, worst, "a ray image leaves the cone",
                   witness=c.rays[i])


# ---------------------------------------------------------------------------
# Cross-positivity (polyhedral cones, continuous case)
# ---------------------------------------------------------------------------

def cross_positive_polyhedral(A, c: PolyhedralCone, tol: float = DEFAULT_TOL) -> Verdict:
    """Cross-positivity of A on a polyhedral cone, tested on extreme pairs.

    For every ray r and dual vector y (inward normal) orthogonal to it,
    y'Ar >= 0 is required; evaluation on extreme rays and facet normals
    suffices for polyhedral cones.
    """
    a = linalg.as_matrix(A, "A")
    _check_dims(a, c.dim)
    report = sets.validate_set(c, tol=max(tol, 1e-12))
    if not report.ok:
        raise InconsistentPair("; ".join(msg for _, _, msg in report.failures))
    duals = -c.facet_normals  # stored outward; the dual cone generators point inward
    worst = np.inf
    witness = None
    for r in c.rays:
        nr = np.linalg.norm(r)
        for y in duals:
            ny = np.linalg.norm(y)
            if abs(y @ r) > tol * max(1.0, ny * nr):
                continue  # not an orthogonal (boundary) pair
            val = float(y @ (a @ r)) / max(1.0, ny * nr)
            if val < worst:
                worst = val
                witness = np.concatenate([r, y])
    if worst == np.inf:
        return Verdict(Outcome.HOLDS, 0.0, "no orthogonal ray/dual pairs to constrain")
    if worst >= -tol:
        return Verdict(Outcome.HOLDS, worst, "y'Ar >= 0 on all orthogonal extreme pairs")
    return Verdict(Outcome.FAILS, worst, "y'Ar < 0 on an orthogonal extreme pair",
                   witness=witness)


# ---------------------------------------------------------------------------
# Lorenz cones
# ---------------------------------------------------------------------------

def _lambda_search(S: np.ndarray, Q: np.ndarray, lam_hi: float,
                   grid: int = 1000, bracket_tol: float = 1e-10
                   ) -> Tuple[float, float]:
    """Minimize lam_max(S - lam*Q) over lam in [0, lam_hi].

    The objective is convex in lam (max of affine functions); a coarse grid
    picks the bracket and golden-section refines it. The bracket width is
    relative to the search scale, since an absolute width is unreachable in
    float64 when lam_hi is huge (near-singular step matrices).
    """
    lams = np.linspace(0.0, lam_hi, grid)
    stack = S[None, :, :] - lams[:, None, None] * Q[None, :, :]
    vals = np.linalg.eigvalsh(stack)[:, -1]
    k = int(np.argmin(vals))
    lo = lams[max(k - 1, 0)]
    hi = lams[min(k + 1, grid - 1)]

    def f(lam: float) -> float:
        return float(np.linalg.eigvalsh(S - lam * Q)[-1])

    width = bracket_tol * max(1.0, lam_hi)
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(200):
        if hi - lo <= width:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
    lam_star = 0.5 * (lo + hi)
    return lam_star, f(lam_star)


def _lorenz_witness(M: np.ndarray, c: LorenzCone, tol: float,
                    n_dirs: int = 256) -> Optional[np.ndarray]:
    """Boundary point whose image demonstrably leaves the cone, if one is found."""
    interior, boundary = sets.sample_arrays(c, n_dirs // 2, n_dirs, seed=20250811,
                                            cone_scale_range=(1.0, 1.0))
    candidates = np.vstack([boundary, interior, c.u_n[None, :]])
    images = candidates @ M.T
    margins = sets.membership_margins(c, images)
    i = int(np.argmin(margins))
    if margins[i] < -tol:
        return candidates[i]
    return None


def discrete_lorenz(M, c: LorenzCone, tol: float = DEFAULT_TOL) -> Verdict:
    """One-step invariance of a Lorenz cone under x -> Mx.

    The quadratic containment is decided by a lossless single-constraint
    S-procedure: a multiplier lam >= 0 with M'QM - lam*Q <= 0 certifies it.
    The correct cone half is checked separately on the axis. On failure a
    boundary witness is searched for; without one the verdict stays
    inconclusive.
    """
    m = linalg.as_matrix(M, "M")
    _check_dims(m, c.dim)
    S = m.T @ c.Q @ m
    norm_s = linalg.spectral_norm(S)
    q_min = float(linalg.sym_eigen(c.Q).eigenvalues[-1])  # the negative eigenvalue
    lam_hi = 10.0 * norm_s / abs(q_min) if norm_s > 0 else 10.0
    lam_star, best = _lambda_search(S, c.Q, lam_hi)
    scale = max(1.0, norm_s, abs(lam_star) * linalg.spectral_norm(c.Q))
    band = tol * scale

    axis_val = float((m @ c.u_n) @ (c.Q @ c.u_n))
    axis_scale = max(1.0, linalg.spectral_norm(m) * linalg.spectral_norm(c.Q))
    axis_ok = axis_val <= tol * axis_scale

    if best <= band and axis_ok:
        return Verdict(Outcome.HOLDS, -best / scale,
                       f"M'QM - lam*Q <= 0 with lam = {lam_star:.6g}, axis preserved")
    witness = _lorenz_witness(m, c, tol)
    if witness is not None:
        img_margin = float(sets.membership_margins(c, (m @ witness)[None, :])[0])
        return Verdict(Outcome.FAILS, img_margin,
                       "a cone point maps outside the cone", witness=witness)
    reason = "no multiplier certifies containment" if axis_ok else "axis orientation check failed"
    return Verdict(Outcome.INCONCLUSIVE, -best / scale,
                   f"{reason}, and no violating point was found")


def continuous_lorenz_necessary(A, c: LorenzCone, n_samples: int = 10000,
                                seed: int = 0, tol: float = DEFAULT_TOL) -> Verdict:
    """Necessary flow-invariance test on sampled Lorenz-cone boundary points.

    Boundary points must satisfy x'(A'Q + QA)x <= 0. A violation disproves
    flow invariance; absence of violations is only evidence, so the verdict is
    never HOLDS.
    """
    a = linalg.as_matrix(A, "A")
    _check_dims(a, c.dim)
    S = a.T @ c.Q + c.Q @ a
    _, boundary = sets.sample_arrays(c, 0, n_samples, seed=seed)
    vals = np.einsum("ij,jk,ik->i", boundary, S, boundary)
    norms2 = np.einsum("ij,ij->i", boundary, boundary)
    scale = max(linalg.spectral_norm(S), 1e-300) * norms2
    rel = vals / np.maximum(scale, 1e-300)
    i = int(np.argmax(rel))
    if rel[i] > tol:
        return Verdict(Outcome.FAILS, float(-rel[i]),
                       "a boundary point has outward derivative x'(A'Q+QA)x > 0",
                       witness=boundary[i])
    return Verdict(Outcome.INCONCLUSIVE, float(-rel[i]),
                   f"no outward derivative found on {n_samples} boundary samples "
                   "(necessary condition only)")
