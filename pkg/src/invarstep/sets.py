"""Candidate invariant sets: validation, membership classification, cone bases, sampling.

Set values are immutable. Polyhedra and polyhedral cones must be supplied with
both descriptions (halfspaces and generators) when an operation needs both;
the validator asserts consistency between them but never synthesizes the
missing side, since facet/vertex enumeration is exponential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from . import linalg
from .errors import (DegenerateCone, DimensionMismatch, SamplingExhausted,
                     UnsupportedSet)

MEMBERSHIP_TOL = 1e-9


class LocationKind(Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Location:
    """Membership classification with a signed-margin surrogate."""

    kind: LocationKind
    margin: float


def _location(margin: float, tol: float) -> Location:
    if margin > tol:
        return Location(LocationKind.INSIDE, margin)
    if margin < -tol:
        return Location(LocationKind.OUTSIDE, margin)
    return Location(LocationKind.BOUNDARY, margin)


# ---------------------------------------------------------------------------
# Set types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HPolyhedron:
    """{x : G x <= b}."""

    G: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "G", linalg.as_matrix(self.G, "G"))
        object.__setattr__(self, "b", linalg.as_vector(self.b, "b"))
        if self.G.shape[0] != self.b.size:
            raise ValueError("G and b row counts differ")

    @property
    def dim(self) -> int:
        return self.G.shape[1]


@dataclass(frozen=True, eq=False)
class VPolyhedron:
    """Convex combinations of vertices plus conic combinations of rays."""

    vertices: np.ndarray
    rays: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        object.__setattr__(self, "vertices", v)
        r = np.asarray(self.rays, dtype=float)
        if r.size == 0:
            r = np.zeros((0, v.shape[1]))
        object.__setattr__(self, "rays", np.atleast_2d(r))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


@dataclass(frozen=True, eq=False)
class PolyhedronPair:
    """A polyhedron given by both its halfspace and generator descriptions."""

    h: HPolyhedron
    v: VPolyhedron

    @property
    def dim(self) -> int:
        return self.h.dim


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """{x : x'Qx <= 1} with Q symmetric positive definite."""

    Q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Q", linalg.as_matrix(self.Q, "Q"))

    @property
    def dim(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True, eq=False)
class LorenzCone:
    """{x : x'Qx <= 0, x'Q u_n <= 0} with inertia(Q) = (n-1, 0, 1).

    ``u_n`` is the unit eigenvector of the unique negative eigenvalue; its sign
    selects which of the two quadratic-cone halves is meant.
    """

    Q: np.ndarray
    u_n: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Q", linalg.as_matrix(self.Q, "Q"))
        object.__setattr__(self, "u_n", linalg.as_vector(self.u_n, "u_n"))

    @classmethod
    def from_q(cls, Q, tol: float = MEMBERSHIP_TOL) -> "LorenzCone":
        """Build the cone from Q alone, orienting the axis canonically.

        The axis is the negative-eigenvalue eigenvector with its
        largest-magnitude entry made positive.
        """
        spec = linalg.sym_eigen(Q, tol)
        u = spec.eigenvectors[:, -1]  # eigenvalues descending: last is most negative
        pivot = int(np.argmax(np.abs(u)))
        if u[pivot] < 0:
            u = -u
        return cls(Q=np.asarray(Q, dtype=float), u_n=u)

    @property
    def dim(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True, eq=False)
class PolyhedralCone:
    """cone(rays) with outward facet normals: f'x <= 0 for every x in the cone."""

    rays: np.ndarray
    facet_normals: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rays", np.atleast_2d(np.asarray(self.rays, dtype=float)))
        object.__setattr__(self, "facet_normals",
                           np.atleast_2d(np.asarray(self.facet_normals, dtype=float)))

    @property
    def dim(self) -> int:
        return self.rays.shape[1]


SetSpec = Union[HPolyhedron, VPolyhedron, PolyhedronPair, Ellipsoid, LorenzCone,
                PolyhedralCone]


def dimension(s: SetSpec) -> int:
    return s.dim


@dataclass(frozen=True)
class ConeBase:
    """Hyperplane a'x = 1 whose intersection with the cone is a compact base."""

    a: np.ndarray


@dataclass
class ValidationReport:
    ok: bool
    failures: List[Tuple[str, float, str]]  # (invariant, measured margin, message)

    def raise_if_failed(self):
        from .errors import ValidationError
        if not self.ok:
            msgs = "; ".join(m for _, _, m in self.failures)
            raise ValidationError(msgs)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _feasible(h: HPolyhedron) -> bool:
    # LP feasibility probe for {x : Gx <= b}; bounds=None frees the variables.
    res = linprog(c=np.zeros(h.dim), A_ub=h.G, b_ub=h.b, bounds=[(None, None)] * h.dim,
                  method="highs")
    return bool(res.success)


def validate_set(s: SetSpec, tol: float = MEMBERSHIP_TOL) -> ValidationReport:
    """Check the defining invariants of a set value; failures carry margins."""
    failures: List[Tuple[str, float, str]] = []

    def fail(name: str, margin: float, msg: str):
        failures.append((name, float(margin), msg))

    if isinstance(s, HPolyhedron):
        if s.G.shape[0] < 1:
            fail("rows", 0.0, "halfspace description needs at least one row")
        elif not _feasible(s):
            fail("nonempty", -1.0, "the polyhedron {Gx <= b} is empty")
    elif isinstance(s, VPolyhedron):
        if s.vertices.shape[0] < 1:
            fail("vertices", 0.0, "at least one vertex is required")
        ray_norms = np.linalg.norm(s.rays, axis=1) if s.rays.shape[0] else np.array([])
        if ray_norms.size and ray_norms.min() <= tol:
            fail("rays-nonzero", float(ray_norms.min()), "zero ray in generator description")
    elif isinstance(s, PolyhedronPair):
        for sub in (s.h, s.v):
            sub_report = validate_set(sub, tol)
            failures.extend(sub_report.failures)
        if s.h.dim != s.v.dim:
            fail("dimensions", 0.0, "halfspace and generator dimensions differ")
        else:
            scale = max(1.0, float(np.abs(s.h.b).max()))
            slack = s.h.G @ s.v.vertices.T - s.h.b[:, None]
            worst = float(slack.max()) if slack.size else 0.0
            if worst > tol * scale:
                fail("vertex-consistency", worst,
                     f"a vertex violates Gx <= b by {worst:.3e}")
            if s.v.rays.shape[0]:
                rslack = s.h.G @ s.v.rays.T
                rworst = float(rslack.max())
                rscale = max(1.0, float(np.abs(s.h.G).max()) * float(np.abs(s.v.rays).max()))
                if rworst > tol * rscale:
                    fail("ray-consistency", rworst,
                         f"a ray leaves the recession cone by {rworst:.3e}")
    elif isinstance(s, Ellipsoid):
        try:
            verdict = linalg.definiteness(s.Q, tol)
            if not verdict.is_pd:
                fail("Q-positive-definite", verdict.eig_min, "Q not positive definite")
        except Exception as exc:  # NotSymmetric
            fail("Q-symmetric", 0.0, str(exc))
    elif isinstance(s, LorenzCone):
        try:
            inertia = linalg.inertia_of(s.Q, tol)
            n = s.dim
            if inertia != (n - 1, 0, 1):
                fail("inertia", float(inertia.n_zero),
                     f"inertia {tuple(inertia)} differs from ({n - 1}, 0, 1)")
        except Exception as exc:
            fail("Q-symmetric", 0.0, str(exc))
            return ValidationReport(ok=False, failures=failures)
        norm_u = float(np.linalg.norm(s.u_n))
        if abs(norm_u - 1.0) > 1e-6:
            fail("axis-unit", norm_u - 1.0, f"u_n has norm {norm_u:.6f}, expected 1")
        if s.u_n.size != s.dim:
            fail("axis-dim", 0.0, "u_n dimension differs from Q")
        else:
            quad = float(s.u_n @ s.Q @ s.u_n)
            if quad >= -tol:
                fail("axis-negative", quad, "u_n'Qu_n must be negative")
            # u_n must span the negative eigendirection: residual of Q u_n vs lam*u_n
            lam = quad / max(norm_u ** 2, 1e-300)
            resid = float(np.linalg.norm(s.Q @ s.u_n - lam * s.u_n))
            scale = max(1.0, linalg.spectral_norm(s.Q))
            if resid > 1e-6 * scale:
                fail("axis-eigenvector", resid,
                     "u_n is not the negative-eigenvalue eigenvector")
    elif isinstance(s, PolyhedralCone):
        if s.rays.shape[0] < 1 or s.facet_normals.shape[0] < 1:
            fail("descriptions", 0.0, "both rays and facet normals are required")
        else:
            ray_norms = np.linalg.norm(s.rays, axis=1)
            if ray_norms.min() <= tol:
                fail("rays-nonzero", float(ray_norms.min()), "zero ray")
            prods = s.facet_normals @ s.rays.T
            scale = max(1.0, float(np.abs(s.facet_normals).max()) * float(np.abs(s.rays).max()))
            worst = float(prods.max())
            if worst > tol * scale:
                fail("facet-consistency", worst,
                     f"a ray violates an outward facet normal by {worst:.3e}")
    else:
        fail("type", 0.0, f"unknown set type {type(s).__name__}")

    return ValidationReport(ok=not failures, failures=failures)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def membership_margins(s: SetSpec, points: np.ndarray) -> np.ndarray:
    """Vectorized signed membership margins for a batch of row-vector points.

    Positive means strictly inside, zero on the boundary. Cone margins are
    normalized so they are invariant under positive rescaling of the point.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[1] != dimension(s):
        raise DimensionMismatch(
            f"points of dimension {x.shape[1]} against a set of dimension {dimension(s)}")
    if isinstance(s, Ellipsoid):
        return 1.0 - np.einsum("ij,jk,ik->i", x, s.Q, x)
    if isinstance(s, HPolyhedron):
        return np.min(s.b[None, :] - x @ s.G.T, axis=1)
    if isinstance(s, PolyhedronPair):
        return membership_margins(s.h, x)
    if isinstance(s, LorenzCone):
        norm_q = max(linalg.spectral_norm(s.Q), 1e-300)
        qu = s.Q @ s.u_n
        norm_qu = max(float(np.linalg.norm(qu)), 1e-300)
        nx = np.linalg.norm(x, axis=1)
        quad = np.einsum("ij,jk,ik->i", x, s.Q, x)
        lin = x @ qu
        with np.errstate(divide="ignore", invalid="ignore"):
            m_quad = np.where(nx > 0, -quad / (norm_q * nx ** 2), 0.0)
            m_lin = np.where(nx > 0, -lin / (norm_qu * nx), 0.0)
        return np.minimum(m_quad, m_lin)
    if isinstance(s, PolyhedralCone):
        fn = s.facet_normals / np.linalg.norm(s.facet_normals, axis=1, keepdims=True)
        nx = np.linalg.norm(x, axis=1)
        prods = x @ fn.T
        with np.errstate(divide="ignore", invalid="ignore"):
            m = np.where(nx[:, None] > 0, -prods / nx[:, None], 0.0)
        return np.min(m, axis=1)
    if isinstance(s, VPolyhedron):
        raise UnsupportedSet(
            "membership for a bare generator description needs the paired "
            "halfspace form; wrap it in a PolyhedronPair")
    raise UnsupportedSet(f"unknown set type {type(s).__name__}")


def classify_point(s: SetSpec, x, tol: float = MEMBERSHIP_TOL) -> Location:
    """Classify a single point as Inside / Boundary / Outside with its margin."""
    v = linalg.as_vector(x)
    margin = float(membership_margins(s, v[None, :])[0])
    return _location(margin, tol)


def classify_points(s: SetSpec, points: np.ndarray,
                    tol: float = MEMBERSHIP_TOL) -> List[Location]:
    return [_location(float(m), tol) for m in membership_margins(s, points)]


# ---------------------------------------------------------------------------
# Cone bases
# ---------------------------------------------------------------------------

def cone_base(c: Union[LorenzCone, PolyhedralCone], tol: float = MEMBERSHIP_TOL,
              n_check: int = 1000, seed: int = 0) -> ConeBase:
    """A hyperplane a'x = 1 cutting the cone in a compact base.

    For a Lorenz cone a is -Q u_n rescaled to unit norm; for a polyhedral cone
    a is the normalized sum of the (normalized) ray directions. Boundedness is
    asserted by testing a'd > 0 on sampled cone directions.
    """
    if isinstance(c, LorenzCone):
        a = -(c.Q @ c.u_n)
        norm_a = float(np.linalg.norm(a))
        if norm_a <= tol:
            raise DegenerateCone("Q u_n vanishes; cone has no pointed axis")
        a = a / norm_a
        dirs = _cone_directions(c, n_check, seed)
    elif isinstance(c, PolyhedralCone):
        unit = c.rays / np.linalg.norm(c.rays, axis=1, keepdims=True)
        a = unit.sum(axis=0)
        norm_a = float(np.linalg.norm(a))
        if norm_a <= tol:
            raise DegenerateCone("ray directions cancel; cone is not pointed")
        a = a / norm_a
        dirs = unit
    else:
        raise UnsupportedSet(f"cone_base not defined for {type(c).__name__}")
    prods = dirs @ a
    if prods.size and prods.min() <= tol:
        raise DegenerateCone(
            f"base slice unbounded: a'd = {prods.min():.3e} for a cone direction")
    return ConeBase(a=a)


def _lorenz_frame(c: LorenzCone):
    """Orthonormal frame (positive eigvecs scaled, axis) for base parametrization."""
    spec = linalg.sym_eigen(c.Q)
    w, v = spec.eigenvalues, spec.eigenvectors
    pos = v[:, :-1]  # descending order: all but the last are the positive ones
    lams = w[:-1]
    lam_n = abs(float(w[-1]))
    axis = v[:, -1]
    if axis @ c.u_n < 0:
        axis = -axis
    # semi-axis lengths of the base slice in each positive eigendirection
    radii = np.sqrt(lam_n / lams)
    return pos, radii, axis


def _cone_directions(c: LorenzCone, n: int, seed: int) -> np.ndarray:
    pos, radii, axis = _lorenz_frame(c)
    rng = np.random.default_rng(seed)
    k = pos.shape[1]
    w = rng.standard_normal((n, k))
    norms = np.linalg.norm(w, axis=1, keepdims=True)
    w = np.where(norms > 0, w / norms, 0.0)
    r = rng.random(n) ** (1.0 / k)
    pts = (w * r[:, None] * radii[None, :]) @ pos.T + axis[None, :]
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

_MIN_ACCEPTANCE = 1e-3


def sample_points(s: SetSpec, n_interior: int, n_boundary: int, seed: int = 0,
                  tol: float = MEMBERSHIP_TOL,
                  cone_scale_range: Tuple[float, float] = (0.1, 10.0),
                  ) -> List[Tuple[np.ndarray, Location]]:
    """Deterministic (per seed) interior and boundary samples, tagged and verified.

    Cone points are drawn on the base and rescaled by random positive factors.
    Every returned point re-classifies to its tag; candidates that land in the
    tolerance band are rejected and redrawn.
    """
    rng = np.random.default_rng(seed)
    out: List[Tuple[np.ndarray, Location]] = []
    out.extend(_sample_tagged(s, n_interior, LocationKind.INSIDE, rng, tol,
                              cone_scale_range))
    out.extend(_sample_tagged(s, n_boundary, LocationKind.BOUNDARY, rng, tol,
                              cone_scale_range))
    return out


def sample_arrays(s: SetSpec, n_interior: int, n_boundary: int, seed: int = 0,
                  tol: float = MEMBERSHIP_TOL,
                  cone_scale_range: Tuple[float, float] = (0.1, 10.0),
                  ) -> Tuple[np.ndarray, np.ndarray]:
    """Array form of sample_points: (interior (m,n), boundary (k,n))."""
    rng = np.random.default_rng(seed)
    interior = _sample_batch(s, n_interior, LocationKind.INSIDE, rng, tol,
                             cone_scale_range)
    boundary = _sample_batch(s, n_boundary, LocationKind.BOUNDARY, rng, tol,
                             cone_scale_range)
    return interior, boundary


def _sample_tagged(s, n, kind, rng, tol, scale_range):
    pts = _sample_batch(s, n, kind, rng, tol, scale_range)
    locs = classify_points(s, pts, tol) if n else []
    return [(pts[i], locs[i]) for i in range(n)]


def _sample_batch(s, n, kind, rng, tol, scale_range) -> np.ndarray:
    if n == 0:
        return np.zeros((0, dimension(s)))
    if isinstance(s, Ellipsoid):
        return _sample_ellipsoid(s, n, kind, rng, tol)
    if isinstance(s, LorenzCone):
        return _sample_lorenz(s, n, kind, rng, tol, scale_range)
    if isinstance(s, (HPolyhedron, PolyhedronPair)):
        return _sample_polyhedron(s, n, kind, rng, tol)
    if isinstance(s, PolyhedralCone):
        return _sample_polyhedral_cone(s, n, kind, rng, tol, scale_range)
    if isinstance(s, VPolyhedron):
        raise UnsupportedSet(
            "sampling a bare generator description cannot be verified; "
            "wrap it in a PolyhedronPair")
    raise UnsupportedSet(f"unknown set type {type(s).__name__}")


def _accept(s, candidates: np.ndarray, kind: LocationKind, tol: float) -> np.ndarray:
    m = membership_margins(s, candidates)
    if kind == LocationKind.INSIDE:
        return candidates[m > tol]
    return candidates[np.abs(m) <= tol]


def _sample_ellipsoid(s: Ellipsoid, n, kind, rng, tol) -> np.ndarray:
    # x = L^-T y maps the unit ball/sphere onto the ellipsoid body/boundary
    L = np.linalg.cholesky(0.5 * (s.Q + s.Q.T))
    d = s.dim
    got: List[np.ndarray] = []
    draws = 0
    while sum(len(g) for g in got) < n:
        m = max(n, 64)
        y = rng.standard_normal((m, d))
        norms = np.linalg.norm(y, axis=1, keepdims=True)
        y = y / np.where(norms > 0, norms, 1.0)
        if kind == LocationKind.INSIDE:
            r = rng.random(m) ** (1.0 / d)
            y = y * r[:, None]
        x = np.linalg.solve(L.T, y.T).T
        ok = _accept(s, x, kind, tol)
        got.append(ok)
        draws += m
        if draws > 1000 * n and sum(len(g) for g in got) < _MIN_ACCEPTANCE * draws:
            raise SamplingExhausted("ellipsoid sampling acceptance below 0.1%")
    return np.vstack(got)[:n]


def _sample_lorenz(s: LorenzCone, n, kind, rng, tol, scale_range) -> np.ndarray:
    pos, radii, axis = _lorenz_frame(s)
    k = pos.shape[1]
    got: List[np.ndarray] = []
    draws = 0
    lo, hi = scale_range
    while sum(len(g) for g in got) < n:
        m = max(n, 64)
        w = rng.standard_normal((m, k))
        norms = np.linalg.norm(w, axis=1, keepdims=True)
        w = w / np.where(norms > 0, norms, 1.0)
        if kind == LocationKind.INSIDE:
            r = rng.random(m) ** (1.0 / k)
            w = w * r[:, None]
        base_pts = (w * radii[None, :]) @ pos.T + axis[None, :]
        t = np.exp(rng.uniform(np.log(lo), np.log(hi), size=m))
        x = base_pts * t[:, None]
        ok = _accept(s, x, kind, tol)
        got.append(ok)
        draws += m
        if draws > 1000 * n and sum(len(g) for g in got) < _MIN_ACCEPTANCE * draws:
            raise SamplingExhausted("cone sampling acceptance below 0.1%")
    return np.vstack(got)[:n]


def _bounding_box(h: HPolyhedron) -> Tuple[np.ndarray, np.ndarray]:
    lo = np.empty(h.dim)
    hi = np.empty(h.dim)
    for i in range(h.dim):
        c = np.zeros(h.dim)
        c[i] = 1.0
        res_lo = linprog(c, A_ub=h.G, b_ub=h.b, bounds=[(None, None)] * h.dim,
                         method="highs")
        res_hi = linprog(-c, A_ub=h.G, b_ub=h.b, bounds=[(None, None)] * h.dim,
                         method="highs")
        if not (res_lo.success and res_hi.success):
            raise SamplingExhausted(
                "polyhedron is unbounded or infeasible; cannot sample by rejection")
        lo[i], hi[i] = res_lo.fun, -res_hi.fun
    return lo, hi


def _chebyshev_center(h: HPolyhedron) -> np.ndarray:
    # max r s.t. Gx + r*||G_i|| <= b
    norms = np.linalg.norm(h.G, axis=1)
    c = np.zeros(h.dim + 1)
    c[-1] = -1.0
    A = np.hstack([h.G, norms[:, None]])
    res = linprog(c, A_ub=A, b_ub=h.b, bounds=[(None, None)] * h.dim + [(0, None)],
                  method="highs")
    if not res.success:
        raise SamplingExhausted("could not locate an interior point")
    return res.x[:-1]


def _sample_polyhedron(s, n, kind, rng, tol) -> np.ndarray:
    h = s.h if isinstance(s, PolyhedronPair) else s
    if kind == LocationKind.INSIDE:
        lo, hi = _bounding_box(h)
        span = np.where(hi > lo, hi - lo, 1.0)
        got: List[np.ndarray] = []
        draws = 0
        while sum(len(g) for g in got) < n:
            m = max(4 * n, 256)
            x = lo[None, :] + rng.random((m, h.dim)) * span[None, :]
            ok = _accept(s, x, kind, tol)
            got.append(ok)
            draws += m
            if draws > 1000 * max(n, 1) and sum(len(g) for g in got) < _MIN_ACCEPTANCE * draws:
                raise SamplingExhausted("rejection acceptance below 0.1%")
        return np.vstack(got)[:n]
    # boundary: shoot rays from an interior point to the nearest facet
    center = _chebyshev_center(h)
    pts = np.empty((n, h.dim))
    count = 0
    attempts = 0
    while count < n:
        d = rng.standard_normal(h.dim)
        nd = np.linalg.norm(d)
        attempts += 1
        if attempts > 1000 * n:
            raise SamplingExhausted("boundary ray-shooting failed to terminate")
        if nd == 0:
            continue
        d = d / nd
        denom = h.G @ d
        num = h.b - h.G @ center
        with np.errstate(divide="ignore"):
            t = np.where(denom > tol, num / denom, np.inf)
        t_hit = float(np.min(t))
        if not np.isfinite(t_hit):
            continue  # direction in the recession cone
        pts[count] = center + t_hit * d
        count += 1
    return pts


def _sample_polyhedral_cone(s: PolyhedralCone, n, kind, rng, tol, scale_range) -> np.ndarray:
    unit = s.rays / np.linalg.norm(s.rays, axis=1, keepdims=True)
    lo, hi = scale_range
    got: List[np.ndarray] = []
    draws = 0
    fn = s.facet_normals
    while sum(len(g) for g in got) < n:
        m = max(n, 64)
        if kind == LocationKind.INSIDE:
            theta = rng.dirichlet(np.ones(unit.shape[0]), size=m)
            x = theta @ unit
        else:
            # combos of rays lying on a randomly chosen facet stay on that facet
            x = np.empty((m, s.dim))
            for i in range(m):
                f = fn[rng.integers(fn.shape[0])]
                on = unit[np.abs(unit @ f) <= tol * max(1.0, float(np.linalg.norm(f)))]
                if on.shape[0] == 0:
                    x[i] = 0.0
                    continue
                theta = rng.dirichlet(np.ones(on.shape[0]))
                x[i] = theta @ on
        t = np.exp(rng.uniform(np.log(lo), np.log(hi), size=m))
        x = x * t[:, None]
        ok = _accept(s, x, kind, tol)
        got.append(ok)
        draws += m
        if draws > 1000 * max(n, 1) and sum(len(g) for g in got) < _MIN_ACCEPTANCE * draws:
            raise SamplingExhausted("cone sampling acceptance below 0.1%")
    return np.vstack(got)[:n]
