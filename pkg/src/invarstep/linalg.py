"""Dense linear-algebra substrate: spectra, definiteness, matrix exponential, shifted solves.

All operations are pure functions on immutable inputs. Matrices are plain
``numpy.ndarray`` values; validation happens at the boundary of each call.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .errors import NoConvergence, NotSymmetric, Overflow, SingularShift

DEFAULT_TOL = 1e-9


class Definiteness(Enum):
    PD = "positive-definite"
    PSD = "positive-semidefinite"
    NSD = "negative-semidefinite"
    ND = "negative-definite"
    INDEFINITE = "indefinite"


class Inertia(NamedTuple):
    n_plus: int
    n_zero: int
    n_minus: int


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues (with multiplicity) and, when available, eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None


@dataclass(frozen=True)
class DefinitenessVerdict:
    """Sign classification of a symmetric matrix.

    ``min_margin`` is the eigenvalue closest to the zero band, so borderline
    classifications can be audited by the caller.  The zero matrix is both PSD
    and NSD; ``kind`` reports PSD in that case, and the one-sided predicates
    answer queries for either side.
    """

    kind: Definiteness
    eig_min: float
    eig_max: float
    zero_band: float
    min_margin: float

    @property
    def is_pd(self) -> bool:
        return self.eig_min > self.zero_band

    @property
    def is_psd(self) -> bool:
        return self.eig_min >= -self.zero_band

    @property
    def is_nsd(self) -> bool:
        return self.eig_max <= self.zero_band

    @property
    def is_nd(self) -> bool:
        return self.eig_max < -self.zero_band


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float array."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be a 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_vector(x, name: str = "vector") -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size < 1 or not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be a finite 1-D array")
    return v


def _require_square(a: np.ndarray) -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"square matrix required, got shape {a.shape}")
    return a


def require_symmetric(s, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return the symmetrized matrix, raising NotSymmetric beyond tol."""
    m = _require_square(as_matrix(s))
    scale = max(1.0, float(np.abs(m).max()))
    skew = float(np.abs(m - m.T).max())
    if skew > tol * scale:
        raise NotSymmetric(f"asymmetry {skew:.3e} exceeds tol*scale {tol * scale:.3e}")
    return 0.5 * (m + m.T)


def sym_eigen(s, tol: float = DEFAULT_TOL) -> Spectrum:
    """Eigendecomposition of a symmetric matrix, eigenvalues in descending order."""
    m = require_symmetric(s, tol)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(w)[::-1]
    return Spectrum(eigenvalues=w[order], eigenvectors=v[:, order])


def general_spectrum(a) -> Spectrum:
    """Full complex spectrum of a square matrix, with eigenvectors."""
    m = _require_square(as_matrix(a))
    try:
        w, v = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return Spectrum(eigenvalues=w, eigenvectors=v)


def _zero_band(eigs: np.ndarray, tol: float) -> float:
    scale = max(1.0, float(np.abs(eigs).max()) if eigs.size else 1.0)
    return tol * scale


def inertia_of(s, tol: float = DEFAULT_TOL) -> Inertia:
    """Counts of positive/zero/negative eigenvalues under a relative zero band."""
    w = sym_eigen(s, tol).eigenvalues
    band = _zero_band(w, tol)
    n_plus = int(np.sum(w > band))
    n_minus = int(np.sum(w < -band))
    return Inertia(n_plus=n_plus, n_zero=w.size - n_plus - n_minus, n_minus=n_minus)


def definiteness(s, tol: float = DEFAULT_TOL) -> DefinitenessVerdict:
    """Classify a symmetric matrix by eigenvalue signs.

    Eigenvalues with ``|lam| <= tol * max(1, ||S||)`` count as zero.
    """
    w = sym_eigen(s, tol).eigenvalues
    band = _zero_band(w, tol)
    eig_min, eig_max = float(w.min()), float(w.max())
    n_plus = int(np.sum(w > band))
    n_minus = int(np.sum(w < -band))
    n_zero = w.size - n_plus - n_minus
    if n_plus > 0 and n_minus > 0:
        kind = Definiteness.INDEFINITE
    elif n_minus == 0:
        kind = Definiteness.PD if n_zero == 0 else Definiteness.PSD
    else:
        kind = Definiteness.ND if n_zero == 0 else Definiteness.NSD
    min_margin = float(w[np.argmin(np.abs(w))])
    return DefinitenessVerdict(kind=kind, eig_min=eig_min, eig_max=eig_max,
                               zero_band=band, min_margin=min_margin)


def spectral_norm(a) -> float:
    """Largest singular value."""
    m = as_matrix(a)
    if not m.any():
        return 0.0
    return float(np.linalg.norm(m, 2))


def mat_exp(a, t: float) -> np.ndarray:
    """exp(A*t) via scaling-and-squaring with a Pade core."""
    m = _require_square(as_matrix(a))
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    e = scipy.linalg.expm(m * t)
    if not np.all(np.isfinite(e)):
        raise Overflow(f"exp(A*t) overflows for t={t}")
    return e


def shifted_matrix(a: np.ndarray, dt: float) -> np.ndarray:
    """I - dt*A."""
    m = _require_square(as_matrix(a))
    return np.eye(m.shape[0]) - dt * m


def solve_shifted(a, dt: float, x, rcond: float = 1e-12) -> np.ndarray:
    """Solve (I - dt*A) y = x with a pivoted solve, guarding near-singular shifts."""
    m = shifted_matrix(a, dt)
    v = as_vector(x)
    if v.size != m.shape[0]:
        raise ValueError(f"dimension mismatch: A is {m.shape}, x has size {v.size}")
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= rcond * max(1.0, sv[0]):
        raise SingularShift(f"I - {dt}*A is singular within rcond={rcond:g}")
    return scipy.linalg.solve(m, v)


def inverse_shifted(a, dt: float, rcond: float = 1e-12) -> np.ndarray:
    """(I - dt*A)^-1, with the same singularity guard as solve_shifted."""
    m = shifted_matrix(a, dt)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= rcond * max(1.0, sv[0]):
        raise SingularShift(f"I - {dt}*A is singular within rcond={rcond:g}")
    return scipy.linalg.solve(m, np.eye(m.shape[0]))
