"""Linear systems, exact flow, discretization step maps, trajectory simulation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np

from . import linalg, sets
from .errors import SingularShift


class Method(Enum):
    FORWARD_EULER = "forward-euler"
    BACKWARD_EULER = "backward-euler"


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """x' = A x."""

    A: np.ndarray

    def __post_init__(self):
        a = linalg.as_matrix(self.A, "A")
        if a.shape[0] != a.shape[1]:
            raise ValueError("A must be square")
        object.__setattr__(self, "A", a)

    @property
    def dim(self) -> int:
        return self.A.shape[0]


def step_matrix(sys: LinearSystem, m: Method, dt: float) -> np.ndarray:
    """The one-step matrix: I + dt*A, or (I - dt*A)^-1 for the implicit method."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    if m == Method.FORWARD_EULER:
        return np.eye(sys.dim) + dt * sys.A
    return linalg.inverse_shifted(sys.A, dt)


def forward_step(sys: LinearSystem, dt: float, x) -> np.ndarray:
    v = linalg.as_vector(x)
    return v + dt * (sys.A @ v)


def backward_step(sys: LinearSystem, dt: float, x) -> np.ndarray:
    if dt == 0:
        return linalg.as_vector(x).copy()
    return linalg.solve_shifted(sys.A, dt, x)


def exact_flow(sys: LinearSystem, t: float, x) -> np.ndarray:
    """exp(A t) x, for cross-checking discrete steps against the true flow."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return linalg.mat_exp(sys.A, t) @ linalg.as_vector(x)


class StepMap:
    """A discretization map (dt, x) -> x'.

    Declared attributes (``linear``, ``homogeneous_degree``, ``lipschitz_bound``)
    are trusted by exact computations and empirically spot-checked by the
    verification oracle, which reports contradictions instead of failing.
    """

    linear: bool = False
    homogeneous_degree: Optional[float] = None
    lipschitz_bound: Optional[float] = None

    def __call__(self, dt: float, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def matrix(self, dt: float) -> Optional[np.ndarray]:
        """One-step matrix when the map is linear, else None."""
        return None

    def apply_batch(self, dt: float, points: np.ndarray) -> np.ndarray:
        m = self.matrix(dt)
        if m is not None:
            return np.atleast_2d(points) @ m.T
        return np.vstack([self(dt, p) for p in np.atleast_2d(points)])


class EulerMap(StepMap):
    """Forward or backward Euler applied to a linear system."""

    linear = True
    homogeneous_degree = 1.0

    def __init__(self, sys: LinearSystem, method: Method):
        self.sys = sys
        self.method = method

    def __call__(self, dt: float, x: np.ndarray) -> np.ndarray:
        if self.method == Method.FORWARD_EULER:
            return forward_step(self.sys, dt, x)
        return backward_step(self.sys, dt, x)

    def matrix(self, dt: float) -> np.ndarray:
        return step_matrix(self.sys, self.method, dt)


class MatrixFamilyMap(StepMap):
    """Linear map given by an arbitrary dt -> matrix family."""

    linear = True
    homogeneous_degree = 1.0

    def __init__(self, family: Callable[[float], np.ndarray]):
        self._family = family

    def __call__(self, dt: float, x: np.ndarray) -> np.ndarray:
        return self.matrix(dt) @ linalg.as_vector(x)

    def matrix(self, dt: float) -> np.ndarray:
        return linalg.as_matrix(self._family(dt), "D(dt)")


class CustomStepMap(StepMap):
    """Wrap a user-supplied (dt, x) -> x' callable with declared attributes."""

    def __init__(self, fn: Callable[[float, np.ndarray], np.ndarray],
                 linear: bool = False,
                 homogeneous_degree: Optional[float] = None,
                 lipschitz_bound: Optional[float] = None):
        self._fn = fn
        self.linear = linear
        self.homogeneous_degree = homogeneous_degree
        self.lipschitz_bound = lipschitz_bound

    def __call__(self, dt: float, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._fn(dt, np.asarray(x, dtype=float)), dtype=float)


@dataclass
class SimulationResult:
    states: np.ndarray                      # (steps+1, n)
    first_exit: Optional[int]               # smallest k with x_k outside the guard
    margins: Optional[np.ndarray] = None    # guard margins along the trajectory


def simulate(step: StepMap, dt: float, x0, steps: int,
             guard: Optional[sets.SetSpec] = None,
             tol: float = sets.MEMBERSHIP_TOL) -> SimulationResult:
    """Iterate the map, recording guard margins and the first exit index."""
    x = linalg.as_vector(x0)
    states = np.empty((steps + 1, x.size))
    states[0] = x
    for k in range(steps):
        x = step(dt, x)
        states[k + 1] = x
    margins = None
    first_exit = None
    if guard is not None:
        margins = sets.membership_margins(guard, states)
        outside = np.where(margins < -tol)[0]
        if outside.size:
            first_exit = int(outside[0])
    return SimulationResult(states=states, first_exit=first_exit, margins=margins)
