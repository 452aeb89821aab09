"""Built-in demonstration problems used by the CLI and the test suite."""

from __future__ import annotations

from typing import Callable, Dict, Tuple

import numpy as np

from .sets import Ellipsoid, LorenzCone, SetSpec
from .systems import LinearSystem


def rotation_disk() -> Tuple[LinearSystem, SetSpec]:
    """Pure rotation with the unit disk: circles are trajectories.

    The explicit step expands every boundary point; the implicit step
    contracts for every positive steplength.
    """
    a = np.array([[0.0, -1.0], [1.0, 0.0]])
    return LinearSystem(a), Ellipsoid(np.eye(2))


def spiral_cone() -> Tuple[LinearSystem, SetSpec]:
    """Expanding spiral inside the 3-D ice-cream cone x1^2 + x2^2 <= x3^2, x3 >= 0."""
    a = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    q = np.diag([1.0, 1.0, -1.0])
    return LinearSystem(a), LorenzCone(Q=q, u_n=np.array([0.0, 0.0, 1.0]))


def saddle_wedge() -> Tuple[LinearSystem, SetSpec]:
    """Unstable node on the planar wedge x1^2 <= x2^2, x2 >= 0."""
    a = np.array([[3.0, -1.0], [-1.0, 3.0]])
    q = np.diag([1.0, -1.0])
    return LinearSystem(a), LorenzCone(Q=q, u_n=np.array([0.0, 1.0]))


BUILTIN: Dict[str, Callable[[], Tuple[LinearSystem, SetSpec]]] = {
    "example1": rotation_disk,
    "example2": spiral_cone,
    "example3": saddle_wedge,
}
