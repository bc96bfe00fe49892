"""
Boundary Value Problem Types
Problem description, mesh and solver settings for the collocation solver.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from ..exceptions import InvalidMesh

MIN_MESH_NODES = 10


def _frozen(array, dtype=float) -> np.ndarray:
    out = np.array(array, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class BvpProblem:
    """
    Two-point problem Y' = rhs(x, Y), bc(Y(a), Y(b)) = 0.

    Callables are vectorized the way scipy expects them: rhs maps (m,), (n, m)
    to (n, m), rhs_jacobian to (n, n, m) and bc_jacobians returns the pair of
    (n, n) blocks for Y(a) and Y(b). Either Jacobian may be None, in which
    case finite differences are used.
    """

    dimension: int
    rhs: Callable
    bc: Callable
    rhs_jacobian: Optional[Callable] = None
    bc_jacobians: Optional[Callable] = None


@dataclass(frozen=True, eq=False)
class Mesh:
    """Nodal values (and derivatives) of a solution on strictly increasing nodes."""

    nodes: np.ndarray
    values: np.ndarray
    derivatives: Optional[np.ndarray] = None
    residuals: Optional[np.ndarray] = None

    def __post_init__(self):
        nodes = _frozen(self.nodes)
        values = _frozen(np.atleast_2d(self.values))
        if nodes.ndim != 1 or nodes.size < MIN_MESH_NODES:
            raise InvalidMesh(f"Mesh needs at least {MIN_MESH_NODES} nodes, got {nodes.size}.")
        if np.any(np.diff(nodes) <= 0):
            raise InvalidMesh("Mesh nodes must be strictly increasing.")
        if values.shape[1] != nodes.size:
            raise InvalidMesh(f"Values have {values.shape[1]} columns for {nodes.size} nodes.")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        if self.derivatives is not None:
            object.__setattr__(self, "derivatives", _frozen(self.derivatives))
        if self.residuals is not None:
            object.__setattr__(self, "residuals", _frozen(self.residuals))

    @property
    def dimension(self) -> int:
        return self.values.shape[0]

    @property
    def span(self) -> tuple:
        return float(self.nodes[0]), float(self.nodes[-1])

    def __len__(self):
        return self.nodes.size

    @cached_property
    def interpolant(self):
        """Piecewise cubic through the nodes; Hermite when derivatives are stored."""
        if self.derivatives is None:
            return CubicSpline(self.nodes, self.values, axis=1)
        return CubicHermiteSpline(self.nodes, self.values, self.derivatives, axis=1)


@dataclass(frozen=True)
class SolverSettings:
    """
    Collocation solver settings.

    newton_damping holds one factor per restart: a restart starts that
    fraction of the way from the bisected initial mesh to the failed iterate.
    newton_max_iterations caps the solver iterations summed over restarts.
    """

    residual_tolerance: float = 1e-8
    newton_max_iterations: int = 50
    newton_damping: tuple = (0.5, 0.25, 0.125, 0.0625)
    max_mesh_points: int = 20000
    restarts: int = 2

    def __post_init__(self):
        if self.residual_tolerance <= 0 or self.max_mesh_points <= 0 or self.newton_max_iterations <= 0:
            raise ValueError("Solver settings must be positive.")
        if any(not 0 < f <= 1 for f in self.newton_damping) or self.restarts < 0:
            raise ValueError("Solver settings must be positive.")
