"""
Two-point boundary value solver.

Thin layer over scipy.integrate.solve_bvp: fourth-order Lobatto IIIA
collocation, damped Newton with backtracking and residual-driven mesh
refinement. Failures are mapped onto the engine's exceptions and a failed
solve is retried on a bisected initial mesh, damped toward the failed iterate.
"""
import logging

import numpy as np
from scipy.integrate import solve_bvp

from ..exceptions import MeshBudgetExceeded, NewtonDiverged, OutOfRange
from ..models import BvpProblem, Mesh, SolverSettings

logger = logging.getLogger(__name__)

STATUS_MESSAGES = {
    1: "maximum number of mesh nodes exceeded",
    2: "singular Jacobian in Newton iteration",
    3: "boundary conditions not satisfied to tolerance",
}


def uniform_mesh(x_left: float, x_right: float, values, count: int = 11) -> Mesh:
    """Mesh with count equally spaced nodes and values broadcast from a callable or array."""
    nodes = np.linspace(x_left, x_right, count)
    data = values(nodes) if callable(values) else np.broadcast_to(
        np.asarray(values, dtype=float).reshape(-1, 1), (np.size(values), count)
    )
    return Mesh(nodes=nodes, values=data)


def bisect(mesh: Mesh) -> Mesh:
    """Insert every subinterval midpoint, values taken from the mesh interpolant."""
    mids = 0.5 * (mesh.nodes[:-1] + mesh.nodes[1:])
    nodes = np.empty(2 * mesh.nodes.size - 1)
    nodes[0::2] = mesh.nodes
    nodes[1::2] = mids
    values = np.empty((mesh.dimension, nodes.size))
    values[:, 0::2] = mesh.values
    values[:, 1::2] = mesh.interpolant(mids)
    return Mesh(nodes=nodes, values=values)


def _run(problem: BvpProblem, mesh: Mesh, settings: SolverSettings):
    tol = settings.residual_tolerance
    return solve_bvp(
        problem.rhs,
        problem.bc,
        np.array(mesh.nodes),
        np.array(mesh.values),
        fun_jac=problem.rhs_jacobian,
        bc_jac=problem.bc_jacobians,
        tol=tol,
        bc_tol=tol,
        max_nodes=settings.max_mesh_points,
        verbose=0,
    )


def _restart_mesh(mesh: Mesh, result, factor: float) -> Mesh:
    """Bisected start mesh moved a fraction factor toward the failed iterate."""
    finer = bisect(mesh)
    reached = result.sol(finer.nodes)
    if not np.all(np.isfinite(reached)):
        return finer
    values = finer.values + factor * (reached - finer.values)
    return Mesh(nodes=finer.nodes, values=values)


def solve(problem: BvpProblem, initial: Mesh, settings: SolverSettings = None) -> Mesh:
    """
    Solve the boundary value problem starting from the initial mesh.

    A failed attempt is retried on a bisected mesh whose values step toward
    the failed iterate by the next newton_damping factor. Retries stop when
    the damping factors or restarts run out, or when the iterations spent so
    far reach newton_max_iterations.

    Raises MeshBudgetExceeded when refinement hits max_mesh_points and
    NewtonDiverged when the Newton iteration fails on every restart.
    """
    settings = settings or SolverSettings()
    if initial.dimension != problem.dimension:
        raise ValueError(f"Initial mesh has dimension {initial.dimension}, problem {problem.dimension}.")

    mesh = initial
    result = None
    spent = 0
    factors = settings.newton_damping[:settings.restarts]
    for attempt in range(len(factors) + 1):
        result = _run(problem, mesh, settings)
        spent += int(result.niter)
        if result.status == 0 and np.all(np.isfinite(result.y)):
            logger.debug(
                "BVP converged: %d nodes, max residual %.3e (attempt %d)",
                result.x.size, float(np.max(result.rms_residuals)), attempt + 1,
            )
            return Mesh(
                nodes=result.x,
                values=result.y,
                derivatives=result.yp,
                residuals=result.rms_residuals,
            )
        logger.warning(
            "BVP attempt %d failed: %s", attempt + 1,
            STATUS_MESSAGES.get(result.status, "non-finite solution"),
        )
        if attempt == len(factors) or spent >= settings.newton_max_iterations:
            break
        if 2 * mesh.nodes.size - 1 > settings.max_mesh_points:
            break
        mesh = _restart_mesh(mesh, result, factors[attempt])

    if result.status == 1:
        raise MeshBudgetExceeded(status=result.status)
    raise NewtonDiverged(
        f"Newton iteration failed: {STATUS_MESSAGES.get(result.status, 'non-finite solution')}",
        status=result.status,
    )


def evaluate(solution: Mesh, x):
    """
    Interpolate the solution at x (scalar or array).
    Values at nodes are returned exactly as stored.
    """
    x_arr = np.asarray(x, dtype=float)
    lo, hi = solution.span
    if np.any(np.isnan(x_arr)) or np.any(x_arr < lo) or np.any(x_arr > hi):
        raise OutOfRange(f"x={x} outside [{lo}, {hi}].")

    out = np.array(solution.interpolant(x_arr))
    idx = np.clip(np.searchsorted(solution.nodes, x_arr), 0, solution.nodes.size - 1)
    hit = solution.nodes[idx] == x_arr
    if x_arr.ndim == 0:
        return solution.values[:, int(idx)].copy() if hit else out
    out[:, hit] = solution.values[:, idx[hit]]
    return out
