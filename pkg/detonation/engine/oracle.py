"""
Finite-difference spectrum of the linearized operator.

Independent check on the Evans verdicts: the operator acting on (u, z)
perturbations,

    L(u, z) = ( u'' - (ubar - 1) u' - (ubar_x - q k phi'(ubar) zbar) u + q k phi(ubar) z,
                D z'' + z' - k phi'(ubar) zbar u - k phi(ubar) z ),

is discretized with second-order centred differences on a uniform grid over
the profile span with homogeneous Dirichlet conditions at both ends.
"""
import logging

import numpy as np
from scipy import sparse
from scipy.linalg import eigvals
from scipy.sparse.linalg import eigs

from ..models import ModelParams, ProfileSolution
from .bvp import evaluate
from .model import ignition, ignition_prime
from .profile import TravelingWaveSystem

logger = logging.getLogger(__name__)


def fd_operator(xi, ubar, zbar, ubar_x, params: ModelParams, k: float):
    """Sparse matrix of L on the interior nodes of the uniform grid xi; unknowns ordered (u..., z...)."""
    xi = np.asarray(xi, dtype=float)
    h = xi[1] - xi[0]
    inner = slice(1, -1)
    u, z, u_x = (np.asarray(a, dtype=float)[inner] for a in (ubar, zbar, ubar_x))
    n = u.size
    q, D = params.q, params.D
    phi = ignition(u, params)
    reaction = k * ignition_prime(u, params) * z

    second = sparse.diags([np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)], [-1, 0, 1]) / h**2
    first = sparse.diags([-np.ones(n - 1), np.ones(n - 1)], [-1, 1]) / (2.0 * h)

    uu = second - sparse.diags(u - 1.0) @ first - sparse.diags(u_x - q * reaction)
    uz = sparse.diags(q * k * phi)
    zu = sparse.diags(-reaction)
    zz = D * second + first - sparse.diags(k * phi)
    return sparse.bmat([[uu, uz], [zu, zz]], format="csc")


def _discretize(profile: ProfileSolution, grid_points: int):
    if grid_points < 3:
        raise ValueError("The finite-difference grid needs at least 3 points.")
    xi = np.linspace(*profile.mesh.span, grid_points)
    values = evaluate(profile.mesh, xi)
    system = TravelingWaveSystem(profile.params, profile.end_states)
    u_x = system.rhs(None, values)[0]
    return fd_operator(xi, values[0], values[1], u_x, profile.params, profile.k_found)


def fd_oracle(profile: ProfileSolution, grid_points: int) -> np.ndarray:
    """All eigenvalues of the discretized operator, sorted by descending real part."""
    matrix = _discretize(profile, grid_points)
    spectrum = eigvals(matrix.toarray())
    spectrum = spectrum[np.argsort(-spectrum.real)]
    logger.debug("Finite-difference spectrum on %d points: max Re %.3e", grid_points, spectrum[0].real)
    return spectrum


def fd_oracle_near(profile: ProfileSolution, grid_points: int, count: int = 6, sigma: complex = 0.0) -> np.ndarray:
    """The count eigenvalues closest to sigma by shift-invert, sorted by distance to sigma."""
    matrix = _discretize(profile, grid_points)
    spectrum = eigs(matrix, k=count, sigma=sigma, which="LM", return_eigenvectors=False)
    return spectrum[np.argsort(np.abs(spectrum - sigma))]


def oracle_agrees(spectrum, origin_tolerance: float = 1e-3) -> bool:
    """Exactly one eigenvalue near the origin and none in Re lambda > origin_tolerance."""
    spectrum = np.asarray(spectrum)
    near_origin = int(np.count_nonzero(np.abs(spectrum) < origin_tolerance))
    unstable = int(np.count_nonzero(spectrum.real > origin_tolerance))
    return near_origin == 1 and unstable == 0
