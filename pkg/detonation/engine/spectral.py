"""
Linearized eigenvalue problem along a profile.

Coefficient matrices in unintegrated coordinates W = (u, z, u', z') and in
integrated coordinates X = (u, w, z, z') with w' = u + q z, their limits at
the end states, and the high-frequency bound on unstable eigenvalues.
"""
import logging
import math

import numpy as np

from ..exceptions import SplittingDegenerate
from ..models import EndStates, HighFreqBound, LimitingSplitting, ModelParams, ProfileSolution
from ..models.spectral import INTEGRATED, MINUS, UNINTEGRATED
from .bvp import evaluate
from .linalg import spectral_projector
from .model import ignition, ignition_prime
from .profile import TravelingWaveSystem

logger = logging.getLogger(__name__)

SPLITTING_TOLERANCE = 1e-10
CRUDE_L = 4.0 * math.exp(-2.0)
CRUDE_M = 6.0 * math.exp(-2.0)
MIN_RADIUS = 3.0


def coefficients(form: str, lam: complex, u, z, u_x, params: ModelParams, k: float) -> np.ndarray:
    """Coefficient matrix for profile values (u, z, u_x); arrays give a stack of shape (m, 4, 4)."""
    u, z, u_x = (np.asarray(a, dtype=float) for a in (u, z, u_x))
    q, D = params.q, params.D
    phi = ignition(u, params)
    reaction = k * ignition_prime(u, params) * z
    B = np.zeros(u.shape + (4, 4), dtype=complex)
    if form == INTEGRATED:
        B[..., 0, 0] = u - 1.0
        B[..., 0, 1] = lam
        B[..., 0, 2] = -q
        B[..., 0, 3] = -q * D
        B[..., 1, 0] = 1.0
        B[..., 1, 2] = q
        B[..., 2, 3] = 1.0
        B[..., 3, 0] = reaction / D
        B[..., 3, 2] = (lam + k * phi) / D
        B[..., 3, 3] = -1.0 / D
    elif form == UNINTEGRATED:
        B[..., 0, 2] = 1.0
        B[..., 1, 3] = 1.0
        B[..., 2, 0] = lam + u_x - q * reaction
        B[..., 2, 1] = -q * k * phi
        B[..., 2, 2] = u - 1.0
        B[..., 3, 0] = reaction / D
        B[..., 3, 1] = (lam + k * phi) / D
        B[..., 3, 3] = -1.0 / D
    else:
        raise ValueError(f"Unknown coefficient form {form!r}.")
    return B


def coefficient_matrix(form: str, x: float, lam: complex, profile: ProfileSolution) -> np.ndarray:
    """Coefficient matrix at abscissa x; raises OutOfRange outside the profile span."""
    state = evaluate(profile.mesh, x)
    u_x = profile_slope(profile, state)
    return coefficients(form, lam, state[0], state[1], u_x, profile.params, profile.k_found)


def profile_slope(profile: ProfileSolution, state) -> float:
    """u' from the traveling-wave vector field at an interpolated state."""
    system = TravelingWaveSystem(profile.params, profile.end_states)
    return float(system.rhs(None, np.asarray(state, dtype=float).reshape(4, 1))[0, 0])


def limiting_matrix(form: str, which: str, lam: complex, params: ModelParams, ends: EndStates,
                    k: float, strict: bool = True) -> LimitingSplitting:
    """
    Limit of the coefficient matrix at the burned (minus) or unburned (plus) end.

    With strict=True an eigenvalue with |Re mu| < 1e-10 raises
    SplittingDegenerate. With strict=False the two eigenvalues with smallest
    real part are taken as stable, which continues the Re lambda > 0 splitting
    to lambda = 0.
    """
    u_end, z_end = (ends.u_minus, ends.z_minus) if which == MINUS else (ends.u_plus, ends.z_plus)
    matrix = coefficients(form, lam, u_end, z_end, 0.0, params, k)
    eigenvalues = np.linalg.eigvals(matrix)
    eigenvalues = eigenvalues[np.lexsort((eigenvalues.imag, eigenvalues.real))]
    real = eigenvalues.real
    if strict:
        if np.any(np.abs(real) < SPLITTING_TOLERANCE):
            raise SplittingDegenerate(f"{which} limit at lambda={lam}: eigenvalue on the imaginary axis.")
        n_stable = int(np.sum(real < 0))
        threshold = 0.0
    else:
        n_stable = 2
        threshold = 0.5 * (real[1] + real[2])
        if real[2] - real[1] < SPLITTING_TOLERANCE:
            raise SplittingDegenerate(f"{which} limit at lambda={lam}: no gap between eigenvalue groups.")

    def stable(w):
        return w.real < threshold

    return LimitingSplitting(
        matrix=matrix,
        eigenvalues=eigenvalues,
        n_stable=n_stable,
        n_unstable=4 - n_stable,
        stable_projector=spectral_projector(matrix, stable),
        unstable_projector=spectral_projector(matrix, lambda w: not stable(w)),
    )


def compute_L_M(profile: ProfileSolution, refine: int = 1):
    """
    Suprema of phi'(u) z and (1 + q) phi'(u) z - phi(u) over the mesh nodes
    and refine interpolated points inside every subinterval.
    """
    xi = profile.xi
    fractions = np.arange(1, refine + 1) / (refine + 1)
    inner = (xi[:-1, None] + np.diff(xi)[:, None] * fractions[None, :]).ravel()
    sample = np.concatenate([xi, inner])
    values = evaluate(profile.mesh, np.sort(sample))
    u, z = values[0], values[1]
    params = profile.params
    weighted = ignition_prime(u, params) * z
    L = max(float(np.max(weighted)), 0.0)
    M = max(float(np.max((1.0 + params.q) * weighted - ignition(u, params))), 0.0)
    return L, M


def hf_bound(L: float, M: float, params: ModelParams, k: float) -> float:
    """Radius outside of which no eigenvalue with Re lambda >= 0 can lie."""
    if L < 0 or M < 0:
        raise ValueError("L and M must be nonnegative.")
    D = params.D
    return max(MIN_RADIUS, 1.0 / (4.0 * D) + (0.25 + abs(D - 1.0) ** 2 / 2.0) * k * L + k * M)


def crude_bounds(params: ModelParams):
    """Profile-free bounds L <= 4 e^-2 / E_A and M <= 6 e^-2 / E_A."""
    return CRUDE_L / params.E_A, CRUDE_M / params.E_A


def high_frequency_bound(params: ModelParams, k: float, profile: ProfileSolution = None) -> HighFreqBound:
    if profile is None:
        L, M = crude_bounds(params)
        crude = True
    else:
        L, M = compute_L_M(profile)
        crude = False
    R = hf_bound(L, M, params, k)
    logger.debug("High-frequency bound: L=%.6g M=%.6g R=%.6g (crude=%s)", L, M, R, crude)
    return HighFreqBound(L=L, M=M, R=R, crude=crude)
