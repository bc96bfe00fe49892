"""
Majda Model Algebra
Burgers flux, Arrhenius ignition, Rankine-Hugoniot burned state, CJ speed,
detonation classification and the scaling map.
"""
import logging
import math

import numpy as np

from ..exceptions import NotAWeakDetonation, OutsidePhysicalRange
from ..models import DetonationClass, EndStates, ModelParams, RawParams, ScalingInfo

logger = logging.getLogger(__name__)

CJ_TOLERANCE = 1e-12


def _as_output(value):
    return float(value) if np.ndim(value) == 0 else value


def flux(u):
    return 0.5 * u * u


def flux_prime(u):
    return u


def ignition(u, params: ModelParams):
    """exp(-E_A/(u - u_ig)) above the ignition threshold, 0 at or below it."""
    excess = np.asarray(u, dtype=float) - params.u_ig
    hot = excess > 0
    safe = np.where(hot, excess, 1.0)
    return _as_output(np.where(hot, np.exp(-params.E_A / safe), 0.0))


def ignition_prime(u, params: ModelParams):
    excess = np.asarray(u, dtype=float) - params.u_ig
    hot = excess > 0
    safe = np.where(hot, excess, 1.0)
    value = np.exp(-params.E_A / safe) * params.E_A / (safe * safe)
    return _as_output(np.where(hot, value, 0.0))


def burned_state(q: float, u_plus: float) -> float:
    """Weak-branch root of the Rankine-Hugoniot relation for s = 1."""
    disc = 1.0 - 2.0 * (q + u_plus * (1.0 - u_plus / 2.0))
    if disc < 0:
        raise OutsidePhysicalRange(
            f"(q={q}, u_plus={u_plus}) is outside the physical range q < 0.5*(1 - u_plus)^2."
        )
    return 1.0 - math.sqrt(disc)


def rh_residual(u_minus: float, u_plus: float, q: float) -> float:
    return 0.5 * (u_plus**2 - u_minus**2) - (u_plus - u_minus) - q


def cj_speed(q: float, u_plus: float) -> float:
    base = u_plus + q
    return base + math.sqrt(max(base * base - u_plus * u_plus, 0.0))


def classify(s: float, a_minus: float, a_plus: float) -> DetonationClass:
    if abs(a_minus - s) <= CJ_TOLERANCE and s > a_plus:
        return DetonationClass.CHAPMAN_JOUGUET
    if s > a_minus and s > a_plus:
        return DetonationClass.WEAK
    if a_minus > s > a_plus:
        return DetonationClass.STRONG
    return DetonationClass.NOT_A_DETONATION


def scale(raw: RawParams) -> ModelParams:
    """
    Rescale space and time so that s = B = 1.

    State-like quantities (u_plus, u_ig, E_A) are divided by s, hence the
    scaled ignition function satisfies phi_scaled(u) = phi(s*u).
    """
    if raw.s <= 0 or raw.B <= 0:
        raise OutsidePhysicalRange("Speed and viscosity must be positive.")
    s, B = raw.s, raw.B
    return ModelParams(
        q=raw.q / s,
        D=raw.D / B,
        E_A=raw.E_A / s,
        u_ig=raw.u_ig / s,
        u_plus=raw.u_plus / s,
        scaling=ScalingInfo(s=s, B=B, k=raw.k * B / (s * s)),
    )


def end_states(params: ModelParams) -> EndStates:
    u_minus = burned_state(params.q, params.u_plus)
    return EndStates(
        u_minus=u_minus,
        u_plus=params.u_plus,
        a_minus=flux_prime(u_minus),
        a_plus=flux_prime(params.u_plus),
    )


def check_admissible(params: ModelParams) -> EndStates:
    """Validate the scaled-parameter invariants and return the end states."""
    if params.s != 1.0 or params.B != 1.0:
        raise OutsidePhysicalRange("Parameters must be scaled (s = B = 1).")
    if params.D <= 0:
        raise OutsidePhysicalRange(f"Diffusion ratio D must be positive, got {params.D}.")
    if params.E_A <= 0:
        raise OutsidePhysicalRange(f"Activation energy E_A must be positive, got {params.E_A}.")
    if not 0 <= params.u_plus < 1:
        raise OutsidePhysicalRange(f"Unburned state u_plus={params.u_plus} must lie in [0, 1).")
    if params.q < 0 or params.q >= 0.5 * (params.u_plus - 1.0) ** 2:
        raise OutsidePhysicalRange(
            f"q={params.q} is outside the physical range [0, {0.5 * (params.u_plus - 1.0) ** 2:.6g})."
        )
    ends = end_states(params)
    if ends.u_minus <= ends.u_plus:
        raise OutsidePhysicalRange("Degenerate heat release: burned and unburned states coincide.")
    if not ends.u_plus < params.u_ig < ends.u_minus:
        raise OutsidePhysicalRange(
            f"Ignition threshold u_ig={params.u_ig} must lie between "
            f"u_plus={ends.u_plus} and u_minus={ends.u_minus:.6g}."
        )
    kind = classify(params.s, ends.a_minus, ends.a_plus)
    if kind != DetonationClass.WEAK:
        raise NotAWeakDetonation(f"End states classify as {kind.value}.")
    return ends
