"""
Weak-detonation profiles.

The traveling-wave system is inflated with the reaction rate k (k' = 0) so
the weak detonation becomes a transversal connection. The connection on
[-M_minus, M_plus] is imposed with projective boundary conditions and a phase
condition, folded onto [0, M_plus] by domain doubling and handed to the
collocation solver. The truncated domain grows until the boundary residuals
are below tolerance; parameter continuation reaches extreme parameters.
"""
import logging
import math
from threading import RLock

import numpy as np
from cachetools import LRUCache, cached
from scipy.optimize import least_squares

from ..exceptions import (
    BvpFailure,
    ContinuationStalled,
    DegenerateSplitting,
    NoConnection,
    OutsidePhysicalRange,
    ValidationFailed,
)
from ..models import (
    BvpProblem,
    ContinuationSchedule,
    EndLinearization,
    EndStates,
    Mesh,
    ModelParams,
    ProfileDiagnostics,
    ProfileOptions,
    ProfileSolution,
    TailSolution,
)
from ..models.profile import INFLATE_RATE
from ..models.spectral import MINUS, PLUS
from . import bvp
from .linalg import invariant_subspace, orthonormal_complement
from .model import check_admissible, end_states as compute_end_states, flux, ignition, ignition_prime

logger = logging.getLogger(__name__)

SPLITTING_TOLERANCE = 1e-10
MONOTONE_NOISE = 1e-10
TAIL_TOLERANCE = 1e-4
TAME_Q = 0.499

# Seeds for the orthonormal complements: (u, y) at the burned end, z at the unburned end.
COMPLEMENT_SEEDS = {MINUS: (0, 2), PLUS: (1,)}
EXPECTED_SIGNS = {MINUS: (1, 2, 1), PLUS: (0, 2, 2)}  # (positive, negative, zero)


class TravelingWaveSystem:
    """
    First-order traveling-wave system for fixed parameters with one inflated unknown p.

    With rate inflation p = k; with heat inflation p = q and k is fixed, the
    burned state then follows q through the Rankine-Hugoniot relation.
    """

    def __init__(self, params: ModelParams, ends: EndStates, options: ProfileOptions = None):
        options = options or ProfileOptions()
        self.params = params
        self.ends = ends
        self.inflation = options.inflation
        self.fixed_rate = options.fixed_rate

    def coefficients(self, p):
        """Return (k, q, u_minus) for the inflated unknown p."""
        if self.inflation == INFLATE_RATE:
            return p, self.params.q, self.ends.u_minus
        u_plus = self.params.u_plus
        with np.errstate(invalid="ignore"):
            u_minus = 1.0 - np.sqrt(1.0 - 2.0 * (p + u_plus * (1.0 - u_plus / 2.0)))
        return self.fixed_rate, p, u_minus

    def rhs(self, x, Y):
        u, z, y, p = Y
        k, q, u_minus = self.coefficients(p)
        D = self.params.D
        phi = ignition(u, self.params)
        du = flux(u) - flux(u_minus) - (u - u_minus) - q * (z + D * y)
        dy = (-y + k * phi * z) / D
        return np.vstack([du, y, dy, np.zeros_like(u)])

    def jacobian(self, x, Y):
        u, z, y, p = Y
        k, q, u_minus = self.coefficients(p)
        D = self.params.D
        phi = ignition(u, self.params)
        dphi = ignition_prime(u, self.params)
        J = np.zeros((4, 4, u.size))
        J[0, 0] = u - 1.0
        J[0, 1] = -q
        J[0, 2] = -q * D
        J[1, 2] = 1.0
        J[2, 0] = k * dphi * z / D
        J[2, 1] = k * phi / D
        J[2, 2] = -1.0 / D
        if self.inflation == INFLATE_RATE:
            J[2, 3] = phi * z / D
        else:
            # d/dq of -f(u_minus) + u_minus equals 1 on the weak branch
            J[0, 3] = 1.0 - (z + D * y)
        return J

    def end_point(self, which: str, p: float) -> np.ndarray:
        _, _, u_minus = self.coefficients(p)
        if which == MINUS:
            return np.array([u_minus, self.ends.z_minus, 0.0, p])
        return np.array([self.params.u_plus, self.ends.z_plus, 0.0, p])

    def end_tangent(self, which: str, p: float) -> np.ndarray:
        """Tangent of the equilibrium family U_end(p)."""
        if which == MINUS and self.inflation != INFLATE_RATE:
            _, _, u_minus = self.coefficients(p)
            return np.array([1.0 / (1.0 - u_minus), 0.0, 0.0, 1.0])
        return np.array([0.0, 0.0, 0.0, 1.0])

    def linearization(self, which: str, p: float) -> EndLinearization:
        return _linearization(self.params, self.ends, self.inflation, self.fixed_rate, which, float(p))

    def projective_residual(self, which: str, U_end) -> np.ndarray:
        U_end = np.asarray(U_end, dtype=float)
        lin = self.linearization(which, U_end[3])
        return lin.complement.T @ (U_end - self.end_point(which, U_end[3]))


@cached(cache=LRUCache(maxsize=4096), lock=RLock())
def _linearization(params, ends, inflation, fixed_rate, which, p) -> EndLinearization:
    system = TravelingWaveSystem(params, ends, ProfileOptions(inflation=inflation, fixed_rate=fixed_rate))
    point = system.end_point(which, p)
    if not np.all(np.isfinite(point)):
        raise DegenerateSplitting(f"End state undefined at p={p}.")
    matrix = system.jacobian(None, point.reshape(4, 1))[:, :, 0]
    eigenvalues, eigenvectors = np.linalg.eig(matrix)
    order = np.argsort(eigenvalues.real)
    eigenvalues, eigenvectors = eigenvalues[order], eigenvectors[:, order]

    real = eigenvalues.real
    signs = (
        int(np.sum(real > SPLITTING_TOLERANCE)),
        int(np.sum(real < -SPLITTING_TOLERANCE)),
        int(np.sum(np.abs(real) <= SPLITTING_TOLERANCE)),
    )
    if signs != EXPECTED_SIGNS[which]:
        raise DegenerateSplitting(
            f"{which} end at p={p:.6g}: eigenvalue signs (+, -, 0) = {signs}, expected {EXPECTED_SIGNS[which]}."
        )

    if which == MINUS:
        hyperbolic = invariant_subspace(matrix, lambda w: w.real > SPLITTING_TOLERANCE, real=True)
    else:
        hyperbolic = invariant_subspace(matrix, lambda w: w.real < -SPLITTING_TOLERANCE, real=True)
    tangent = system.end_tangent(which, p)
    tangent = tangent - hyperbolic @ (hyperbolic.T @ tangent)
    subspace = np.column_stack([hyperbolic, tangent / np.linalg.norm(tangent)])

    seeds = np.eye(4)[:, list(COMPLEMENT_SEEDS[which])]
    complement = orthonormal_complement(subspace, seeds)
    for array in (matrix, eigenvalues, eigenvectors, subspace, complement):
        array.flags.writeable = False
    return EndLinearization(
        which=which,
        matrix=matrix,
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        subspace=subspace,
        complement=complement,
    )


def vector_field(U, params: ModelParams, ends: EndStates) -> np.ndarray:
    """(u', z', y', k') of the rate-inflated system at the state U = (u, z, y, k)."""
    column = np.asarray(U, dtype=float).reshape(4, 1)
    return TravelingWaveSystem(params, ends).rhs(None, column)[:, 0]


def end_linearization(which: str, params: ModelParams, ends: EndStates, k: float) -> EndLinearization:
    return _linearization(params, ends, INFLATE_RATE, None, which, float(k))


def projective_conditions(U_end, which: str, params: ModelParams, ends: EndStates) -> np.ndarray:
    """Pi^T (U_end - U_end_state); Pi spans the complement of the end's invariant subspace."""
    return TravelingWaveSystem(params, ends).projective_residual(which, U_end)


def double(system: TravelingWaveSystem, M_minus: float, M_plus: float, phase_value: float) -> BvpProblem:
    """
    Fold the problem on [-M_minus, M_plus] onto [0, M_plus].

    U(x) = profile(x) and V(x) = profile(-ratio*x) with ratio = M_minus/M_plus.
    Boundary conditions: one phase condition, four matching conditions at
    x = 0, two projective conditions at the burned end, one at the unburned end.
    """
    ratio = M_minus / M_plus

    def rhs(x, Y):
        return np.vstack([system.rhs(x, Y[:4]), -ratio * system.rhs(x, Y[4:])])

    def rhs_jacobian(x, Y):
        J = np.zeros((8, 8, x.size))
        J[:4, :4] = system.jacobian(x, Y[:4])
        J[4:, 4:] = -ratio * system.jacobian(x, Y[4:])
        return J

    def bc(ya, yb):
        return np.concatenate([
            [ya[0] - phase_value],
            ya[:4] - ya[4:],
            system.projective_residual(MINUS, yb[4:]),
            system.projective_residual(PLUS, yb[:4]),
        ])

    return BvpProblem(dimension=8, rhs=rhs, bc=bc, rhs_jacobian=rhs_jacobian)


def initial_guess(params: ModelParams, ends: EndStates, M_minus: float, M_plus: float,
                  k_guess: float = 1.0, count: int = 401) -> Mesh:
    """Logistic front through the midpoint of (u_plus, u_minus) at xi = 0."""
    xi = np.linspace(-M_minus, M_plus, count)
    D = params.D
    with np.errstate(over="ignore"):
        u = ends.u_plus + (ends.u_minus - ends.u_plus) / (1.0 + np.exp(xi))
        z = 1.0 / (1.0 + np.exp(-xi / D))
    y = z * (1.0 - z) / D
    k = np.full_like(xi, k_guess)
    return Mesh(nodes=xi, values=np.vstack([u, z, y, k]))


def _fold(guess: Mesh, M_minus: float, M_plus: float, count: int, p_override=None) -> Mesh:
    ratio = M_minus / M_plus
    x = np.linspace(0.0, M_plus, count)
    xi = guess.nodes
    extra = np.concatenate([xi[(xi > 0) & (xi < M_plus)], -xi[(xi < 0) & (xi > -M_minus)] / ratio])
    x = np.unique(np.concatenate([x, extra]))
    x = x[np.concatenate([[True], np.diff(x) > 1e-9 * M_plus])]
    values = np.empty((8, x.size))
    for row in range(4):
        values[row] = np.interp(x, xi, guess.values[row])
        values[4 + row] = np.interp(-ratio * x, xi, guess.values[row])
    if p_override is not None:
        values[3] = values[7] = p_override
    return Mesh(nodes=x, values=values)


def _unfold(system: TravelingWaveSystem, doubled: Mesh, M_minus: float, M_plus: float):
    ratio = M_minus / M_plus
    x = doubled.nodes
    xi = np.concatenate([-ratio * x[:0:-1], x])
    values = np.hstack([doubled.values[4:, :0:-1], doubled.values[:4]])
    jump = float(np.max(np.abs(doubled.values[:4, 0] - doubled.values[4:, 0])))
    return Mesh(nodes=xi, values=values, derivatives=system.rhs(xi, values)), jump


def _solve_on_domain(system, guess, M_minus, M_plus, phase_value, options, p_override=None):
    folded = _fold(guess, M_minus, M_plus, options.initial_nodes, p_override)
    problem = double(system, M_minus, M_plus, phase_value)
    try:
        doubled = bvp.solve(problem, folded, options.solver)
    except (BvpFailure, DegenerateSplitting, OutsidePhysicalRange, FloatingPointError) as exc:
        raise NoConnection(f"Solver failed on [-{M_minus:.4g}, {M_plus:.4g}]: {exc}") from exc
    return _unfold(system, doubled, M_minus, M_plus)


def solve_profile(params: ModelParams, guess: ProfileSolution = None, options: ProfileOptions = None,
                  p_guess: float = None) -> ProfileSolution:
    """
    Compute the weak-detonation profile for params.

    guess may be a neighbouring converged profile; p_guess overrides its
    inflated unknown (continuation predictor). The domain grows by
    options.domain_growth on each side whose boundary residual is too large.
    """
    options = options or ProfileOptions()
    ends = check_admissible(params)
    system = TravelingWaveSystem(params, ends, options)
    phase_value = options.phase_value
    if phase_value is None:
        phase_value = 0.5 * (ends.u_plus + ends.u_minus)
    elif not ends.u_plus < phase_value < ends.u_minus:
        raise ValueError(f"Phase value {phase_value} must lie in ({ends.u_plus}, {ends.u_minus}).")

    if guess is None:
        M_minus, M_plus = options.initial_domain
        start = options.k_guess if options.inflation == INFLATE_RATE else params.q
        mesh = initial_guess(params, ends, M_minus, M_plus, start)
    else:
        M_minus, M_plus = guess.M_minus, guess.M_plus
        mesh = guess.mesh

    for attempt in range(options.max_domain_growths + 1):
        full, jump = _solve_on_domain(system, mesh, M_minus, M_plus, phase_value, options, p_guess)
        p = float(full.values[3, 0])
        residuals = (
            float(np.linalg.norm(full.values[:3, 0] - system.end_point(MINUS, p)[:3])),
            float(np.linalg.norm(full.values[:3, -1] - system.end_point(PLUS, p)[:3])),
        )
        logger.debug(
            "Domain [-%.4g, %.4g]: p=%.6g, boundary residuals %.2e / %.2e",
            M_minus, M_plus, p, residuals[0], residuals[1],
        )
        if max(residuals) < options.boundary_tolerance:
            return _build_solution(params, options, full, p, residuals, M_minus, M_plus, phase_value, jump)
        if residuals[0] >= options.boundary_tolerance:
            M_minus *= options.domain_growth
        if residuals[1] >= options.boundary_tolerance:
            M_plus *= options.domain_growth
        mesh, p_guess = full, None

    raise NoConnection(
        f"Boundary residuals {residuals[0]:.2e} / {residuals[1]:.2e} above "
        f"{options.boundary_tolerance} after {options.max_domain_growths} domain growths."
    )


def _build_solution(params, options, full, p, residuals, M_minus, M_plus, phase_value, jump):
    if options.inflation == INFLATE_RATE:
        k = p
    else:
        k = options.fixed_rate
        params = params.replace(q=p)
    if not k > 0:
        raise NoConnection(f"Solver converged to a non-positive reaction rate k={k:.6g}.")
    ends = compute_end_states(params)
    solution = ProfileSolution(
        mesh=full,
        k_found=k,
        params=params,
        end_states=ends,
        boundary_residuals=residuals,
        M_minus=M_minus,
        M_plus=M_plus,
        tolerance=options.solver.residual_tolerance,
        inflation=options.inflation,
        phase_value=phase_value,
        matching_jump=jump,
    )
    logger.info(
        "Profile converged: q=%.6g D=%.6g E_A=%.6g k=%.6g on [-%.4g, %.4g] with %d nodes",
        params.q, params.D, params.E_A, k, M_minus, M_plus, len(full),
    )
    return solution


def _interpolate(start: ModelParams, target: ModelParams, t: float) -> ModelParams:
    if t >= 1.0:
        return target

    def lerp(a, b):
        return a + t * (b - a)

    return target.replace(
        q=lerp(start.q, target.q),
        D=lerp(start.D, target.D),
        E_A=lerp(start.E_A, target.E_A),
        u_ig=lerp(start.u_ig, target.u_ig),
        u_plus=lerp(start.u_plus, target.u_plus),
    )


def continue_family(start: ProfileSolution, target: ModelParams, schedule: ContinuationSchedule = None,
                    options: ProfileOptions = None) -> ProfileSolution:
    """
    Natural-parameter continuation along the straight line from start.params to target.

    Each step starts from the previous profile; log k is extrapolated from the
    last two steps. The step halves on failure and raises ContinuationStalled
    once it drops below schedule.min_step.
    """
    schedule = schedule or ContinuationSchedule()
    options = options or ProfileOptions(inflation=start.inflation)
    if start.params.key == target.key:
        return start

    nominal = 1.0 / max(schedule.steps, 1)
    step = nominal
    t = 0.0
    current = start
    history = [(0.0, math.log(start.k_found))]
    while t < 1.0:
        step = min(step, 1.0 - t)
        t_next = 1.0 if 1.0 - (t + step) < 1e-12 else t + step
        trial = _interpolate(start.params, target, t_next)
        p_guess = None
        if options.inflation == INFLATE_RATE and len(history) >= 2:
            (t0, k0), (t1, k1) = history[-2:]
            p_guess = math.exp(k1 + (k1 - k0) * (t_next - t1) / (t1 - t0))
        try:
            current = solve_profile(trial, guess=current, options=options, p_guess=p_guess)
        except (NoConnection, OutsidePhysicalRange) as exc:
            step /= 2.0
            logger.debug("Continuation step to t=%.4f failed (%s); step now %.4g", t_next, exc, step)
            if step < schedule.min_step:
                raise ContinuationStalled(
                    f"Continuation stalled at t={t:.4f} toward q={target.q}, D={target.D}, E_A={target.E_A}",
                    furthest=current.params,
                    solution=current,
                ) from exc
            continue
        t = t_next
        history.append((t, math.log(current.k_found)))
        step = min(step * schedule.growth, nominal)
        logger.debug("Continuation reached t=%.4f, k=%.6g", t, current.k_found)
    return current


def tame_anchor(params: ModelParams) -> ModelParams:
    q_max = 0.5 * (1.0 - params.u_plus) ** 2
    return params.replace(q=min(TAME_Q, 0.998 * q_max), D=1.0, E_A=1.0)


def solve_with_continuation(params: ModelParams, options: ProfileOptions = None,
                            schedule: ContinuationSchedule = None) -> ProfileSolution:
    """Direct solve, falling back to continuation from the tame anchor."""
    try:
        return solve_profile(params, options=options)
    except NoConnection:
        anchor = tame_anchor(params)
        if anchor.key == params.key:
            raise
        logger.info("Direct solve failed for %s; continuing from the tame anchor", params.as_dict())
    start = solve_profile(anchor, options=options)
    return continue_family(start, params, schedule, options)


def tail_beta(params: ModelParams, ends: EndStates) -> float:
    return math.sqrt(ends.u_minus**2 - 2.0 * ends.u_minus + 2.0 * params.q + 1.0)


def explicit_tail(xi, tail: TailSolution, params: ModelParams):
    """Closed-form (u, z, y) where the ignition function vanishes."""
    xi = np.asarray(xi, dtype=float)
    decay = np.exp(-(xi - tail.xi_ref) / params.D)
    u = 1.0 + tail.beta * np.tanh(-tail.beta * xi / 2.0 + tail.C_u)
    z = 1.0 - tail.C_z * params.D * decay
    y = tail.C_z * decay
    return u, z, y


def fit_tail(solution: ProfileSolution):
    """Least-squares fit of the explicit tail on the sub-mesh where u < u_ig; returns (tail, sup error)."""
    params = solution.params
    mask = solution.u < params.u_ig
    if np.count_nonzero(mask) < 3:
        return None, None
    xi, u, z, y = solution.xi[mask], solution.u[mask], solution.z[mask], solution.y[mask]
    beta = tail_beta(params, solution.end_states)
    xi_ref = float(xi[0])
    ratio = np.clip((u[0] - 1.0) / beta, -1.0 + 1e-15, 1.0 - 1e-15)
    x0 = np.array([math.atanh(ratio) + beta * xi_ref / 2.0, y[0]])

    def residual(c):
        tu, tz, ty = explicit_tail(xi, TailSolution(beta, c[0], c[1], xi_ref), params)
        return np.concatenate([tu - u, tz - z, ty - y])

    fit = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    tail = TailSolution(beta=beta, C_u=float(fit.x[0]), C_z=float(fit.x[1]), xi_ref=xi_ref)
    return tail, float(np.max(np.abs(residual(fit.x))))


def _decay_slope(distance_from_end, distance):
    keep = distance > 1e-13
    if np.count_nonzero(keep) < 3:
        return None
    return float(np.polyfit(distance_from_end[keep], np.log(distance[keep]), 1)[0])


def validate_profile(solution: ProfileSolution, raise_on_failure: bool = True,
                     boundary_tolerance: float = 1e-3) -> ProfileDiagnostics:
    """
    Check monotonicity, the burned-state bound, boundary residuals, exponential
    decay on the outer quarter of each side and the explicit tail fit.
    """
    ends = solution.end_states
    xi, u = solution.xi, solution.u
    states = solution.mesh.values[:3]
    failures = []

    monotone = bool(np.all(np.diff(u) < MONOTONE_NOISE))
    if not monotone:
        failures.append("monotonicity")
    below_burned = bool(np.all(u <= ends.u_minus + MONOTONE_NOISE))
    if not below_burned:
        failures.append("burned_bound")
    boundary_ok = max(solution.boundary_residuals) < boundary_tolerance
    if not boundary_ok:
        failures.append("boundary_residual")

    slopes = []
    for end, far, state in (
        (xi <= -0.75 * solution.M_minus, -xi, np.array([ends.u_minus, ends.z_minus, 0.0])),
        (xi >= 0.75 * solution.M_plus, xi, np.array([ends.u_plus, ends.z_plus, 0.0])),
    ):
        distance = np.linalg.norm(states[:, end] - state[:, None], axis=0)
        slopes.append(_decay_slope(far[end], distance))
    if any(s is not None and s >= 0 for s in slopes):
        failures.append("decay")

    tail, tail_error = fit_tail(solution)
    if tail_error is not None and tail_error >= TAIL_TOLERANCE:
        failures.append("tail_fit")

    diagnostics = ProfileDiagnostics(
        monotone=monotone,
        below_burned=below_burned,
        boundary_ok=boundary_ok,
        decay_slopes=tuple(slopes),
        tail_error=tail_error,
        tail=tail,
        failures=failures,
    )
    if failures:
        logger.warning("Profile validation failed: %s", ", ".join(failures))
        if raise_on_failure:
            raise ValidationFailed(failures[0])
    return diagnostics


def rebuild_profile(params: ModelParams, xi, u, z, y, k: float, meta: dict) -> ProfileSolution:
    """Reconstruct a ProfileSolution from stored columns."""
    ends = compute_end_states(params)
    values = np.vstack([u, z, y, np.full_like(np.asarray(u, dtype=float), k)])
    system = TravelingWaveSystem(params, ends)
    mesh = Mesh(nodes=xi, values=values, derivatives=system.rhs(None, values))
    return ProfileSolution(
        mesh=mesh,
        k_found=k,
        params=params,
        end_states=ends,
        boundary_residuals=tuple(meta.get("boundary_residuals", (0.0, 0.0))),
        M_minus=meta.get("M_minus", -float(xi[0])),
        M_plus=meta.get("M_plus", float(xi[-1])),
        tolerance=meta.get("tolerance", 1e-8),
        inflation=meta.get("inflation", INFLATE_RATE),
        phase_value=meta.get("phase_value"),
    )


__all__ = [
    "TravelingWaveSystem",
    "vector_field",
    "end_linearization",
    "projective_conditions",
    "double",
    "initial_guess",
    "solve_profile",
    "continue_family",
    "solve_with_continuation",
    "tame_anchor",
    "explicit_tail",
    "fit_tail",
    "validate_profile",
    "rebuild_profile",
]
