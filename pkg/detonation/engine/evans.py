"""
Evans function.

Subspaces decaying at the two ends are carried from the truncated domain to
x = 0 in polar coordinates: an orthonormal frame evolves by the projected
flow and the removed growth is accumulated in a separate radial log. Initial
frames vary analytically in lambda through a discretized Kato transport that
starts at the real point lambda = R. The Evans function is the determinant of
both frames at x = 0 times the exponential of the radial logs.
"""
import logging
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import orth

from ..exceptions import (
    DetonationError,
    IntegratorFailure,
    SplittingLost,
)
from ..models import (
    EvansContour,
    EvansSample,
    EvansSettings,
    HighFreqBound,
    ProfileSolution,
    StabilityVerdict,
    SubspaceFrame,
    VerdictKind,
)
from ..models.spectral import INTEGRATED, MINUS, PLUS
from .linalg import orthonormalize
from .profile import TravelingWaveSystem
from .spectral import coefficients, limiting_matrix
from .winding import build_contour, cauchy_winding, winding_number

logger = logging.getLogger(__name__)

MAX_KATO_DEPTH = 20
RANK_TOLERANCE = 1e-8


def coefficient_function(profile: ProfileSolution, lam: complex, form: str = INTEGRATED):
    """x -> coefficient matrix along the profile, through the Hermite interpolant."""
    interpolant = profile.mesh.interpolant
    system = TravelingWaveSystem(profile.params, profile.end_states)
    params, k = profile.params, profile.k_found

    def matrix(x):
        state = interpolant(x).reshape(4, 1)
        u_x = system.rhs(None, state)[0, 0]
        return coefficients(form, lam, state[0, 0], state[1, 0], u_x, params, k)

    return matrix


def side_projector(profile: ProfileSolution, which: str, lam: complex, form: str = INTEGRATED):
    """Projector onto the stable subspace at the plus end or the unstable subspace at the minus end."""
    splitting = limiting_matrix(
        form, which, lam, profile.params, profile.end_states, profile.k_found, strict=lam != 0,
    )
    if splitting.n_stable != 2:
        raise SplittingLost(f"{which} splitting at lambda={lam} is {splitting.n_stable}/{splitting.n_unstable}.")
    if which == PLUS:
        return splitting.stable_projector, splitting.stable_sum
    return splitting.unstable_projector, splitting.unstable_sum


def _check_rank(basis, lam):
    if np.linalg.svd(basis, compute_uv=False)[-1] < RANK_TOLERANCE * np.linalg.norm(basis):
        raise SplittingLost(f"Transported frame lost rank at lambda={lam}.")
    return basis


def kato_initialize(contour: EvansContour, which: str, profile: ProfileSolution,
                    max_jump: float = 0.5, form: str = INTEGRATED):
    """
    Analytic frames along the upper half of the contour (t <= 1/2).

    The first node lambda = R is real and gets a real orthonormal basis of the
    projector range; every later basis is P(lambda_next) times the previous
    one. Steps whose projectors differ by more than max_jump in norm are
    subdivided along the contour parameter.
    """
    ts = [float(t) for t in contour.t if t <= 0.5]
    lam0 = contour.point_at(ts[0])
    P0, _ = side_projector(profile, which, lam0, form)
    basis = orth(P0.real).astype(complex)
    frames = [SubspaceFrame(lam=lam0, basis=basis)]

    def transport(basis, P_from, t_from, t_to, depth):
        lam = contour.point_at(t_to)
        P_to, _ = side_projector(profile, which, lam, form)
        if np.linalg.norm(P_to - P_from, 2) > max_jump:
            if depth >= MAX_KATO_DEPTH:
                raise SplittingLost(f"Projector jump too large near lambda={lam} on the {which} side.")
            t_mid = 0.5 * (t_from + t_to)
            basis, P_mid = transport(basis, P_from, t_from, t_mid, depth + 1)
            return transport(basis, P_mid, t_mid, t_to, depth + 1)
        return _check_rank(P_to @ basis, lam), P_to

    P_prev = P0
    for t_prev, t_next in zip(ts[:-1], ts[1:]):
        basis, P_prev = transport(basis, P_prev, t_prev, t_next, 0)
        frames.append(SubspaceFrame(lam=contour.point_at(t_next), basis=basis))
    return ts, frames


def line_frame(profile: ProfileSolution, which: str, lam: complex, anchor: float,
               steps_per_radius: int = 64, form: str = INTEGRATED) -> SubspaceFrame:
    """Kato transport along the straight segment from the real anchor to lam."""
    P, _ = side_projector(profile, which, complex(anchor), form)
    basis = orth(P.real).astype(complex)
    count = max(8, int(math.ceil(abs(lam - anchor) * steps_per_radius / anchor)))
    for i in range(1, count + 1):
        point = anchor + (lam - anchor) * i / count
        P, _ = side_projector(profile, which, point, form)
        basis = _check_rank(P @ basis, point)
    return SubspaceFrame(lam=lam, basis=basis)


def integrate_side(frame: SubspaceFrame, profile: ProfileSolution, lam: complex, which: str,
                   settings: EvansSettings = None, matrix=None, shift: complex = 0j) -> SubspaceFrame:
    """
    Carry the frame from x = -M_minus (minus) or x = M_plus (plus) to x = 0.

    Omega' = (I - Omega Omega^H) B Omega and gamma' = tr(Omega^H B Omega) - shift,
    integrated adaptively on the complex state. matrix overrides the
    coefficient function x -> B(x).
    """
    settings = settings or EvansSettings()
    matrix = matrix or coefficient_function(profile, lam)
    start = -profile.M_minus if which == MINUS else profile.M_plus
    omega, radial = orthonormalize(frame.basis)
    radial += frame.radial_log

    def rhs(x, Y):
        Omega = Y[:8].reshape(4, 2)
        B_Omega = matrix(x) @ Omega
        inner = Omega.conj().T @ B_Omega
        d_omega = B_Omega - Omega @ inner
        return np.concatenate([d_omega.ravel(), [np.trace(inner) - shift]])

    y0 = np.concatenate([omega.ravel(), [0j]])
    solution = solve_ivp(rhs, (start, 0.0), y0, method=settings.method, rtol=settings.rtol, atol=settings.atol)
    if not solution.success:
        raise IntegratorFailure(f"{which} side at lambda={lam}: {solution.message}", lam=lam)
    end = solution.y[:, -1]
    omega, growth = orthonormalize(end[:8].reshape(4, 2))
    return SubspaceFrame(lam=lam, basis=omega, radial_log=radial + end[8] + growth)


def evans_eval(lam: complex, plus: SubspaceFrame, minus: SubspaceFrame, t: float = None) -> EvansSample:
    """E = det[plus | minus] * exp(radial logs); E_reduced = E / lambda."""
    E = complex(np.linalg.det(np.hstack([plus.basis, minus.basis])) * np.exp(plus.radial_log + minus.radial_log))
    reduced = E / lam if lam != 0 else complex("nan")
    return EvansSample(t=t, lam=complex(lam), E=E, E_reduced=reduced)


class EvansFunction:
    """
    Evans function of one profile, evaluated on a contour or at arbitrary points.

    Contour values on the lower half come from E(conj lambda) = conj E(lambda).
    Frames for inserted nodes are one projector step from the nearest node of
    the initial Kato pass, so values do not depend on evaluation order.
    """

    def __init__(self, profile: ProfileSolution, settings: EvansSettings = None,
                 contour: EvansContour = None, anchor: float = None):
        self.profile = profile
        self.settings = settings or EvansSettings()
        self.contour = contour
        self.anchor = anchor or (contour.radius if contour else 10.0)
        self._cache = {}
        self._kato = {}
        if contour is not None:
            for which in (PLUS, MINUS):
                self._kato[which] = kato_initialize(contour, which, profile, self.settings.kato_jump)

    def _initial_frame(self, which: str, t: float, lam: complex) -> SubspaceFrame:
        ts, frames = self._kato[which]
        index = int(np.argmin(np.abs(np.asarray(ts) - t)))
        if ts[index] == t:
            return frames[index]
        P, _ = side_projector(self.profile, which, lam)
        return SubspaceFrame(lam=lam, basis=_check_rank(P @ frames[index].basis, lam))

    def _evaluate(self, lam: complex, frames: dict, t: float = None) -> EvansSample:
        sides = {}
        for which in (PLUS, MINUS):
            shift = side_projector(self.profile, which, lam)[1] if self.settings.normalize else 0j
            sides[which] = integrate_side(frames[which], self.profile, lam, which, self.settings, shift=shift)
        return evans_eval(lam, sides[PLUS], sides[MINUS], t)

    def sample(self, t: float) -> EvansSample:
        """Evans sample at contour parameter t."""
        t = float(t)
        if t > 0.5:
            mirror = self.sample(1.0 - t)
            return EvansSample(t=t, lam=mirror.lam.conjugate(), E=mirror.E.conjugate(),
                               E_reduced=mirror.E_reduced.conjugate())
        if t not in self._cache:
            lam = self.contour.point_at(t)
            frames = {which: self._initial_frame(which, t, lam) for which in (PLUS, MINUS)}
            self._cache[t] = self._evaluate(lam, frames, t)
        return self._cache[t]

    def at(self, lam: complex) -> EvansSample:
        """Evans sample at an arbitrary point of the closed right half-plane."""
        lam = complex(lam)
        if lam.imag < 0:
            mirror = self.at(lam.conjugate())
            return EvansSample(t=None, lam=lam, E=mirror.E.conjugate(), E_reduced=mirror.E_reduced.conjugate())
        frames = {which: line_frame(self.profile, which, lam, self.anchor) for which in (PLUS, MINUS)}
        return self._evaluate(lam, frames)


def _verdict_reason(result, indent_ok, indent_ratio):
    if result.budget_exhausted:
        return "winding refinement budget exhausted"
    if not result.certified:
        return f"largest argument step {result.max_arg_step:.3f} rad not below the certification threshold"
    if not indent_ok:
        return f"E_reduced on the indentation is {indent_ratio:.3g} x its median magnitude"
    if result.winding < 0:
        return f"negative winding {result.winding}"
    return ""


def certify_stability(profile: ProfileSolution, bound: HighFreqBound, settings: EvansSettings = None,
                      n0: int = None) -> StabilityVerdict:
    """
    Count zeros of E_reduced inside the indented half-disk of radius margin*R.

    Stable when the certified winding is 0 and E_reduced stays away from zero
    on the indentation; Unstable(n) for a certified winding n > 0; otherwise
    Inconclusive. Integrator and splitting failures give Inconclusive.
    """
    settings = settings or EvansSettings()
    radius = settings.radius or settings.radius_margin * bound.R
    indent = settings.indent_factor * radius
    contour = build_contour(radius, indent, n0 or settings.n0, settings.cluster_ratio, settings.indent_nodes)

    factor = None
    if settings.synthetic_zero is not None:
        c = settings.synthetic_zero

        def factor(lam):
            return (lam - c) / (lam + 1.0)

    def count(sample):
        return sample.E_reduced * factor(sample.lam) if factor else sample.E_reduced

    try:
        evans = EvansFunction(profile, settings, contour)
        result = winding_number(
            evans.sample,
            contour,
            count=count,
            refine_threshold=settings.refine_threshold,
            certify_threshold=settings.certify_threshold,
            max_insertions=settings.max_insertions,
        )
    except DetonationError as exc:
        logger.warning("Evans computation inconclusive: %s", exc)
        return StabilityVerdict(
            kind=VerdictKind.INCONCLUSIVE, contour_radius=radius, indent_radius=indent, reason=str(exc),
        )

    magnitudes = np.array([abs(s.E_reduced) for s in result.samples])
    on_indent = np.array([contour.on_indent(s.lam) for s in result.samples])
    median = float(np.median(magnitudes))
    indent_ratio = float(np.min(magnitudes[on_indent]) / median) if median > 0 else 0.0
    indent_ok = indent_ratio > settings.indent_check

    if result.certified and indent_ok and result.winding == 0:
        kind, unstable = VerdictKind.STABLE, None
    elif result.certified and indent_ok and result.winding > 0:
        kind, unstable = VerdictKind.UNSTABLE, result.winding
    else:
        kind, unstable = VerdictKind.INCONCLUSIVE, None

    verdict = StabilityVerdict(
        kind=kind,
        winding=result.winding,
        unstable_count=unstable,
        certified=result.certified,
        max_arg_step=result.max_arg_step if math.isfinite(result.max_arg_step) else None,
        refinement_count=result.refinement_count,
        indent_ratio=indent_ratio if math.isfinite(indent_ratio) else None,
        contour_radius=radius,
        indent_radius=indent,
        reason=_verdict_reason(result, indent_ok, indent_ratio),
        samples=result.samples,
    )
    logger.info(
        "Evans verdict %s: winding %d, max step %.3f rad, %d insertions, R=%.6g",
        verdict, result.winding, result.max_arg_step, result.refinement_count, radius,
    )
    return verdict


def nested_windings(profile: ProfileSolution, bound: HighFreqBound, settings: EvansSettings = None,
                    factors=(1.0, 0.8, 0.6)):
    """Windings of E_reduced on nested contours of radius factor*margin*R, skipping radii below 3."""
    settings = settings or EvansSettings()
    outer = settings.radius or settings.radius_margin * bound.R
    results = []
    for factor in factors:
        radius = factor * outer
        if radius < 3.0:
            continue
        contour = build_contour(radius, settings.indent_factor * radius, settings.n0,
                                settings.cluster_ratio, settings.indent_nodes)
        evans = EvansFunction(profile, settings, contour)
        results.append((radius, winding_number(evans.sample, contour,
                                               refine_threshold=settings.refine_threshold,
                                               certify_threshold=settings.certify_threshold,
                                               max_insertions=settings.max_insertions)))
    return results


def cauchy_consistency(result) -> float:
    """Distance between the Cauchy-integral estimate and the integer winding."""
    lams = [s.lam for s in result.samples]
    values = [s.E_reduced for s in result.samples]
    return abs(cauchy_winding(lams, values) - result.winding)


def translational_zero(profile: ProfileSolution, settings: EvansSettings = None, anchor: float = None) -> EvansSample:
    """E(0) with tolerances tightened a thousandfold."""
    settings = settings or EvansSettings()
    tight = settings.replace(rtol=settings.rtol * 1e-3, atol=settings.atol * 1e-3)
    return EvansFunction(profile, tight, anchor=anchor).at(0.0)
