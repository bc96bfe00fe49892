"""
Contours and winding numbers.

The contour is the counterclockwise boundary of the right half-disk with the
origin cut out by a small semicircle. Winding numbers are summed argument
increments; a subinterval whose increment exceeds the refinement threshold
is bisected in the contour parameter until every increment is small. The
count is certified when all final increments stay below pi/2.
"""
import logging
import math

import numpy as np

from ..exceptions import RefinementBudgetExceeded
from ..models import EvansContour, EvansSample, WindingResult

logger = logging.getLogger(__name__)

MIN_PARAMETER_GAP = 1e-13


def build_contour(R: float, r0: float, n0: int = 120, ratio: float = 1.2, indent_nodes: int = 8) -> EvansContour:
    """
    Nodes spaced about 2*half_length/n0 by arc length, with a geometric
    cluster (growth factor ratio) on the imaginary axis next to the indentation.
    """
    if not R > r0 > 0:
        raise ValueError(f"Contour needs R > r0 > 0, got R={R}, r0={r0}.")
    if n0 < 8:
        raise ValueError("A contour needs at least 8 initial nodes.")

    arc = math.pi * R / 2
    axis = R - r0
    half = arc + axis + math.pi * r0 / 2
    spacing = 2.0 * half / n0

    s_arc = np.linspace(0.0, arc, max(int(math.ceil(arc / spacing)), 4) + 1)

    first = math.pi * r0 / (2 * indent_nodes)
    offsets = [0.0]
    step = first
    while offsets[-1] + step < axis:
        offsets.append(offsets[-1] + step)
        step = min(step * ratio, spacing)
    offsets.append(axis)
    # arc length measured from iR downward; offsets are measured upward from i*r0
    s_axis = arc + axis - np.array(offsets)[::-1]

    s_indent = arc + axis + np.linspace(0.0, math.pi * r0 / 2, indent_nodes + 1)

    s = np.unique(np.concatenate([s_arc, s_axis, s_indent]))
    s = s[np.concatenate([[True], np.diff(s) > 1e-12 * half])]
    upper = s / (2.0 * half)
    upper[-1] = 0.5
    t = np.concatenate([upper, 1.0 - upper[-2::-1]])
    contour = EvansContour(radius=R, indent_radius=r0, t=t, nodes=np.zeros(t.size, dtype=complex))
    nodes = np.array([contour.point_at(ti) for ti in t])
    nodes.flags.writeable = False
    t.flags.writeable = False
    return EvansContour(radius=R, indent_radius=r0, t=t, nodes=nodes)


def function_sampler(f, contour: EvansContour):
    """Wrap an analytic function so that winding_number can count its zeros."""

    def sample(t):
        lam = contour.point_at(t)
        value = complex(f(lam))
        return EvansSample(t=t, lam=lam, E=value, E_reduced=value)

    return sample


def argument_steps(values) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.angle(values[1:] / values[:-1])


def winding_number(sampler, contour: EvansContour, count=None, refine_threshold: float = 0.2,
                   certify_threshold: float = math.pi / 2, max_insertions: int = 4000,
                   strict: bool = False) -> WindingResult:
    """
    Winding number of count(sampler(t)) along the closed contour.

    sampler maps a contour parameter to an EvansSample; count picks the
    complex value to wind (E_reduced by default).
    """
    count = count or (lambda sample: sample.E_reduced)
    ts = [float(t) for t in contour.t]
    samples = [sampler(t) for t in ts]
    values = [count(s) for s in samples]
    insertions = 0
    exhausted = False

    while True:
        steps = argument_steps(values)
        bad = np.nonzero(~(np.abs(steps) <= refine_threshold))[0]
        if bad.size == 0:
            break
        if insertions + bad.size > max_insertions or any(ts[j + 1] - ts[j] < MIN_PARAMETER_GAP for j in bad):
            exhausted = True
            break
        for j in bad[::-1]:
            t_mid = 0.5 * (ts[j] + ts[j + 1])
            sample = sampler(t_mid)
            ts.insert(j + 1, t_mid)
            samples.insert(j + 1, sample)
            values.insert(j + 1, count(sample))
        insertions += bad.size
        logger.debug("Winding refinement: %d insertions so far", insertions)

    steps = argument_steps(values)
    finite = bool(np.all(np.isfinite(steps)))
    total = float(np.sum(steps)) if finite else float("nan")
    max_step = float(np.max(np.abs(steps))) if finite else float("inf")
    result = WindingResult(
        winding=int(round(total / (2 * math.pi))) if finite else 0,
        samples=tuple(samples),
        max_arg_step=max_step,
        refinement_count=insertions,
        certified=finite and not exhausted and max_step < certify_threshold,
        total_argument=total,
        budget_exhausted=exhausted,
    )
    if exhausted:
        logger.warning("Winding refinement budget exhausted after %d insertions", insertions)
        if strict:
            raise RefinementBudgetExceeded(result=result)
    return result


def cauchy_winding(lams, values) -> float:
    """
    Trapezoidal estimate of (1/2 pi i) * integral of f'/f over a closed node
    sequence, with f' from centred divided differences. A repeated closing
    node is dropped.
    """
    lams = np.asarray(lams, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if abs(lams[-1] - lams[0]) < 1e-14 * max(1.0, abs(lams[0])):
        lams, values = lams[:-1], values[:-1]
    forward_lam, backward_lam = np.roll(lams, -1), np.roll(lams, 1)
    derivative = (np.roll(values, -1) - np.roll(values, 1)) / (forward_lam - backward_lam)
    g = derivative / values
    integral = np.sum(0.5 * (g + np.roll(g, -1)) * (forward_lam - lams))
    return float((integral / (2j * math.pi)).real)
