"""
Spectral Types
High-frequency bound, contour geometry, subspace frames, Evans samples,
winding results and stability verdicts.
"""
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

INTEGRATED = "integrated"
UNINTEGRATED = "unintegrated"
MINUS = "minus"
PLUS = "plus"


@dataclass(frozen=True)
class HighFreqBound:
    L: float
    M: float
    R: float
    crude: bool = False


@dataclass(frozen=True, eq=False)
class LimitingSplitting:
    """Limiting coefficient matrix with eigenvalues sorted by real part."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    n_stable: int
    n_unstable: int
    stable_projector: np.ndarray
    unstable_projector: np.ndarray

    @property
    def stable_sum(self) -> complex:
        return complex(np.sum(self.eigenvalues[: self.n_stable]))

    @property
    def unstable_sum(self) -> complex:
        return complex(np.sum(self.eigenvalues[self.n_stable:]))


@dataclass(frozen=True, eq=False)
class EvansContour:
    """
    Counterclockwise boundary of the right half-disk of radius R with the
    origin cut out by a right half-plane semicircle of radius indent_radius.

    Nodes are parametrized by normalized arc length t in [0, 1]; t = 0 and
    t = 1 are both lambda = R, t = 1/2 is lambda = indent_radius and the
    lower half mirrors the upper one, point_at(1 - t) = conj(point_at(t)).
    """

    radius: float
    indent_radius: float
    t: np.ndarray
    nodes: np.ndarray

    @property
    def half_length(self) -> float:
        return math.pi * self.radius / 2 + (self.radius - self.indent_radius) + math.pi * self.indent_radius / 2

    def point_at(self, t: float) -> complex:
        if t > 0.5:
            return self.point_at(1.0 - t).conjugate()
        R, r0 = self.radius, self.indent_radius
        s = 2.0 * t * self.half_length
        arc = math.pi * R / 2
        if s <= arc:
            return complex(R * math.cos(s / R), R * math.sin(s / R))
        s -= arc
        if s <= R - r0:
            return complex(0.0, R - s)
        theta = math.pi / 2 - (s - (R - r0)) / r0
        return complex(r0 * math.cos(max(theta, 0.0)), r0 * math.sin(max(theta, 0.0)))

    def on_indent(self, lam: complex) -> bool:
        return abs(lam) <= self.indent_radius * (1 + 1e-9)


@dataclass(frozen=True, eq=False)
class SubspaceFrame:
    lam: complex
    basis: np.ndarray
    radial_log: complex = 0j


@dataclass(frozen=True)
class EvansSample:
    t: float
    lam: complex
    E: complex
    E_reduced: complex


@dataclass(frozen=True, eq=False)
class WindingResult:
    winding: int
    samples: tuple
    max_arg_step: float
    refinement_count: int
    certified: bool
    total_argument: float = 0.0
    budget_exhausted: bool = False

    @property
    def nodes(self) -> np.ndarray:
        return np.array([s.lam for s in self.samples])


class VerdictKind(str, Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class StabilityVerdict:
    """
    Outcome of certify_stability.

    samples carries the contour data for export and is left out of equality.
    """

    kind: VerdictKind
    winding: Optional[int] = None
    unstable_count: Optional[int] = None
    certified: bool = False
    max_arg_step: Optional[float] = None
    refinement_count: int = 0
    indent_ratio: Optional[float] = None
    contour_radius: Optional[float] = None
    indent_radius: Optional[float] = None
    reason: str = ""
    samples: tuple = field(default=(), compare=False, repr=False)

    @property
    def exit_code(self) -> int:
        return {VerdictKind.STABLE: 0, VerdictKind.UNSTABLE: 3, VerdictKind.INCONCLUSIVE: 4}[self.kind]

    def __str__(self):
        if self.kind == VerdictKind.UNSTABLE:
            return f"Unstable({self.unstable_count})"
        return self.kind.value


@dataclass(frozen=True)
class EvansSettings:
    """
    Tolerances and contour knobs of the Evans pipeline.

    synthetic_zero multiplies the counted function by (lambda - c)/(lambda + 1);
    it exists to check that an injected zero is detected.
    """

    rtol: float = 1e-6
    atol: float = 1e-8
    method: str = "RK45"
    normalize: bool = True
    radius_margin: float = 1.1
    indent_factor: float = 1e-3
    radius: Optional[float] = None
    n0: int = 120
    cluster_ratio: float = 1.2
    indent_nodes: int = 8
    refine_threshold: float = 0.2
    certify_threshold: float = math.pi / 2
    max_insertions: int = 4000
    indent_check: float = 0.1
    kato_jump: float = 0.5
    synthetic_zero: Optional[float] = None

    def __post_init__(self):
        if self.radius is not None and self.radius <= 0:
            raise ValueError("Contour radius must be positive.")
        if not 0 < self.indent_factor < 1:
            raise ValueError("Indent factor must lie in (0, 1).")
        if self.radius_margin < 1:
            raise ValueError("Radius margin must be at least 1.")

    def replace(self, **changes) -> "EvansSettings":
        return replace(self, **changes)
