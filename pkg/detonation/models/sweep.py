"""
Sweep Types
Parameter grids, per-point run records and the quadrant success table.
"""
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .params import ModelParams
from .profile import ContinuationSchedule, ProfileOptions
from .spectral import EvansSettings, HighFreqBound, StabilityVerdict

FULL_Q = (
    0.4990, 0.4764, 0.4537, 0.4311, 0.4085, 0.3858, 0.3632, 0.3405,
    0.3179, 0.2953, 0.2726, 0.2500,
)
FULL_E_A = (
    1e-3, 0.1437, 0.2864, 0.4291, 0.5719, 0.7146, 0.8573, 1.0,
    1.5556, 2.1111, 2.6667, 3.2222, 3.7778, 4.3333, 4.8889, 5.4444, 6.0,
)
FULL_D = (
    1e-3, 0.1437, 0.2864, 0.4291, 0.5719, 0.7146, 0.8573, 1.0,
    2.5556, 4.1111, 5.6667, 7.2222, 8.7778, 10.3333, 11.8889, 13.4444, 15.0,
)
DESK_Q = (0.499, 0.408, 0.25)
DESK_E_A = (1e-3, 1.0)
DESK_D = (0.14, 1.0, 15.0)


class ProfileStatus(str, Enum):
    CONVERGED = "Converged"
    NO_CONNECTION = "NoConnection"
    CONTINUATION_STALLED = "ContinuationStalled"


@dataclass(frozen=True)
class ParameterGrid:
    q_values: tuple = FULL_Q
    E_A_values: tuple = FULL_E_A
    D_values: tuple = FULL_D
    u_plus: float = 0.0
    u_ig: float = 0.1

    @classmethod
    def full(cls) -> "ParameterGrid":
        return cls()

    @classmethod
    def desk(cls) -> "ParameterGrid":
        return cls(q_values=DESK_Q, E_A_values=DESK_E_A, D_values=DESK_D)

    def __len__(self):
        return len(self.q_values) * len(self.E_A_values) * len(self.D_values)

    def points(self):
        """Grid points in grid order: q outermost, then E_A, then D."""
        return [
            ModelParams(q=q, D=D, E_A=E_A, u_ig=self.u_ig, u_plus=self.u_plus)
            for q, E_A, D in itertools.product(self.q_values, self.E_A_values, self.D_values)
        ]


@dataclass(frozen=True)
class SweepSettings:
    profile: ProfileOptions = field(default_factory=ProfileOptions)
    schedule: ContinuationSchedule = field(default_factory=ContinuationSchedule)
    evans: EvansSettings = field(default_factory=EvansSettings)
    jobs: int = 1


@dataclass(frozen=True)
class RunRecord:
    """
    Outcome of one grid point. timings and message are diagnostic and do not
    take part in equality.
    """

    params: ModelParams
    param_hash: str
    profile_status: ProfileStatus
    k_found: Optional[float] = None
    M_minus: Optional[float] = None
    M_plus: Optional[float] = None
    boundary_residuals: Optional[tuple] = None
    bound: Optional[HighFreqBound] = None
    verdict: Optional[StabilityVerdict] = None
    validation: tuple = ()
    timings: dict = field(default_factory=dict, compare=False, hash=False)
    message: str = field(default="", compare=False)

    def __post_init__(self):
        converged = self.profile_status == ProfileStatus.CONVERGED
        if converged != (self.verdict is not None):
            raise ValueError("A verdict is present exactly when the profile converged.")

    @property
    def converged(self) -> bool:
        return self.profile_status == ProfileStatus.CONVERGED

    @property
    def winding(self) -> Optional[int]:
        return self.verdict.winding if self.verdict else None


QUADRANTS = (
    ("D<=1", "E_A<=1"),
    ("D>=1", "E_A<=1"),
    ("D<=1", "E_A>=1"),
    ("D>=1", "E_A>=1"),
)


@dataclass
class SuccessTable:
    """Attempted/converged counts per (D, E_A) quadrant; boundary values count on both sides."""

    attempted: dict = field(default_factory=lambda: {q: 0 for q in QUADRANTS})
    converged: dict = field(default_factory=lambda: {q: 0 for q in QUADRANTS})

    @staticmethod
    def quadrants_of(params: ModelParams):
        d_sides = [s for s, ok in (("D<=1", params.D <= 1), ("D>=1", params.D >= 1)) if ok]
        e_sides = [s for s, ok in (("E_A<=1", params.E_A <= 1), ("E_A>=1", params.E_A >= 1)) if ok]
        return [(d, e) for e in e_sides for d in d_sides]

    def add(self, record: RunRecord):
        for quadrant in self.quadrants_of(record.params):
            self.attempted[quadrant] += 1
            if record.converged:
                self.converged[quadrant] += 1

    @classmethod
    def from_records(cls, records) -> "SuccessTable":
        table = cls()
        for record in records:
            table.add(record)
        return table

    def rate(self, quadrant) -> float:
        attempted = self.attempted[quadrant]
        return self.converged[quadrant] / attempted if attempted else 0.0

    def rows(self):
        return [(d, e, self.converged[(d, e)], self.attempted[(d, e)]) for d, e in QUADRANTS]
