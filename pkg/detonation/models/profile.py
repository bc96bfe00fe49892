"""
Profile Types
Traveling-wave states, computed profiles, tail solutions and the options
steering the profile solver.
"""
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from .bvp import Mesh, SolverSettings
from .params import EndStates, ModelParams

INFLATE_RATE = "k"
INFLATE_HEAT = "q"


class TravelingWaveState(NamedTuple):
    u: float
    z: float
    y: float
    k: float


@dataclass(frozen=True)
class TailSolution:
    """
    Explicit solution on the ignition-free tail.

    u = 1 + beta*tanh(-beta*xi/2 + C_u)
    z = 1 - C_z*D*exp(-(xi - xi_ref)/D),  y = C_z*exp(-(xi - xi_ref)/D)
    """

    beta: float
    C_u: float
    C_z: float
    xi_ref: float = 0.0


@dataclass(frozen=True)
class EndLinearization:
    """Jacobian of the inflated system at an end state with its invariant subspace."""

    which: str
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    subspace: np.ndarray
    complement: np.ndarray


@dataclass(frozen=True)
class ProfileOptions:
    """Knobs of solve_profile. Defaults reproduce the tame-case setup."""

    inflation: str = INFLATE_RATE
    k_guess: float = 1.0
    fixed_rate: Optional[float] = None
    phase_value: Optional[float] = None
    initial_domain: tuple = (20.0, 20.0)
    domain_growth: float = 1.5
    max_domain_growths: int = 8
    boundary_tolerance: float = 1e-3
    initial_nodes: int = 201
    solver: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self):
        if self.inflation not in (INFLATE_RATE, INFLATE_HEAT):
            raise ValueError(f"Unknown inflation parameter {self.inflation!r}.")
        if self.inflation == INFLATE_HEAT and not self.fixed_rate:
            raise ValueError("Heat-release inflation needs a fixed reaction rate.")

    def replace(self, **changes) -> "ProfileOptions":
        return replace(self, **changes)


@dataclass(frozen=True)
class ContinuationSchedule:
    steps: int = 4
    min_step: float = 1.0 / 256
    growth: float = 1.5


@dataclass(frozen=True, eq=False)
class ProfileSolution:
    """
    Converged weak-detonation profile on [-M_minus, M_plus].

    mesh.values rows are (u, z, y, k); mesh.derivatives hold the vector field
    evaluated at every node.
    """

    mesh: Mesh
    k_found: float
    params: ModelParams
    end_states: EndStates
    boundary_residuals: tuple
    M_minus: float
    M_plus: float
    tolerance: float = 1e-8
    inflation: str = INFLATE_RATE
    phase_value: Optional[float] = None
    matching_jump: float = 0.0

    @property
    def xi(self) -> np.ndarray:
        return self.mesh.nodes

    @property
    def u(self) -> np.ndarray:
        return self.mesh.values[0]

    @property
    def z(self) -> np.ndarray:
        return self.mesh.values[1]

    @property
    def y(self) -> np.ndarray:
        return self.mesh.values[2]

    @property
    def u_prime(self) -> np.ndarray:
        return self.mesh.derivatives[0]

    @property
    def z_prime(self) -> np.ndarray:
        return self.mesh.derivatives[1]

    def state(self, index: int) -> TravelingWaveState:
        return TravelingWaveState(*(float(v) for v in self.mesh.values[:, index]))

    def states(self):
        return [self.state(i) for i in range(len(self.mesh))]


@dataclass
class ProfileDiagnostics:
    """Outcome of validate_profile; failures lists the names of violated checks."""

    monotone: bool
    below_burned: bool
    boundary_ok: bool
    decay_slopes: tuple
    tail_error: Optional[float]
    tail: Optional[TailSolution]
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures
