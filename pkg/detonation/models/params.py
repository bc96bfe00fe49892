"""
Model Parameters
Scaled Majda-model parameters, raw (unscaled) inputs, end states and the
detonation classification.
"""
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from typing import Optional


class DetonationClass(str, Enum):
    STRONG = "Strong"
    WEAK = "Weak"
    CHAPMAN_JOUGUET = "ChapmanJouguet"
    NOT_A_DETONATION = "NotADetonation"


@dataclass(frozen=True)
class ScalingInfo:
    """Speed, viscosity and reaction rate of the unscaled problem a ModelParams came from."""

    s: float
    B: float
    k: float


@dataclass(frozen=True)
class ModelParams:
    """
    Scaled parameters of the Majda model.
    After scaling the wave speed s and the viscosity B are both 1.
    """

    q: float
    D: float
    E_A: float
    u_ig: float = 0.1
    u_plus: float = 0.0
    s: float = 1.0
    B: float = 1.0
    scaling: Optional[ScalingInfo] = None

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        """Flat JSON-ready mapping without scaling metadata."""
        return {f.name: float(getattr(self, f.name)) for f in fields(self) if f.name != "scaling"}

    @property
    def key(self) -> tuple:
        return tuple(self.as_dict().values())


@dataclass(frozen=True)
class RawParams:
    """Unscaled inputs accepted by the scaling map."""

    s: float
    B: float
    k: float
    q: float
    D: float
    u_plus: float
    u_ig: float
    E_A: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EndStates:
    u_minus: float
    u_plus: float
    a_minus: float
    a_plus: float
    z_minus: float = 0.0
    z_plus: float = 1.0
