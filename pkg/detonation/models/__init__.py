"""
Detonation Domain Types

Organized type structure:
- params.py: ModelParams, RawParams, EndStates, DetonationClass
- bvp.py: BvpProblem, Mesh, SolverSettings
- profile.py: TravelingWaveState, ProfileSolution, TailSolution and solver options
- spectral.py: HighFreqBound, EvansContour, SubspaceFrame, EvansSample, WindingResult, StabilityVerdict
- sweep.py: ParameterGrid, RunRecord, SuccessTable

Import order follows the dependencies between the modules:
1. params and bvp (no intra-package dependencies)
2. profile (uses params and bvp)
3. spectral
4. sweep (uses all of the above)
"""

# 1. Independent types
from .params import DetonationClass, EndStates, ModelParams, RawParams, ScalingInfo
from .bvp import BvpProblem, Mesh, SolverSettings

# 2. Profiles
from .profile import (
    ContinuationSchedule,
    EndLinearization,
    ProfileDiagnostics,
    ProfileOptions,
    ProfileSolution,
    TailSolution,
    TravelingWaveState,
)

# 3. Spectral data
from .spectral import (
    EvansContour,
    EvansSample,
    EvansSettings,
    HighFreqBound,
    LimitingSplitting,
    StabilityVerdict,
    SubspaceFrame,
    VerdictKind,
    WindingResult,
)

# 4. Sweep
from .sweep import ParameterGrid, ProfileStatus, RunRecord, SuccessTable, SweepSettings


__all__ = [
    # Parameters
    "DetonationClass",
    "EndStates",
    "ModelParams",
    "RawParams",
    "ScalingInfo",
    # Boundary value problems
    "BvpProblem",
    "Mesh",
    "SolverSettings",
    # Profiles
    "ContinuationSchedule",
    "EndLinearization",
    "ProfileDiagnostics",
    "ProfileOptions",
    "ProfileSolution",
    "TailSolution",
    "TravelingWaveState",
    # Spectral
    "EvansContour",
    "EvansSample",
    "EvansSettings",
    "HighFreqBound",
    "LimitingSplitting",
    "StabilityVerdict",
    "SubspaceFrame",
    "VerdictKind",
    "WindingResult",
    # Sweep
    "ParameterGrid",
    "ProfileStatus",
    "RunRecord",
    "SuccessTable",
    "SweepSettings",
]
