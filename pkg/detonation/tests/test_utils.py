"""
Test utilities and helpers
Common builders for the detonation app tests
"""
import tempfile
from pathlib import Path
from threading import RLock

import numpy as np
from cachetools import LRUCache, cached

from detonation.engine import archive
from detonation.engine.model import end_states
from detonation.engine.profile import initial_guess, solve_with_continuation
from detonation.models import (
    EvansSample,
    HighFreqBound,
    ModelParams,
    ProfileSolution,
    ProfileStatus,
    RunRecord,
    StabilityVerdict,
    VerdictKind,
)


class ParamsFactory:
    """Factory for model parameters around the tame case"""

    @staticmethod
    def tame(**changes):
        """q=0.499, D=1, E_A=1, u_ig=0.1, u_plus=0 with optional overrides"""
        return ModelParams(q=0.499, D=1.0, E_A=1.0).replace(**changes)


class ProfileFactory:
    """Factory for profiles, solved or synthetic"""

    @staticmethod
    @cached(cache=LRUCache(maxsize=16), lock=RLock())
    def solved(q=0.499, D=1.0, E_A=1.0):
        """Converged profile, solved once per test process"""
        return solve_with_continuation(ParamsFactory.tame(q=q, D=D, E_A=E_A))

    @staticmethod
    def synthetic(k=8.0, M=20.0, count=401):
        """Logistic front wrapped as a ProfileSolution; not a solution of the profile equations"""
        params = ParamsFactory.tame()
        ends = end_states(params)
        mesh = initial_guess(params, ends, M, M, k_guess=k, count=count)
        return ProfileSolution(
            mesh=mesh,
            k_found=k,
            params=params,
            end_states=ends,
            boundary_residuals=(1e-4, 2e-4),
            M_minus=M,
            M_plus=M,
            phase_value=0.5 * (ends.u_plus + ends.u_minus),
        )


class RecordFactory:
    """Factory for run records"""

    @staticmethod
    def converged(params=None, kind=VerdictKind.STABLE, winding=0, k=8.177):
        params = params or ParamsFactory.tame()
        unstable = winding if kind == VerdictKind.UNSTABLE else None
        verdict = StabilityVerdict(
            kind=kind,
            winding=winding if kind != VerdictKind.INCONCLUSIVE else None,
            unstable_count=unstable,
            certified=kind != VerdictKind.INCONCLUSIVE,
            max_arg_step=0.18,
            refinement_count=12,
            indent_ratio=0.9,
            contour_radius=8.8,
            indent_radius=8.8e-3,
            reason="" if kind == VerdictKind.STABLE else "test",
            samples=(EvansSample(t=0.0, lam=8.8 + 0j, E=1.0 + 0j, E_reduced=1.0 / 8.8 + 0j),),
        )
        return RunRecord(
            params=params,
            param_hash=archive.param_hash(params),
            profile_status=ProfileStatus.CONVERGED,
            k_found=k,
            M_minus=20.0,
            M_plus=30.0,
            boundary_residuals=(1.5e-5, 2.5e-4),
            bound=HighFreqBound(L=0.5, M=0.8, R=8.0, crude=False),
            verdict=verdict,
            validation=(),
            timings={"profile": 1.25, "evans": 3.5},
        )

    @staticmethod
    def failed(params=None, status=ProfileStatus.NO_CONNECTION):
        params = params or ParamsFactory.tame()
        return RunRecord(
            params=params,
            param_hash=archive.param_hash(params),
            profile_status=status,
            message="solver failed",
        )


def max_relative(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def temporary_dir(test_case) -> Path:
    """Fresh directory removed when test_case finishes"""
    tmp = tempfile.TemporaryDirectory()
    test_case.addCleanup(tmp.cleanup)
    return Path(tmp.name)
