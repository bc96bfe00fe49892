"""
Detonation Exceptions
Error hierarchy shared by the numerical engine, the sweep driver and the CLI.
"""


class DetonationError(Exception):
    """Base class for every failure raised by the engine."""

    default_detail = "Detonation computation failed."

    def __init__(self, detail=None):
        self.detail = detail or self.default_detail
        super().__init__(self.detail)


# Model algebra

class OutsidePhysicalRange(DetonationError):
    default_detail = "Parameters lie outside the physical range."


class NotAWeakDetonation(DetonationError):
    default_detail = "End states do not form a weak detonation."


# Boundary value problems

class BvpFailure(DetonationError):
    default_detail = "Boundary value solver failed."

    def __init__(self, detail=None, status=None):
        super().__init__(detail)
        self.status = status


class NewtonDiverged(BvpFailure):
    default_detail = "Newton iteration did not reduce the residual."


class MeshBudgetExceeded(BvpFailure):
    default_detail = "Mesh refinement exceeded the node budget."


class InvalidMesh(DetonationError):
    default_detail = "Mesh nodes must be strictly increasing with at least 10 nodes."


class OutOfRange(DetonationError):
    default_detail = "Abscissa lies outside the solution span."


# Profiles

class DegenerateSplitting(DetonationError):
    """An end-state or limiting matrix has an unexpected eigenvalue on the imaginary axis."""

    default_detail = "Eigenvalue real part too close to zero."


# Limiting matrices report the same condition under their own name.
SplittingDegenerate = DegenerateSplitting


class NoConnection(DetonationError):
    default_detail = "No heteroclinic connection found."


class ContinuationStalled(DetonationError):
    """Continuation step fell below the floor before reaching the target."""

    default_detail = "Continuation stalled."

    def __init__(self, detail=None, furthest=None, solution=None):
        super().__init__(detail)
        self.furthest = furthest
        self.solution = solution


class ValidationFailed(DetonationError):
    default_detail = "Profile failed validation."

    def __init__(self, prop, detail=None):
        super().__init__(detail or f"Profile failed validation: {prop}")
        self.prop = prop


# Evans function

class SplittingLost(DetonationError):
    default_detail = "Consistent splitting lost between adjacent contour nodes."


class IntegratorFailure(DetonationError):
    default_detail = "Adaptive integrator failed."

    def __init__(self, detail=None, lam=None):
        super().__init__(detail)
        self.lam = lam


class RefinementBudgetExceeded(DetonationError):
    default_detail = "Winding refinement exceeded its node budget."

    def __init__(self, detail=None, result=None):
        super().__init__(detail)
        self.result = result


# Persistence

class PersistenceError(DetonationError):
    default_detail = "Could not read or write run artifacts."

    def __init__(self, detail=None, path=None):
        super().__init__(f"{detail or self.default_detail} ({path})" if path else detail)
        self.path = path
