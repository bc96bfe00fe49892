"""
CLI Configuration Serializer
Validates merged command-line, config-file and settings values before any computation
"""
import math

from rest_framework import serializers

from detonation.engine.model import check_admissible
from detonation.exceptions import DetonationError
from detonation.models import (
    ContinuationSchedule,
    EvansSettings,
    ModelParams,
    ParameterGrid,
    ProfileOptions,
    SolverSettings,
    SweepSettings,
)
from detonation.models.profile import INFLATE_HEAT, INFLATE_RATE

GRID_CHOICES = ["desk", "full", "custom"]


class FloatListField(serializers.ListField):
    """Accepts a list of floats or a comma-separated string."""

    child = serializers.FloatField()

    def to_internal_value(self, data):
        if isinstance(data, str):
            data = [item for item in data.replace(" ", "").split(",") if item]
        return super().to_internal_value(data)


class CliConfigSerializer(serializers.Serializer):
    """
    Everything a subcommand needs: model parameters, solver and contour
    settings, output location and the sweep grid.
    """
    # Model parameters
    q = serializers.FloatField(default=0.499)
    D = serializers.FloatField(default=1.0)
    EA = serializers.FloatField(default=1.0)
    uig = serializers.FloatField(default=0.1)
    uplus = serializers.FloatField(default=0.0)

    # Profile solver
    tol = serializers.FloatField(default=1e-8)
    inflation = serializers.ChoiceField(choices=[INFLATE_RATE, INFLATE_HEAT], default=INFLATE_RATE)
    k_guess = serializers.FloatField(default=1.0)
    fixed_rate = serializers.FloatField(allow_null=True, required=False, default=None)
    max_mesh_points = serializers.IntegerField(default=20000, min_value=10)

    # Contour
    radius_margin = serializers.FloatField(default=1.1)
    indent = serializers.FloatField(default=1e-3)
    radius = serializers.FloatField(allow_null=True, required=False, default=None)
    n0 = serializers.IntegerField(default=120, min_value=8)
    rtol = serializers.FloatField(default=1e-6)
    atol = serializers.FloatField(default=1e-8)
    refine_threshold = serializers.FloatField(default=0.2)
    certify_threshold = serializers.FloatField(default=math.pi / 2)
    synthetic_zero = serializers.FloatField(allow_null=True, required=False, default=None)

    # Output and sweep
    out = serializers.CharField(default="detevans-out")
    profile_in = serializers.CharField(allow_null=True, required=False, default=None)
    profile_out = serializers.CharField(allow_null=True, required=False, default=None)
    resume = serializers.BooleanField(default=False)
    jobs = serializers.IntegerField(default=1, min_value=1)
    grid = serializers.ChoiceField(choices=GRID_CHOICES, default="desk")
    grid_q = FloatListField(required=False, default=list)
    grid_EA = FloatListField(required=False, default=list)
    grid_D = FloatListField(required=False, default=list)

    def validate_tol(self, value):
        if value <= 0:
            raise serializers.ValidationError("Tolerance must be positive.")
        return value

    def validate_radius(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError("Contour radius must be positive.")
        return value

    def validate_radius_margin(self, value):
        if value < 1:
            raise serializers.ValidationError("Radius margin must be at least 1.")
        return value

    def validate_indent(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("Indent factor must lie in (0, 1).")
        return value

    def validate(self, data):
        """Check the model invariants on the point or on every grid point."""
        if data["inflation"] == INFLATE_HEAT and not data.get("fixed_rate"):
            raise serializers.ValidationError({"fixed_rate": "Heat-release inflation needs a fixed reaction rate."})
        if data["grid"] == "custom" and not (data["grid_q"] and data["grid_EA"] and data["grid_D"]):
            raise serializers.ValidationError({"grid": "A custom grid needs grid_q, grid_EA and grid_D."})

        points = [self.build_params(data)]
        if self.context.get("validate_grid"):
            points = self.build_grid(data).points()
        for point in points:
            try:
                check_admissible(point)
            except DetonationError as exc:
                raise serializers.ValidationError({"params": f"q={point.q}, D={point.D}, E_A={point.E_A}: {exc}"})
        return data

    # Builders for the domain settings

    @staticmethod
    def build_params(data) -> ModelParams:
        return ModelParams(q=data["q"], D=data["D"], E_A=data["EA"], u_ig=data["uig"], u_plus=data["uplus"])

    @staticmethod
    def build_profile_options(data) -> ProfileOptions:
        return ProfileOptions(
            inflation=data["inflation"],
            k_guess=data["k_guess"],
            fixed_rate=data.get("fixed_rate"),
            solver=SolverSettings(residual_tolerance=data["tol"], max_mesh_points=data["max_mesh_points"]),
        )

    @staticmethod
    def build_evans_settings(data) -> EvansSettings:
        return EvansSettings(
            rtol=data["rtol"],
            atol=data["atol"],
            radius_margin=data["radius_margin"],
            indent_factor=data["indent"],
            radius=data.get("radius"),
            n0=data["n0"],
            refine_threshold=data["refine_threshold"],
            certify_threshold=data["certify_threshold"],
            synthetic_zero=data.get("synthetic_zero"),
        )

    @classmethod
    def build_sweep_settings(cls, data) -> SweepSettings:
        return SweepSettings(
            profile=cls.build_profile_options(data),
            schedule=ContinuationSchedule(),
            evans=cls.build_evans_settings(data),
            jobs=data["jobs"],
        )

    @staticmethod
    def build_grid(data) -> ParameterGrid:
        if data["grid"] == "full":
            grid = ParameterGrid.full()
        elif data["grid"] == "custom":
            grid = ParameterGrid(
                q_values=tuple(data["grid_q"]),
                E_A_values=tuple(data["grid_EA"]),
                D_values=tuple(data["grid_D"]),
            )
        else:
            grid = ParameterGrid.desk()
        return ParameterGrid(
            q_values=grid.q_values,
            E_A_values=grid.E_A_values,
            D_values=grid.D_values,
            u_plus=data["uplus"],
            u_ig=data["uig"],
        )
