"""
Serializer Tests
Tests for configuration validation, record serializers and the enum field
"""
from django.test import SimpleTestCase
from rest_framework import serializers

from detonation.management.options import format_errors
from detonation.models import ProfileStatus, VerdictKind
from detonation.serializers import (
    CliConfigSerializer,
    HighFreqBoundSerializer,
    RunRecordSerializer,
    StabilityVerdictSerializer,
)
from detonation.serializers.fields import EnumField

from .test_utils import RecordFactory


def config(data=None, **context):
    serializer = CliConfigSerializer(data=data or {}, context=context)
    serializer.is_valid()
    return serializer


class CliConfigSerializerTests(SimpleTestCase):
    """Test CliConfigSerializer"""

    def test_defaults(self):
        """✅ Empty input validates to the tame defaults"""
        serializer = config()
        self.assertEqual(serializer.errors, {})
        params = CliConfigSerializer.build_params(serializer.validated_data)
        self.assertEqual((params.q, params.D, params.E_A), (0.499, 1.0, 1.0))
        self.assertEqual(serializer.validated_data["grid"], "desk")

    def test_settings_builders(self):
        """✅ Builders carry the validated values into domain settings"""
        data = config({"tol": 1e-6, "radius": 4.0, "n0": 60, "jobs": 3}).validated_data
        sweep = CliConfigSerializer.build_sweep_settings(data)
        self.assertEqual(sweep.profile.solver.residual_tolerance, 1e-6)
        self.assertEqual(sweep.evans.radius, 4.0)
        self.assertEqual(sweep.evans.n0, 60)
        self.assertEqual(sweep.jobs, 3)

    def test_q_above_range(self):
        """❌ q = 0.6 lies outside the physical range"""
        serializer = config({"q": 0.6})
        self.assertIn("params", serializer.errors)
        self.assertIn("physical range", str(serializer.errors["params"]))

    def test_q_zero(self):
        """❌ q = 0 is a degenerate heat release"""
        serializer = config({"q": 0.0})
        self.assertIn("Degenerate heat release", str(serializer.errors["params"]))

    def test_nonpositive_D(self):
        """❌ D must be positive"""
        self.assertIn("params", config({"D": 0.0}).errors)

    def test_radius(self):
        """❌ Explicit radius must be positive"""
        self.assertIn("radius", config({"radius": 0.0}).errors)

    def test_indent(self):
        """❌ Indent factor must lie in (0, 1)"""
        self.assertIn("indent", config({"indent": 2.0}).errors)

    def test_radius_margin(self):
        """❌ Radius margin below 1"""
        self.assertIn("radius_margin", config({"radius_margin": 0.5}).errors)

    def test_heat_inflation_needs_rate(self):
        """❌ Inflating q requires a fixed reaction rate"""
        self.assertIn("fixed_rate", config({"inflation": "q"}).errors)
        self.assertEqual(config({"inflation": "q", "fixed_rate": 8.0}).errors, {})

    def test_custom_grid_lists(self):
        """❌ A custom grid needs all three value lists"""
        self.assertIn("grid", config({"grid": "custom", "grid_q": "0.499"}).errors)

    def test_comma_separated_values(self):
        """✅ Grid values accept comma-separated strings"""
        data = config({"grid": "custom", "grid_q": "0.499, 0.4", "grid_EA": "1", "grid_D": [0.5, 2.0]}).validated_data
        grid = CliConfigSerializer.build_grid(data)
        self.assertEqual(grid.q_values, (0.499, 0.4))
        self.assertEqual(grid.D_values, (0.5, 2.0))
        self.assertEqual(len(grid), 4)

    def test_grid_points_checked(self):
        """❌ Every custom grid point must be admissible when the grid is validated"""
        data = {"grid": "custom", "grid_q": "0.499,0.6", "grid_EA": "1", "grid_D": "1"}
        self.assertEqual(config(data).errors, {})
        self.assertIn("q=0.6", str(config(data, validate_grid=True).errors["params"]))

    def test_format_errors(self):
        """✅ Errors render as one line"""
        message = format_errors({"q": ["bad value"], "non_field_errors": ["broken"]})
        self.assertEqual(message, "Invalid configuration: q: bad value | broken")


class RecordSerializerTests(SimpleTestCase):
    """Test the run record and verdict serializers"""

    def test_converged_without_verdict(self):
        """❌ A converged record line needs a verdict"""
        data = RunRecordSerializer(RecordFactory.failed()).data
        data["profile_status"] = "Converged"
        serializer = RunRecordSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn("non_field_errors", serializer.errors)

    def test_unstable_needs_count(self):
        """❌ An Unstable verdict without a count is invalid"""
        self.assertFalse(StabilityVerdictSerializer(data={"kind": "Unstable", "winding": 1}).is_valid())
        self.assertTrue(StabilityVerdictSerializer(data={"kind": "Unstable", "unstable_count": 1}).is_valid())

    def test_winding_is_read_only(self):
        """✅ winding is derived from the verdict"""
        data = RunRecordSerializer(RecordFactory.converged(kind=VerdictKind.UNSTABLE, winding=2)).data
        self.assertEqual(data["winding"], 2)
        self.assertIsNone(RunRecordSerializer(RecordFactory.failed()).data["winding"])

    def test_small_bound_rejected(self):
        """❌ Bound radius below 3"""
        self.assertFalse(HighFreqBoundSerializer(data={"L": 0.1, "M": 0.1, "R": 2.0}).is_valid())


class EnumFieldTests(SimpleTestCase):
    """Test EnumField"""

    def setUp(self):
        self.field = EnumField(ProfileStatus)

    def test_to_internal_value(self):
        """✅ Values map to members"""
        self.assertIs(self.field.to_internal_value("NoConnection"), ProfileStatus.NO_CONNECTION)

    def test_to_representation(self):
        """✅ Members map to values"""
        self.assertEqual(self.field.to_representation(ProfileStatus.CONVERGED), "Converged")
        self.assertIsNone(self.field.to_representation(None))

    def test_unknown_value(self):
        """❌ Unknown values are rejected"""
        with self.assertRaises(serializers.ValidationError):
            self.field.to_internal_value("Diverged")
