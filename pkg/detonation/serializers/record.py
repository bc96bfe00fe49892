"""
Record Serializers
Serializers for stability verdicts, run records and stored profile metadata
"""
from rest_framework import serializers

from detonation.models import ProfileStatus, RunRecord, StabilityVerdict, VerdictKind
from detonation.models.profile import INFLATE_HEAT, INFLATE_RATE

from .fields import EnumField
from .params import HighFreqBoundSerializer, ModelParamsSerializer


class StabilityVerdictSerializer(serializers.Serializer):
    """Verdict without its contour samples, which are exported as CSV instead."""

    kind = EnumField(VerdictKind)
    winding = serializers.IntegerField(allow_null=True, required=False, default=None)
    unstable_count = serializers.IntegerField(allow_null=True, required=False, default=None)
    certified = serializers.BooleanField(default=False)
    max_arg_step = serializers.FloatField(allow_null=True, required=False, default=None)
    refinement_count = serializers.IntegerField(default=0)
    indent_ratio = serializers.FloatField(allow_null=True, required=False, default=None)
    contour_radius = serializers.FloatField(allow_null=True, required=False, default=None)
    indent_radius = serializers.FloatField(allow_null=True, required=False, default=None)
    reason = serializers.CharField(allow_blank=True, default="")

    def validate(self, data):
        if data["kind"] == VerdictKind.UNSTABLE and not data.get("unstable_count"):
            raise serializers.ValidationError("An Unstable verdict needs a positive unstable_count.")
        return data

    def create(self, validated_data):
        return StabilityVerdict(**validated_data)


class RunRecordSerializer(serializers.Serializer):
    """
    One line of records.jsonl.
    Nested parameters, bound and verdict are rebuilt as domain objects by save().
    """
    params = ModelParamsSerializer()
    param_hash = serializers.CharField(max_length=64)
    profile_status = EnumField(ProfileStatus)
    k_found = serializers.FloatField(allow_null=True, required=False, default=None)
    M_minus = serializers.FloatField(allow_null=True, required=False, default=None)
    M_plus = serializers.FloatField(allow_null=True, required=False, default=None)
    boundary_residuals = serializers.ListField(
        child=serializers.FloatField(), allow_null=True, required=False, default=None
    )
    bound = HighFreqBoundSerializer(allow_null=True, required=False, default=None)
    verdict = StabilityVerdictSerializer(allow_null=True, required=False, default=None)
    winding = serializers.IntegerField(read_only=True)
    validation = serializers.ListField(child=serializers.CharField(), default=list)
    timings = serializers.DictField(child=serializers.FloatField(), default=dict)
    message = serializers.CharField(allow_blank=True, default="")

    def validate(self, data):
        converged = data["profile_status"] == ProfileStatus.CONVERGED
        if converged != (data.get("verdict") is not None):
            raise serializers.ValidationError("A verdict is present exactly when the profile converged.")
        return data

    def create(self, validated_data):
        data = dict(validated_data)
        data["params"] = ModelParamsSerializer().create(data["params"])
        if data.get("bound") is not None:
            data["bound"] = HighFreqBoundSerializer().create(data["bound"])
        if data.get("verdict") is not None:
            data["verdict"] = StabilityVerdictSerializer().create(data["verdict"])
        if data.get("boundary_residuals") is not None:
            data["boundary_residuals"] = tuple(data["boundary_residuals"])
        data["validation"] = tuple(data.get("validation", ()))
        return RunRecord(**data)


class ProfileMetaSerializer(serializers.Serializer):
    """Metadata file written next to a profile CSV."""

    params = ModelParamsSerializer()
    k_found = serializers.FloatField()
    M_minus = serializers.FloatField()
    M_plus = serializers.FloatField()
    boundary_residuals = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2)
    tolerance = serializers.FloatField(default=1e-8)
    inflation = serializers.ChoiceField(choices=[INFLATE_RATE, INFLATE_HEAT], default=INFLATE_RATE)
    phase_value = serializers.FloatField(allow_null=True, required=False, default=None)

    def validate_k_found(self, value):
        if value <= 0:
            raise serializers.ValidationError("Reaction rate k must be positive.")
        return value
