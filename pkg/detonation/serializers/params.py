"""
Parameter Serializers
Serializers for ModelParams and HighFreqBound
"""
from rest_framework import serializers

from detonation.models import HighFreqBound, ModelParams


class ModelParamsSerializer(serializers.Serializer):
    """Scaled model parameters; scaling metadata is not archived."""

    q = serializers.FloatField()
    D = serializers.FloatField()
    E_A = serializers.FloatField()
    u_ig = serializers.FloatField(default=0.1)
    u_plus = serializers.FloatField(default=0.0)
    s = serializers.FloatField(default=1.0)
    B = serializers.FloatField(default=1.0)

    def create(self, validated_data):
        return ModelParams(**validated_data)


class HighFreqBoundSerializer(serializers.Serializer):
    L = serializers.FloatField()
    M = serializers.FloatField()
    R = serializers.FloatField()
    crude = serializers.BooleanField(default=False)

    def validate_R(self, value):
        if value < 3:
            raise serializers.ValidationError("Bound radius R must be at least 3.")
        return value

    def create(self, validated_data):
        return HighFreqBound(**validated_data)
