"""
Custom Fields
Serializer fields shared by the detonation serializers
"""
from rest_framework import serializers


class EnumField(serializers.ChoiceField):
    """ChoiceField that reads and writes a str-valued Enum by its value."""

    def __init__(self, enum, **kwargs):
        self.enum = enum
        super().__init__(choices=[member.value for member in enum], **kwargs)

    def to_representation(self, value):
        if value in ("", None):
            return value
        return self.enum(value).value

    def to_internal_value(self, data):
        return self.enum(super().to_internal_value(data))
