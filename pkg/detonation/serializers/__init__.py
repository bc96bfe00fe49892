"""
Detonation Serializers Package

Organized serializer structure:
- fields.py: EnumField
- params.py: ModelParamsSerializer, HighFreqBoundSerializer
- record.py: StabilityVerdictSerializer, RunRecordSerializer, ProfileMetaSerializer
- config.py: CliConfigSerializer
"""

# Parameter serializers
from .params import (
    HighFreqBoundSerializer,
    ModelParamsSerializer,
)

# Record serializers
from .record import (
    ProfileMetaSerializer,
    RunRecordSerializer,
    StabilityVerdictSerializer,
)

# CLI configuration
from .config import CliConfigSerializer


__all__ = [
    # Parameters
    "ModelParamsSerializer",
    "HighFreqBoundSerializer",
    # Records
    "StabilityVerdictSerializer",
    "RunRecordSerializer",
    "ProfileMetaSerializer",
    # Configuration
    "CliConfigSerializer",
]
