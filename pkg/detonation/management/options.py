"""
Shared Command Options
Flags common to the detevans subcommands and the merge of settings,
config file and flags into one validated configuration
"""
from dotenv import dotenv_values
from django.conf import settings
from django.core.management.base import CommandError

from detonation.serializers import CliConfigSerializer

INVALID_CONFIG = 1
NO_CONNECTION = 2


def add_model_arguments(parser):
    group = parser.add_argument_group("model parameters")
    group.add_argument("--q", type=float, help="Heat release (0 < q < (1 - u_plus)^2 / 2).")
    group.add_argument("--D", type=float, help="Diffusion ratio.")
    group.add_argument("--EA", type=float, help="Activation energy.")
    group.add_argument("--uig", type=float, help="Ignition threshold.")
    group.add_argument("--uplus", type=float, help="Unburned state.")
    group.add_argument("--config", help="Key=value configuration file.")


def add_solver_arguments(parser):
    group = parser.add_argument_group("profile solver")
    group.add_argument("--tol", type=float, help="Collocation residual tolerance.")
    group.add_argument("--inflation", choices=["k", "q"], help="Inflated unknown: reaction rate or heat release.")
    group.add_argument("--fixed-rate", dest="fixed_rate", type=float, help="Reaction rate when inflating q.")


def add_contour_arguments(parser):
    group = parser.add_argument_group("Evans contour")
    group.add_argument("--radius-margin", dest="radius_margin", type=float, help="Contour radius over the bound R.")
    group.add_argument("--indent", type=float, help="Indentation radius over the contour radius.")
    group.add_argument("--radius", type=float, help="Explicit contour radius.")
    group.add_argument("--n0", type=int, help="Initial contour nodes.")
    group.add_argument("--rtol", type=float, help="Relative integration tolerance.")
    group.add_argument("--atol", type=float, help="Absolute integration tolerance.")
    group.add_argument("--synthetic-zero", dest="synthetic_zero", type=float,
                       help="Multiply E_reduced by (lambda - c)/(lambda + 1) for a negative control.")


def add_output_arguments(parser, profiles=True, sweep=False):
    group = parser.add_argument_group("output")
    group.add_argument("--out", help="Output directory (falls back to DETEVANS_OUT).")
    if profiles:
        group.add_argument("--profile-in", dest="profile_in", help="Stem of a stored profile to reuse.")
        group.add_argument("--profile-out", dest="profile_out", help="Stem for the profile files.")
    if sweep:
        group.add_argument("--resume", action="store_true", default=None, help="Skip points already in --out.")
        group.add_argument("--jobs", type=int, help="Worker processes.")


def _config_file(path):
    if not path:
        return {}
    values = dotenv_values(path)
    if not values:
        raise CommandError(f"Config file {path} is missing or empty.", returncode=INVALID_CONFIG)
    field_names = {name.lower(): name for name in CliConfigSerializer().fields}
    merged = {}
    for key, value in values.items():
        name = field_names.get(key.strip().lower().replace("-", "_"))
        if name is None:
            raise CommandError(f"Unknown key {key!r} in config file {path}.", returncode=INVALID_CONFIG)
        merged[name] = value
    return merged


def load_config(options, validate_grid=False) -> dict:
    """
    Validated configuration: command-line flags override the config file,
    which overrides settings.DETEVANS.
    """
    fields = CliConfigSerializer().fields
    data = {key: value for key, value in settings.DETEVANS.items() if key in fields}
    data.update(_config_file(options.get("config")))
    data.update({key: value for key, value in options.items() if key in fields and value is not None})
    serializer = CliConfigSerializer(data=data, context={"validate_grid": validate_grid})
    if not serializer.is_valid():
        raise CommandError(format_errors(serializer.errors), returncode=INVALID_CONFIG)
    return serializer.validated_data


def format_errors(errors) -> str:
    parts = []
    for field, messages in errors.items():
        text = "; ".join(str(m) for m in messages) if isinstance(messages, (list, tuple)) else str(messages)
        parts.append(text if field == "non_field_errors" else f"{field}: {text}")
    return "Invalid configuration: " + " | ".join(parts)
