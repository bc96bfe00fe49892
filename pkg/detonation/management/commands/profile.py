"""
Solve one weak-detonation profile.
Exit codes: 0 converged, 1 invalid configuration, 2 no connection found.
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from detonation.engine import archive
from detonation.engine.profile import solve_with_continuation, validate_profile
from detonation.exceptions import ContinuationStalled, NoConnection, OutsidePhysicalRange
from detonation.management.options import (
    NO_CONNECTION,
    add_model_arguments,
    add_output_arguments,
    add_solver_arguments,
    load_config,
)
from detonation.serializers import CliConfigSerializer


def solve_configured(config):
    """Profile for a validated configuration, through continuation if needed."""
    params = CliConfigSerializer.build_params(config)
    options = CliConfigSerializer.build_profile_options(config)
    try:
        return solve_with_continuation(params, options)
    except (NoConnection, ContinuationStalled, OutsidePhysicalRange) as exc:
        raise CommandError(f"NoConnection: {exc}", returncode=NO_CONNECTION) from exc


class Command(BaseCommand):
    help = "Solve the weak-detonation profile for one parameter point and write it as CSV."

    def add_arguments(self, parser):
        add_model_arguments(parser)
        add_solver_arguments(parser)
        add_output_arguments(parser, profiles=True)

    def handle(self, *args, **options):
        config = load_config(options)
        solution = solve_configured(config)
        diagnostics = validate_profile(solution, raise_on_failure=False)

        self.stdout.write(f"k_found {solution.k_found:.10g}")
        self.stdout.write(f"domain [-{solution.M_minus:.6g}, {solution.M_plus:.6g}] with {len(solution.mesh)} nodes")
        self.stdout.write(
            "boundary residuals minus {:.3e} plus {:.3e}".format(*solution.boundary_residuals)
        )
        self.stdout.write(f"monotone {diagnostics.monotone}")
        if diagnostics.tail_error is not None:
            self.stdout.write(f"tail fit sup-error {diagnostics.tail_error:.3e}")
        if diagnostics.passed:
            self.stdout.write(self.style.SUCCESS("validation passed"))
        else:
            self.stdout.write(self.style.WARNING("validation failed: " + ", ".join(diagnostics.failures)))

        stem = config.get("profile_out") or Path(config["out"]) / f"profile-{archive.param_hash(solution.params)}"
        _, csv_path = archive.write_profile(solution, stem)
        self.stdout.write(f"profile written to {csv_path}")
