"""
Certify the spectral stability of one profile.
Exit codes: 0 Stable, 1 invalid input, 2 no connection, 3 Unstable, 4 Inconclusive.
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from detonation.engine import archive
from detonation.engine.evans import certify_stability
from detonation.engine.spectral import high_frequency_bound
from detonation.exceptions import PersistenceError
from detonation.management.commands.profile import solve_configured
from detonation.management.options import (
    INVALID_CONFIG,
    add_contour_arguments,
    add_model_arguments,
    add_output_arguments,
    add_solver_arguments,
    load_config,
)
from detonation.serializers import CliConfigSerializer


class Command(BaseCommand):
    help = "Compute the high-frequency bound and the Evans winding number for one profile."

    def add_arguments(self, parser):
        add_model_arguments(parser)
        add_solver_arguments(parser)
        add_contour_arguments(parser)
        add_output_arguments(parser, profiles=True)

    def handle(self, *args, **options):
        config = load_config(options)
        if config.get("profile_in"):
            try:
                solution = archive.read_profile(config["profile_in"])
            except PersistenceError as exc:
                raise CommandError(str(exc), returncode=INVALID_CONFIG) from exc
        else:
            solution = solve_configured(config)
            if config.get("profile_out"):
                archive.write_profile(solution, config["profile_out"])

        bound = high_frequency_bound(solution.params, solution.k_found, solution)
        self.stdout.write(f"k_found {solution.k_found:.10g}")
        self.stdout.write(f"L {bound.L:.10g}  M {bound.M:.10g}  R {bound.R:.10g}")

        verdict = certify_stability(solution, bound, CliConfigSerializer.build_evans_settings(config))
        winding = "n/a" if verdict.winding is None else verdict.winding
        self.stdout.write(f"winding {winding}, verdict {verdict}")
        if verdict.reason:
            self.stdout.write(f"reason: {verdict.reason}")

        if verdict.samples:
            path = Path(config["out"]) / f"contour-{archive.param_hash(solution.params)}.csv"
            archive.write_contour(verdict.samples, path)
            self.stdout.write(f"contour written to {path}")

        if verdict.exit_code:
            raise CommandError(str(verdict), returncode=verdict.exit_code)
        self.stdout.write(self.style.SUCCESS("Stable"))
