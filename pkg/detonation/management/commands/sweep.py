"""
Run a parameter grid end to end.
Exit codes: 0 every converged point certified Stable or Unstable, 1 invalid
grid, 4 some converged point Inconclusive.
"""
from django.core.management.base import BaseCommand, CommandError

from detonation.engine.sweep import exit_code_for, run_grid
from detonation.management.options import (
    add_contour_arguments,
    add_model_arguments,
    add_output_arguments,
    add_solver_arguments,
    load_config,
)
from detonation.serializers import CliConfigSerializer


def write_table(stdout, table):
    stdout.write("quadrant            converged/attempted")
    for d, e, converged, attempted in table.rows():
        stdout.write(f"{d:>5} {e:>7}        {converged:>5}/{attempted}")


def write_summary(stdout, records):
    for record in records:
        p = record.params
        verdict = str(record.verdict) if record.verdict else "-"
        k = f"{record.k_found:.6g}" if record.k_found is not None else "-"
        stdout.write(f"q={p.q:<7g} E_A={p.E_A:<7g} D={p.D:<7g} {record.profile_status.value:<20} k={k:<10} {verdict}")


class Command(BaseCommand):
    help = "Solve and certify every point of a parameter grid and archive the results."

    def add_arguments(self, parser):
        add_model_arguments(parser)
        add_solver_arguments(parser)
        add_contour_arguments(parser)
        add_output_arguments(parser, profiles=False, sweep=True)
        parser.add_argument("--grid", choices=["desk", "full", "custom"], help="Grid to sweep.")
        parser.add_argument("--grid-q", dest="grid_q", help="Comma-separated q values for a custom grid.")
        parser.add_argument("--grid-EA", dest="grid_EA", help="Comma-separated E_A values for a custom grid.")
        parser.add_argument("--grid-D", dest="grid_D", help="Comma-separated D values for a custom grid.")

    def handle(self, *args, **options):
        config = load_config(options, validate_grid=True)
        grid = CliConfigSerializer.build_grid(config)
        self.stdout.write(f"sweeping {len(grid)} points into {config['out']}")

        records, table = run_grid(
            grid,
            CliConfigSerializer.build_sweep_settings(config),
            out_dir=config["out"],
            resume=config["resume"],
        )
        write_summary(self.stdout, records)
        write_table(self.stdout, table)

        code = exit_code_for(records)
        if code:
            raise CommandError(f"Sweep finished with exit code {code}.", returncode=code)
