"""Replay an archived sweep: summary, success table and the sweep's exit code."""
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from detonation.engine import archive
from detonation.engine.sweep import exit_code_for
from detonation.exceptions import PersistenceError
from detonation.management.commands.sweep import write_summary, write_table
from detonation.management.options import INVALID_CONFIG
from detonation.models import SuccessTable


class Command(BaseCommand):
    help = "Print the summary and success table stored in a sweep output directory."

    def add_arguments(self, parser):
        parser.add_argument("--out", help="Sweep output directory (falls back to DETEVANS_OUT).")

    def handle(self, *args, **options):
        out_dir = Path(options.get("out") or settings.DETEVANS["out"])
        path = out_dir / archive.RECORDS_FILE
        if not path.exists():
            raise CommandError(f"No records found at {path}.", returncode=INVALID_CONFIG)
        try:
            records = archive.read_records(path)
        except PersistenceError as exc:
            raise CommandError(str(exc), returncode=INVALID_CONFIG) from exc

        write_summary(self.stdout, records)
        write_table(self.stdout, SuccessTable.from_records(records))
        code = exit_code_for(records)
        if code:
            raise CommandError(f"Archived sweep has exit code {code}.", returncode=code)
