"""Schema bootstrap so the run-recording commands work on a fresh database."""

from django.core.management import call_command

from runs.choices import COMMAND_CHOICES

RECORDING_COMMANDS = {name for name, _ in COMMAND_CHOICES} | {"runs_list"}


def needs_schema(argv):
    return len(argv) > 1 and argv[1] in RECORDING_COMMANDS


def ensure_schema():
    """Apply pending migrations; a no-op once the database is current."""
    call_command("migrate", interactive=False, verbosity=0)
