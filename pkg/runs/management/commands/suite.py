import io
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError

from runs.reporting import Check, ReportCommand

# command name -> options for the desk-scale acceptance run
DESK = {
    "chars": {},
    "fe_check": {},
    "afe_check": {},
    "verify_euler": {},
    "cyclotomic": {},
    "det_scan": {},
    "verify_voronoi": {"grid": "full"},
    "moment": {"trend": [101, 211, 401]},
    "mollifier": {},
    "holder_demo": {},
}


class Command(ReportCommand):
    help = "Run the acceptance suite; each command writes its own report next to the suite report."
    command_name = "suite"
    defaults = {"level": "desk", "only": None, "report_dir": None}

    def add_parameters(self, parser):
        parser.add_argument("--level", choices=["desk"])
        parser.add_argument("--only", type=lambda raw: raw.split(","), help="Subset of commands, comma separated")
        parser.add_argument("--report-dir", help="Directory for the per-command reports")

    def checks(self, parameters, seed, workers):
        names = parameters["only"] or list(DESK)
        unknown = [name for name in names if name not in DESK]
        if unknown:
            raise CommandError(f"Unknown suite commands: {unknown}", returncode=2)
        directory = Path(parameters["report_dir"] or settings.REPORT_DIR) / f"suite-{seed}"
        for name in names:
            path = directory / f"{name}.json"
            output = io.StringIO()
            try:
                call_command(name, seed=seed, workers=workers, out=str(path), stdout=output, **DESK[name])
            except CommandError as exc:
                if exc.returncode != 1:
                    raise
                yield Check(name, "suite", "trivial", {"report": str(path), "error": str(exc)}, None, False)
                continue
            yield Check(name, "suite", "trivial", {"report": str(path), "summary": output.getvalue().strip()})
