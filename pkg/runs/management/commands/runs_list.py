from django.core.management.base import BaseCommand

from runs.models import Run


class Command(BaseCommand):
    help = "Recent runs with their status and report path."

    def add_arguments(self, parser):
        parser.add_argument("--limit", type=int, default=20)
        parser.add_argument("--command", dest="command_name", help="Only runs of this command")

    def handle(self, *args, **options):
        runs = Run.objects.all()
        if options["command_name"]:
            runs = runs.filter(command=options["command_name"])
        for run in runs[: options["limit"]]:
            self.stdout.write(
                f"{run.pk:>5} {run.command:<15} {run.status:<8} seed={run.seed} "
                f"records={run.records.count()} failed={run.failed_records().count()} {run.output_path}"
            )
