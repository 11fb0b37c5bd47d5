"""Shared plumbing for the management commands: option resolution, persistence and reports."""

import argparse
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from runs.models import Run
from runs.serializers import finite_or_none
from runs.utils import dump_report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Check:
    """One record of a run before it is persisted."""

    kind: str
    anchor: str
    provenance_tag: str
    payload: dict = field(default_factory=dict)
    residual: float | None = None
    passed: bool = True


def int_list(raw):
    try:
        return [int(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma separated integers, got {raw!r}.")


def float_list(raw):
    try:
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma separated numbers, got {raw!r}.")


def int_tuples(raw):
    """'1,1,1,1;1,5,7,1' -> [[1, 1, 1, 1], [1, 5, 7, 1]]."""
    return [int_list(part) for part in raw.split(";") if part.strip()]


def load_config(path):
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise CommandError(f"Cannot read config file {path}: {exc}", returncode=2)
    if not isinstance(data, dict):
        raise CommandError(f"Config file {path} must hold a JSON object.", returncode=2)
    return data


class ReportCommand(BaseCommand):
    """A command that persists a Run, writes a JSON report and maps failures to exit codes.

    Subclasses declare `defaults` (parameter name -> default value), add one
    option per parameter with `default=None`, and yield `Check`s from `checks`.
    Values resolve as flags > config file > defaults.
    """

    command_name = None
    defaults = {}

    def add_arguments(self, parser):
        parser.add_argument("--config", help="JSON file with parameter values")
        parser.add_argument("--seed", type=int, help="Seed recorded in the report")
        parser.add_argument("--workers", type=int, help="Worker processes (default settings.WORKERS)")
        parser.add_argument("--out", help="Report path (default REPORT_DIR/<command>-<seed>.json)")
        self.add_parameters(parser)

    def add_parameters(self, parser):
        pass

    def resolve(self, options):
        config = load_config(options.get("config"))
        unknown = set(config) - set(self.defaults) - {"seed", "workers"}
        if unknown:
            raise CommandError(f"Unknown config keys for {self.command_name}: {sorted(unknown)}", returncode=2)
        parameters = dict(self.defaults)
        parameters.update({k: v for k, v in config.items() if k in self.defaults})
        parameters.update({k: options[k] for k in self.defaults if options.get(k) is not None})
        seed = options.get("seed")
        if seed is None:
            seed = config.get("seed", settings.DEFAULT_SEED)
        workers = options.get("workers")
        if workers is None:
            workers = config.get("workers", settings.WORKERS)
        if int(workers) < 1:
            raise CommandError(f"workers must be positive, got {workers}.", returncode=2)
        return parameters, int(seed), int(workers)

    def checks(self, parameters, seed, workers):
        raise NotImplementedError

    def report_path(self, options, seed):
        if options.get("out"):
            return Path(options["out"])
        return Path(settings.REPORT_DIR) / f"{self.command_name}-{seed}.json"

    def handle(self, *args, **options):
        parameters, seed, workers = self.resolve(options)
        run = Run.objects.create(
            command=self.command_name,
            parameters=parameters,
            seed=seed,
            workers=workers,
            schema_version=settings.REPORT_SCHEMA_VERSION,
        )
        logger.info("%s: run %d, seed %d, %d workers", self.command_name, run.pk, seed, workers)
        try:
            for check in self.checks(parameters, seed, workers):
                run.add_record(
                    check.kind,
                    check.anchor,
                    check.provenance_tag,
                    check.payload,
                    finite_or_none(check.residual),
                    check.passed,
                )
        except CommandError:
            run.finish("error")
            raise
        except ValueError as exc:
            run.finish("error")
            raise CommandError(f"{self.command_name}: {exc}", returncode=2) from exc

        records = [record.as_report_entry() for record in run.records.all()]
        failed = [entry for entry in records if not entry["passed"]]
        status = "failed" if failed else "passed"
        payload = {
            "schema_version": settings.REPORT_SCHEMA_VERSION,
            "command": self.command_name,
            "seed": seed,
            "parameters": parameters,
            "status": status,
            "records": records,
        }
        path = self.report_path(options, seed)
        try:
            dump_report(payload, path)
        except OSError as exc:
            run.finish("error")
            raise CommandError(f"Cannot write report {path}: {exc}", returncode=2) from exc
        run.output_path = str(path)
        run.finish(status)

        self.stdout.write(f"{self.command_name}: {len(records)} records, {len(failed)} failed -> {path}")
        if failed:
            raise CommandError(
                f"{self.command_name}: assertion failed: {json.dumps(failed[0], sort_keys=True)}",
                returncode=1,
            )
