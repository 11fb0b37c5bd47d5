import json
from pathlib import Path

from django.core.management.base import CommandError

from runs.reporting import Check, ReportCommand
from runs.serializers import VoronoiResultSerializer
from voronoi.formula import GRID, REFERENCE_GRID, VoronoiConfig, grid_configs, verify_voronoi


class Command(ReportCommand):
    help = "Voronoi summation for chi1 * chi2 twisted by e(an/c): LHS against main terms plus dual sum."
    command_name = "verify_voronoi"
    defaults = {"grid": "full", "configs": None, "threshold": 1e-5, "reference_threshold": 1e-6}

    def add_parameters(self, parser):
        parser.add_argument("--grid", choices=["reference", "full"], help="Built-in configuration grid")
        parser.add_argument("--configs", help="JSON file with a list of configurations (overrides --grid)")
        parser.add_argument("--threshold", type=float)
        parser.add_argument("--reference-threshold", type=float)

    def configurations(self, parameters):
        if parameters["configs"]:
            try:
                data = json.loads(Path(parameters["configs"]).read_text())
            except (OSError, ValueError) as exc:
                raise CommandError(f"Cannot read configurations: {exc}", returncode=2)
            if not isinstance(data, list):
                raise CommandError("The configurations file must hold a JSON list.", returncode=2)
            return [(VoronoiConfig.from_dict(entry), False) for entry in data]
        grid = REFERENCE_GRID if parameters["grid"] == "reference" else GRID
        return [(cfg, row in REFERENCE_GRID) for cfg, row in zip(grid_configs(grid), grid)]

    def checks(self, parameters, seed, workers):
        for cfg, reference in self.configurations(parameters):
            result = verify_voronoi(cfg)
            threshold = parameters["reference_threshold"] if reference else parameters["threshold"]
            payload = VoronoiResultSerializer(result).data
            payload["reference"] = reference
            yield Check(
                "voronoi",
                "thm:voronoi",
                "derived",
                payload,
                result.residual,
                result.passed and result.residual < threshold,
            )
