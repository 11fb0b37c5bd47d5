from pathlib import Path

from moments.determinant import det_scan, leading_coefficient_margin, scan_configurations
from runs.reporting import Check, ReportCommand, int_tuples
from runs.serializers import DetScanRecordSerializer
from runs.utils import write_table

DET_HEADER = ["D1", "D2", "D3", "D4", "characters", "qResidue", "|det|", "precision", "vacuous"]


def sort_key(record):
    return (tuple(record.D), tuple(record.characters), -1 if record.q_residue is None else record.q_residue)


class Command(ReportCommand):
    help = "6x6 determinant scan over the D-tuples where the leading coefficient margin fails."
    command_name = "det_scan"
    defaults = {"configurations": None, "threshold": 1e-8, "csv": None}

    def add_parameters(self, parser):
        parser.add_argument("--configurations", type=int_tuples, help="D-tuples, e.g. '1,3,5,7;1,5,7,11'")
        parser.add_argument("--threshold", type=float, help="Smallest acceptable |det|")
        parser.add_argument("--csv", help="Determinant table path")

    def checks(self, parameters, seed, workers):
        configurations = parameters["configurations"] or scan_configurations()
        configurations = sorted(tuple(D) for D in configurations)
        for D in configurations:
            yield Check(
                "margin",
                "condition:leading-coefficient",
                "derived",
                {"D": list(D), "margin": leading_coefficient_margin(D)},
            )
        records = sorted(det_scan(configurations, workers), key=sort_key)
        for record in records:
            if record.vacuous:
                yield Check("determinant", "sec:determinant", "trivial", DetScanRecordSerializer(record).data)
                continue
            yield Check(
                "determinant",
                "sec:determinant",
                "derived",
                DetScanRecordSerializer(record).data,
                record.det_modulus,
                record.det_modulus > parameters["threshold"],
            )
        if parameters["csv"]:
            rows = [
                [*r.D, " ".join(r.characters), r.q_residue, r.det_modulus, r.precision, r.vacuous] for r in records
            ]
            write_table(DET_HEADER, rows, Path(parameters["csv"]))
