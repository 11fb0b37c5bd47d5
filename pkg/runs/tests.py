import csv
import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from chargroup.quadruple import Quadruple
from moments.determinant import DetScanRecord
from moments.prediction import MomentReport
from runs.management.commands import suite as suite_command
from runs.management.commands.det_scan import sort_key
from runs.models import Run
from runs.schema import ensure_schema, needs_schema
from runs.serializers import ComplexField, MomentReportSerializer, QuadrupleSerializer
from runs.utils import RESIDUAL_HEADER, residual_rows, write_table


def sample_report():
    quadruple = Quadruple.build(13, (1, 5, 7, 1), t=0.25, ell=(2, 3), choice=(0, 0, 1, 0))
    swaps = {"(1,3)": 0.1 - 0.2j, "(1,4)": 1 / 3 + 2j / 7, "12<->34": -0.5e-17 + 1e300j}
    return MomentReport(quadruple, 1.25 + 1 / 3j, 0.7 - 0.1j, swaps, "hurwitz", 1e-13, 5)


class SerializerTests(SimpleTestCase):
    def test_complex_field(self):
        field = ComplexField()
        value = 0.1 + 1j / 3
        data = json.loads(json.dumps(field.to_representation(value)))
        self.assertEqual(data, {"re": 0.1, "im": 1 / 3})
        self.assertEqual(field.to_internal_value(data), value)

    def test_moment_report_round_trip(self):
        report = sample_report()
        text = json.dumps(MomentReportSerializer(report).data, sort_keys=True)
        serializer = MomentReportSerializer(data=json.loads(text))
        self.assertTrue(serializer.is_valid(), serializer.errors)
        restored = serializer.save()
        self.assertEqual(restored, report)
        self.assertEqual(restored.prediction, report.prediction)

    def test_prediction_is_serialized(self):
        data = MomentReportSerializer(sample_report()).data
        self.assertEqual(set(data["swap_terms"]), {"(1,3)", "(1,4)", "12<->34"})
        self.assertEqual(ComplexField().to_internal_value(data["prediction"]), sample_report().prediction)

    def test_invalid_complex(self):
        data = MomentReportSerializer(sample_report()).data
        data["brute_force"] = {"re": 1.0}
        serializer = MomentReportSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn("brute_force", serializer.errors)

    def test_invalid_quadruple(self):
        data = dict(MomentReportSerializer(sample_report()).data["quadruple"])
        data["q"] = 12
        self.assertFalse(QuadrupleSerializer(data=data).is_valid())

    def test_residual_table_header(self):
        with tempfile.TemporaryDirectory() as directory:
            path = write_table(RESIDUAL_HEADER, residual_rows([sample_report()]), Path(directory) / "r.csv")
            with path.open() as handle:
                rows = list(csv.reader(handle))
        self.assertEqual(rows[0], ["q", "D1", "D2", "D3", "D4", "t", "|bruteforce|", "|prediction|", "relResidual"])
        self.assertEqual(rows[1][:5], ["13", "1", "5", "7", "1"])

    def test_det_scan_ordering(self):
        records = [
            DetScanRecord((1, 3, 7, 11), ("b",), 4, 1.0),
            DetScanRecord((1, 3, 5, 7), ("b",), 2, 1.0),
            DetScanRecord((1, 3, 5, 7), ("a",), 8, 1.0),
            DetScanRecord((1, 3, 5, 7), ("a",), 1, 1.0),
            DetScanRecord((1, 3, 5, 22), (), None, 0.0, vacuous=True),
        ]
        ordered = sorted(records, key=sort_key)
        self.assertEqual(
            [(r.D[3], r.characters, r.q_residue) for r in ordered],
            [(7, ("a",), 1), (7, ("a",), 8), (7, ("b",), 2), (22, (), None), (11, ("b",), 4)],
        )


class CommandTests(TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        self.root = Path(self.directory.name)

    def run_command(self, name, out="report.json", **options):
        path = self.root / out
        call_command(name, out=str(path), stdout=StringIO(), **options)
        return json.loads(path.read_text())

    def test_character_listing(self):
        report = self.run_command("chars", modulus=12, workers=1)
        self.assertEqual(report["schema_version"], 1)
        self.assertEqual(report["status"], "passed")
        self.assertEqual(len(report["records"]), 4)
        primitive = [r for r in report["records"] if r["payload"]["primitive"]]
        self.assertEqual([r["payload"]["conductor"] for r in primitive], [12])
        run = Run.objects.get()
        self.assertEqual(run.status, "passed")
        self.assertEqual(run.records.count(), 4)
        self.assertIsNotNone(run.finished_at)

    def test_character_checks(self):
        report = self.run_command("chars", max_prime=23, max_gauss_modulus=40, workers=1)
        kinds = [r["kind"] for r in report["records"]]
        self.assertEqual(kinds.count("orthogonality"), 7)
        self.assertEqual(kinds.count("gauss_modulus"), 40)
        self.assertTrue(all(r["passed"] for r in report["records"]))
        self.assertTrue(all(r["anchor"] and r["provenance_tag"] for r in report["records"]))

    def test_report_is_independent_of_workers(self):
        options = {"q": 13, "D": [1, 5, 7, 11], "t": 0.2, "method": "hurwitz", "seed": 5}
        self.run_command("moment", out="one.json", workers=1, **options)
        self.run_command("moment", out="two.json", workers=2, **options)
        self.assertEqual((self.root / "one.json").read_bytes(), (self.root / "two.json").read_bytes())
        self.assertEqual(set(Run.objects.values_list("workers", flat=True)), {1, 2})

    def test_moment_report_and_table(self):
        report = self.run_command(
            "moment", q=13, D=[1, 5, 7, 11], method="hurwitz", csv=str(self.root / "t.csv"), workers=1
        )
        payload = report["records"][0]["payload"]
        self.assertEqual(len(payload["swap_terms"]) + 1, 6)
        restored = MomentReportSerializer(data=payload)
        self.assertTrue(restored.is_valid(), restored.errors)
        self.assertEqual(restored.save().character_count, 5)
        with (self.root / "t.csv").open() as handle:
            self.assertEqual(next(csv.reader(handle)), RESIDUAL_HEADER)

    def test_config_precedence(self):
        config = self.root / "config.json"
        config.write_text(json.dumps({"q": 7, "D": [1, 5, 7, 13], "method": "hurwitz", "seed": 3}))
        report = self.run_command("moment", config=str(config), q=11, workers=1)
        self.assertEqual(report["parameters"]["q"], 11)
        self.assertEqual(report["parameters"]["D"], [1, 5, 7, 13])
        self.assertEqual(report["parameters"]["ell"], [1, 1])
        self.assertEqual(report["seed"], 3)

    def test_unknown_config_key(self):
        config = self.root / "config.json"
        config.write_text(json.dumps({"modulus": 7}))
        with self.assertRaises(CommandError) as raised:
            self.run_command("moment", config=str(config))
        self.assertEqual(raised.exception.returncode, 2)

    def test_configuration_error(self):
        with self.assertRaises(CommandError) as raised:
            self.run_command("moment", q=12, workers=1)
        self.assertEqual(raised.exception.returncode, 2)
        self.assertEqual(Run.objects.get().status, "error")

    def test_failed_assertion(self):
        with self.assertRaises(CommandError) as raised:
            self.run_command(
                "fe_check", count=2, max_modulus=20, tolerance=-1.0, grh_moduli=[5], grh_t=[0.0], grh_x=[1e3]
            )
        self.assertEqual(raised.exception.returncode, 1)
        self.assertIn("functional_equation", str(raised.exception))
        report = json.loads((self.root / "report.json").read_text())
        self.assertEqual(report["status"], "failed")
        run = Run.objects.get()
        self.assertEqual(run.status, "failed")
        self.assertEqual(run.failed_records().count(), 2)

    def test_cyclotomic(self):
        report = self.run_command(
            "cyclotomic", max_order=6, m=[2, 3], floor_samples=500, max_prime=12, max_conductor=15, seed=1
        )
        kinds = [r["kind"] for r in report["records"]]
        self.assertEqual(kinds, ["cyclotomic_scan"] * 2 + ["analytic_floor"] + ["small_prime"] * 5)
        self.assertGreater(report["records"][0]["payload"]["minimum"], 0)
        self.assertEqual(report["status"], "passed")

    def test_cyclotomic_without_small_primes(self):
        report = self.run_command("cyclotomic", max_order=6, m=[2], floor_samples=100, small_primes=False, seed=1)
        self.assertNotIn("small_prime", [r["kind"] for r in report["records"]])

    def test_malformed_voronoi_configs(self):
        configs = self.root / "voronoi.json"
        configs.write_text(json.dumps([{"a": 1, "c": 3}]))
        with self.assertRaises(CommandError) as raised:
            self.run_command("verify_voronoi", configs=str(configs))
        self.assertEqual(raised.exception.returncode, 2)

    def test_asymptotic_mollifier(self):
        report = self.run_command("mollifier", q=101, mode="asymptotic", characters=2, seed=2)
        kinds = {r["kind"]: r for r in report["records"]}
        self.assertEqual(kinds["spec"]["payload"]["mode"], "asymptotic")
        self.assertGreater(kinds["spec"]["residual"], 0)
        self.assertLess(kinds["lambda"]["residual"], 1e-12)
        self.assertEqual(report["status"], "passed")

    def test_suite_subset(self):
        desk = {"cyclotomic": {"max_order": 6, "m": [2], "floor_samples": 100, "small_primes": False}}
        with mock.patch.dict(suite_command.DESK, desk):
            report = self.run_command("suite", only=["cyclotomic"], report_dir=str(self.root), seed=9, workers=1)
        self.assertEqual([r["kind"] for r in report["records"]], ["cyclotomic"])
        self.assertTrue((self.root / "suite-9" / "cyclotomic.json").exists())
        self.assertEqual(set(Run.objects.values_list("command", flat=True)), {"suite", "cyclotomic"})

    def test_suite_rejects_unknown_command(self):
        with self.assertRaises(CommandError) as raised:
            self.run_command("suite", only=["plot"])
        self.assertEqual(raised.exception.returncode, 2)


class RunTests(TestCase):
    def test_failing_record_marks_run_failed(self):
        run = Run.objects.create(command="chars", seed=1)
        run.add_record("gauss_modulus", "def:gauss-sum", "derived", {}, 0.0)
        run.refresh_from_db()
        self.assertEqual(run.status, "pending")
        run.add_record("gauss_modulus", "def:gauss-sum", "derived", {}, 1.0, passed=False)
        run.refresh_from_db()
        self.assertEqual(run.status, "failed")
        run.finish()
        self.assertEqual(run.status, "failed")
        self.assertEqual([r.index for r in run.records.all()], [0, 1])

    def test_runs_list(self):
        Run.objects.create(command="det_scan", seed=4, status="passed", output_path="/tmp/d.json")
        output = StringIO()
        call_command("runs_list", stdout=output)
        self.assertIn("det_scan", output.getvalue())
        self.assertIn("/tmp/d.json", output.getvalue())


class SchemaTests(SimpleTestCase):
    def test_recording_commands_need_schema(self):
        self.assertTrue(needs_schema(["manage.py", "det_scan", "--seed", "1"]))
        self.assertTrue(needs_schema(["manage.py", "runs_list"]))
        self.assertFalse(needs_schema(["manage.py", "test"]))
        self.assertFalse(needs_schema(["manage.py"]))

    def test_ensure_schema_migrates(self):
        with mock.patch("runs.schema.call_command") as called:
            ensure_schema()
        called.assert_called_once_with("migrate", interactive=False, verbosity=0)
