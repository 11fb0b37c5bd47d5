from pathlib import Path

from django.conf import settings

from chargroup.quadruple import Quadruple
from moments.brute import brute_force_moment, resolve_method
from moments.prediction import moment_report, residual_trend
from runs.reporting import Check, ReportCommand, int_list
from runs.serializers import ComplexField, MomentReportSerializer
from runs.utils import RESIDUAL_HEADER, residual_rows, write_table

CROSS_CHECK_TOLERANCE = 1e-6


class Command(ReportCommand):
    help = "Twisted fourth moment: brute force against the six-term prediction."
    command_name = "moment"
    defaults = {
        "q": 101,
        "D": [1, 5, 7, 11],
        "t": 0.0,
        "ell": [1, 1],
        "choice": [0, 0, 0, 0],
        "method": "auto",
        "trend": [],
        "cross_check": False,
        "csv": None,
    }

    def add_parameters(self, parser):
        parser.add_argument("--q", type=int)
        parser.add_argument("--D", type=int_list, help="D1,D2,D3,D4")
        parser.add_argument("--t", type=float)
        parser.add_argument("--l", dest="ell", type=int_list, help="Twists l1,l2")
        parser.add_argument("--choice", type=int_list, help="Index of the even primitive character per D_j")
        parser.add_argument("--method", choices=["auto", "afe", "hurwitz"])
        parser.add_argument("--trend", type=int_list, help="Further q values for the residual trend")
        parser.add_argument(
            "--cross-check", action="store_const", const=True, help="Compare the AFE and Hurwitz paths"
        )
        parser.add_argument("--csv", help="Residual table path")

    def checks(self, parameters, seed, workers):
        quadruple = Quadruple.build(
            parameters["q"],
            tuple(parameters["D"]),
            parameters["t"],
            tuple(parameters["ell"]),
            tuple(parameters["choice"]),
        )
        report = moment_report(quadruple, parameters["method"], workers=workers)
        reports = [report]
        yield Check(
            "moment_report",
            "thm:twisted-first",
            "derived",
            MomentReportSerializer(report).data,
            report.relative_residual,
        )
        if parameters["cross_check"]:
            yield self.cross_check(quadruple, report, workers)
        if parameters["trend"]:
            trend, violations = residual_trend(quadruple, parameters["trend"], parameters["method"], workers)
            reports.extend(trend)
            qs = [r.quadruple.q for r in trend]
            yield Check(
                "residual_trend",
                "thm:twisted-first",
                "derived",
                {"q": qs, "relative_residuals": [r.relative_residual for r in trend], "violations": violations},
                None,
                len(violations) <= 1,
            )
        if parameters["csv"]:
            write_table(RESIDUAL_HEADER, residual_rows(reports), Path(parameters["csv"]))

    def cross_check(self, quadruple, report, workers):
        other = "hurwitz" if report.method == "afe" else "afe"
        if other == "afe" and resolve_method(quadruple, "auto") != "afe":
            budget = settings.NUMERICS["AFE_MAX_TERMS"]
            return Check(
                "method_cross_check",
                "lemma:afe",
                "derived",
                {"methods": [report.method, other], "skipped": f"AFE needs more than {budget} terms"},
            )
        value = brute_force_moment(quadruple, other, workers=workers).value
        residual = abs(value - report.brute_force) / max(1.0, abs(report.brute_force))
        return Check(
            "method_cross_check",
            "lemma:afe",
            "derived",
            {"methods": [report.method, other], "other": ComplexField().to_representation(value)},
            residual,
            residual < CROSS_CHECK_TOLERANCE,
        )
