from pathlib import Path

import numpy as np

from chargroup.characters import character_table
from mollifier.bounds import check_gate
from mollifier.coefficients import build_mollifier, power_expansion_residual
from mollifier.exceptions import CutoffOverflow, MollifierError
from mollifier.parameters import (
    lambda_residual,
    lambda_sign_changes,
    asymptotic_defaults,
    scaled_defaults,
    synthetic_spec,
)
from runs.reporting import Check, ReportCommand
from runs.serializers import MollifierSpecSerializer
from runs.utils import write_table

POWER_CASES = ((0, 3), (1, 2))


class Command(ReportCommand):
    help = "Mollifier parameters, coefficients and the M_j^k expansion identity."
    command_name = "mollifier"
    defaults = {"q": 101, "k": 6, "mode": "scaled", "characters": 10, "tolerance": 1e-10, "coefficients": None}

    def add_parameters(self, parser):
        parser.add_argument("--q", type=int)
        parser.add_argument("--k", type=int)
        parser.add_argument("--asymptotic", dest="mode", action="store_const", const="asymptotic")
        parser.add_argument("--scaled", dest="mode", action="store_const", const="scaled")
        parser.add_argument("--characters", type=int, help="Characters per expansion check")
        parser.add_argument("--tolerance", type=float)
        parser.add_argument("--coefficients", help="Write the coefficients of M as CSV")

    def checks(self, parameters, seed, workers):
        spec = self.build_spec(parameters)
        residual = abs(lambda_residual(spec.lam))
        changes = lambda_sign_changes()
        yield Check(
            "lambda",
            "def:lambda",
            "derived",
            {"lambda": spec.lam, "sign_changes": changes},
            residual,
            residual < 1e-12 and changes == 1,
        )
        yield self.gate(spec)
        yield self.polynomial(spec, parameters["coefficients"])

        synthetic = synthetic_spec()
        poly = build_mollifier(synthetic)
        table = character_table(synthetic.q)
        rng = np.random.default_rng(seed)
        for j, k in POWER_CASES:
            chars = [table[i] for i in rng.choice(len(table), size=parameters["characters"], replace=False)]
            worst = max(power_expansion_residual(synthetic, poly, j, k, chi, 0.3) for chi in chars)
            yield Check(
                "power_expansion",
                "lemma:power-expansion",
                "derived",
                {"q": synthetic.q, "block": j, "k": k, "characters": [chi.label for chi in chars]},
                worst,
                worst < parameters["tolerance"],
            )

    def build_spec(self, parameters):
        if parameters["mode"] == "asymptotic":
            return asymptotic_defaults(parameters["q"], parameters["k"])
        if parameters["mode"] == "scaled":
            return scaled_defaults(parameters["q"], parameters["k"])
        raise MollifierError(f"Unknown parameter mode {parameters['mode']!r}.")

    def gate(self, spec):
        payload = MollifierSpecSerializer(spec).data
        try:
            margin = check_gate(spec)
        except MollifierError as exc:
            payload["error"] = str(exc)
            return Check("spec", "lemma:parameters", "cited", payload, spec.lemma_margin(), False)
        return Check("spec", "lemma:parameters", "cited", payload, margin)

    def polynomial(self, spec, path):
        try:
            poly = build_mollifier(spec)
        except CutoffOverflow as exc:
            # over the term budget: reported, not a failed assertion
            return Check("polynomial", "def:mollifier", "derived", {"overflow": str(exc)})
        if path:
            write_table(["n", "re", "im"], [[int(n), v.real, v.imag] for n, v in zip(poly.support, poly.values.astype(complex))], Path(path))
        return Check(
            "polynomial",
            "def:mollifier",
            "derived",
            {
                "terms": len(poly),
                "cutoff": int(poly.cutoff),
                "block_sizes": [len(support) for support, _ in poly.blocks],
                "max_coefficient": float(np.abs(poly.values).max()),
            },
        )
