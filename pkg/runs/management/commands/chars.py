from math import isqrt, sqrt

from sympy import primerange

from chargroup.characters import character_table, quadratic_character
from chargroup.sums import epsilon, gauss_sum
from moments.family import congruence_form, orthogonality_sum, phi_plus
from runs.reporting import Check, ReportCommand
from runs.serializers import ComplexField

GAUSS_TOLERANCE = 1e-10


class Command(ReportCommand):
    help = "List the characters of a modulus, or check orthogonality and Gauss sums."
    command_name = "chars"
    defaults = {"modulus": None, "max_prime": 101, "max_gauss_modulus": 200}

    def add_parameters(self, parser):
        parser.add_argument("--modulus", type=int, help="List the characters modulo this integer")
        parser.add_argument("--max-prime", type=int, help="Orthogonality for primes 5 <= q <= this")
        parser.add_argument("--max-gauss-modulus", type=int, help="|tau(chi)| = sqrt(m) for m <= this")

    def checks(self, parameters, seed, workers):
        if parameters["modulus"] is not None:
            yield from self.listing(parameters["modulus"])
            return
        for q in primerange(5, parameters["max_prime"] + 1):
            yield self.orthogonality(q)
        for m in range(1, parameters["max_gauss_modulus"] + 1):
            yield self.gauss_moduli(m)
        tau = gauss_sum(quadratic_character(5))
        residual = abs(tau - sqrt(5))
        yield Check(
            "gauss_sum",
            "def:gauss-sum",
            "trivial",
            {"modulus": 5, "character": "quadratic", "tau": ComplexField().to_representation(tau)},
            residual,
            residual < 1e-12,
        )

    def listing(self, modulus):
        field = ComplexField()
        for chi in character_table(modulus):
            payload = {
                "label": chi.label,
                "order": chi.order,
                "parity": "even" if chi.is_even else "odd",
                "conductor": chi.conductor,
                "primitive": chi.is_primitive,
            }
            if chi.is_primitive:
                payload["epsilon"] = field.to_representation(epsilon(chi))
            yield Check("character", "def:character", "trivial", payload)

    def orthogonality(self, q):
        # the sum depends on m n^-1 mod q only, so n = 1 covers every residue class
        mismatches = sum(orthogonality_sum(q, m, 1) != congruence_form(q, m, 1) for m in range(1, q))
        count = phi_plus(q)
        passed = mismatches == 0 and count == (q - 1) // 2 - 1
        return Check(
            "orthogonality",
            "eq:orthogonality",
            "derived",
            {"q": q, "phi_plus": count, "mismatches": mismatches},
            float(mismatches),
            passed,
        )

    def gauss_moduli(self, m):
        primitive = [chi for chi in character_table(m) if chi.is_primitive]
        worst = max((abs(abs(gauss_sum(chi)) - sqrt(m)) for chi in primitive), default=0.0)
        return Check(
            "gauss_modulus",
            "def:gauss-sum",
            "derived",
            {"modulus": m, "primitive_count": len(primitive), "square_modulus": isqrt(m) ** 2 == m},
            worst,
            worst < GAUSS_TOLERANCE,
        )
