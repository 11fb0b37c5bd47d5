from math import gcd

import numpy as np

from chargroup.characters import character_table
from chargroup.sums import verify_mult_k
from eulerprod.cfactors import fuzz_identity, fuzz_second_identity, random_configuration
from eulerprod.products import diagonal_envelope, diagonal_series, factor_F, factor_H
from lfun.lvalues import l_value
from runs.reporting import Check, ReportCommand
from runs.serializers import ComplexField, FuzzRecordSerializer, MultKResidualSerializer


class Command(ReportCommand):
    help = "Euler-product identities, hybrid Kloosterman multiplicativity and the diagonal factorisation."
    command_name = "verify_euler"
    defaults = {
        "count": 100,
        "mult_k_count": 50,
        "diagonal_count": 20,
        "diagonal_terms": 20000,
        "tolerance": 1e-9,
    }

    def add_parameters(self, parser):
        parser.add_argument("--count", type=int, help="Random configurations for both identity lemmas")
        parser.add_argument("--mult-k-count", type=int)
        parser.add_argument("--diagonal-count", type=int)
        parser.add_argument("--diagonal-terms", type=int)
        parser.add_argument("--tolerance", type=float)

    def checks(self, parameters, seed, workers):
        tolerance = parameters["tolerance"]
        for record in fuzz_identity(parameters["count"], seed):
            yield Check(
                "identity",
                "lemma:identity",
                "derived",
                FuzzRecordSerializer(record).data,
                record.residual,
                record.residual < tolerance,
            )
        for record in fuzz_second_identity(parameters["count"], seed):
            yield Check(
                "second_identity",
                "lemma:second-identity",
                "derived",
                FuzzRecordSerializer(record).data,
                record.residual,
                record.residual < tolerance,
            )
        rng = np.random.default_rng(seed)
        yield from self.mult_k(rng, parameters["mult_k_count"], tolerance)
        yield from self.diagonal(rng, parameters["diagonal_count"], parameters["diagonal_terms"])

    def mult_k(self, rng, count, tolerance):
        done = 0
        while done < count:
            c, d = (int(v) for v in rng.integers(1, 30, size=2))
            if gcd(c, d) != 1:
                continue
            table_c, table_d = character_table(c), character_table(d)
            phi1 = table_c[int(rng.integers(len(table_c)))]
            phi2 = table_d[int(rng.integers(len(table_d)))]
            a, b = (int(v) for v in rng.integers(-20, 20, size=2))
            result = verify_mult_k(phi1, phi2, a, b)
            payload = {"phi1": phi1.label, "phi2": phi2.label, "a": a, "b": b}
            payload.update(MultKResidualSerializer(result).data)
            yield Check("mult_k", "lemma:mult-k", "derived", payload, result.residual, result.residual < tolerance)
            done += 1

    def diagonal(self, rng, count, terms):
        done = 0
        while done < count:
            chars, ell1, ell2 = random_configuration(rng, max_twist=6)
            if gcd(ell1, ell2) != 1:
                continue
            l_product = 1
            for left in chars[:2]:
                for right in chars[2:]:
                    l_product *= l_value(left * right.conj(), 2)
            predicted = factor_F(ell1, ell2, 2, chars) * factor_H(2, chars, complete_tail=True).value * l_product
            series = diagonal_series(chars, ell1, ell2, 2, terms)
            residual = abs(series - predicted)
            envelope = diagonal_envelope(ell1, ell2, 2, terms)
            field = ComplexField()
            yield Check(
                "diagonal",
                "sec:diagonal",
                "derived",
                {
                    "chars": [chi.label for chi in chars],
                    "ell": [ell1, ell2],
                    "series": field.to_representation(series),
                    "predicted": field.to_representation(predicted),
                    "envelope": envelope,
                },
                residual,
                residual < envelope + 1e-9,
            )
            done += 1
