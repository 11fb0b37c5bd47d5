import numpy as np

from eulerprod.cyclotomic import analytic_floor, cyclotomic_scan, roots_of_unity, small_prime_scan, up_factor
from runs.reporting import Check, ReportCommand, int_list
from runs.serializers import ScanResultSerializer


class Command(ReportCommand):
    help = "Lower bounds for |1 - (a+b)(c+d)/m - abcd/m^2| over roots of unity."
    command_name = "cyclotomic"
    defaults = {
        "max_order": 24,
        "m": [2, 3, 4],
        "floor_m": [5],
        "floor_samples": 20000,
        "small_primes": True,
        "max_prime": 64,
        "max_conductor": 50,
    }

    def add_parameters(self, parser):
        parser.add_argument("--max-order", type=int, help="Largest root-of-unity order in the exhaustive scan")
        parser.add_argument("--m", type=int_list, help="Moduli for the exhaustive scan, e.g. 2,3,4")
        parser.add_argument("--floor-m", type=int_list, help="Moduli sampled against the analytic floor")
        parser.add_argument("--floor-samples", type=int)
        parser.add_argument("--small-primes", dest="small_primes", action="store_const", const=True)
        parser.add_argument("--no-small-primes", dest="small_primes", action="store_const", const=False)
        parser.add_argument("--max-prime", type=int)
        parser.add_argument("--max-conductor", type=int)

    def checks(self, parameters, seed, workers):
        for result in cyclotomic_scan(parameters["max_order"], parameters["m"]):
            payload = ScanResultSerializer(result).data
            payload["max_order"] = parameters["max_order"]
            yield Check("cyclotomic_scan", "lemma:cyclotomic", "derived", payload, None, result.minimum > 0)

        angles = np.array([float(a) for a in roots_of_unity(parameters["max_order"])])
        rng = np.random.default_rng(seed)
        for m in parameters["floor_m"]:
            samples = np.exp(2j * np.pi * rng.choice(angles, size=(4, parameters["floor_samples"])))
            found = float(np.abs(up_factor(m, samples)).min())
            floor = analytic_floor(m)
            yield Check(
                "analytic_floor",
                "lemma:cyclotomic",
                "derived",
                {"modulus": m, "floor": floor, "sampled_minimum": found, "samples": parameters["floor_samples"]},
                None,
                found >= floor - 1e-12,
            )

        if parameters["small_primes"]:
            for result in small_prime_scan(parameters["max_prime"], parameters["max_conductor"]):
                yield Check(
                    "small_prime",
                    "lemma:cyclotomic",
                    "derived",
                    ScanResultSerializer(result).data,
                    None,
                    result.minimum > 0,
                )
