import numpy as np

from chargroup.characters import even_primitive_characters
from lfun.grh import grh_log_bound_gap
from lfun.lvalues import fe_residual
from runs.reporting import Check, ReportCommand, float_list, int_list

S_GRID = (0.0, 0.3, -0.4 + 1j, 0.25 - 2j, 1.1 + 0.5j)


class Command(ReportCommand):
    help = "Functional equation of Lambda(s, chi) and the GRH log-bound diagnostic."
    command_name = "fe_check"
    defaults = {
        "count": 20,
        "max_modulus": 100,
        "tolerance": 1e-9,
        "grh_moduli": [5, 13, 29],
        "grh_t": [0.0, 1.0],
        "grh_x": [1e3, 1e4],
        "grh_floor": -0.1,
    }

    def add_parameters(self, parser):
        parser.add_argument("--count", type=int, help="Random even primitive characters to test")
        parser.add_argument("--max-modulus", type=int)
        parser.add_argument("--tolerance", type=float)
        parser.add_argument("--grh-moduli", type=int_list)
        parser.add_argument("--grh-t", type=float_list)
        parser.add_argument("--grh-x", type=float_list)
        parser.add_argument("--grh-floor", type=float)

    def checks(self, parameters, seed, workers):
        pool = [chi for m in range(5, parameters["max_modulus"] + 1) for chi in even_primitive_characters(m)]
        rng = np.random.default_rng(seed)
        count = min(parameters["count"], len(pool))
        for index in sorted(int(i) for i in rng.choice(len(pool), size=count, replace=False)):
            chi = pool[index]
            residual = max(fe_residual(chi, s) for s in S_GRID)
            yield Check(
                "functional_equation",
                "eq:fe",
                "derived",
                {"character": chi.label, "s": [[s.real, s.imag] for s in map(complex, S_GRID)]},
                residual,
                residual < parameters["tolerance"],
            )
        for m in parameters["grh_moduli"]:
            for chi in even_primitive_characters(m):
                for t in parameters["grh_t"]:
                    for x in parameters["grh_x"]:
                        gap = grh_log_bound_gap(chi, t, x)
                        yield Check(
                            "log_bound",
                            "lemma:log-bound",
                            "derived",
                            {"character": chi.label, "t": t, "x": x, "gap": gap},
                            None,
                            gap >= parameters["grh_floor"],
                        )
