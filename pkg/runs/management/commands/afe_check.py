from chargroup.quadruple import Quadruple
from lfun.afe import afe_expansion, afe_grid, direct_product
from moments.family import enumerate_even_primitive
from runs.reporting import Check, ReportCommand, int_list, int_tuples


class Command(ReportCommand):
    help = "Four-fold approximate functional equation against the direct L-value product."
    command_name = "afe_check"
    defaults = {"q": [11, 13, 17], "D": [[1, 1, 1, 1], [1, 5, 7, 1]], "t": 0.0, "ell": [1, 1], "tolerance": 1e-7}

    def add_parameters(self, parser):
        parser.add_argument("--q", type=int_list, help="Prime moduli, e.g. 11,13,17")
        parser.add_argument("--D", type=int_tuples, help="Quadruples, e.g. '1,1,1,1;1,5,7,1'")
        parser.add_argument("--t", type=float)
        parser.add_argument("--l", dest="ell", type=int_list, help="Twists l1,l2")
        parser.add_argument("--tolerance", type=float)

    def checks(self, parameters, seed, workers):
        for q in parameters["q"]:
            for D in parameters["D"]:
                quadruple = Quadruple.build(q, tuple(D), parameters["t"], tuple(parameters["ell"]))
                grid = afe_grid(quadruple)
                worst, terms = 0.0, 0
                for chi in enumerate_even_primitive(q):
                    expansion = afe_expansion(quadruple, chi, grid=grid)
                    worst = max(worst, abs(expansion.value - direct_product(quadruple, chi)))
                    terms = expansion.terms
                yield Check(
                    "afe",
                    "lemma:afe",
                    "derived",
                    {"q": q, "D": list(D), "t": quadruple.t, "ell": list(quadruple.ell), "terms": terms},
                    worst,
                    worst < parameters["tolerance"],
                )
