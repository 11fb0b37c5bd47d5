from chargroup.quadruple import Quadruple
from mollifier.holder import boundedness_probe, holder_check
from mollifier.parameters import scaled_defaults
from runs.reporting import Check, ReportCommand, int_list
from runs.serializers import HolderCheckSerializer, MollifierSpecSerializer


class Command(ReportCommand):
    help = "Hoelder lower bound for the number of simultaneously non-vanishing mollified values."
    command_name = "holder_demo"
    defaults = {"q": 101, "D": [1, 5, 7, 11], "t": 0.0, "k": 6, "choice": [0, 0, 0, 0], "probe": False}

    def add_parameters(self, parser):
        parser.add_argument("--q", type=int)
        parser.add_argument("--D", type=int_list, help="D1,D2,D3,D4")
        parser.add_argument("--t", type=float)
        parser.add_argument("--k", type=int, help="Moment order the mollifier is scaled for")
        parser.add_argument("--choice", type=int_list)
        parser.add_argument("--probe", action="store_const", const=True, help="Average |LM|^k for each chi_j")

    def checks(self, parameters, seed, workers):
        quadruple = Quadruple.build(
            parameters["q"], tuple(parameters["D"]), parameters["t"], choice=tuple(parameters["choice"])
        )
        spec = scaled_defaults(quadruple.q, parameters["k"])
        result = holder_check(quadruple, spec, workers)
        payload = HolderCheckSerializer(result).data
        payload["spec"] = MollifierSpecSerializer(spec).data
        yield Check("holder", "eq:holder", "derived", payload, None, result.holds)
        if parameters["probe"]:
            for psi in quadruple.chars:
                average = boundedness_probe(quadruple.q, spec.k, psi, spec, quadruple.t, workers)
                yield Check(
                    "probe",
                    "prop:upper-bound",
                    "derived",
                    {"q": quadruple.q, "k": spec.k, "psi": psi.label, "average": average},
                )
