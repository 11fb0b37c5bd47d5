"""Mollified family sums: the sixth-moment Hoelder inequality and the k-th moment probe."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from lfun.lvalues import l_value
from mollifier.coefficients import build_mollifier, evaluate_M
from mollifier.exceptions import MollifierError
from mollifier.parameters import scaled_defaults
from moments.family import enumerate_even_primitive
from runs.utils import complex_fsum, ordered_map

logger = logging.getLogger(__name__)

# relative slack when comparing the two sides
HOLDER_SLACK = 1e-9


def mollified_pair(chi, poly, t=0.0):
    """(L(1/2+it, chi), M(1/2+it, chi))."""
    return complex(l_value(chi, 0.5 + 1j * t)), evaluate_M(poly, chi, t)


def _mollified_row(task):
    chi, twists, poly, t = task
    return tuple(mollified_pair(chi * twist, poly, t) for twist in twists)


@dataclass(frozen=True)
class HolderCheck:
    q: int
    D: tuple
    t: float
    nonvanishing: int
    character_count: int
    sixth_moments: tuple
    lhs: float
    rhs: float

    @property
    def holds(self):
        return self.lhs >= self.rhs * (1 - HOLDER_SLACK)


def holder_check(quadruple, spec=None, workers=None):
    """Both sides of N^2 prod_j sum |LM(chi chi_j)|^6 >= |sum LM1 LM2 conj(LM3 LM4)|^6.

    N counts the characters at which none of the four central values vanish.
    """
    q = quadruple.q
    spec = scaled_defaults(q, 6) if spec is None else spec
    if spec.q != q:
        raise MollifierError(f"The mollifier is built for q={spec.q}, not q={q}.")
    poly = build_mollifier(spec)
    family = enumerate_even_primitive(q)
    tasks = [(chi, quadruple.chars, poly, quadruple.t) for chi in family]
    pairs = ordered_map(_mollified_row, tasks, workers)
    nonvanishing = sum(all(abs(l) > 0 for l, _ in row) for row in pairs)
    rows = [tuple(l * m for l, m in row) for row in pairs]
    sixth = tuple(math.fsum(abs(row[j]) ** 6 for row in rows) for j in range(4))
    cross = complex_fsum(row[0] * row[1] * np.conj(row[2] * row[3]) for row in rows)
    result = HolderCheck(
        q,
        quadruple.D,
        quadruple.t,
        nonvanishing,
        len(family),
        sixth,
        nonvanishing**2 * math.prod(sixth),
        abs(cross) ** 6,
    )
    logger.info(
        "hoelder q=%d D=%s: N=%d/%d lhs=%.6g rhs=%.6g",
        q,
        quadruple.D,
        nonvanishing,
        len(family),
        result.lhs,
        result.rhs,
    )
    return result


def _probe_term(task):
    chi, psi, poly, t, k = task
    l, m = mollified_pair(chi * psi, poly, t)
    return abs(l * m) ** k


def boundedness_probe(q, k, psi, spec=None, t=0.0, workers=None):
    """(1/phi+(q)) sum over the family of |L(1/2+it, chi psi) M(1/2+it, chi psi)|^k."""
    spec = scaled_defaults(q, k) if spec is None else spec
    poly = build_mollifier(spec)
    family = enumerate_even_primitive(q)
    terms = ordered_map(_probe_term, [(chi, psi, poly, t, k) for chi in family], workers)
    average = math.fsum(terms) / len(family)
    logger.info("probe q=%d k=%d psi=%s: %.6g", q, k, psi, average)
    return average
