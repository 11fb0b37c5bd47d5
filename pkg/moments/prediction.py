"""Main-term predictions for the twisted fourth moment.

The prediction is the diagonal term M_{chi1,chi2,chi3,chi4}(l1, l2) plus five swap
terms: the root-number term with characters (chi3, chi4, chi1, chi2) and twists
(D1 D2 l1, D3 D4 l2), and the one-swaps chi_i <-> chi_j with twists (D_i l1, D_j l2).
"""

import logging
import math
from dataclasses import dataclass, field
from math import gcd, log

import numpy as np

from chargroup.sums import epsilon
from eulerprod.products import product_A
from lfun.lvalues import l_value
from moments.brute import brute_force_moment
from moments.exceptions import ConfluentCharacters, MomentError
from moments.family import root_number
from runs.utils import complex_fsum

logger = logging.getLogger(__name__)

SWAP_LABELS = ("(3,4|1,2)", "(1<->3)", "(1<->4)", "(2<->3)", "(2<->4)")

# (i, j) of each one-swap, 0-based
ONE_SWAPS = {
    "(1<->3)": (0, 2),
    "(1<->4)": (0, 3),
    "(2<->3)": (1, 2),
    "(2<->4)": (1, 3),
}


def _l_one(left, right, term):
    product = left * right.conj()
    if product.is_principal:
        raise ConfluentCharacters(
            f"Term {term}: L(1, {left} * conj {right}) sits on the pole of a principal character.",
            term=term,
        )
    return l_value(product, 1)


def main_term_M(chars, ell1, ell2, t=0.0, term="M"):
    """A(l1~, l2~) / (l1~^(1/2-it) l2~^(1/2+it)) times the four L(1) values."""
    a, b, c, d = chars
    l_values = [_l_one(a, c, term), _l_one(a, d, term), _l_one(b, c, term), _l_one(b, d, term)]
    g = gcd(ell1, ell2)
    x, y = ell1 // g, ell2 // g
    scale = np.exp(-(0.5 - 1j * t) * log(x) - (0.5 + 1j * t) * log(y))
    return complex(product_A(chars, x, y) * scale * np.prod(l_values))


def swap_prefactor(quadruple, i, j):
    """(D_i / D_j)^(-it) chi_i conj(chi_j)(q) eps(chi_i) eps(conj chi_j)."""
    chi_i, chi_j = quadruple.chars[i], quadruple.chars[j]
    q, t = quadruple.q, quadruple.t
    phase = np.exp(-1j * t * log(quadruple.D[i] / quadruple.D[j]))
    return complex(phase * chi_i(q) * np.conj(chi_j(q)) * epsilon(chi_i) * epsilon(chi_j.conj()))


def six_terms(quadruple):
    """The six main terms keyed by "diagonal" and the swap labels."""
    chi1, chi2, chi3, chi4 = quadruple.chars
    D1, D2, D3, D4 = quadruple.D
    ell1, ell2 = quadruple.ell
    t = quadruple.t
    terms = {"diagonal": main_term_M(quadruple.chars, ell1, ell2, t, "diagonal")}

    phase = np.exp(-1j * t * log(D1 * D2 / (D3 * D4)))
    label = SWAP_LABELS[0]
    terms[label] = complex(
        phase
        * root_number(quadruple)
        * main_term_M((chi3, chi4, chi1, chi2), D1 * D2 * ell1, D3 * D4 * ell2, t, label)
    )
    for label, (i, j) in ONE_SWAPS.items():
        order = list(quadruple.chars)
        order[i], order[j] = order[j], order[i]
        D = quadruple.D
        value = main_term_M(tuple(order), D[i] * ell1, D[j] * ell2, t, label)
        terms[label] = swap_prefactor(quadruple, i, j) * value
    return terms


def six_term_prediction(quadruple):
    return complex_fsum(six_terms(quadruple).values())


def R(chars, split=(0, 1, 2, 3)):
    """R(chi_a, chi_b, conj chi_c, conj chi_d) for split = (a, b, c, d).

    The four L(1, chi_x conj chi_y) values over the top pair {a, b} and the bottom
    pair {c, d}, divided by L(2, chi_a chi_b conj(chi_c chi_d)).
    """
    a, b, c, d = (chars[k] for k in split)
    term = "R" + "".join(str(k + 1) for k in split)
    numerator = _l_one(a, c, term) * _l_one(a, d, term) * _l_one(b, c, term) * _l_one(b, d, term)
    return complex(numerator / l_value(a * b * c.conj() * d.conj(), 2))


def untwisted_coefficients(chars, q, value=None, eps=None, sqrt=math.sqrt):
    """The six (coefficient, split) pairs of the untwisted main term.

    `value(chi, n)`, `eps(chi)` and `sqrt` default to double precision; the
    determinant scan passes high-precision versions.
    """
    value = value or (lambda chi, n: chi(n))
    eps = eps or epsilon
    bar = [chi.conj() for chi in chars]
    D = [chi.modulus for chi in chars]

    root = value(chars[0], q) * value(chars[1], q) * value(bar[2], q) * value(bar[3], q)
    root = root * eps(chars[0]) * eps(chars[1]) * eps(bar[2]) * eps(bar[3])
    dual = (
        value(bar[0], D[1]) * value(bar[1], D[0]) * value(chars[2], D[3]) * value(chars[3], D[2])
    )
    coefficients = [(1, (0, 1, 2, 3)), (root * dual / sqrt(D[0] * D[1] * D[2] * D[3]), (2, 3, 0, 1))]
    for i, j in ONE_SWAPS.values():
        k = 1 - i
        l = 5 - j
        factor = value(chars[i], q) * value(bar[j], q) * eps(chars[i]) * eps(bar[j])
        factor = factor * value(chars[k], D[j]) * value(bar[l], D[i])
        split = [0, 1, 2, 3]
        split[i], split[j] = split[j], split[i]
        coefficients.append((factor / sqrt(D[i] * D[j]), tuple(split)))
    return coefficients


def untwisted_prediction(quadruple):
    """The untwisted six-term main term, sum of coefficient * R over the six splits."""
    if quadruple.ell != (1, 1):
        raise MomentError(f"The untwisted formula needs l = (1, 1), got {quadruple.ell}.")
    terms = [
        complex(coefficient) * R(quadruple.chars, split)
        for coefficient, split in untwisted_coefficients(quadruple.chars, quadruple.q)
    ]
    return complex_fsum(terms)


@dataclass(frozen=True)
class MomentReport:
    quadruple: object
    brute_force: complex
    diagonal_term: complex
    swap_terms: dict = field(default_factory=dict)
    method: str = "auto"
    afe_tolerance: float = 0.0
    character_count: int = 0

    @property
    def prediction(self):
        return complex_fsum([self.diagonal_term, *self.swap_terms.values()])

    @property
    def residual(self):
        return self.brute_force - self.prediction

    @property
    def relative_residual(self):
        return abs(self.residual) / max(abs(self.prediction), np.finfo(float).tiny)


def moment_report(quadruple, method="auto", tolerance=None, max_terms=None, workers=None):
    brute = brute_force_moment(quadruple, method, tolerance, max_terms, workers)
    terms = six_terms(quadruple)
    diagonal = terms.pop("diagonal")
    report = MomentReport(
        quadruple, brute.value, diagonal, terms, brute.method, brute.tolerance, brute.character_count
    )
    logger.info(
        "q=%d D=%s: brute force %.10g%+.10gj, prediction %.10g%+.10gj, relative residual %.3g",
        quadruple.q,
        quadruple.D,
        report.brute_force.real,
        report.brute_force.imag,
        report.prediction.real,
        report.prediction.imag,
        report.relative_residual,
    )
    return report


def residual_trend(quadruple, qs, method="hurwitz", workers=None):
    """Moment reports over increasing q with the same D, t and twists.

    Returns the reports and the q values at which the relative residual grew.
    """
    reports = [moment_report(quadruple.replace(q=q), method, workers=workers) for q in qs]
    violations = [
        later.quadruple.q
        for earlier, later in zip(reports, reports[1:])
        if later.relative_residual > earlier.relative_residual
    ]
    if len(violations) == 1:
        logger.warning("Residual grew once, at q=%d; tolerated.", violations[0])
    elif violations:
        logger.warning("Residual grew at q in %s.", violations)
    return reports, violations
