"""Brute-force twisted fourth moments over the even primitive family.

I(l1, l2) = (1/phi+(q)) sum over even primitive chi of
    L(1/2+it, chi chi1) L(1/2+it, chi chi2) L(1/2-it, conj(chi chi3)) L(1/2-it, conj(chi chi4))
    * chi(l1) conj(chi)(l2)
"""

import logging
from dataclasses import dataclass
from math import isqrt

import numpy as np
from django.conf import settings

from chargroup.sums import dirichlet_convolution
from lfun.afe import afe_expansion, afe_grid, afe_term_count, direct_product
from lfun.exceptions import LFunctionError
from moments.exceptions import MomentError
from moments.family import enumerate_even_primitive
from runs.utils import complex_fsum, ordered_map

logger = logging.getLogger(__name__)

METHODS = ("afe", "hurwitz", "auto")


@dataclass(frozen=True)
class BruteForceMoment:
    value: complex
    method: str
    character_count: int
    tolerance: float

    def __complex__(self):
        return complex(self.value)


def resolve_method(quadruple, method="auto", tolerance=None, max_terms=None):
    """Pick the evaluation path; "auto" takes the AFE whenever it fits the term budget."""
    if method not in METHODS:
        raise MomentError(f"Unknown moment method {method!r}; expected one of {METHODS}.")
    if method != "auto":
        return method
    max_terms = settings.NUMERICS["AFE_MAX_TERMS"] if max_terms is None else max_terms
    return "afe" if afe_term_count(quadruple, tolerance) <= max_terms else "hurwitz"


def _character_term(task):
    quadruple, chi, method, grid = task
    ell1, ell2 = quadruple.ell
    try:
        if method == "afe":
            value = afe_expansion(quadruple, chi, grid=grid).value
        else:
            value = direct_product(quadruple, chi)
    except LFunctionError as exc:
        raise MomentError(f"Four-fold product failed at {chi}: {exc}") from exc
    logger.debug("moment q=%d: %s done", quadruple.q, chi)
    return complex(value * chi(ell1) * np.conj(chi(ell2)))


def brute_force_moment(quadruple, method="auto", tolerance=None, max_terms=None, workers=None):
    family = enumerate_even_primitive(quadruple.q)
    tolerance = settings.NUMERICS["AFE_TOLERANCE"] if tolerance is None else tolerance
    method = resolve_method(quadruple, method, tolerance, max_terms)
    grid = None
    if method == "afe":
        try:
            grid = afe_grid(quadruple, tolerance, max_terms)
        except LFunctionError as exc:
            raise MomentError(f"AFE truncation failed at {family[0]}: {exc}") from exc
    logger.info(
        "moment q=%d D=%s t=%g ell=%s over %d characters (%s)",
        quadruple.q,
        quadruple.D,
        quadruple.t,
        quadruple.ell,
        len(family),
        method,
    )
    tasks = [(quadruple, chi, method, grid) for chi in family]
    terms = ordered_map(_character_term, tasks, workers)
    return BruteForceMoment(complex_fsum(terms) / len(family), method, len(family), tolerance)


def averaged_first_sum(quadruple, tolerance=None, max_terms=None):
    """(1/phi+) sum over the family of the first AFE sum times chi(l1) conj(chi)(l2)."""
    family = enumerate_even_primitive(quadruple.q)
    grid = afe_grid(quadruple, tolerance, max_terms)
    ell1, ell2 = quadruple.ell
    terms = [
        afe_expansion(quadruple, chi, grid=grid).first * chi(ell1) * np.conj(chi(ell2))
        for chi in family
    ]
    return complex_fsum(terms) / len(family)


def _congruence(q, half, x, y):
    coprime = (x % q != 0) & (y % q != 0)
    match = ((x - y) % q == 0) | ((x + y) % q == 0)
    return np.where(coprime, half * match - 1, 0)


def congruence_first_sum(quadruple, tolerance=None, max_terms=None):
    """The same average with the character sum replaced by (phi(q)/2) 1[l1 m = +-l2 n] - 1."""
    q = quadruple.q
    enumerate_even_primitive(q)
    ell1, ell2 = quadruple.ell
    grid = afe_grid(quadruple, tolerance, max_terms)
    size, weights, twist = grid.size, grid.weights, grid.twist
    chi1, chi2, chi3, chi4 = quadruple.chars
    n = np.arange(size + 1)
    a = dirichlet_convolution(chi1.at(n) * twist, chi2.at(n) * twist)
    b = dirichlet_convolution(chi3.conj().at(n) * twist.conj(), chi4.conj().at(n) * twist.conj())

    half = (q - 1) // 2
    root = isqrt(size)
    parts = []
    for u in range(1, root + 1):
        count = size // u
        k = n[1 : count + 1]
        w = weights[u : u * count + 1 : u]
        parts.append(a[u] * np.dot(b[1 : count + 1] * _congruence(q, half, ell1 * u, ell2 * k), w))
        parts.append(b[u] * np.dot(a[1 : count + 1] * _congruence(q, half, ell1 * k, ell2 * u), w))
        overlap = _congruence(q, half, ell1 * u, ell2 * k[:root])
        parts.append(-a[u] * np.dot(b[1 : root + 1] * overlap, w[:root]))
    return complex_fsum(parts) / (half - 1)
