"""Four-fold approximate functional equation.

For chi even primitive mod q and the quadruple's characters chi_1..chi_4,

    L(1/2+it, chi chi_1) L(1/2+it, chi chi_2) L(1/2-it, conj(chi chi_3)) L(1/2-it, conj(chi chi_4))
      = sum_{m,n} a(m) b(n) (mn)^(-1/2) V(mn / qhat^2; t)
      + eps * (D1 D2 / D3 D4)^(-it) * sum_{m,n} a*(m) b*(n) (mn)^(-1/2) V(mn / qhat^2; t)

with a(m) = (chi chi_1 * chi chi_2)(m) m^(-it), b(n) = (conj(chi chi_3) * conj(chi chi_4))(n) n^(it),
a*, b* the dual coefficients and eps the product of the four root numbers.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt, log

import numpy as np
from django.conf import settings

from chargroup.sums import dirichlet_convolution, epsilon
from lfun.exceptions import LFunctionError, TruncationBudgetExceeded
from lfun.lvalues import l_value
from special.weights import WeightV

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AFEValue:
    value: complex
    first: complex
    second: complex
    root: complex
    terms: int
    cutoff: float


@lru_cache(maxsize=16)
def _weight(t):
    return WeightV(t=t)


@lru_cache(maxsize=64)
def _cutoff(t, tolerance):
    return _weight(t).cutoff(tolerance)


def twisted_characters(quadruple, chi):
    if chi.modulus != quadruple.q or not (chi.is_even and chi.is_primitive):
        raise LFunctionError(f"{chi} must be an even primitive character mod {quadruple.q}.")
    return tuple(chi * c for c in quadruple.chars)


def afe_term_count(quadruple, tolerance=None):
    """Largest mn kept by the truncated sums."""
    tolerance = settings.NUMERICS["AFE_TOLERANCE"] if tolerance is None else tolerance
    return int(quadruple.qhat**2 * _cutoff(quadruple.t, tolerance))


def root_factor(quadruple, chi):
    psi = twisted_characters(quadruple, chi)
    D1, D2, D3, D4 = quadruple.D
    eps = epsilon(psi[0]) * epsilon(psi[1]) * epsilon(psi[2].conj()) * epsilon(psi[3].conj())
    return eps * np.exp(-1j * quadruple.t * log(D1 * D2 / (D3 * D4)))


def hyperbola_pair_sum(a, b, w):
    """sum over mn <= N of a[m] b[n] w[mn], for arrays indexed 0..N."""
    size = len(w) - 1
    root = isqrt(size)
    parts = np.zeros(3 * root, dtype=complex)
    for u in range(1, root + 1):
        count = size // u
        strided = w[u : u * count + 1 : u]
        parts[3 * u - 3] = a[u] * np.dot(b[1 : count + 1], strided)
        parts[3 * u - 2] = b[u] * np.dot(a[1 : count + 1], strided)
        parts[3 * u - 1] = -a[u] * np.dot(b[1 : root + 1], strided[:root])
    return complex(np.sum(parts))


def _coefficients(first, second, n, twist):
    return dirichlet_convolution(first.at(n) * twist, second.at(n) * twist)


@dataclass(frozen=True)
class AFEGrid:
    """Truncation grid shared by both sums: weights[N] = V(N / qhat^2; t) / sqrt(N) for N <= size."""

    size: int
    cutoff: float
    weights: np.ndarray
    twist: np.ndarray


def afe_grid(quadruple, tolerance=None, max_terms=None):
    tolerance = settings.NUMERICS["AFE_TOLERANCE"] if tolerance is None else tolerance
    max_terms = settings.NUMERICS["AFE_MAX_TERMS"] if max_terms is None else max_terms
    t = quadruple.t
    scale = quadruple.qhat**2
    cutoff = _cutoff(t, tolerance)
    size = max(int(scale * cutoff), 2)
    if size > max_terms:
        raise TruncationBudgetExceeded(
            f"The AFE for q={quadruple.q}, D={quadruple.D} needs {size} terms "
            f"(budget {max_terms})."
        )
    logger.debug("AFE for q=%d uses mn <= %d (V cutoff %.4g)", quadruple.q, size, cutoff)

    n = np.arange(size + 1)
    weights = np.zeros(size + 1, dtype=complex)
    table = _weight(t).table(1.0 / scale, size / scale)
    weights[1:] = table(n[1:] / scale) / np.sqrt(n[1:])
    twist = np.exp(-1j * t * np.log(np.maximum(n, 1)))
    return AFEGrid(size, cutoff, weights, twist)


def afe_expansion(quadruple, chi, tolerance=None, max_terms=None, grid=None):
    psi = twisted_characters(quadruple, chi)
    grid = grid or afe_grid(quadruple, tolerance, max_terms)
    n = np.arange(grid.size + 1)
    twist = grid.twist

    a = _coefficients(psi[0], psi[1], n, twist)
    b = _coefficients(psi[2].conj(), psi[3].conj(), n, twist.conj())
    first = hyperbola_pair_sum(a, b, grid.weights)
    del a, b
    a = _coefficients(psi[0].conj(), psi[1].conj(), n, twist.conj())
    b = _coefficients(psi[2], psi[3], n, twist)
    second = hyperbola_pair_sum(a, b, grid.weights)

    root = complex(root_factor(quadruple, chi))
    return AFEValue(first + root * second, first, second, root, grid.size, grid.cutoff)


def afe_product_value(quadruple, chi, tolerance=None, max_terms=None):
    return afe_expansion(quadruple, chi, tolerance, max_terms).value


def direct_product(quadruple, chi):
    """The same four-fold product from Hurwitz-zeta L-values."""
    psi = twisted_characters(quadruple, chi)
    s = 0.5 + 1j * quadruple.t
    return (
        l_value(psi[0], s)
        * l_value(psi[1], s)
        * l_value(psi[2].conj(), s.conjugate())
        * l_value(psi[3].conj(), s.conjugate())
    )
