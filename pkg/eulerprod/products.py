import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from django.conf import settings
from scipy.special import zeta
from sympy import divisor_count, factorint, primerange

from chargroup.sums import dirichlet_convolution
from eulerprod.exceptions import EulerProductError
from lfun.lvalues import lvalue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EulerProductValue:
    value: complex
    prime_cutoff: int
    tail_bound: float


def values_at(chars, p):
    return tuple(chi(p) for chi in chars)


def h_character(chars):
    """chi1 chi2 conj(chi3) conj(chi4), the character of the completed H product."""
    chi1, chi2, chi3, chi4 = chars
    return chi1 * chi2 * chi3.conj() * chi4.conj()


def _power_coefficients(first, second, count):
    """(f * g)(p^k) for k < count from the values f(p), g(p); works elementwise on arrays."""
    first = np.asarray(first, dtype=complex)
    second = np.asarray(second, dtype=complex)
    coefficients = [np.ones_like(first)]
    power = np.ones_like(first)
    for _ in range(1, count):
        power = power * first
        coefficients.append(second * coefficients[-1] + power)
    return coefficients


def _length(p, sigma, offset=0):
    """Number of terms after which (j + offset + 1)^2 p^(-j sigma) is negligible."""
    j = 1
    while (j + offset + 1) ** 2 * p ** (-j * sigma) > 1e-17 or j < 4:
        j += 1
    return j + 1


def _local_series(p, values, s, lam1, lam2):
    """sum_j (chi1*chi2)(p^(j+lam2)) (conj chi3 * conj chi4)(p^(j+lam1)) p^(-js)."""
    a, b, c, d = values
    count = _length(p, s.real, max(lam1, lam2))
    first = _power_coefficients(a, b, count + lam2)
    second = _power_coefficients(np.conj(c), np.conj(d), count + lam1)
    terms = [first[j + lam2] * second[j + lam1] * p ** (-j * s) for j in range(count)]
    return complex(sum(terms))


def factor_F(ell1, ell2, s, chars):
    """F(ell1, ell2; s): the finite product over p | ell1 ell2 of local numerator / denominator."""
    s = complex(s)
    if math.gcd(ell1, ell2) != 1:
        raise EulerProductError(f"F needs coprime arguments, got ({ell1}, {ell2}).")
    if s.real <= 0:
        raise EulerProductError(f"The local series of F diverge for Re(s) = {s.real}.")
    value = 1 + 0j
    for p in sorted(factorint(ell1 * ell2)):
        lam1 = factorint(ell1).get(p, 0)
        lam2 = factorint(ell2).get(p, 0)
        values = values_at(chars, p)
        value *= _local_series(p, values, s, lam1, lam2) / _local_series(p, values, s, 0, 0)
    return value


def local_H(p, values, s):
    """Denominator series times the four (1 - chi_i conj(chi_j)(p) p^-s) factors."""
    s = complex(s)
    a, b, c, d = values
    correction = 1
    for left in (a, b):
        for right in (c, d):
            correction *= 1 - left * np.conj(right) * p ** (-s)
    return _local_series(p, values, s, 0, 0) * correction


@lru_cache(maxsize=128)
def _l_value_two_s(character, s):
    return lvalue(character, 2 * s)


def factor_H(s, chars, prime_cutoff=None, complete_tail=False):
    s = complex(s)
    if s.real <= 0.5:
        raise EulerProductError(f"H(s) needs Re(s) > 1/2, got {s}.")
    prime_cutoff = prime_cutoff or settings.NUMERICS["EULER_PRIME_CUTOFF"]
    primes = np.array(list(primerange(2, prime_cutoff + 1)), dtype=float)
    values = [np.array([chi(int(p)) for p in primes]) for chi in chars]
    a, b, c, d = values
    count = _length(2, s.real)
    first = _power_coefficients(a, b, count)
    second = _power_coefficients(np.conj(c), np.conj(d), count)
    scale = np.exp(-s * np.log(primes))
    series = sum(first[j] * second[j] * scale**j for j in range(count))
    correction = np.ones_like(series)
    for left in (a, b):
        for right in (c, d):
            correction = correction * (1 - left * np.conj(right) * scale)
    local = series * correction
    value = complex(np.exp(np.sum(np.log(local))))

    sigma = 2 * s.real
    tail = 2 * prime_cutoff ** (1 - sigma) / (sigma - 1)
    bound = abs(value) * math.expm1(tail)
    if complete_tail:
        psi = h_character(chars)
        closed = 1 - np.array([psi(int(p)) for p in primes]) * scale**2
        completion = _l_value_two_s(psi, s)
        value = value / complex(np.exp(np.sum(np.log(closed)))) / completion.value
        mismatch = float(np.sum(np.abs(local / closed - 1)))
        bound = completion.error / abs(completion.value) ** 2 + mismatch * abs(value)
    logger.debug("H(%s) over p <= %d: tail bound %.3g", s, prime_cutoff, bound)
    return EulerProductValue(value, prime_cutoff, bound)


def product_A(chars, ell1, ell2):
    """A_{chi1,chi2,chi3,chi4}(ell1, ell2) = F(ell1, ell2; 1) H(1), with H completed exactly."""
    return factor_F(ell1, ell2, 1, chars) * factor_H(1, chars, complete_tail=True).value


def diagonal_series(chars, ell1, ell2, s, terms):
    """sum_{n <= terms} (chi1*chi2)(ell2 n) (conj chi3 * conj chi4)(ell1 n) n^-s."""
    chi1, chi2, chi3, chi4 = chars
    size = max(ell1, ell2) * terms
    n = np.arange(size + 1)
    first = dirichlet_convolution(chi1.at(n), chi2.at(n))
    second = dirichlet_convolution(chi3.conj().at(n), chi4.conj().at(n))
    index = np.arange(1, terms + 1)
    weights = np.exp(-complex(s) * np.log(index))
    return complex(np.sum(first[ell2 * index] * second[ell1 * index] * weights))


def diagonal_envelope(ell1, ell2, sigma, terms):
    """Bound for the tail beyond `terms` of the diagonal series at real part sigma > 1."""
    n = np.arange(1, terms + 1)
    divisors = np.zeros(terms + 1)
    for k in range(1, terms + 1):
        divisors[k::k] += 1
    head = math.fsum(divisors[1:] ** 2 * n ** (-float(sigma)))
    total = zeta(sigma) ** 4 / zeta(2 * sigma)
    return int(divisor_count(ell1)) * int(divisor_count(ell2)) * max(total - head, 0.0)
