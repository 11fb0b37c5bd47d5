import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np
from sympy import primerange

from chargroup.characters import character_table

logger = logging.getLogger(__name__)


def up_factor(p, values):
    """U_p = 1 - (a + b)(conj c + conj d)/p - a b conj(c d)/p^2 for values (a, b, c, d)."""
    a, b, c, d = values
    return 1 - (a + b) * (np.conj(c) + np.conj(d)) / p - a * b * np.conj(c * d) / p**2


def analytic_floor(m):
    return 1 - 4 / m - 1 / m**2


def roots_of_unity(max_order):
    angles = sorted({Fraction(k, n) for n in range(1, max_order + 1) for k in range(n) if gcd(k, n) == 1})
    return angles


def _exact(angles):
    return np.exp(2j * np.pi * np.array([float(a) for a in angles]))


def _pair_invariants(values):
    """(a + b, a b) over unordered pairs of values."""
    i, j = np.triu_indices(len(values))
    return values[i] + values[j], values[i] * values[j]


def _minimum_modulus(m, sums, products, chunk=256):
    """min |1 - u v/m - P Q/m^2| over all pairs of pair invariants (u, P), (v, Q)."""
    best = math.inf
    for start in range(0, len(sums), chunk):
        u = sums[start : start + chunk, None]
        w = products[start : start + chunk, None]
        grid = np.abs(1 - u * sums[None, :] / m - w * products[None, :] / m**2)
        best = min(best, float(grid.min()))
    return best


@dataclass(frozen=True)
class ScanResult:
    modulus: int
    minimum: float
    method: str


def cyclotomic_scan(max_order, m_range):
    """Exhaustive minimum of |1 - (a+b)(c+d)/m - abcd/m^2| over roots of unity of order <= max_order."""
    sums, products = _pair_invariants(_exact(roots_of_unity(max_order)))
    results = []
    for m in m_range:
        minimum = _minimum_modulus(m, sums, products)
        logger.info("cyclotomic scan m=%d, order <= %d: minimum %.6g", m, max_order, minimum)
        results.append(ScanResult(m, minimum, "exhaustive"))
    return results


def character_values_at(p, max_conductor):
    """Distinct values chi(p) != 0 over primitive characters of conductor <= max_conductor.

    Characters with p | conductor vanish at p; U_p is only scanned on roots of unity.
    """
    angles = set()
    for m in range(1, max_conductor + 1):
        for chi in character_table(m):
            if chi.is_primitive and chi.angle(p) is not None:
                angles.add(chi.angle(p))
    return sorted(angles)


def small_prime_scan(max_prime=64, max_conductor=50):
    """Check U_p != 0 for p < max_prime over character values of conductor <= max_conductor.

    Primes with a positive analytic floor are settled by the floor; the others
    are enumerated exhaustively.
    """
    results = []
    for p in primerange(2, max_prime):
        floor = analytic_floor(p)
        if floor > 0:
            results.append(ScanResult(p, floor, "floor"))
            continue
        angles = character_values_at(p, max_conductor)
        sums, products = _pair_invariants(_exact(angles))
        # conj(c) + conj(d) and conj(cd) range over the same invariants
        minimum = _minimum_modulus(p, sums, products)
        logger.info("U_%d over %d character values: minimum %.6g", p, len(angles), minimum)
        results.append(ScanResult(p, minimum, "exhaustive"))
    return results
