import logging
from dataclasses import dataclass
from math import gcd, isqrt, sqrt

import numpy as np
from sympy import divisor_count, divisors, mobius

from chargroup.characters import principal
from chargroup.exceptions import CharacterError, NonCoprimeSplit

logger = logging.getLogger(__name__)


def additive(x):
    """e(x) = exp(2 pi i x), elementwise."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def gauss_sum(chi):
    m = chi.modulus
    residues = np.arange(m)
    return complex(np.sum(chi.values * additive(residues / m)))


def epsilon(chi):
    return gauss_sum(chi) / sqrt(chi.modulus)


def convolve(chi_a, chi_b, n):
    """(chi_a * chi_b)(n) = sum over n = uv of chi_a(u) chi_b(v)."""
    if n < 1:
        raise CharacterError(f"Convolution needs n >= 1, got {n}.")
    return complex(sum(chi_a(u) * chi_b(n // u) for u in divisors(n)))


def dirichlet_convolution(f, g):
    """Dirichlet convolution of two arrays indexed 0..N (index 0 ignored).

    Fills h[uv] over the hyperbola uv <= N with strided slices, so the cost is
    O(sqrt(N)) numpy operations of total length O(N log N).
    """
    f = np.asarray(f)
    g = np.asarray(g)
    size = len(f) - 1
    h = np.zeros(size + 1, dtype=np.result_type(f, g, complex))
    if size < 1:
        return h
    root = isqrt(size)
    for u in range(1, root + 1):
        count = size // u
        h[u : u * count + 1 : u] += f[u] * g[1 : count + 1]
        h[u : u * count + 1 : u] += g[u] * f[1 : count + 1]
        h[u : u * root + 1 : u] -= f[u] * g[1 : root + 1]
    return h


def _units_and_inverses(c):
    if c == 1:
        return np.array([0]), np.array([0])
    units = np.array([a for a in range(1, c) if gcd(a, c) == 1], dtype=np.int64)
    inverses = np.array([pow(int(a), -1, c) for a in units], dtype=np.int64)
    return units, inverses


def hybrid_kloosterman(chi, m, n, c):
    """S_chi(m, n; c) = sum over units a mod c of chi(a) e((m a + n a^-1)/c)."""
    if c < 1 or c % chi.modulus:
        raise CharacterError(
            f"Character modulus {chi.modulus} must divide the Kloosterman modulus {c}."
        )
    units, inverses = _units_and_inverses(c)
    phases = ((m * units + n * inverses) % c) / c
    return complex(np.sum(chi.at(units) * additive(phases)))


def kloosterman(m, n, c):
    return hybrid_kloosterman(principal(1), m, n, c)


def ramanujan(q, n):
    """c_q(n), as the Kloosterman sum S(0, n; q)."""
    return kloosterman(0, n, q)


def ramanujan_closed_form(q, n):
    return sum(int(mobius(q // d)) * d for d in divisors(gcd(q, n)))


def weil_bound(m, n, c):
    return int(divisor_count(c)) * sqrt(gcd(gcd(m, n), c)) * sqrt(c)


@dataclass(frozen=True)
class MultKResidual:
    residual: float
    literal_residual: float
    lhs: complex
    rhs: complex


def verify_mult_k(phi1, phi2, a, b):
    """Twisted multiplicativity of hybrid Kloosterman sums in coprime moduli.

    S_{phi1 phi2}(a, b; cd) = phi1(d) phi2(c) S_{phi1}(a, b d'^2; c) S_{phi2}(a, b c'^2; d)
    with d' = d^-1 mod c and c' = c^-1 mod d. The residual without the
    phi1(d) phi2(c) factor is reported as literal_residual.
    """
    c, d = phi1.modulus, phi2.modulus
    if gcd(c, d) != 1:
        raise NonCoprimeSplit(f"Moduli {c} and {d} are not coprime.")
    d_inv = pow(d, -1, c) if c > 1 else 0
    c_inv = pow(c, -1, d) if d > 1 else 0
    lhs = hybrid_kloosterman(phi1 * phi2, a, b, c * d)
    literal = hybrid_kloosterman(phi1, a, b * d_inv**2, c) * hybrid_kloosterman(
        phi2, a, b * c_inv**2, d
    )
    rhs = phi1(d) * phi2(c) * literal
    return MultKResidual(abs(lhs - rhs), abs(lhs - literal), lhs, rhs)
