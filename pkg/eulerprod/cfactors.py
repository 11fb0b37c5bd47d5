"""The Euler products c+ and c- of the off-diagonal main terms and their two identities."""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, prod

import numpy as np
from sympy import factorint

from chargroup.characters import even_primitive_characters
from eulerprod import local_factors
from eulerprod.exceptions import EulerProductError
from eulerprod.products import product_A, values_at
from lfun.lvalues import l_value

logger = logging.getLogger(__name__)

SQUAREFREE_POOL = (1, 1, 1, 5, 7, 11, 13)


def split_by_support(n, d):
    """n = A B with A | d^infinity and gcd(B, d) = 1."""
    a = prod(p**k for p, k in factorint(n).items() if d % p == 0)
    return a, n // a


@dataclass(frozen=True)
class LocalFactorContext:
    """Characters chi1..chi4 (moduli D1..D4) and coprime twists ell1 = A1 B1, ell2 = A3 B3."""

    chars: tuple
    ell: tuple

    def __post_init__(self):
        object.__setattr__(self, "chars", tuple(self.chars))
        object.__setattr__(self, "ell", tuple(int(v) for v in self.ell))
        if min(self.ell) < 1 or gcd(*self.ell) != 1:
            raise EulerProductError(f"Twists {self.ell} must be positive and coprime.")
        D = self.D
        for i, d in enumerate(D):
            for e in D[i + 1 :]:
                if gcd(d, e) != 1:
                    raise EulerProductError(f"Moduli {D} are not pairwise coprime.")

    @property
    def D(self):
        return tuple(chi.modulus for chi in self.chars)

    @cached_property
    def first(self):
        return split_by_support(self.ell[0], self.D[0])

    @cached_property
    def third(self):
        return split_by_support(self.ell[1], self.D[2])

    def values(self, p):
        return values_at(self.chars, p)

    def swapped(self, ell):
        """The context of c-: (chi4, chi3, chi2, chi1) with the given twists."""
        chi1, chi2, chi3, chi4 = self.chars
        return LocalFactorContext((chi4, chi3, chi2, chi1), ell)

    @cached_property
    def psi(self):
        chi1, chi2, chi3, chi4 = self.chars
        return chi1.conj() * chi4.conj() * chi2 * chi3


@lru_cache(maxsize=256)
def _l_two(psi):
    return l_value(psi, 2)


def cplus(s, context):
    """c+(s; ell1, ell2, D1, D3) evaluated factor by factor."""
    s = complex(s)
    chi1, chi2, chi3, chi4 = context.chars
    D1, D2, D3, D4 = context.D
    A1, B1 = context.first
    A3, B3 = context.third
    g13, g31 = gcd(B1, D3), gcd(B3, D1)
    numerator = (
        np.conj(chi1(B1))
        * chi3(B3)
        * np.conj(chi4(D1))
        * chi2(D3)
        * np.conj(chi4(A1))
        * chi2(A3)
        * np.conj(chi2(g13))
        * chi4(g31)
    )
    value = numerator / (g13 * g31 * np.exp(s * np.log(A1 * A3)) * _l_two(context.psi))

    for p, b3 in sorted(factorint(B3).items()):
        v = context.values(p)
        if D1 % p == 0:
            value *= local_factors.c_plus(p, v, s, b3)
        elif D4 % p == 0:
            value *= local_factors.f_plus(p, v, s, b3)
        elif D2 % p:
            value *= local_factors.e_plus(p, v, s, b3) / (1 - local_factors.psi_value(v) / p**2)
    for p, b1 in sorted(factorint(B1).items()):
        v = context.values(p)
        if D3 % p == 0:
            value *= local_factors.h_plus(p, v, s, b1)
        elif D2 % p == 0:
            value *= local_factors.k_plus(p, v, s, b1)
        elif D4 % p:
            value *= local_factors.j_plus(p, v, s, b1) / (1 - local_factors.psi_value(v) / p**2)
    return complex(value)


def cminus(s, x, y, context):
    """c-(s; x, y, D4, D2): c+ with chi1 <-> chi4, chi2 <-> chi3 and D1 <-> D4, D2 <-> D3."""
    return cplus(s, context.swapped((x, y)))


@dataclass(frozen=True)
class FuzzRecord:
    config: dict
    lhs: complex
    rhs: complex
    residual: float


def _config(chars, ell, **extra):
    config = {
        "D": [chi.modulus for chi in chars],
        "chars": [chi.label for chi in chars],
        "ell": list(ell),
    }
    config.update(extra)
    return config


def _relative(lhs, rhs):
    """|lhs - rhs| scaled by max(1, |lhs|, |rhs|); absolute for values of modulus at most 1."""
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def verify_identity(chars, ell1, ell2, s):
    """Compare c-(-2s; ...)(ell1 ell2/g^2)^-s with c+(2s; ...)(ell1 ell2/h^2)^s.

    Here g = gcd(D1 D2 ell1, D3 D4 ell2) and h = gcd(ell1, ell2). The residual is
    relative to max(1, |lhs|, |rhs|).
    """
    s = complex(s)
    D1, D2, D3, D4 = (chi.modulus for chi in chars)
    g = gcd(D1 * D2 * ell1, D3 * D4 * ell2)
    h = gcd(ell1, ell2)
    context = LocalFactorContext(chars, (ell1 // h, ell2 // h))
    lhs = cminus(-2 * s, D1 * D2 * ell1 // g, D3 * D4 * ell2 // g, context) * np.exp(
        -s * np.log(ell1 * ell2 / g**2)
    )
    rhs = cplus(2 * s, context) * np.exp(s * np.log(ell1 * ell2 / h**2))
    residual = _relative(lhs, rhs)
    return FuzzRecord(_config(chars, (ell1, ell2), s=[s.real, s.imag]), complex(lhs), complex(rhs), residual)


def verify_second_identity(chars, ell1, ell2):
    """c+(0; ell1/h, ell2/h, D1, D3) against A_{chi3,chi2,chi1,chi4}(D1 ell1/g, D3 ell2/g)."""
    chi1, chi2, chi3, chi4 = chars
    D1, D3 = chi1.modulus, chi3.modulus
    h = gcd(ell1, ell2)
    g = gcd(D1 * ell1, D3 * ell2)
    lhs = cplus(0, LocalFactorContext(chars, (ell1 // h, ell2 // h)))
    rhs = product_A((chi3, chi2, chi1, chi4), D1 * ell1 // g, D3 * ell2 // g)
    return FuzzRecord(_config(chars, (ell1, ell2)), complex(lhs), complex(rhs), _relative(lhs, rhs))


def random_configuration(rng, max_twist=40):
    """Pairwise coprime moduli from a small pool, random even primitive characters and twists."""
    while True:
        D = [int(rng.choice(SQUAREFREE_POOL)) for _ in range(4)]
        if all(gcd(D[i], D[j]) == 1 for i in range(4) for j in range(i + 1, 4)):
            break
    chars = []
    for d in D:
        options = even_primitive_characters(d)
        chars.append(options[int(rng.integers(len(options)))])
    ell1, ell2 = (int(v) for v in rng.integers(1, max_twist + 1, size=2))
    return tuple(chars), ell1, ell2


def fuzz_identity(count, seed, s_grid=(0.1, -0.2 + 0.3j, 0.25j, 0.35 - 0.1j, -0.4)):
    rng = np.random.default_rng(seed)
    records = []
    for _ in range(count):
        chars, ell1, ell2 = random_configuration(rng)
        records.extend(verify_identity(chars, ell1, ell2, s) for s in s_grid)
    worst = max(record.residual for record in records)
    logger.info("identity fuzz: %d records, worst residual %.3g", len(records), worst)
    return records


def fuzz_second_identity(count, seed):
    rng = np.random.default_rng(seed)
    records = [verify_second_identity(*random_configuration(rng)) for _ in range(count)]
    worst = max(record.residual for record in records)
    logger.info("second identity fuzz: %d records, worst residual %.3g", len(records), worst)
    return records
