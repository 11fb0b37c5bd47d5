"""The family of even primitive characters modulo a prime and its orthogonality relation."""

from math import gcd

import numpy as np
from sympy import isprime

from chargroup.characters import even_primitive_characters
from chargroup.sums import epsilon
from moments.exceptions import MomentError


def enumerate_even_primitive(q):
    if not isprime(q) or q <= 3:
        raise MomentError(f"The family needs a prime q > 3, got {q}.")
    return even_primitive_characters(q)


def phi_plus(q):
    return len(enumerate_even_primitive(q))


def orthogonality_sum(q, m, n):
    """sum over even primitive chi mod q of chi(m) conj(chi)(n), as an exact integer.

    The even characters form a subgroup, so their sum at m/n is the subgroup order
    when every even character is trivial there and zero otherwise.
    """
    if gcd(m * n, q) != 1:
        return 0
    family = enumerate_even_primitive(q)
    trivial_at_ratio = all(chi.angles[m % q] == chi.angles[n % q] for chi in family)
    return (len(family) + 1) * int(trivial_at_ratio) - 1


def congruence_form(q, m, n):
    """(phi(q)/2) 1[m = +-n mod q] - 1 for (mn, q) = 1."""
    if gcd(m * n, q) != 1:
        raise MomentError(f"The congruence form needs (mn, q) = 1, got m={m}, n={n}.")
    return (q - 1) // 2 * ((m - n) % q == 0 or (m + n) % q == 0) - 1


def root_number(quadruple):
    """chi1 chi2 conj(chi3 chi4)(q) eps(chi1) eps(chi2) eps(conj chi3) eps(conj chi4)."""
    chi1, chi2, chi3, chi4 = quadruple.chars
    q = quadruple.q
    value = chi1(q) * chi2(q) * np.conj(chi3(q) * chi4(q))
    return complex(
        value * epsilon(chi1) * epsilon(chi2) * epsilon(chi3.conj()) * epsilon(chi4.conj())
    )
