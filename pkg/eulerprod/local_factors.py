"""Local Euler factors of the off-diagonal arithmetic sum.

Every function takes the prime p, the tuple `values` = (chi1(p), chi2(p),
chi3(p), chi4(p)) (zero where p divides a modulus), the complex variable s and
the relevant valuations. With

    x = chi2 conj(chi4)(p) / p^(1+s),   y = chi2 conj(chi3)(p) / p^s,
    w = 1 - conj(chi1) chi3(p) p^(s-1),

the c+ factors have the finite forms

    C+ = p conj(chi3)(p) (1 - x) sum_{j<b} y^j + conj(chi4)(p) y^b
    E+ = (1 - x)(1 + w sum_{j=1..b} y^j) + w y^b x
    F+ = 1 + w sum_{j=1..b} y^j

which stay finite when y = 1. H+, J+, K+ are C+, E+, F+ at the mirrored
values, and the c- factors are the c+ factors at the swapped values.
"""

import numpy as np

from eulerprod.exceptions import DegenerateLocalFactor, EulerProductError


def _variables(p, values, s):
    a, b, c, d = values
    x = b * np.conj(d) / p ** (1 + s)
    y = b * np.conj(c) / p**s
    w = 1 - np.conj(a) * c * p ** (s - 1)
    return x, y, w


def _geometric(y, start, stop):
    """sum_{j=start}^{stop} y^j without dividing by 1 - y."""
    return sum(y**j for j in range(start, stop + 1))


def mirror(values):
    """chi1 -> conj chi3, chi2 -> conj chi4, chi3 -> conj chi1, chi4 -> conj chi2."""
    a, b, c, d = values
    return (np.conj(c), np.conj(d), np.conj(a), np.conj(b))


def swap(values):
    """(chi1, chi2, chi3, chi4) -> (chi4, chi3, chi2, chi1)."""
    a, b, c, d = values
    return (d, c, b, a)


def psi_value(values):
    """conj(chi1 chi4) chi2 chi3 at p."""
    a, b, c, d = values
    return np.conj(a) * b * c * np.conj(d)


def c_plus(p, values, s, b3):
    if b3 < 1:
        raise EulerProductError("C+ needs p | B3.")
    x, y, _ = _variables(p, values, s)
    _, _, c, d = values
    return p * np.conj(c) * (1 - x) * _geometric(y, 0, b3 - 1) + np.conj(d) * y**b3


def e_plus(p, values, s, b3):
    x, y, w = _variables(p, values, s)
    return (1 - x) * (1 + w * _geometric(y, 1, b3)) + w * y**b3 * x


def f_plus(p, values, s, b3):
    _, y, w = _variables(p, values, s)
    return 1 + w * _geometric(y, 1, b3)


def h_plus(p, values, s, b1):
    return c_plus(p, mirror(values), s, b1)


def j_plus(p, values, s, b1):
    return e_plus(p, mirror(values), s, b1)


def k_plus(p, values, s, b1):
    return f_plus(p, mirror(values), s, b1)


def c_minus(p, values, s, b):
    return c_plus(p, swap(values), s, b)


def e_minus(p, values, s, b):
    return e_plus(p, swap(values), s, b)


def f_minus(p, values, s, b):
    return f_plus(p, swap(values), s, b)


def h_minus(p, values, s, b):
    return h_plus(p, swap(values), s, b)


def j_minus(p, values, s, b):
    return j_plus(p, swap(values), s, b)


def k_minus(p, values, s, b):
    return k_plus(p, swap(values), s, b)


def _one_minus_y(p, values, s):
    _, y, _ = _variables(p, values, s)
    if abs(1 - y) < 1e-14:
        raise DegenerateLocalFactor(f"1 - chi2 conj(chi3)({p}) p^-s vanishes at s={s}.")
    return y, 1 - y


def c_plus_closed(p, values, s, b3):
    y, gap = _one_minus_y(p, values, s)
    x, _, _ = _variables(p, values, s)
    _, _, c, d = values
    return p * np.conj(c) * (1 - y**b3) * (1 - x) / gap + np.conj(d) * y**b3


def e_plus_closed(p, values, s, b3):
    y, gap = _one_minus_y(p, values, s)
    x, _, w = _variables(p, values, s)
    a, b, _, d = values
    numerator = (
        1
        - x
        - np.conj(a) * b / p
        + np.conj(a) * b * b * np.conj(d) / p ** (2 + s)
        + w * y**b3 * (x - y)
    )
    return numerator / gap


def f_plus_closed(p, values, s, b3):
    y, gap = _one_minus_y(p, values, s)
    _, _, w = _variables(p, values, s)
    a, b, _, _ = values
    return (1 - np.conj(a) * b / p - w * y ** (b3 + 1)) / gap


def local_A(p, values, s):
    x, _, _ = _variables(p, values, s)
    return (1 - psi_value(values) / p**2) / (1 - x)


def local_B(p, values, s, a1):
    x, _, _ = _variables(p, values, s)
    _, b, _, d = values
    return (p - 1) * p**a1 * b * np.conj(d) ** (1 + a1) / (1 - x)


def local_C(p, values, s, b3):
    x, _, _ = _variables(p, values, s)
    return values[1] * (p - 1) * c_plus(p, values, s, b3) / (1 - x)


def local_D(p, values, s):
    x, _, _ = _variables(p, values, s)
    _, b, _, d = values
    return (p - 1) * b * np.conj(d) / (1 - x)


def local_E(p, values, s, b3):
    x, _, _ = _variables(p, values, s)
    return e_plus(p, values, s, b3) / (1 - x)


def local_F(p, values, s, b3):
    return f_plus(p, values, s, b3)


def local_G(p, values, s, a3):
    return local_B(p, mirror(values), s, a3)


def local_H(p, values, s, b1):
    return local_C(p, mirror(values), s, b1)


def local_I(p, values, s):
    return local_D(p, mirror(values), s)


def local_J(p, values, s, b1):
    return local_E(p, mirror(values), s, b1)


def local_K(p, values, s, b1):
    return local_F(p, mirror(values), s, b1)


def _phi(p, k):
    return 1 if k == 0 else (p - 1) * p ** (k - 1)


def _series(term, tolerance, limit):
    total, j = 0j, 0
    while j < limit:
        value = term(j)
        total += value
        if j > 4 and abs(value) < tolerance:
            return total
        j += 1
    raise EulerProductError("Local series did not converge; check Re(s).")


def d1_series(p, values, s, a1, b3, tolerance=1e-16, limit=2000):
    """The defining series at p | D1: B_p, C_p or D_p depending on (a1, b3)."""
    _, b, c, d = values

    def term(j):
        m = min(b3, 1 + a1 + j)
        return (
            _phi(p, 1 + a1 + j)
            * p**m
            * np.conj(c) ** m
            * b ** (1 + j)
            * np.conj(d) ** (1 + a1 + j - m)
            / p ** (j * (2 + s))
        )

    return _series(term, tolerance, limit)


def b3_series(p, values, s, b3, tolerance=1e-16, limit=2000):
    """The defining series at p | B3 with p not dividing D1: E_p, or F_p when chi4(p) = 0."""
    a, b, c, d = values
    correction = 1 + 1 / (p - 1) - np.conj(a) * c * p**s / (p - 1)

    def term(j):
        if j == 0:
            return 1.0
        m = min(j, b3)
        return (
            _phi(p, j)
            * np.conj(c) ** m
            * b**j
            * np.conj(d) ** (j - m)
            * p**m
            / p ** (j * (2 + s))
            * correction
        )

    return _series(term, tolerance, limit)
