import logging
import math

import numpy as np
from sympy import primerange

from mollifier.coefficients import smoothing_a, smoothing_b
from mollifier.exceptions import MollifierError
from mollifier.parameters import EDGE

logger = logging.getLogger(__name__)


def check_gate(spec):
    """(k + 2) sum l_r beta_r < 1 for asymptotic-mode specs."""
    margin = spec.lemma_margin()
    if spec.mode == "asymptotic" and margin <= 0:
        raise MollifierError(
            f"(k+2) sum l_r beta_r = {1 - margin:.6g} is not below 1 for q={spec.q}, k={spec.k}."
        )
    return margin


def prime_sum_P(chi, spec, j, u, t=0.0):
    """sum over p in I_j of chi(p) a(p; u) p^(-1/2-it)."""
    if not 0 <= j <= u <= spec.K:
        raise MollifierError(f"P_I_{j}(chi; {u}) needs 0 <= j <= u <= K={spec.K}.")
    primes = spec.interval_primes[j]
    if not primes:
        return 0j
    support = np.array(primes, dtype=np.int64)
    weights = np.array([smoothing_a(p, u, spec) for p in primes])
    return complex(np.sum(chi.at(support) * weights * np.exp(-(0.5 + 1j * t) * np.log(support))))


def trunc_exp(ell, x):
    return math.fsum(x**s / math.factorial(s) for s in range(int(ell) + 1))


def factor_D(chi, spec, j, k, t=0.0):
    """prod_{r <= j} (1 + e^(-l_r/2)) E_{l_r}(k Re P_I_r(chi; j))."""
    check_gate(spec)
    return math.prod(
        (1 + math.exp(-spec.ell[r] / 2)) * trunc_exp(spec.ell[r], k * prime_sum_P(chi, spec, r, j, t).real)
        for r in range(j + 1)
    )


def factor_S(chi, spec, j, k, t=0.0):
    """exp(k Re sum_{p <= q^(beta_j/2)} chi(p^2) b(p; j) p^(-1-2it))."""
    check_gate(spec)
    primes = list(primerange(2, math.floor(math.sqrt(spec.edge(j)) + EDGE) + 1))
    total = sum(chi(p * p) * smoothing_b(p, j, spec) * p ** (-1 - 2j * t) for p in primes)
    return math.exp(k * complex(total).real)


def typical_level(chi, spec, k, t=0.0):
    """Largest r such that |Re P_I_r'(chi; u)| <= l_r' / (k e^2) for all r' < r and r' <= u <= K."""
    for r in range(spec.K + 1):
        threshold = spec.ell[r] / (k * math.e**2)
        if any(abs(prime_sum_P(chi, spec, r, u, t).real) > threshold for u in range(r, spec.K + 1)):
            return r
    return spec.K + 1
