import logging
import math
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from sympy import primerange

from lfun.exceptions import LFunctionError
from lfun.lvalues import l_value

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1)
def log_bound_lambda():
    """The root of exp(-x) = x + x^2/2 (about 0.4912)."""
    return brentq(lambda x: math.exp(-x) - x - x * x / 2, 0.0, 1.0, xtol=1e-15)


def von_mangoldt_support(x):
    """Prime powers n <= x with Lambda(n) = log p, as two aligned arrays."""
    powers, logs = [], []
    for p in primerange(2, int(x) + 1):
        value = p
        while value <= x:
            powers.append(value)
            logs.append(math.log(p))
            value *= p
    return np.array(powers, dtype=np.int64), np.array(logs)


def log_bound_rhs(chi, t, x):
    """Upper bound for log|L(1/2+it, chi)| from a prime-power sum of length x."""
    if x < 2:
        raise LFunctionError(f"The prime sum needs x >= 2, got {x}.")
    lam = log_bound_lambda()
    log_x = math.log(x)
    n, log_p = von_mangoldt_support(x)
    log_n = np.log(n)
    exponent = -(0.5 + 1j * t + lam / log_x) * log_n
    terms = log_p * chi.at(n) * np.exp(exponent) * np.log(x / n) / (log_n * log_x)
    conductor_term = (1 + lam) / 2 * math.log(chi.modulus * (1 + abs(t))) / log_x
    return float(np.sum(terms).real) + conductor_term


def grh_log_bound_gap(chi, t, x):
    if chi.modulus < 2 or not chi.is_primitive:
        raise LFunctionError(f"{chi} must be primitive with modulus > 1.")
    value = abs(l_value(chi, 0.5 + 1j * t))
    if value < 1e-12:
        raise LFunctionError(f"L(1/2+{t}i, {chi}) vanishes numerically.")
    gap = log_bound_rhs(chi, t, x) - math.log(value)
    logger.debug("log-bound gap for %s at t=%g, x=%g: %.4f", chi, t, x, gap)
    return gap
