"""Hurwitz zeta by Euler-Maclaurin summation, vectorised over the shift a."""

import math
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from lfun.exceptions import LFunctionError

TAIL_TERMS = 20


@lru_cache(maxsize=1)
def _bernoulli_even():
    numbers = bernoulli(2 * TAIL_TERMS)
    return np.array(
        [numbers[2 * j] / math.factorial(2 * j) for j in range(1, TAIL_TERMS + 1)], dtype=float
    )


def hurwitz_zeta(s, a):
    """zeta(s, a) = sum_{k >= 0} (k + a)^(-s) for a in (0, 1], continued to s != 1.

    `a` may be an array; the result then has the same shape.
    """
    s = complex(s)
    if s == 1:
        raise LFunctionError("zeta(s, a) has a pole at s = 1.")
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise LFunctionError("Hurwitz shift must be positive.")
    head = int(abs(s)) + 30
    k = np.arange(head, dtype=float)
    shifted = a[..., None] + k
    total = np.sum(np.exp(-s * np.log(shifted)), axis=-1)

    end = a + head
    log_end = np.log(end)
    total = total + np.exp((1 - s) * log_end) / (s - 1) + 0.5 * np.exp(-s * log_end)
    rising = s
    power = np.exp((-s - 1) * log_end)
    for j, coefficient in enumerate(_bernoulli_even(), start=1):
        total = total + coefficient * rising * power
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power = power / (end * end)
    return complex(total) if total.ndim == 0 else total
