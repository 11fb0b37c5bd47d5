"""Parameters of the Euler-product mollifier: the beta ladder, the caps l_j and s_j, and lambda."""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from django.conf import settings
from sympy import isprime, primerange

from lfun.grh import log_bound_lambda
from mollifier.exceptions import MollifierError

logger = logging.getLogger(__name__)

MODES = ("asymptotic", "scaled", "custom")

# float slack on interval endpoints q^beta
EDGE = 1e-9


def lambda_residual(x):
    return math.exp(-x) - x - x * x / 2


def solve_lambda():
    return log_bound_lambda()


def lambda_sign_changes(step=1e-3):
    grid = np.arange(0.0, 1.0 + step / 2, step)
    values = np.exp(-grid) - grid - grid**2 / 2
    return int(np.count_nonzero(np.sign(values[1:]) != np.sign(values[:-1])))


def condition_c(k):
    """The bound that beta_K must stay under."""
    return min(4 * (math.exp(0.25) - 1) ** 4 / (math.e * (k + 2) ** 4), (math.log(2) / 60) ** (4 / 3) / 4)


def block_caps(beta):
    """s = 2[1/(8 beta)] and l = 2[s^(3/4)/2]."""
    s = 2 * math.floor(1 / (8 * beta))
    return 2 * math.floor(s**0.75 / 2), s


@dataclass(frozen=True)
class MollifierSpec:
    q: int
    k: int
    beta: tuple
    ell: tuple
    s: tuple
    lam: float
    mode: str = "custom"
    floored: tuple = ()

    def __post_init__(self):
        for name in ("beta", "ell", "s", "floored"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not isprime(self.q):
            raise MollifierError(f"q must be prime, got {self.q}.")
        if self.k < 1:
            raise MollifierError(f"k must be positive, got {self.k}.")
        if self.mode not in MODES:
            raise MollifierError(f"Unknown parameter mode {self.mode!r}.")
        if not (len(self.beta) == len(self.ell) == len(self.s)) or not self.beta:
            raise MollifierError("beta, ell and s need one entry per interval.")
        if any(b <= 0 for b in self.beta) or any(b >= c for b, c in zip(self.beta, self.beta[1:])):
            raise MollifierError(f"beta must be positive and increasing, got {self.beta}.")
        if any(v < 0 or v % 2 for v in self.ell + self.s):
            raise MollifierError("l_j and s_j must be non-negative even integers.")
        if abs(lambda_residual(self.lam)) >= 1e-12:
            raise MollifierError(f"lambda={self.lam} does not solve exp(-x) = x + x^2/2.")

    @property
    def K(self):
        return len(self.beta) - 1

    def edge(self, j):
        """q^beta_j, the right end of I_j."""
        return math.exp(self.beta[j] * math.log(self.q))

    def interval(self, j):
        lower = 1.0 if j == 0 else self.edge(j - 1)
        return lower, self.edge(j)

    @cached_property
    def interval_primes(self):
        blocks = []
        for j in range(self.K + 1):
            lower, upper = self.interval(j)
            blocks.append(tuple(primerange(math.floor(lower + EDGE) + 1, math.floor(upper + EDGE) + 1)))
        return tuple(blocks)

    def lemma_margin(self):
        """1 - (k + 2) sum_r l_r beta_r; must be positive."""
        return 1 - (self.k + 2) * math.fsum(l * b for l, b in zip(self.ell, self.beta))

    def as_dict(self):
        return {
            "q": self.q,
            "k": self.k,
            "K": self.K,
            "beta": list(self.beta),
            "ell": list(self.ell),
            "s": list(self.s),
            "lambda": self.lam,
            "mode": self.mode,
            "floored": list(self.floored),
            "intervals": [list(self.interval(j)) for j in range(self.K + 1)],
        }


def _caps(beta):
    ell, s, floored = [], [], []
    for j, b in enumerate(beta):
        l_j, s_j = block_caps(b)
        if l_j < 2:
            floored.append(j)
            l_j = 2
        ell.append(l_j)
        s.append(s_j)
    if floored:
        logger.warning("l_j floored at 2 for j in %s (beta too large for the cap formula).", floored)
    return tuple(ell), tuple(s), tuple(floored)


def asymptotic_defaults(q, k):
    """beta_j = e^j / (log log q)^5 below c, then beta_K = c."""
    c = condition_c(k) / 2
    scale = math.log(math.log(q)) ** 5
    beta = []
    j = 0
    while math.exp(j) / scale < c:
        beta.append(math.exp(j) / scale)
        j += 1
    beta.append(c)
    ell, s, floored = _caps(beta)
    return MollifierSpec(q, k, tuple(beta), ell, s, solve_lambda(), "asymptotic", floored)


def scaled_defaults(q, k, first_edge=11, max_prime=None):
    """The same e-ladder started at q^beta_0 = first_edge and stopped once q^beta_j > max_prime."""
    max_prime = settings.NUMERICS["MOLLIFIER_MAX_PRIME"] if max_prime is None else max_prime
    log_q = math.log(q)
    beta = [math.log(first_edge) / log_q]
    while math.exp(beta[-1] * math.e * log_q) <= max_prime:
        beta.append(beta[-1] * math.e)
    ell, s, floored = _caps(beta)
    return MollifierSpec(q, k, tuple(beta), ell, s, solve_lambda(), "scaled", floored)


def synthetic_spec(q=1009, edges=(12, 50), k=3, mode="custom"):
    """A two-block spec with q^beta_j = edges[j]; small enough to expand M_j^k exactly."""
    log_q = math.log(q)
    beta = tuple(math.log(edge) / log_q for edge in edges)
    return MollifierSpec(q, k, beta, (2,) * len(edges), (0,) * len(edges), solve_lambda(), mode)
