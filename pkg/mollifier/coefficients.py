"""Coefficients of the mollifier M = prod_j M_j and of the powers M_j^k.

M_j(1/2+it, chi) = sum over n with prime factors in I_j and Omega(n) <= l_j of
chi(n) mu(n) a(n; K) nu(n) n^(-1/2-it).
"""

import logging
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from django.conf import settings
from sympy import factorint, isprime

from mollifier.exceptions import CutoffOverflow, MollifierError
from mollifier.parameters import EDGE

logger = logging.getLogger(__name__)


def smoothing_a(p, u, spec):
    """a(p; u) = (1 - log p / (beta_u log q)) p^(-lambda / (beta_u log q))."""
    if not isprime(p) or p > spec.edge(u) + EDGE:
        raise MollifierError(f"a(p; {u}) needs a prime p <= q^beta_{u}, got {p}.")
    scale = spec.beta[u] * math.log(spec.q)
    return max(0.0, 1 - math.log(p) / scale) * p ** (-spec.lam / scale)


def smoothing_b(p, j, spec):
    """b(p; j) = (1 - 2 log p / (beta_j log q)) p^(-2 lambda / (beta_j log q))."""
    if not isprime(p) or p > math.sqrt(spec.edge(j)) + EDGE:
        raise MollifierError(f"b(p; {j}) needs a prime p <= q^(beta_{j}/2), got {p}.")
    scale = spec.beta[j] * math.log(spec.q)
    return max(0.0, 1 - 2 * math.log(p) / scale) * p ** (-2 * spec.lam / scale)


def smoothing_a_n(n, u, spec):
    """a(n; u), completely multiplicative in n."""
    return math.prod(smoothing_a(p, u, spec) ** e for p, e in factorint(n).items())


def _factorization_count(exponents, k, cap):
    """Ordered factorizations into k squarefree parts with at most `cap` primes per part."""
    states = {(0,) * k: 1}
    for e in exponents:
        following = {}
        for state, count in states.items():
            for parts in combinations(range(k), e):
                new = list(state)
                for i in parts:
                    new[i] += 1
                if cap is not None and max(new) > cap:
                    continue
                key = tuple(new)
                following[key] = following.get(key, 0) + count
        states = following
    return sum(states.values())


def nu_alpha(n, k, cap=None):
    """(nu(n), alpha_k(n; cap)).

    nu(p^a) = 1/a!. alpha_k sums nu(n_1) mu(n_1) ... nu(n_k) mu(n_k) over ordered
    factorizations n = n_1 ... n_k with Omega(n_i) <= cap; only squarefree parts
    contribute, each with nu = 1 and mu = (-1)^Omega.
    """
    if n < 1:
        raise MollifierError(f"n must be positive, got {n}.")
    exponents = list(factorint(n).values())
    nu = 1 / math.prod(math.factorial(e) for e in exponents)
    sign = -1 if sum(exponents) % 2 else 1
    return nu, sign * _factorization_count(exponents, k, cap)


@dataclass(frozen=True)
class DirichletPolynomial:
    support: np.ndarray
    values: np.ndarray
    blocks: tuple

    @property
    def cutoff(self):
        return int(self.support.max())

    @property
    def coefficients(self):
        return dict(zip(self.support.tolist(), self.values.tolist()))

    def __len__(self):
        return len(self.support)


def _block(spec, j, max_terms):
    primes = spec.interval_primes[j]
    cap = spec.ell[j]
    size = sum(math.comb(len(primes), r) for r in range(min(cap, len(primes)) + 1))
    if size > max_terms:
        raise CutoffOverflow(
            f"Block {j} has {size} coefficients (budget {max_terms}); lower l_{j} or rescale beta."
        )
    weights = {p: smoothing_a(p, spec.K, spec) for p in primes}
    support, values = [1], [1.0]
    for r in range(1, min(cap, len(primes)) + 1):
        for combo in combinations(primes, r):
            support.append(math.prod(combo))
            values.append((-1) ** r * math.prod(weights[p] for p in combo))
    return np.array(support, dtype=np.int64), np.array(values)


def build_mollifier(spec, max_terms=None):
    """The coefficient map of prod_j M_j; block supports are coprime so products are unique."""
    max_terms = settings.NUMERICS["MOLLIFIER_MAX_TERMS"] if max_terms is None else max_terms
    blocks = tuple(_block(spec, j, max_terms) for j in range(spec.K + 1))
    total = math.prod(len(s) for s, _ in blocks)
    bits = sum(math.log2(int(s.max())) for s, _ in blocks)
    if total > max_terms or bits > 62:
        raise CutoffOverflow(
            f"The mollifier needs {total} coefficients up to 2^{bits:.1f} "
            f"(budget {max_terms}); rescale beta or lower the caps l_j."
        )
    support, values = np.array([1], dtype=np.int64), np.array([1.0])
    for block_support, block_values in blocks:
        support = np.multiply.outer(support, block_support).ravel()
        values = np.multiply.outer(values, block_values).ravel()
    order = np.argsort(support)
    logger.info("mollifier q=%d: %d coefficients up to %d", spec.q, len(support), support.max())
    return DirichletPolynomial(support[order], values[order], blocks)


def _dirichlet_sum(support, values, chi, t):
    phases = np.exp(-(0.5 + 1j * t) * np.log(support))
    return complex(np.sum(values * chi.at(support) * phases))


def evaluate_M(poly, chi, t=0.0):
    return _dirichlet_sum(poly.support, poly.values, chi, t)


def evaluate_block(poly, j, chi, t=0.0):
    support, values = poly.blocks[j]
    return _dirichlet_sum(support, values, chi, t)


def _exponent_vectors(count, k, total):
    """Exponent vectors in [0, k]^count with sum <= total."""
    if count == 0:
        yield ()
        return
    for e in range(min(k, total) + 1):
        for rest in _exponent_vectors(count - 1, k, total - e):
            yield (e, *rest)


def block_power_coefficients(spec, j, k):
    """Coefficients a(n; K) alpha_k(n; l_j) of M_j^k, over n with Omega(n) <= k l_j."""
    primes = spec.interval_primes[j]
    weights = [smoothing_a(p, spec.K, spec) for p in primes]
    cap = spec.ell[j]
    support, values = [], []
    for exponents in _exponent_vectors(len(primes), k, k * cap):
        n = math.prod(p**e for p, e in zip(primes, exponents))
        _, alpha = nu_alpha(n, k, cap)
        if alpha:
            support.append(n)
            values.append(alpha * math.prod(w**e for w, e in zip(weights, exponents)))
    return np.array(support, dtype=np.int64), np.array(values)


def power_expansion_residual(spec, poly, j, k, chi, t=0.0):
    """|M_j(chi)^k - sum a(n; K) alpha_k(n; l_j) chi(n) n^(-1/2-it)|."""
    support, values = block_power_coefficients(spec, j, k)
    expanded = _dirichlet_sum(support, values, chi, t)
    return abs(expanded - evaluate_block(poly, j, chi, t) ** k)
