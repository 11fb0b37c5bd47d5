import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import digamma
from sympy import primerange

from chargroup.sums import epsilon
from lfun.exceptions import LFunctionError
from lfun.hurwitz import hurwitz_zeta
from special.gamma import log_gamma

logger = logging.getLogger(__name__)

METHODS = ("hurwitz", "euler", "afe")


@dataclass(frozen=True)
class LValue:
    s: complex
    character: str
    value: complex
    method: str
    error: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise LFunctionError(f"Unknown evaluation method {self.method!r}.")
        if not self.error > 0:
            object.__setattr__(self, "error", float(np.finfo(float).eps))

    def __complex__(self):
        return complex(self.value)


@lru_cache(maxsize=64)
def _hurwitz_row(modulus, s):
    """zeta(s, a/m) for a = 1..m; shared by every character of the same modulus."""
    shifts = np.arange(1, modulus + 1, dtype=float) / modulus
    row = hurwitz_zeta(s, shifts)
    row = np.atleast_1d(row)
    row.flags.writeable = False
    return row


def lvalue(chi, s):
    """L(s, chi) as an LValue, from Hurwitz zeta or the digamma sum at s = 1."""
    s = complex(s)
    m = chi.modulus
    coefficients = chi.values[np.arange(1, m + 1) % m]
    if s == 1:
        if chi.is_principal:
            raise LFunctionError(f"L(s, {chi}) has a pole at s = 1.")
        terms = coefficients * digamma(np.arange(1, m + 1) / m)
        value = -complex(np.sum(terms)) / m
        error = 8 * np.finfo(float).eps * float(np.sum(np.abs(terms))) / m
        return LValue(s, chi.label, value, "hurwitz", error)
    row = _hurwitz_row(m, s)
    terms = coefficients * row
    scale = math.exp(-s.real * math.log(m))
    value = complex(np.sum(terms)) * np.exp(-s * math.log(m))
    error = 64 * np.finfo(float).eps * scale * float(np.sum(np.abs(terms)))
    return LValue(s, chi.label, complex(value), "hurwitz", error)


def l_value(chi, s):
    return lvalue(chi, s).value


def euler_lvalue(chi, s, prime_cutoff=10_000):
    """Truncated Euler product over primes below `prime_cutoff`, valid for Re(s) > 1."""
    s = complex(s)
    if s.real <= 1:
        raise LFunctionError(f"The Euler product needs Re(s) > 1, got {s}.")
    primes = np.array(list(primerange(2, prime_cutoff)), dtype=np.int64)
    local = 1.0 - chi.at(primes) * np.exp(-s * np.log(primes))
    value = complex(np.exp(-np.sum(np.log(local))))
    # sum_{n >= P} n^(-sigma) bounds the relative tail
    tail = prime_cutoff ** (1 - s.real) / (s.real - 1) + prime_cutoff ** (-s.real)
    return LValue(s, chi.label, value, "euler", abs(value) * (math.exp(tail) - 1))


def _require_even_primitive(chi):
    if chi.modulus < 2 or not (chi.is_even and chi.is_primitive):
        raise LFunctionError(f"{chi} must be even and primitive with modulus > 1.")


def completed_lambda(chi, s):
    """Lambda(1/2 + s, chi) = (m/pi)^(s/2) Gamma((1/2 + s)/2) L(1/2 + s, chi)."""
    _require_even_primitive(chi)
    s = complex(s)
    factor = np.exp(s / 2 * math.log(chi.modulus / math.pi) + log_gamma((0.5 + s) / 2))
    return complex(factor * l_value(chi, 0.5 + s))


def fe_residual(chi, s):
    """|Lambda(1/2 + s, chi) - eps(chi) Lambda(1/2 - s, conj chi)|."""
    _require_even_primitive(chi)
    return abs(completed_lambda(chi, s) - epsilon(chi) * completed_lambda(chi.conj(), -complex(s)))
