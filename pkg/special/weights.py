"""The smooth weight V(x; t) of the four-fold approximate functional equation.

V(x; t) = 1/(2 pi i) * integral over Re(s) = sigma of G(s) g(s, t) x^(-s) ds/s with
G(s) = exp(s^2) and

    g(s, t) = Gamma((1/2+it+s)/2)^2 Gamma((1/2-it+s)/2)^2 / (Gamma((1/2+it)/2)^2 Gamma((1/2-it)/2)^2).

The contour integral is a trapezoid sum on the vertical line. The trapezoid
step is set by the distance sigma to the pole at s = 0 and the integration
height by the Gaussian decay of G.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.special import loggamma

from special.exceptions import IntegrationError, SpecialFunctionError

logger = logging.getLogger(__name__)


def weight_G(s):
    return np.exp(np.asarray(s) ** 2)


def gamma_factor(s, t):
    """g(s, t); equals 1 at s = 0 and is even in t."""
    s = np.asarray(s, dtype=complex)
    a = (0.5 + 1j * t) / 2.0
    b = (0.5 - 1j * t) / 2.0
    log_ratio = 2.0 * (loggamma(a + s / 2.0) - loggamma(a)) + 2.0 * (
        loggamma(b + s / 2.0) - loggamma(b)
    )
    return np.exp(log_ratio)


@dataclass(frozen=True)
class WeightTable:
    """Chebyshev interpolant of V in log x over [low, high]."""

    low: float
    high: float
    real: Chebyshev
    imag: Chebyshev

    def __call__(self, x):
        u = np.log(np.asarray(x, dtype=float))
        if np.any(u < self.low - 1e-12) or np.any(u > self.high + 1e-12):
            raise SpecialFunctionError("Weight table evaluated outside its range.")
        return self.real(u) + 1j * self.imag(u)


@dataclass(frozen=True)
class WeightV:
    t: float = 0.0
    sigma: float = 1.0
    tolerance: float = 1e-15
    x_floor: float = 1e-8

    def __post_init__(self):
        if not 0 < self.sigma <= 4:
            raise SpecialFunctionError(f"Contour real part must lie in (0, 4], got {self.sigma}.")

    @cached_property
    def nodes(self):
        """Read-only (s_k, w_k) with V(x) = sum_k w_k x^(-s_k)."""
        log_tol = -math.log(self.tolerance)
        step = 2.0 * math.pi * self.sigma / (
            log_tol + 2.0 * self.sigma * math.log(1.0 / self.x_floor) + 5.0
        )
        height = math.sqrt(self.sigma**2 + log_tol + 4.0 * self.sigma * math.log(3.0 + abs(self.t))) + 2.0
        count = int(math.ceil(height / step))
        tau = step * np.arange(-count, count + 1)
        s = self.sigma + 1j * tau
        weights = step / (2.0 * math.pi) * weight_G(s) * gamma_factor(s, self.t) / s
        s.flags.writeable = False
        weights.flags.writeable = False
        return s, weights

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise SpecialFunctionError("V(x; t) is defined for x > 0.")
        s, weights = self.nodes
        flat = np.log(x).ravel()
        out = np.empty(flat.shape, dtype=complex)
        for start in range(0, flat.size, 4096):
            chunk = flat[start : start + 4096]
            out[start : start + 4096] = np.exp(-np.outer(chunk, s)) @ weights
        if not np.all(np.isfinite(out)):
            raise IntegrationError(
                f"Contour quadrature for V overflowed (t={self.t}, sigma={self.sigma}).",
                estimate=out,
            )
        out = out.reshape(x.shape)
        return complex(out) if out.ndim == 0 else out

    def cutoff(self, tolerance):
        """Smallest x on a log grid beyond which |V(y; t)| stays below tolerance (y <= 1e12)."""
        grid = np.exp(np.linspace(0.0, math.log(1e12), 1201))
        magnitude = np.abs(self(grid))
        above = np.flatnonzero(magnitude >= tolerance)
        if above.size == 0:
            return 1.0
        if above[-1] == grid.size - 1:
            raise IntegrationError(f"|V| has not dropped below {tolerance} by x = 1e12.")
        return float(grid[above[-1] + 1])

    def table(self, low, high, degree=None):
        """Chebyshev interpolant on [low, high] accurate to about the quadrature tolerance."""
        u_low, u_high = math.log(low), math.log(high)
        degrees = [degree] if degree else [96, 192, 384, 768, 1536]
        for deg in degrees:
            real = Chebyshev.interpolate(lambda u: self(np.exp(u)).real, deg, domain=[u_low, u_high])
            imag = Chebyshev.interpolate(lambda u: self(np.exp(u)).imag, deg, domain=[u_low, u_high])
            tail = max(np.max(np.abs(real.coef[-8:])), np.max(np.abs(imag.coef[-8:])))
            if degree or tail < max(100 * self.tolerance, 1e-13):
                logger.debug("V table on [%.3g, %.3g] uses degree %d", low, high, deg)
                return WeightTable(u_low, u_high, real, imag)
        raise IntegrationError(
            f"Chebyshev table for V did not converge on [{low}, {high}].", bound=float(tail)
        )
