import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from django.conf import settings
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from special.exceptions import IntegrationError, SpecialFunctionError

logger = logging.getLogger(__name__)


def _quad_real(f, a, b, tolerance, relative, limit):
    result = quad(f, a, b, epsabs=tolerance, epsrel=relative, limit=limit, full_output=1)
    value, error = result[0], result[1]
    bound = max(tolerance, relative * abs(value))
    if len(result) > 3 and error > bound:
        raise IntegrationError(
            f"Quadrature on [{a}, {b}] did not converge: {result[3].splitlines()[0]}",
            estimate=value,
            bound=error,
        )
    return value, error


def integrate(f, domain, tolerance=None, relative=None, limit=400):
    """Adaptive integral of f over domain = (a, b); b may be infinite.

    Complex-valued integrands are split into real and imaginary parts. Returns
    (value, error_estimate).
    """
    a, b = domain
    tolerance = settings.NUMERICS["QUAD_TOLERANCE"] if tolerance is None else tolerance
    relative = tolerance if relative is None else relative
    if math.isfinite(a) and math.isinf(b):
        head = _integrate_piece(f, a, a + 1.0, tolerance, relative, limit)
        tail = _integrate_piece(f, a + 1.0, b, tolerance, relative, limit)
        return head[0] + tail[0], head[1] + tail[1]
    return _integrate_piece(f, a, b, tolerance, relative, limit)


def _sample_point(a, b):
    if math.isfinite(a) and math.isfinite(b):
        return 0.5 * (a + b)
    if math.isfinite(a):
        return a + 1.0
    if math.isfinite(b):
        return b - 1.0
    return 0.0


def _integrate_piece(f, a, b, tolerance, relative, limit):
    if np.iscomplexobj(f(_sample_point(a, b))):
        re, re_error = _quad_real(lambda x: complex(f(x)).real, a, b, tolerance, relative, limit)
        im, im_error = _quad_real(lambda x: complex(f(x)).imag, a, b, tolerance, relative, limit)
        return complex(re, im), re_error + im_error
    return _quad_real(lambda x: float(f(x)), a, b, tolerance, relative, limit)


@lru_cache(maxsize=32)
def _legendre(order):
    nodes, weights = leggauss(order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def panel_rule(a, b, panels=64, order=20):
    """Composite Gauss-Legendre nodes and weights on [a, b].

    Panel breakpoints cluster towards both ends, where bump functions have
    their large higher derivatives.
    """
    if not b > a:
        raise SpecialFunctionError(f"Empty interval [{a}, {b}].")
    w = np.linspace(0.0, 1.0, panels + 1)
    edges = a + (b - a) * 0.5 * (1.0 - np.cos(np.pi * w))
    base_nodes, base_weights = _legendre(order)
    left, right = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (right - left) * base_nodes + 0.5 * (right + left)
    weights = 0.5 * (right - left) * base_weights
    return nodes.ravel(), weights.ravel()


@dataclass(frozen=True)
class BumpFunction:
    """Smooth bump on [A, B]: exp(k(1 - 1/(1 - y^2))) with y the centred coordinate.

    Peaks at 1 in the middle of the support and vanishes identically outside.
    """

    support: tuple
    sharpness: float = 1.0

    def __post_init__(self):
        low, high = self.support
        if not 0 < low < high:
            raise SpecialFunctionError(f"Bump support must satisfy 0 < A < B, got {self.support}.")
        object.__setattr__(self, "support", (float(low), float(high)))

    def __call__(self, x):
        low, high = self.support
        x = np.asarray(x, dtype=float)
        y = (2.0 * x - low - high) / (high - low)
        inside = np.abs(y) < 1.0
        gap = np.where(inside, 1.0 - y * y, 1.0)
        value = np.where(inside, np.exp(self.sharpness * (1.0 - 1.0 / gap)), 0.0)
        return float(value) if value.ndim == 0 else value

    def rule(self, panels=64, order=20):
        return panel_rule(*self.support, panels=panels, order=order)

    @cached_property
    def integral(self):
        nodes, weights = self.rule()
        return float(math.fsum(weights * self(nodes)))

    @cached_property
    def derivative_bounds(self):
        """Numerical sup-norm bounds of the derivatives of order 0 to 4."""
        low, high = self.support
        grid = np.linspace(low, high, 40001)
        values = self(grid)
        bounds = {}
        for order in range(5):
            bounds[order] = float(np.max(np.abs(values)))
            values = np.gradient(values, grid)
        return bounds
