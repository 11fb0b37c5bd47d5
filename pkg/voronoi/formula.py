"""Voronoi summation for the convolution of two primitive characters.

sum_n (chi1 * chi2)(n) e(an/c) g(n) equals two main terms (present when D_j | c)
plus a dual sum against Y0, J0 and K0 transforms of g. Each chi_j splits as
chi_j' mod D_j' times chi_j'' mod (c, D_j), with D_j = D_j' (c, D_j).
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from django.conf import settings

from chargroup.characters import character_table, crt_factor
from chargroup.quadruple import is_squarefree
from chargroup.sums import additive, convolve, dirichlet_convolution, epsilon, gauss_sum
from lfun.lvalues import l_value
from runs.utils import complex_fsum
from special.bessel import bessel
from special.quadrature import BumpFunction
from voronoi.exceptions import TailTooLarge, VoronoiError

logger = logging.getLogger(__name__)

# sharper bumps keep the dual transforms in their Gaussian decay range
DEFAULT_SHARPNESS = 12.0
FIRST_DUAL = 64
CHUNK = 1024

# (a, c, (D1, D2), primitive-character choice, support of g)
REFERENCE_GRID = (
    (1, 3, (1, 5), (0, 1), (10, 20)),
    (2, 5, (1, 5), (0, 1), (10, 20)),
    (1, 15, (3, 5), (0, 1), (10, 20)),
)
GRID = REFERENCE_GRID + (
    (1, 4, (1, 5), (0, 0), (10, 20)),
    (3, 7, (1, 5), (0, 1), (10, 20)),
    (1, 1, (1, 5), (0, 1), (10, 20)),
    (1, 3, (1, 13), (0, 1), (10, 20)),
    (2, 3, (5, 1), (1, 0), (10, 20)),
    (1, 2, (3, 5), (0, 1), (10, 20)),
    (1, 6, (3, 5), (0, 1), (10, 20)),
    (5, 6, (1, 7), (0, 1), (10, 20)),
    (1, 3, (1, 5), (0, 1), (5, 15)),
)


def primitive_characters(modulus):
    return [chi for chi in character_table(modulus) if chi.is_primitive]


@dataclass(frozen=True)
class VoronoiConfig:
    a: int
    c: int
    chi1: object
    chi2: object
    bump: BumpFunction = field(default_factory=lambda: BumpFunction((10, 20), DEFAULT_SHARPNESS))
    dual_cutoff: int = None
    tolerance: float = None

    def __post_init__(self):
        if self.c < 1 or math.gcd(self.a, self.c) != 1:
            raise VoronoiError(f"Need c >= 1 and (a, c) = 1, got a={self.a}, c={self.c}.")
        for name, chi in (("chi1", self.chi1), ("chi2", self.chi2)):
            if not (chi.is_primitive and is_squarefree(chi.modulus)):
                raise VoronoiError(f"{name} = {chi} must be primitive with square-free modulus.")
        if math.gcd(self.D1, self.D2) != 1:
            raise VoronoiError(f"Moduli {self.D1} and {self.D2} are not coprime.")

    @classmethod
    def from_dict(cls, data):
        """Build from {"a", "c", "D", optional "choice", "support", "sharpness", "dual_cutoff", "tolerance"}."""
        try:
            D1, D2 = (int(d) for d in data["D"])
            choice = data.get("choice", (0, 0))
            chars = []
            for d, index in zip((D1, D2), choice):
                options = primitive_characters(d)
                if not options:
                    raise VoronoiError(f"No primitive character modulo {d}.")
                chars.append(options[int(index) % len(options)])
            bump = BumpFunction(
                tuple(data.get("support", (10, 20))), float(data.get("sharpness", DEFAULT_SHARPNESS))
            )
            return cls(
                int(data["a"]),
                int(data["c"]),
                chars[0],
                chars[1],
                bump,
                data.get("dual_cutoff"),
                data.get("tolerance"),
            )
        except (KeyError, TypeError) as exc:
            raise VoronoiError(f"Malformed Voronoi configuration {data!r}: {exc}") from exc

    def as_dict(self):
        return {
            "a": self.a,
            "c": self.c,
            "D": [self.D1, self.D2],
            "characters": [self.chi1.label, self.chi2.label],
            "support": list(self.bump.support),
            "sharpness": self.bump.sharpness,
        }

    @property
    def D1(self):
        return self.chi1.modulus

    @property
    def D2(self):
        return self.chi2.modulus

    @cached_property
    def split(self):
        """((D1', d1), (D2', d2)) with d_j = (c, D_j)."""
        d1, d2 = math.gcd(self.c, self.D1), math.gcd(self.c, self.D2)
        return (self.D1 // d1, d1), (self.D2 // d2, d2)

    @cached_property
    def factors(self):
        """(chi1', chi1'', chi2', chi2'')."""
        (D1p, d1), (D2p, d2) = self.split
        return crt_factor(self.chi1, D1p, d1) + crt_factor(self.chi2, D2p, d2)

    @property
    def scale(self):
        """c sqrt(D1' D2'), the Bessel argument being 4 pi sqrt(n x) / scale."""
        (D1p, _), (D2p, _) = self.split
        return self.c * math.sqrt(D1p * D2p)

    @property
    def dual_shift(self):
        """The inverse of a D1' D2' modulo c."""
        (D1p, _), (D2p, _) = self.split
        return pow(self.a * D1p * D2p, -1, self.c)


def lhs_sum(cfg):
    low, high = cfg.bump.support
    terms = [
        convolve(cfg.chi1, cfg.chi2, n) * complex(additive(cfg.a * n / cfg.c)) * cfg.bump(n)
        for n in range(math.floor(low) + 1, math.ceil(high))
    ]
    return complex_fsum(terms)


def main_terms(cfg):
    """The two L(1)-weighted main terms with their divisibility indicators."""
    if cfg.D1 == 1 and cfg.D2 == 1:
        raise VoronoiError("D1 = D2 = 1 puts a pole at L(1, principal); this case is not covered.")
    a, c = cfg.a, cfg.c
    mass = cfg.bump.integral
    first = second = 0j
    if c % cfg.D1 == 0:
        first = (
            math.sqrt(cfg.D1)
            * epsilon(cfg.chi1)
            * np.conj(cfg.chi1(a))
            * cfg.chi2(c // cfg.D1)
            / c
            * l_value(cfg.chi1.conj() * cfg.chi2, 1)
            * mass
        )
    if c % cfg.D2 == 0:
        second = (
            math.sqrt(cfg.D2)
            * epsilon(cfg.chi2)
            * cfg.chi1(c // cfg.D2)
            * np.conj(cfg.chi2(a))
            / c
            * l_value(cfg.chi1 * cfg.chi2.conj(), 1)
            * mass
        )
    return complex(first), complex(second)


def dual_prefactor(cfg):
    """eps(chi1') eps(chi2') chi1' chi2'(c) chi1''(-inv(a D2')) chi2''(-inv(a D1')) / (c sqrt(D1' D2'))."""
    chi1p, chi1pp, chi2p, chi2pp = cfg.factors
    (D1p, _), (D2p, _) = cfg.split
    a, c = cfg.a, cfg.c
    return complex(
        epsilon(chi1p)
        * epsilon(chi2p)
        * chi1p(c)
        * chi2p(c)
        * chi1pp(-pow(a * D2p, -1, c) % c)
        * chi2pp(-pow(a * D1p, -1, c) % c)
        / cfg.scale
    )


def dual_coefficients(cfg, size):
    """(conj(chi1') chi2'' * chi1'' conj(chi2'))(n) for n = 0..size."""
    chi1p, chi1pp, chi2p, chi2pp = cfg.factors
    n = np.arange(size + 1)
    return dirichlet_convolution(np.conj(chi1p.at(n)) * chi2pp.at(n), chi1pp.at(n) * np.conj(chi2p.at(n)))


def branch_weights(cfg):
    """Weights of the Y0, J0 and K0 dual sums."""
    chi1p, chi1pp, chi2p, chi2pp = cfg.factors
    parity = cfg.chi1.parity * cfg.chi2.parity
    return (
        -(1 + parity) * math.pi,
        -(1 - parity) * 1j * math.pi,
        2 * (chi1p.parity * chi2pp.parity + chi1pp.parity * chi2p.parity),
    )


def _panels(cfg, top):
    low, high = cfg.bump.support
    oscillations = 4 * math.pi * math.sqrt(top) / cfg.scale * (math.sqrt(high) - math.sqrt(low)) / (2 * math.pi)
    return max(64, int(2 * oscillations) + 1)


def kernel_integrals(cfg, ns, panels=None, order=20):
    """(int g Y0, int g J0, int g K0) at 4 pi sqrt(n x) / scale for each n in ns."""
    ns = np.asarray(ns, dtype=float)
    panels = _panels(cfg, ns.max()) if panels is None else panels
    nodes, weights = cfg.bump.rule(panels=panels, order=order)
    weighted = weights * cfg.bump(nodes)
    argument = 4 * math.pi / cfg.scale * np.sqrt(np.outer(ns, nodes))
    return tuple(bessel(kind, argument) @ weighted for kind in ("Y0", "J0", "K0"))


def _dual_terms(cfg, coefficients, start, stop, prefactor, weights, panels=None):
    ns = np.arange(start, stop + 1)
    iy, ij, ik = kernel_integrals(cfg, ns, panels)
    minus = additive(-cfg.dual_shift * ns / cfg.c)
    plus = additive(cfg.dual_shift * ns / cfg.c)
    wy, wj, wk = weights
    return prefactor * coefficients[start : stop + 1] * ((wy * iy + wj * ij) * minus + wk * ik * plus)


@dataclass(frozen=True)
class RHSValue:
    value: complex
    main_terms: tuple
    dual: complex
    prefactor: complex
    dual_cutoff: int
    tail: float
    quadrature_error: float


def rhs_value(cfg, dual_terms=None):
    """Main terms plus the dual sum, doubling the cutoff until the last quarter is below tolerance.

    A fixed `dual_terms` skips the doubling and reports the same tail measure.
    """
    tolerance = settings.NUMERICS["VORONOI_TOLERANCE"] if cfg.tolerance is None else cfg.tolerance
    cap = settings.NUMERICS["VORONOI_MAX_DUAL"] if cfg.dual_cutoff is None else cfg.dual_cutoff
    mains = main_terms(cfg)
    prefactor = dual_prefactor(cfg)
    weights = branch_weights(cfg)

    size = FIRST_DUAL if dual_terms is None else int(dual_terms)
    terms = np.zeros(0, dtype=complex)
    while True:
        coefficients = dual_coefficients(cfg, size)
        for start in range(len(terms) + 1, size + 1, CHUNK):
            stop = min(start + CHUNK - 1, size)
            terms = np.concatenate([terms, _dual_terms(cfg, coefficients, start, stop, prefactor, weights)])
        tail = float(np.sum(np.abs(terms[3 * size // 4 :])))
        if dual_terms is not None or tail < tolerance:
            break
        if 2 * size > cap:
            raise TailTooLarge(
                f"Dual sum tail {tail:.3g} is above {tolerance:g} at {size} terms; "
                f"raise the dual cutoff (cap {cap}) or sharpen the bump.",
                tail=tail,
            )
        size *= 2
        logger.info("voronoi a=%d c=%d D=(%d,%d): dual cutoff -> %d", cfg.a, cfg.c, cfg.D1, cfg.D2, size)

    coarse = _dual_terms(cfg, dual_coefficients(cfg, FIRST_DUAL), 1, min(FIRST_DUAL, size), prefactor, weights, 32)
    quadrature_error = float(np.sum(np.abs(coarse - terms[: len(coarse)])))
    dual = complex_fsum(terms)
    return RHSValue(mains[0] + mains[1] + dual, mains, dual, prefactor, size, tail, quadrature_error)


@dataclass(frozen=True)
class VoronoiResult:
    config: VoronoiConfig
    lhs: complex
    rhs: RHSValue

    @property
    def residual(self):
        return abs(self.lhs - self.rhs.value)

    @property
    def budget(self):
        return max(1e-6, 10 * (self.rhs.quadrature_error + self.rhs.tail))

    @property
    def passed(self):
        return self.residual <= self.budget


def verify_voronoi(cfg, dual_terms=None):
    result = VoronoiResult(cfg, lhs_sum(cfg), rhs_value(cfg, dual_terms))
    log = logger.info if result.passed else logger.warning
    log(
        "voronoi a=%d c=%d D=(%d,%d): residual %.3g (budget %.3g, %d dual terms)",
        cfg.a,
        cfg.c,
        cfg.D1,
        cfg.D2,
        result.residual,
        result.budget,
        result.rhs.dual_cutoff,
    )
    return result


def prefactor_from_gauss_sums(cfg):
    """The dual prefactor rebuilt from raw Gauss sums and CRT lifts."""
    chi1p, chi1pp, chi2p, chi2pp = cfg.factors
    (D1p, _), (D2p, _) = cfg.split
    a, c = cfg.a, cfg.c
    inverse1 = next(x for x in range(c) if (x * a * D2p) % c == 1 % c)
    inverse2 = next(x for x in range(c) if (x * a * D1p) % c == 1 % c)
    return complex(
        gauss_sum(chi1p)
        * gauss_sum(chi2p)
        * chi1p(c)
        * chi2p(c)
        * chi1pp(c - inverse1)
        * chi2pp(c - inverse2)
        / (c * D1p * D2p)
    )


def grid_configs(grid=GRID):
    return [
        VoronoiConfig.from_dict({"a": a, "c": c, "D": D, "choice": choice, "support": support})
        for a, c, D, choice, support in grid
    ]
