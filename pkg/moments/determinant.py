"""The 6x6 system behind the untwisted non-vanishing argument.

Row k is the untwisted main term of the moment with characters permuted by
ROW_PERMUTATIONS[k]; column k holds the coefficient of R at the split
COLUMN_SPLITS[k]. The two tuples coincide: the diagonal is identically 1.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, prod

import mpmath
import numpy as np
from django.conf import settings

from chargroup.characters import even_primitive_characters
from chargroup.quadruple import is_squarefree
from chargroup.sums import epsilon
from moments.prediction import untwisted_coefficients
from runs.utils import ordered_map

logger = logging.getLogger(__name__)

ROW_PERMUTATIONS = (
    (0, 1, 2, 3),
    (2, 3, 0, 1),
    (2, 1, 0, 3),
    (0, 3, 2, 1),
    (3, 1, 2, 0),
    (0, 2, 1, 3),
)
COLUMN_SPLITS = ROW_PERMUTATIONS

# (D1, D2, D3) prefixes and the largest D4 listed for each
SCAN_FAMILIES = (((1, 3, 5), 37), ((1, 3, 7), 19))
SCAN_EXTRA = ((1, 5, 7, 11),)


def _split_key(split):
    return frozenset(split[:2]), frozenset(split[2:])


COLUMN_OF = {_split_key(split): k for k, split in enumerate(COLUMN_SPLITS)}


def leading_coefficient_margin(D):
    D1, D2, D3, D4 = D
    return (
        1
        - 1 / math.sqrt(D1 * D2 * D3 * D4)
        - 1 / math.sqrt(D1 * D3)
        - 1 / math.sqrt(D1 * D4)
        - 1 / math.sqrt(D2 * D3)
        - 1 / math.sqrt(D2 * D4)
    )


def _mp_value(chi, n):
    angle = chi.angle(n)
    if angle is None:
        return mpmath.mpc(0)
    return mpmath.expjpi(2 * mpmath.mpf(angle.numerator) / angle.denominator)


def _mp_epsilon(chi):
    m = chi.modulus
    total = mpmath.fsum(_mp_value(chi, a) * mpmath.expjpi(mpmath.mpf(2 * a) / m) for a in range(m))
    return total / mpmath.sqrt(m)


@lru_cache(maxsize=512)
def _epsilon(chi):
    return epsilon(chi)


def sixfold_matrix(chars, q_residue, high_precision=False):
    """The 6x6 matrix as a complex numpy array, or an mpmath matrix at the working precision."""
    if high_precision:
        backend = {"value": _mp_value, "eps": _mp_epsilon, "sqrt": mpmath.sqrt}
    else:
        backend = {"eps": _epsilon}
    entries = [[0] * 6 for _ in range(6)]
    for row, perm in enumerate(ROW_PERMUTATIONS):
        permuted = tuple(chars[k] for k in perm)
        for coefficient, split in untwisted_coefficients(permuted, q_residue, **backend):
            column = COLUMN_OF[_split_key(tuple(perm[k] for k in split))]
            entries[row][column] = coefficient
    if high_precision:
        return mpmath.matrix(entries)
    return np.array(entries, dtype=complex)


@dataclass(frozen=True)
class DetScanRecord:
    D: tuple
    characters: tuple
    q_residue: int | None
    det_modulus: float
    vacuous: bool = False
    precision: str = "double"


def _units(modulus):
    if modulus == 1:
        return [1]
    return [r for r in range(1, modulus) if gcd(r, modulus) == 1]


def scan_configuration(D, escalation=None, digits=None):
    """|det| for every even primitive character tuple mod D and every unit residue of q."""
    escalation = settings.NUMERICS["DET_ESCALATION"] if escalation is None else escalation
    digits = settings.NUMERICS["DET_PRECISION_DIGITS"] if digits is None else digits
    D = tuple(D)
    options = [even_primitive_characters(d) for d in D]
    if not all(options):
        logger.warning("D=%s has no even primitive character tuple; vacuous.", D)
        return [DetScanRecord(D, (), None, 0.0, vacuous=True)]

    records = []
    for chars in product(*options):
        labels = tuple(chi.label for chi in chars)
        for residue in _units(prod(D)):
            det = abs(np.linalg.det(sixfold_matrix(chars, residue)))
            precision = "double"
            if det < escalation:
                with mpmath.workdps(digits):
                    det = float(abs(mpmath.det(sixfold_matrix(chars, residue, high_precision=True))))
                precision = f"{digits} digits"
                logger.info("D=%s %s q=%d: |det| %.3g re-evaluated", D, labels, residue, det)
            records.append(DetScanRecord(D, labels, residue, float(det), precision=precision))
    logger.info(
        "D=%s: %d determinants, min |det| %.6g",
        D,
        len(records),
        min(r.det_modulus for r in records),
    )
    return records


def scan_configurations():
    """D-tuples where the leading coefficient margin fails, as listed for the scan."""
    configurations = []
    for (D1, D2, D3), bound in SCAN_FAMILIES:
        for D4 in range(D3 + 1, bound + 1):
            D = (D1, D2, D3, D4)
            if not is_squarefree(D4) or gcd(D4, D1 * D2 * D3) != 1:
                continue
            if leading_coefficient_margin(D) <= 0:
                configurations.append(D)
    configurations.extend(SCAN_EXTRA)
    return configurations


def det_scan(configurations=None, workers=None):
    configurations = scan_configurations() if configurations is None else configurations
    batches = ordered_map(scan_configuration, [tuple(D) for D in configurations], workers)
    return [record for batch in batches for record in batch]
