import numpy as np
from scipy.special import j0, k0, y0

from special.exceptions import SpecialFunctionError

KINDS = {"J0": j0, "Y0": y0, "K0": k0}


def bessel(kind, x):
    """J0, Y0 or K0 at positive real x (scalar or array)."""
    try:
        function = KINDS[kind]
    except KeyError:
        raise SpecialFunctionError(f"Unknown Bessel kind {kind!r}; expected one of {sorted(KINDS)}.")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise SpecialFunctionError("Bessel functions are evaluated at positive arguments only.")
    value = function(x)
    return float(value) if value.ndim == 0 else value
