import numpy as np
from scipy.special import loggamma

from special.exceptions import PoleError


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex z (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    poles = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(poles):
        raise PoleError(f"log Gamma has a pole at {z[poles].ravel()[0].real:g}.")
    value = loggamma(z)
    return complex(value) if value.ndim == 0 else value
