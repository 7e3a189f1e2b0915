"""Three-level Lambda-system EIT spectra in warm buffer-gas vapour.

All rates and detunings are angular frequencies (rad/s); lengths are metres and
densities per cubic metre. ``mhz``/``khz`` convert ordinary frequencies.
"""

import math

from ._core import *  # noqa: F401,F403
from ._core import hanle  # noqa: F401

__version__ = "0.1.0"


def mhz(f):
    return 2.0 * math.pi * 1e6 * f


def khz(f):
    return 2.0 * math.pi * 1e3 * f
