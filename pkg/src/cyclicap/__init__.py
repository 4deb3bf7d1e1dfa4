"""2-colorings of Z/MZ avoiding monochromatic 4-term arithmetic progressions.

Window generation, verification, exhaustive enumeration, dihedral orbits,
CNF encoding, an embedded CDCL solver with DRAT logging, an independent DRAT
checker, and sweep drivers that tie them together.
"""

__version__ = "0.1.0"

from cyclicap.core import (
    Mode,
    Modulus,
    Window,
    is_degenerate_step,
    is_prime,
    nondegenerate_windows,
    primes_in_range,
    windows,
)
from cyclicap.coloring import (
    InputError,
    VerifyReport,
    Word,
    count_mono_nondegenerate,
    periodic_extension_check,
    run_length_max,
    verify_cyclic,
    verify_strong,
)

__all__ = [
    "InputError",
    "Mode",
    "Modulus",
    "VerifyReport",
    "Window",
    "Word",
    "count_mono_nondegenerate",
    "is_degenerate_step",
    "is_prime",
    "nondegenerate_windows",
    "periodic_extension_check",
    "primes_in_range",
    "run_length_max",
    "verify_cyclic",
    "verify_strong",
    "windows",
]
