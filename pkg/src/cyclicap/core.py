"""Modular arithmetic, residue windows and prime utilities."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union


class Mode(str, enum.Enum):
    """Which windows a coloring must avoid."""

    STRONG = "strong-prime"  # every residue step 1..p-1, prime modulus only
    CYCLIC = "cyclic-nondegenerate"  # only windows with four distinct residues

    @classmethod
    def parse(cls, value: Union[str, "Mode"]) -> "Mode":
        if isinstance(value, Mode):
            return value
        aliases = {"strong": cls.STRONG, "cyclic": cls.CYCLIC}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise ValueError(f"unknown mode {value!r}; expected strong or cyclic") from None


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


@dataclass(frozen=True)
class Modulus:
    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or self.value < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.value!r}")

    @property
    def is_prime(self) -> bool:
        return is_prime(self.value)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value


ModulusLike = Union[int, Modulus]


def as_modulus(M: ModulusLike) -> int:
    """Return the integer value of ``M``, validating it is >= 2."""
    if isinstance(M, Modulus):
        return M.value
    return Modulus(int(M)).value


@dataclass(frozen=True)
class Window:
    """The residue progression (i, i+r, i+2r, i+3r) mod M."""

    start: int
    step: int
    indices: tuple[int, int, int, int]
    degenerate: bool


def _make_window(M: int, r: int, i: int) -> Window:
    idx = (i, (i + r) % M, (i + 2 * r) % M, (i + 3 * r) % M)
    return Window(i, r, idx, len(set(idx)) != 4)


@lru_cache(maxsize=256)
def _windows(M: int) -> tuple[Window, ...]:
    return tuple(_make_window(M, r, i) for r in range(1, M) for i in range(M))


def windows(M: ModulusLike) -> tuple[Window, ...]:
    """All M*(M-1) residue windows, step-major then start-ascending."""
    return _windows(as_modulus(M))


@lru_cache(maxsize=256)
def _nondegenerate(M: int) -> tuple[Window, ...]:
    return tuple(w for w in _windows(M) if not w.degenerate)


def nondegenerate_windows(M: ModulusLike) -> tuple[Window, ...]:
    return _nondegenerate(as_modulus(M))


def window_indices(M: int, mode: Mode) -> list[tuple[int, int, int, int]]:
    """Index tuples of the windows a given mode constrains, in emission order.

    Skips building Window objects, which matters for the large prime instances.
    """
    out = []
    strong = Mode.parse(mode) is Mode.STRONG
    for r in range(1, M):
        if not strong and is_degenerate_step(M, r):
            continue
        r2, r3 = 2 * r, 3 * r
        for i in range(M):
            out.append((i, (i + r) % M, (i + r2) % M, (i + r3) % M))
    return out


def is_degenerate_step(M: ModulusLike, r: int) -> bool:
    """True iff windows of step ``r`` repeat a residue.

    Residues i, i+r, i+2r, i+3r are distinct exactly when none of r, 2r, 3r
    vanishes mod M, so the answer does not depend on the start.
    """
    M = as_modulus(M)
    if not 0 <= r < M:
        raise ValueError(f"step must lie in [0, {M}), got {r}")
    return r % M == 0 or (2 * r) % M == 0 or (3 * r) % M == 0


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] via a sieve of Eratosthenes."""
    if lo > hi:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"[: min(2, hi + 1)]
    for f in range(2, math.isqrt(hi) + 1):
        if sieve[f]:
            sieve[f * f :: f] = bytes(len(range(f * f, hi + 1, f)))
    return [n for n in range(max(lo, 2), hi + 1) if sieve[n]]
