"""Words over {B, R} and the avoidance verifiers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from cyclicap.core import ModulusLike, Window, as_modulus, is_prime, nondegenerate_windows, windows

BLUE, RED = "B", "R"
_SWAP = str.maketrans("BR", "RB")


class InputError(ValueError):
    """Raised when an operation's preconditions on its inputs are violated."""


class Word(str):
    """A coloring of Z/MZ written as an uppercase string over {B, R}.

    Position j is red iff the CNF variable j+1 is true (B=0, R=1).
    """

    __slots__ = ()

    def __new__(cls, colors: str) -> "Word":
        if isinstance(colors, Word):
            return colors
        if not colors or not set(colors) <= {BLUE, RED}:
            bad = sorted(set(colors) - {BLUE, RED})
            raise InputError(f"word must be a non-empty string over {{B,R}}; bad symbols {bad}")
        return super().__new__(cls, colors)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Lenient constructor for user input: strips whitespace, uppercases."""
        return cls(text.strip().upper())

    @classmethod
    def from_bits(cls, bits: int, length: int) -> "Word":
        return cls("".join(RED if bits >> j & 1 else BLUE for j in range(length)))

    @property
    def bits(self) -> int:
        """Integer with bit j set iff position j is R."""
        return sum(1 << j for j, c in enumerate(self) if c == RED)

    def swap(self) -> "Word":
        return Word(self.translate(_SWAP))

    def balance(self) -> tuple[int, int]:
        """(number of B, number of R)."""
        b = self.count(BLUE)
        return b, len(self) - b


WordLike = Union[str, Word]


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    windows_checked: int
    mono_count: int
    first_failure: Optional[tuple[Window, str]] = None

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        win, block = self.first_failure
        return f"FAIL at ({','.join(map(str, win.indices))}) block={block}"


def _check_length(M: int, w: Word) -> None:
    if len(w) != M:
        raise InputError(f"word length {len(w)} does not match modulus {M}")


def _scan(w: Word, wins: Iterable[Window]) -> VerifyReport:
    checked = mono = 0
    first = None
    for win in wins:
        checked += 1
        a, b, c, d = win.indices
        x = w[a]
        if x == w[b] == w[c] == w[d]:
            mono += 1
            if first is None:
                first = (win, x * 4)
    return VerifyReport(mono == 0, checked, mono, first)


def verify_strong(p: ModulusLike, w: WordLike) -> VerifyReport:
    """Check every residue window of every step 1..p-1 on a prime cycle."""
    p = as_modulus(p)
    if not is_prime(p):
        raise InputError(f"strong form needs a prime modulus, got {p}; use verify_cyclic")
    w = Word(w)
    _check_length(p, w)
    return _scan(w, windows(p))


def verify_cyclic(M: ModulusLike, w: WordLike) -> VerifyReport:
    """Check only the non-degenerate windows of Z/MZ; M may be composite."""
    M = as_modulus(M)
    w = Word(w)
    _check_length(M, w)
    return _scan(w, nondegenerate_windows(M))


def count_mono_nondegenerate(M: ModulusLike, w: WordLike) -> int:
    return verify_cyclic(M, w).mono_count


def periodic_extension_check(p: ModulusLike, w: WordLike, span_multiplier: int) -> bool:
    """Brute-force the lifting argument on a finite stretch of Z.

    Repeats ``w`` over [0, span_multiplier*p) and checks every integer
    4-term progression inside it whose step is not a multiple of p.
    """
    p = as_modulus(p)
    if span_multiplier < 1:
        raise InputError("span_multiplier must be >= 1")
    w = Word(w)
    if not verify_strong(p, w).ok:
        raise InputError(f"{w} does not pass the strong verifier mod {p}")
    n = span_multiplier * p
    c = [w[i % p] for i in range(n)]
    for d in range(1, (n - 1) // 3 + 1):
        if d % p == 0:
            continue
        for a in range(n - 3 * d):
            if c[a] == c[a + d] == c[a + 2 * d] == c[a + 3 * d]:
                return False
    return True


def run_length_max(w: WordLike) -> int:
    """Longest cyclic run of one color."""
    w = Word(w)
    n = len(w)
    if w.count(w[0]) == n:
        return n
    # rotate so the word starts right after a color change; no run wraps then
    shift = next(j for j in range(n) if w[j] != w[j - 1])
    s = w[shift:] + w[:shift]
    best = run = 1
    for j in range(1, n):
        run = run + 1 if s[j] == s[j - 1] else 1
        best = max(best, run)
    return best
