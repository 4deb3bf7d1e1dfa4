"""Exhaustive enumeration of avoiding words by pruned depth-first search."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from cyclicap.coloring import InputError, Word
from cyclicap.core import Mode, ModulusLike, as_modulus, is_prime, window_indices

DEFAULT_LIMIT_GUARD = 24


class EnumerationGuardError(InputError):
    """Refusal to enumerate 2^M words for M above the guard."""


@dataclass(frozen=True)
class EnumerationResult:
    modulus: int
    mode: Mode
    solutions: tuple[Word, ...]

    @property
    def count(self) -> int:
        return len(self.solutions)


def _masks_by_last_position(M: int, mode: Mode) -> list[tuple[int, ...]]:
    # each window is checked once its highest position gets a color
    buckets: list[set[int]] = [set() for _ in range(M)]
    for idx in window_indices(M, mode):
        mask = 0
        for j in idx:
            mask |= 1 << j
        buckets[max(idx)].add(mask)
    return [tuple(sorted(b)) for b in buckets]


def enumerate_all(
    M: ModulusLike,
    mode: Union[Mode, str] = Mode.STRONG,
    limit_guard: int = DEFAULT_LIMIT_GUARD,
    *,
    prune_runs: bool = False,
    fix_first: bool = False,
) -> EnumerationResult:
    """Every word of length M that passes the verifier for ``mode``.

    Positions are colored left to right (B before R). A window is tested as
    soon as its last position is colored, so windows that wrap around are
    only tested at the end of a branch.

    ``prune_runs`` adds an explicit no-four-in-a-row cut (redundant with the
    step-1 windows). ``fix_first`` searches only words starting with B and
    adds their color swaps afterwards; the result is identical.
    """
    M = as_modulus(M)
    mode = Mode.parse(mode)
    if M > limit_guard:
        raise EnumerationGuardError(
            f"refusing to enumerate 2^{M} words (guard is {limit_guard}); "
            "raise limit_guard or use the SAT path"
        )
    if mode is Mode.STRONG and not is_prime(M):
        raise InputError(f"strong-prime mode needs a prime modulus, got {M}")

    masks = _masks_by_last_position(M, mode)
    found: list[int] = []

    def run_ok(bits: int, j: int) -> bool:
        if j < 3:
            return True
        quad = (bits >> (j - 3)) & 0b1111
        return quad not in (0, 0b1111)

    def dfs(j: int, bits: int) -> None:
        if j == M:
            found.append(bits)
            return
        for color in (0, 1):
            b = bits | (color << j)
            if prune_runs and not run_ok(b, j):
                continue
            for m in masks[j]:
                hit = b & m
                if hit == 0 or hit == m:
                    break
            else:
                dfs(j + 1, b)
            if fix_first and j == 0:
                break

    dfs(0, 0)
    if fix_first:
        full = (1 << M) - 1
        found += [b ^ full for b in found]
    words = sorted(Word.from_bits(b, M) for b in found)
    return EnumerationResult(M, mode, tuple(words))


def balance_histogram(res: EnumerationResult) -> dict[tuple[int, int], int]:
    """Tally solutions by (number of B, number of R)."""
    return dict(sorted(Counter(w.balance() for w in res.solutions).items(), reverse=True))


def write_solutions(res: EnumerationResult, path: Union[str, Path]) -> Path:
    """One word per line, LF endings."""
    path = Path(path)
    path.write_bytes("".join(w + "\n" for w in res.solutions).encode("ascii"))
    return path


def read_words(path: Union[str, Path]) -> list[Word]:
    return [Word.parse(line) for line in Path(path).read_text().splitlines() if line.strip()]
