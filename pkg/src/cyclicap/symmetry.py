"""Dihedral action on words, optionally extended by the global color swap."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Literal

from cyclicap.coloring import InputError, Word, WordLike
from cyclicap.core import ModulusLike, as_modulus

ROTATION: Literal["rotation"] = "rotation"
REFLECTION: Literal["reflection"] = "reflection"


@dataclass(frozen=True, order=True)
class GroupElement:
    """rotation k: (g w)_i = w_{i-k};  reflection k: (g w)_i = w_{k-i}.

    ``with_swap`` applies B<->R after the index permutation.
    """

    modulus: int
    kind: str
    k: int
    with_swap: bool = False

    def __post_init__(self) -> None:
        if self.kind not in (ROTATION, REFLECTION):
            raise ValueError(f"kind must be rotation or reflection, got {self.kind!r}")
        if not 0 <= self.k < self.modulus:
            raise ValueError(f"parameter {self.k} outside [0, {self.modulus})")

    @classmethod
    def identity(cls, M: ModulusLike) -> "GroupElement":
        return cls(as_modulus(M), ROTATION, 0)

    @property
    def is_identity(self) -> bool:
        return self.kind == ROTATION and self.k == 0 and not self.with_swap

    def _affine(self) -> tuple[int, int]:
        # (g w)_i = w_{s*i + t}
        if self.kind == ROTATION:
            return 1, -self.k
        return -1, self.k

    def source_index(self, i: int) -> int:
        s, t = self._affine()
        return (s * i + t) % self.modulus

    def compose(self, other: "GroupElement") -> "GroupElement":
        """``self ∘ other``: apply ``other`` first, then ``self``."""
        if self.modulus != other.modulus:
            raise InputError("cannot compose elements of different dihedral groups")
        M = self.modulus
        sg, tg = self._affine()
        sh, th = other._affine()
        # (g(h w))_i = (h w)_{sg*i+tg} = w_{sh*(sg*i+tg)+th}
        s, t = sg * sh, (sh * tg + th) % M
        swap = self.with_swap != other.with_swap
        if s == 1:
            return GroupElement(M, ROTATION, (-t) % M, swap)
        return GroupElement(M, REFLECTION, t, swap)

    def inverse(self) -> "GroupElement":
        if self.kind == REFLECTION:
            return self
        return GroupElement(self.modulus, ROTATION, (-self.k) % self.modulus, self.with_swap)


def group_elements(M: ModulusLike, with_swap: bool = False) -> list[GroupElement]:
    """D_M (order 2M), or D_M x <swap> (order 4M)."""
    M = as_modulus(M)
    swaps = (False, True) if with_swap else (False,)
    return [
        GroupElement(M, kind, k, s)
        for s in swaps
        for kind in (ROTATION, REFLECTION)
        for k in range(M)
    ]


def apply(g: GroupElement, w: WordLike) -> Word:
    w = Word(w)
    if len(w) != g.modulus:
        raise InputError(f"word length {len(w)} does not match group modulus {g.modulus}")
    out = Word("".join(w[g.source_index(i)] for i in range(g.modulus)))
    return out.swap() if g.with_swap else out


def stabilizer(w: WordLike, with_swap: bool = False) -> list[GroupElement]:
    w = Word(w)
    return [g for g in group_elements(len(w), with_swap) if apply(g, w) == w]


def orbit(w: WordLike, with_swap: bool = False) -> frozenset[Word]:
    """Full orbit of ``w`` via the algebraic group elements."""
    w = Word(w)
    return frozenset(apply(g, w) for g in group_elements(len(w), with_swap))


def orbit_by_generators(w: WordLike, with_swap: bool = False) -> frozenset[Word]:
    """Full orbit built from string rotations and their reversals."""
    w = Word(w)
    found = set()
    for i in range(len(w)):
        r = w[i:] + w[:i]
        found.add(r)
        found.add(r[::-1])
    if with_swap:
        found |= {x.translate(str.maketrans("BR", "RB")) for x in found}
    return frozenset(Word(x) for x in found)


@dataclass(frozen=True)
class OrbitSummary:
    num_words: int
    num_orbits: int
    orbit_sizes: list[int] = field(default_factory=list)
    representatives: list[Word] = field(default_factory=list)
    with_swap: bool = False

    def to_dict(self) -> dict:
        return {
            "num_words": self.num_words,
            "num_orbits": self.num_orbits,
            "orbit_sizes": list(self.orbit_sizes),
            "reps": [str(r) for r in self.representatives],
            "with_swap": self.with_swap,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def orbits(words: Iterable[WordLike], with_swap: bool = False, *, use_generators: bool = False) -> OrbitSummary:
    """Partition ``words`` into orbits intersected with the input set.

    Orbits are discovered from the smallest unseen word upward, and each
    representative is the lexicographic minimum (B < R) of its orbit part.
    """
    pool = {Word(w) for w in words}
    if len({len(w) for w in pool}) > 1:
        raise InputError("all words must have the same length")
    find = orbit_by_generators if use_generators else orbit
    unseen = set(pool)
    sizes, reps = [], []
    while unseen:
        w = min(unseen)
        part = find(w, with_swap) & pool
        reps.append(min(part))
        sizes.append(len(part))
        unseen -= part
    return OrbitSummary(len(pool), len(sizes), sizes, reps, with_swap)


def reflection_fixed_candidates(M: ModulusLike, axis: int) -> list[Word]:
    """All words fixed by the reflection i -> axis - i, for odd M.

    Such a word is determined by the (M+1)/2 positions axis, axis+1, ...,
    axis+(M-1)/2; the rest mirror them.
    """
    M = as_modulus(M)
    if M % 2 == 0:
        raise InputError("reflection candidates are only generated for odd moduli")
    if not 0 <= axis < M:
        raise InputError(f"axis {axis} outside [0, {M})")
    # position axis*inv2 is the fixed point of i -> axis - i
    centre = (axis * pow(2, -1, M)) % M
    half = (M - 1) // 2
    out = []
    for colors in product("BR", repeat=half + 1):
        cells = [""] * M
        for off, c in enumerate(colors):
            cells[(centre + off) % M] = c
            cells[(centre - off) % M] = c
        out.append(Word("".join(cells)))
    return out
