"""Textual DRAT proofs: data type, writer and parser."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

Clause = tuple[int, ...]


class DratParseError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class ProofStep:
    clause: Clause
    delete: bool = False

    def to_line(self) -> str:
        body = " ".join(map(str, self.clause))
        prefix = "d " if self.delete else ""
        return f"{prefix}{body} 0\n" if body else f"{prefix}0\n"


@dataclass
class DratProof:
    steps: list[ProofStep] = field(default_factory=list)

    def add(self, clause: Iterable[int]) -> None:
        self.steps.append(ProofStep(tuple(clause)))

    def delete(self, clause: Iterable[int]) -> None:
        self.steps.append(ProofStep(tuple(clause), delete=True))

    @property
    def additions(self) -> int:
        return sum(not s.delete for s in self.steps)

    @property
    def ends_with_empty_clause(self) -> bool:
        return bool(self.steps) and not self.steps[-1].delete and not self.steps[-1].clause

    def to_bytes(self) -> bytes:
        return "".join(s.to_line() for s in self.steps).encode("ascii")

    def __len__(self) -> int:
        return len(self.steps)


def parse_drat(data: Union[bytes, str]) -> DratProof:
    """Parse textual DRAT. Blank lines and ``c`` comment lines are skipped.

    A step may not span lines: every non-blank line must end with 0.
    """
    text = data.decode("ascii") if isinstance(data, bytes) else data
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        delete = toks[0] == "d"
        if delete:
            toks = toks[1:]
        try:
            lits = [int(t) for t in toks]
        except ValueError:
            bad = next(t for t in toks if not t.lstrip("-").isdigit())
            raise DratParseError(f"non-integer token {bad!r}", lineno) from None
        if not lits or lits[-1] != 0:
            raise DratParseError("missing terminating 0", lineno)
        if 0 in lits[:-1]:
            raise DratParseError("0 inside a clause", lineno)
        steps.append(ProofStep(tuple(lits[:-1]), delete))
    return DratProof(steps)
