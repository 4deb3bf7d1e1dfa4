"""CNF encoding of the avoidance constraints, DIMACS I/O, model decoding."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from cyclicap import __version__
from cyclicap.coloring import InputError, Word
from cyclicap.core import Mode, ModulusLike, as_modulus, is_prime, window_indices

Clause = tuple[int, ...]


class DimacsError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def is_satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment.get(abs(l), False) == (l > 0) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class Model:
    """Variable index -> truth value; may be partial."""

    assignment: dict[int, bool] = field(default_factory=dict)

    @classmethod
    def from_literals(cls, lits: Sequence[int]) -> "Model":
        return cls({abs(l): l > 0 for l in lits if l != 0})

    def literals(self) -> list[int]:
        return [v if val else -v for v, val in sorted(self.assignment.items())]


def encode(M: ModulusLike, mode: Union[Mode, str] = Mode.STRONG) -> CnfFormula:
    """Two clauses per in-scope window.

    For window (a,b,c,d) the positive clause x_{a+1} v ... v x_{d+1} rules
    out BBBB and the negative clause rules out RRRR. Clauses come in window
    emission order, positive first.
    """
    M = as_modulus(M)
    mode = Mode.parse(mode)
    if mode is Mode.STRONG and not is_prime(M):
        raise InputError(f"strong-prime encoding needs a prime modulus, got {M}")
    clauses: list[Clause] = []
    for a, b, c, d in window_indices(M, mode):
        pos = (a + 1, b + 1, c + 1, d + 1)
        clauses.append(pos)
        clauses.append((-a - 1, -b - 1, -c - 1, -d - 1))
    return CnfFormula(M, tuple(clauses))


def to_dimacs(f: CnfFormula, comment: Optional[str] = None) -> bytes:
    """DIMACS text; no comment lines unless ``comment`` is given."""
    parts = []
    if comment is not None:
        parts.extend(f"c {line}\n" for line in comment.splitlines())
    parts.append(f"p cnf {f.num_vars} {len(f.clauses)}\n")
    parts.extend(" ".join(map(str, c)) + " 0\n" for c in f.clauses)
    return "".join(parts).encode("ascii")


def provenance_comment(M: int, mode: Mode) -> str:
    return f"cyclicap {__version__} M={M} mode={Mode.parse(mode).value}"


def parse_dimacs(data: Union[bytes, str]) -> CnfFormula:
    text = data.decode("ascii") if isinstance(data, bytes) else data
    header = None
    clauses: list[Clause] = []
    pending: list[int] = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            toks = line.split()
            if len(toks) != 4 or toks[1] != "cnf" or not all(t.isdigit() for t in toks[2:]):
                raise DimacsError(f"malformed header {line!r}", lineno)
            header = (int(toks[2]), int(toks[3]))
            continue
        if header is None:
            raise DimacsError("clause before 'p cnf' header", lineno)
        if line.startswith("%"):  # SATLIB end marker
            break
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"non-integer token {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
                pending_line = None
                continue
            if abs(lit) > header[0]:
                raise DimacsError(f"literal {lit} out of range 1..{header[0]}", lineno)
            pending.append(lit)
            pending_line = pending_line or lineno
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if pending:
        raise DimacsError("clause missing terminating 0", pending_line)
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses but {len(clauses)} present")
    return CnfFormula(header[0], tuple(clauses))


_INT = re.compile(r"-?\d+")


def parse_model(output: str, strict: bool = True) -> Optional[Model]:
    """Extract a model from raw solver output.

    Strict mode reads only ``v `` lines and returns None when there are
    none; lenient mode takes every integer token on every line.
    """
    vals: dict[int, bool] = {}
    saw = False
    for line in output.splitlines():
        if strict:
            if not line.startswith("v "):
                continue
            saw = True
            toks = line.split()[1:]
        else:
            toks = line.split()
        for tok in toks:
            if _INT.fullmatch(tok):
                v = int(tok)
                if v:
                    vals[abs(v)] = v > 0
    if strict and not saw:
        return None
    return Model(vals)


def model_to_word(M: ModulusLike, m: Model) -> Word:
    """Position j is R iff variable j+1 is true; missing variables are B."""
    M = as_modulus(M)
    return Word("".join("R" if m.assignment.get(j, False) else "B" for j in range(1, M + 1)))


def model_lines(m: Model, num_vars: int) -> str:
    """``v`` lines for a model, 10 literals per line, closing with 0."""
    lits = [v if m.assignment.get(v, False) else -v for v in range(1, num_vars + 1)]
    rows = [lits[i : i + 10] for i in range(0, len(lits), 10)]
    out = "".join("v " + " ".join(map(str, r)) + "\n" for r in rows)
    return out + "v 0\n"


def cnf_filename(M: int, mode: Mode) -> str:
    return f"avoid_p{M}.cnf" if Mode.parse(mode) is Mode.STRONG else f"avoid_M{M}.cnf"
