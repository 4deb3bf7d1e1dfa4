"""Forward DRAT checking by reverse unit propagation.

Deliberately shares nothing with the solver's propagation: it keeps full
occurrence lists over the active clauses and rescans a clause whenever one
of its literals becomes false.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from cyclicap.cnf import CnfFormula
from cyclicap.drat import DratParseError, DratProof, parse_drat

__all__ = ["CheckConfig", "CheckVerdict", "DratParseError", "check", "parse_drat"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckConfig:
    rat: bool = False
    strict_delete: bool = False
    # cap on literal assignments over the whole run; exceeding it aborts
    max_assignments: Optional[int] = None


@dataclass(frozen=True)
class CheckVerdict:
    verified: bool
    steps_checked: int
    empty_clause_seen: bool
    failing_step: Optional[int] = None
    message: str = ""
    warnings: int = 0

    def transcript(self) -> str:
        lines = [
            f"c steps checked: {self.steps_checked}",
            f"c empty clause seen: {'yes' if self.empty_clause_seen else 'no'}",
        ]
        if self.warnings:
            lines.append(f"c warnings: {self.warnings}")
        if self.message:
            lines.append(f"c {self.message}")
        lines.append("s VERIFIED" if self.verified else "s NOT VERIFIED")
        return "\n".join(lines) + "\n"


class _ResourceLimit(Exception):
    pass


class _Checker:
    def __init__(self, f: CnfFormula, cfg: CheckConfig):
        self.cfg = cfg
        self.clauses: list[Optional[tuple[int, ...]]] = []
        self.occurs: dict[int, set[int]] = defaultdict(set)
        self.by_key: dict[tuple[int, ...], list[int]] = defaultdict(list)
        self.units: set[int] = set()  # ids of active clauses of length <= 1
        self.budget = cfg.max_assignments
        for c in f.clauses:
            self.insert(tuple(c))

    @staticmethod
    def key(clause: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted(set(clause)))

    def insert(self, clause: tuple[int, ...]) -> None:
        lits = self.key(clause)
        cid = len(self.clauses)
        self.clauses.append(lits)
        self.by_key[lits].append(cid)
        for l in lits:
            self.occurs[l].add(cid)
        if len(lits) <= 1:
            self.units.add(cid)

    def remove(self, clause: tuple[int, ...]) -> bool:
        lits = self.key(clause)
        ids = self.by_key.get(lits)
        if not ids:
            return False
        cid = ids.pop()
        self.clauses[cid] = None
        for l in lits:
            self.occurs[l].discard(cid)
        self.units.discard(cid)
        return True

    def conflict_from(self, assumed: list[int]) -> bool:
        """True iff assuming every literal in ``assumed`` propagates to a conflict."""
        value: dict[int, bool] = {}
        queue: list[int] = []

        def set_true(l: int) -> bool:
            v = abs(l)
            have = value.get(v)
            if have is None:
                value[v] = l > 0
                queue.append(l)
                return True
            return have == (l > 0)

        for l in assumed:
            if not set_true(l):
                return True
        for cid in self.units:
            lits = self.clauses[cid]
            if not lits or not set_true(lits[0]):
                return True
        clauses, occurs = self.clauses, self.occurs
        head = 0
        while head < len(queue):
            false_lit = -queue[head]
            head += 1
            if self.budget is not None:
                self.budget -= 1
                if self.budget < 0:
                    raise _ResourceLimit
            for cid in occurs.get(false_lit, ()):
                open_lit = 0
                for l in clauses[cid]:
                    val = value.get(abs(l))
                    if val is None:
                        if open_lit:
                            break
                        open_lit = l
                    elif val == (l > 0):
                        break
                else:
                    if not open_lit:
                        return True
                    set_true(open_lit)
        return False

    def is_rup(self, clause: tuple[int, ...]) -> bool:
        return self.conflict_from([-l for l in clause])

    def is_rat(self, clause: tuple[int, ...]) -> bool:
        if not clause:
            return False
        pivot = clause[0]
        for cid in list(self.occurs.get(-pivot, ())):
            other = self.clauses[cid]
            resolvent = set(clause) | {l for l in other if l != -pivot}
            if any(-l in resolvent for l in resolvent):
                continue
            if not self.conflict_from([-l for l in resolvent]):
                return False
        return True


def check(f: CnfFormula, proof: DratProof, config: Optional[CheckConfig] = None) -> CheckVerdict:
    """Replay ``proof`` on top of ``f``, checking each addition as it arrives.

    Verification succeeds once an empty clause addition is confirmed; any
    steps after it are ignored.
    """
    cfg = config or CheckConfig()
    chk = _Checker(f, cfg)
    warnings = 0
    checked = 0
    try:
        for n, step in enumerate(proof.steps):
            if step.delete:
                if not chk.remove(step.clause):
                    if cfg.strict_delete:
                        return CheckVerdict(False, checked, False, n,
                                            f"step {n}: deleted clause not present")
                    warnings += 1
                    log.warning("step %d: ignoring deletion of absent clause %s", n, step.clause)
                continue
            checked += 1
            if not chk.is_rup(step.clause) and not (cfg.rat and chk.is_rat(step.clause)):
                return CheckVerdict(False, checked, False, n,
                                    f"step {n}: clause {list(step.clause)} is not RUP"
                                    + (" or RAT" if cfg.rat else ""), warnings)
            if not step.clause:
                return CheckVerdict(True, checked, True, None, "", warnings)
            chk.insert(step.clause)
    except _ResourceLimit:
        return CheckVerdict(False, checked, False, None,
                            "resource limit exceeded; proof neither accepted nor refuted", warnings)
    return CheckVerdict(False, checked, False, None, "no empty clause derived", warnings)
