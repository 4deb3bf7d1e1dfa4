"""A small CDCL SAT solver that logs textual DRAT proofs.

Two-watched-literal propagation, first-UIP learning, VSIDS-style variable
activities, phase saving, Luby restarts and activity-based deletion of
learned clauses. Sized for the instances in this package (at most a few
thousand variables), not as a general-purpose solver.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from cyclicap.cnf import CnfFormula, Model
from cyclicap.drat import DratProof


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


class SolverError(RuntimeError):
    """Internal inconsistency, e.g. a model that fails the input formula."""


@dataclass(frozen=True)
class SolverConfig:
    timeout: float = 600.0
    seed: int = 0
    proof: bool = True
    max_conflicts: Optional[int] = None
    restart_base: int = 100
    var_decay: float = 0.95
    clause_decay: float = 0.999
    # learned clauses kept before the first reduction; grows by 10% each time
    max_learnts: int = 2000


@dataclass
class SolveStats:
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0
    deleted: int = 0
    wall_time: float = 0.0

    def counters(self) -> dict[str, int]:
        """Everything except wall time; identical across reruns."""
        return {k: v for k, v in vars(self).items() if k != "wall_time"}


@dataclass
class SolveOutcome:
    status: Status
    model: Optional[Model] = None
    proof: Optional[DratProof] = None
    stats: SolveStats = field(default_factory=SolveStats)
    reason: str = ""
    output: str = ""  # raw text of an external solver run


class _Clause:
    __slots__ = ("lits", "learnt", "activity", "deleted")

    def __init__(self, lits: list[int], learnt: bool = False):
        self.lits = lits
        self.learnt = learnt
        self.activity = 0.0
        self.deleted = False


def _luby(i: int) -> int:
    """i-th element (0-based) of 1 1 2 1 1 2 4 1 1 2 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class _Search:
    # internal literal code: 2*v for x_v, 2*v+1 for not x_v

    def __init__(self, f: CnfFormula, config: SolverConfig):
        self.cfg = config
        self.n = n = f.num_vars
        self.vals = [0] * (2 * n + 2)  # per literal: 1 true, -1 false, 0 unassigned
        self.level = [0] * (n + 1)
        self.reason: list[Optional[_Clause]] = [None] * (n + 1)
        self.phase = [False] * (n + 1)
        rng = random.Random(config.seed)
        # tiny seeded noise only breaks ties among equal activities
        self.activity = [0.0] + [rng.random() * 1e-6 for _ in range(n)]
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.watches: list[list[_Clause]] = [[] for _ in range(2 * n + 2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.learnts: list[_Clause] = []
        self.max_learnts = config.max_learnts
        self.proof = DratProof() if config.proof else None
        self.stats = SolveStats()
        self.formula = f
        self.empty_input = False
        self.units: list[int] = []
        for clause in f.clauses:
            lits = []
            seen = set()
            taut = False
            for l in clause:
                code = 2 * l if l > 0 else -2 * l + 1
                if code ^ 1 in seen:
                    taut = True
                    break
                if code not in seen:
                    seen.add(code)
                    lits.append(code)
            if taut:
                continue
            if not lits:
                self.empty_input = True
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                c = _Clause(lits)
                self.watches[lits[0]].append(c)
                self.watches[lits[1]].append(c)

    @staticmethod
    def dimacs(code: int) -> int:
        return -(code >> 1) if code & 1 else code >> 1

    def log_add(self, lits: list[int]) -> None:
        if self.proof is not None:
            self.proof.add(self.dimacs(c) for c in lits)

    def log_delete(self, lits: list[int]) -> None:
        if self.proof is not None:
            self.proof.delete(self.dimacs(c) for c in lits)

    def assign(self, lit: int, reason: Optional[_Clause]) -> None:
        v = lit >> 1
        self.vals[lit] = 1
        self.vals[lit ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def propagate(self) -> Optional[_Clause]:
        vals, watches, trail = self.vals, self.watches, self.trail
        props = 0
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            props += 1
            ws = watches[false_lit]
            keep: list[_Clause] = []
            watches[false_lit] = keep
            for idx, c in enumerate(ws):
                if c.deleted:
                    continue
                lits = c.lits
                if lits[0] == false_lit:
                    lits[0], lits[1] = lits[1], false_lit
                first = lits[0]
                if vals[first] == 1:
                    keep.append(c)
                    continue
                for k in range(2, len(lits)):
                    other = lits[k]
                    if vals[other] != -1:
                        lits[1] = other
                        lits[k] = false_lit
                        watches[other].append(c)
                        break
                else:
                    keep.append(c)
                    if vals[first] == -1:
                        keep.extend(ws[idx + 1 :])
                        self.qhead = len(trail)
                        self.stats.propagations += props
                        return c
                    self.assign(first, c)
        self.stats.propagations += props
        return None

    def bump_var(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for i in range(1, self.n + 1):
                act[i] *= 1e-100
            self.var_inc *= 1e-100

    def bump_clause(self, c: _Clause) -> None:
        c.activity += self.cla_inc
        if c.activity > 1e20:
            for lc in self.learnts:
                lc.activity *= 1e-20
            self.cla_inc *= 1e-20

    def analyze(self, confl: _Clause) -> tuple[list[int], int]:
        """First-UIP learned clause (asserting literal first) and backjump level."""
        level, trail = self.level, self.trail
        seen = [False] * (self.n + 1)
        cur = len(self.trail_lim)
        learnt = [0]
        pending = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            if c.learnt:
                self.bump_clause(c)
            for q in c.lits if p < 0 else c.lits[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    self.bump_var(v)
                    if level[v] >= cur:
                        pending += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[p >> 1] = False
            pending -= 1
            if pending == 0:
                break
            c = self.reason[p >> 1]
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            return learnt, 0
        hi = max(range(1, len(learnt)), key=lambda k: level[learnt[k] >> 1])
        learnt[1], learnt[hi] = learnt[hi], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        vals, phase = self.vals, self.phase
        start = self.trail_lim[lvl]
        for lit in self.trail[start:]:
            v = lit >> 1
            phase[v] = not lit & 1
            vals[lit] = vals[lit ^ 1] = 0
            self.reason[v] = None
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = start

    def pick_branch(self) -> int:
        vals, act = self.vals, self.activity
        best, best_act = 0, -1.0
        for v in range(1, self.n + 1):
            if vals[2 * v] == 0 and act[v] > best_act:
                best, best_act = v, act[v]
        if best == 0:
            return -1
        return 2 * best if self.phase[best] else 2 * best + 1

    def locked(self, c: _Clause) -> bool:
        v = c.lits[0] >> 1
        return self.reason[v] is c and self.vals[c.lits[0]] == 1

    def reduce_db(self) -> None:
        # drop the less active half; keep binaries and current reasons
        ranked = sorted(self.learnts, key=lambda c: c.activity)
        half = len(ranked) // 2
        kept = []
        for i, c in enumerate(ranked):
            if i < half and len(c.lits) > 2 and not self.locked(c):
                c.deleted = True
                self.log_delete(c.lits)
                self.stats.deleted += 1
            else:
                kept.append(c)
        self.learnts = kept
        self.max_learnts = int(self.max_learnts * 1.1) + 1

    def unsat(self) -> Status:
        self.log_add([])
        return Status.UNSAT

    def run(self) -> tuple[Status, str]:
        cfg = self.cfg
        if self.empty_input:
            return self.unsat(), ""
        for u in self.units:
            if self.vals[u] == -1:
                return self.unsat(), ""
            if self.vals[u] == 0:
                self.assign(u, None)
        deadline = time.monotonic() + cfg.timeout
        restart_no = 0
        budget = _luby(0) * cfg.restart_base
        since_restart = 0
        while True:
            confl = self.propagate()
            if confl is not None:
                self.stats.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    return self.unsat(), ""
                learnt, back = self.analyze(confl)
                self.backtrack(back)
                self.log_add(learnt)
                self.stats.learned += 1
                if len(learnt) == 1:
                    self.assign(learnt[0], None)
                else:
                    c = _Clause(learnt, learnt=True)
                    self.bump_clause(c)
                    self.watches[learnt[0]].append(c)
                    self.watches[learnt[1]].append(c)
                    self.learnts.append(c)
                    self.assign(learnt[0], c)
                self.var_inc /= cfg.var_decay
                self.cla_inc /= cfg.clause_decay
                if cfg.max_conflicts is not None and self.stats.conflicts >= cfg.max_conflicts:
                    return Status.UNKNOWN, f"conflict limit {cfg.max_conflicts} reached"
                if self.stats.conflicts % 64 == 0 and time.monotonic() > deadline:
                    return Status.UNKNOWN, f"timeout after {cfg.timeout}s"
                continue
            if since_restart >= budget:
                self.stats.restarts += 1
                restart_no += 1
                budget = _luby(restart_no) * cfg.restart_base
                since_restart = 0
                self.backtrack(0)
                continue
            if len(self.learnts) - len(self.trail) >= self.max_learnts:
                self.reduce_db()
            lit = self.pick_branch()
            if lit < 0:
                return Status.SAT, ""
            self.stats.decisions += 1
            if self.stats.decisions % 1024 == 0 and time.monotonic() > deadline:
                return Status.UNKNOWN, f"timeout after {cfg.timeout}s"
            self.trail_lim.append(len(self.trail))
            self.assign(lit, None)

    def model(self) -> Model:
        return Model({v: self.vals[2 * v] == 1 for v in range(1, self.n + 1)})


def solve(f: CnfFormula, config: Optional[SolverConfig] = None) -> SolveOutcome:
    """Decide ``f``. SAT models are checked against ``f`` before returning."""
    config = config or SolverConfig()
    t0 = time.perf_counter()
    try:
        search = _Search(f, config)
        status, reason = search.run()
    except MemoryError:
        return SolveOutcome(Status.UNKNOWN, reason="out of memory",
                            stats=SolveStats(wall_time=time.perf_counter() - t0))
    search.stats.wall_time = time.perf_counter() - t0
    out = SolveOutcome(status, stats=search.stats, reason=reason)
    if status is Status.SAT:
        out.model = search.model()
        if not f.is_satisfied_by(out.model.assignment):
            raise SolverError("model does not satisfy the input formula")
    elif status is Status.UNSAT:
        out.proof = search.proof
    return out
