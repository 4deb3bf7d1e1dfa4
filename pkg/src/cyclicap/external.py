"""Run a DIMACS solver binary (kissat, cadical, ...) as an alternative backend."""

from __future__ import annotations

import shlex
import subprocess
import tempfile
import time
from pathlib import Path
from typing import Optional, Sequence, Union

from cyclicap.cnf import CnfFormula, parse_model, to_dimacs
from cyclicap.drat import DratParseError, parse_drat
from cyclicap.solver import SolveOutcome, SolverConfig, SolveStats, Status


def parse_status(stdout: str) -> Status:
    for line in stdout.splitlines():
        if line.startswith("s "):
            if "UNSATISFIABLE" in line:
                return Status.UNSAT
            if "SATISFIABLE" in line:
                return Status.SAT
    return Status.UNKNOWN


def solve_external(
    f: CnfFormula,
    solver_command: Union[str, Sequence[str]],
    config: Optional[SolverConfig] = None,
    proof_path: Union[str, Path, None] = None,
) -> SolveOutcome:
    """Invoke ``solver_command CNF [PROOF]`` and read its answer.

    The proof file argument is passed when ``config.proof`` is set; the
    proof is attached only if the solver actually wrote one. Anything that
    prevents a trustworthy answer comes back as UNKNOWN with the captured
    output, never as an exception.
    """
    config = config or SolverConfig()
    argv = shlex.split(solver_command) if isinstance(solver_command, str) else list(solver_command)
    t0 = time.perf_counter()

    def unknown(reason: str, output: str = "") -> SolveOutcome:
        return SolveOutcome(Status.UNKNOWN, reason=reason, output=output,
                            stats=SolveStats(wall_time=time.perf_counter() - t0))

    with tempfile.TemporaryDirectory(prefix="cyclicap-") as tmp:
        cnf = Path(tmp) / "input.cnf"
        cnf.write_bytes(to_dimacs(f))
        proof_file = None
        if config.proof:
            proof_file = Path(proof_path) if proof_path else Path(tmp) / "proof.drat"
            if proof_file.exists():
                proof_file.unlink()
        cmd = argv + [str(cnf)] + ([str(proof_file)] if proof_file else [])
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True, timeout=config.timeout, check=False)
        except FileNotFoundError as exc:
            return unknown(f"cannot spawn {argv[0]!r}: {exc}")
        except PermissionError as exc:
            return unknown(f"cannot spawn {argv[0]!r}: {exc}")
        except subprocess.TimeoutExpired as exc:
            out = exc.stdout.decode(errors="replace") if isinstance(exc.stdout, bytes) else (exc.stdout or "")
            return unknown(f"timeout after {config.timeout}s", out)
        output = proc.stdout + proc.stderr
        status = parse_status(proc.stdout)
        stats = SolveStats(wall_time=time.perf_counter() - t0)
        if status is Status.UNKNOWN:
            return unknown(f"no status line (exit code {proc.returncode})", output)
        if status is Status.SAT:
            model = parse_model(proc.stdout, strict=True)
            if model is None:
                return unknown("SAT claimed but no 'v' lines", output)
            full = {v: model.assignment.get(v, False) for v in range(1, f.num_vars + 1)}
            if not f.is_satisfied_by(full):
                return unknown("SAT claimed but model falsifies the formula", output)
            model.assignment.clear()
            model.assignment.update(full)
            return SolveOutcome(Status.SAT, model=model, stats=stats, output=output)
        proof = None
        reason = ""
        if proof_file is not None and proof_file.exists() and proof_file.stat().st_size:
            try:
                proof = parse_drat(proof_file.read_bytes())
            except (DratParseError, UnicodeDecodeError) as exc:
                reason = f"unreadable proof file: {exc}"
        return SolveOutcome(Status.UNSAT, proof=proof, stats=stats, reason=reason, output=output)
