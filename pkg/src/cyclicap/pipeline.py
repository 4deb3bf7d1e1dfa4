"""Sweep drivers, per-instance artifacts, Table 1 and the hash manifest."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from cyclicap.cnf import encode, model_lines, model_to_word, parse_dimacs, to_dimacs
from cyclicap.coloring import InputError, Word, verify_cyclic, verify_strong
from cyclicap.core import Mode, is_prime, primes_in_range
from cyclicap.dratcheck import check
from cyclicap.enumeration import DEFAULT_LIMIT_GUARD, enumerate_all, read_words, write_solutions
from cyclicap.solver import SolveOutcome, SolverConfig, Status, solve

log = logging.getLogger(__name__)

PathLike = Union[str, Path]
MANIFEST_NAME = "artifact_manifest.json"
PRIME_RESULTS = "primes_results"
CYCLIC_RESULTS = "wc42_results"
DEFAULT_MAX_PRIME = 97
FULL_MAX_PRIME = 997


class CertificateError(RuntimeError):
    """A witness failed its verifier or a proof was rejected."""


@dataclass
class SweepEntry:
    modulus: int
    mode: Mode
    status: Status
    witness: Optional[Word] = None
    proof_verified: Optional[bool] = None
    note: str = ""
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def proof_note(self) -> str:
        if self.proof_verified:
            return "DRAT ok"
        if self.status is Status.UNSAT:
            return self.note or "no proof"
        return self.note if self.status is Status.UNKNOWN else ""


@dataclass
class SweepReport:
    mode: Mode
    entries: list[SweepEntry] = field(default_factory=list)

    def moduli(self, status: Status) -> list[int]:
        return [e.modulus for e in self.entries if e.status is status]

    def entry(self, M: int) -> Optional[SweepEntry]:
        return next((e for e in self.entries if e.modulus == M), None)

    @property
    def conclusion(self) -> Optional[str]:
        """Derived from the entries, never assumed."""
        if self.mode is not Mode.CYCLIC:
            return None
        e33, e34 = self.entry(33), self.entry(34)
        if (
            e33 is not None and e33.status is Status.SAT and e33.witness is not None
            and verify_cyclic(33, e33.witness).ok
            and e34 is not None and e34.status is Status.UNSAT and e34.proof_verified
        ):
            return "SAT at M=33 and UNSAT at M=34 -> W_c(4,2)=34."
        return None

    def rows(self) -> list[tuple[str, str, str, str]]:
        return [(str(e.modulus), e.status.value, e.witness or "", e.proof_note) for e in self.entries]

    def header(self) -> tuple[str, str, str, str]:
        return ("p" if self.mode is Mode.STRONG else "M", "Status", "Witness", "Proof")

    def to_csv(self) -> str:
        def q(s: str) -> str:
            return f'"{s}"' if "," in s else s

        lines = [",".join(self.header())]
        lines += [",".join(q(x) for x in row) for row in self.rows()]
        return "\n".join(lines) + "\n"

    def to_tsv(self) -> str:
        return "\n".join("\t".join(r) for r in [self.header(), *self.rows()]) + "\n"

    def summary(self) -> str:
        label = "primes" if self.mode is Mode.STRONG else "moduli"
        out = []
        for st in (Status.SAT, Status.UNSAT, Status.UNKNOWN):
            ms = self.moduli(st)
            if ms or st is not Status.UNKNOWN:
                out.append(f"{st.value} {label}: {' '.join(map(str, ms)) or 'none'}")
        if self.conclusion:
            out.append("Summary: " + self.conclusion)
        return "\n".join(out) + "\n"


def _names(M: int, mode: Mode) -> dict[str, str]:
    if mode is Mode.STRONG:
        return {
            "cnf": f"avoid_p{M}.cnf",
            "proof": f"avoid_p{M}.drat",
            "check": f"avoid_p{M}.drat.check.txt",
            "model": f"model_p{M}.txt",
            "witness": f"witness_p{M}.txt",
        }
    return {
        "cnf": f"avoid_M{M}.cnf",
        "proof": f"proof_M{M}.drat",
        "check": f"proof_M{M}.drat.check.txt",
        "model": f"model_M{M}.txt",
        "witness": f"witness_M{M}.txt",
    }


def _run_external(f, command: str, config: SolverConfig, proof_path: Path) -> SolveOutcome:
    from cyclicap.external import solve_external

    return solve_external(f, command, config, proof_path=proof_path)


def solve_instance(
    M: int,
    mode: Mode,
    outdir: PathLike,
    config: Optional[SolverConfig] = None,
    external: Optional[str] = None,
) -> SweepEntry:
    """Encode, solve, certify and write the artifacts for one modulus."""
    config = config or SolverConfig()
    outdir = Path(outdir)
    names = _names(M, mode)
    f = encode(M, mode)
    (outdir / names["cnf"]).write_bytes(to_dimacs(f))

    t0 = time.perf_counter()
    if external:
        out = _run_external(f, external, config, outdir / names["proof"])
    else:
        out = solve(f, config)
    entry = SweepEntry(M, mode, out.status, timings={"solve": time.perf_counter() - t0})

    if out.status is Status.SAT:
        word = model_to_word(M, out.model)
        verifier = verify_strong if mode is Mode.STRONG else verify_cyclic
        report = verifier(M, word)
        if not report.ok:
            raise CertificateError(f"M={M}: decoded witness {word} fails verification: {report}")
        text = out.output if external else "s SATISFIABLE\n" + model_lines(out.model, M)
        (outdir / names["model"]).write_text(text)
        (outdir / names["witness"]).write_text(word + "\n")
        entry.witness = word
    elif out.status is Status.UNSAT:
        if out.proof is None:
            entry.note = out.reason or "no proof"
            return entry
        if not external:
            (outdir / names["proof"]).write_bytes(out.proof.to_bytes())
        t1 = time.perf_counter()
        # re-read the formula from disk so the checker sees exactly the shipped bytes
        verdict = check(parse_dimacs((outdir / names["cnf"]).read_bytes()), out.proof)
        entry.timings["check"] = time.perf_counter() - t1
        (outdir / names["check"]).write_text(verdict.transcript())
        if not verdict.verified:
            raise CertificateError(f"M={M}: DRAT proof rejected: {verdict.message}")
        entry.proof_verified = True
    else:
        entry.note = out.reason
        log.warning("M=%d: solver returned UNKNOWN (%s)", M, out.reason)
    return entry


def _sweep(moduli: list[int], mode: Mode, outdir: PathLike, config, jobs: int, external) -> SweepReport:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    report = SweepReport(mode)
    if jobs > 1 and len(moduli) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(solve_instance, M, mode, outdir, config, external) for M in moduli]
            report.entries = [fut.result() for fut in futures]
    else:
        for M in moduli:
            entry = solve_instance(M, mode, outdir, config, external)
            log.info("M=%d %s %s", M, entry.status.value, entry.witness or entry.proof_note)
            report.entries.append(entry)
    return report


def _write_summaries(report: SweepReport, outdir: Path, stem: str) -> None:
    (outdir / f"{stem}.csv").write_text(report.to_csv())
    (outdir / f"{stem}.tsv").write_text(report.to_tsv())


def prime_sweep(
    max_p: int = DEFAULT_MAX_PRIME,
    outdir: PathLike = "results",
    config: Optional[SolverConfig] = None,
    *,
    jobs: int = 1,
    external: Optional[str] = None,
) -> SweepReport:
    """Strong-prime instances for every prime 5 <= p <= max_p."""
    outdir = Path(outdir)
    primes = primes_in_range(5, max_p) if max_p >= 5 else []
    report = _sweep(primes, Mode.STRONG, outdir, config, jobs, external)
    _write_summaries(report, outdir, PRIME_RESULTS)
    write_manifest(outdir)
    return report


def cyclic_sweep(
    start: int = 13,
    end: int = 34,
    outdir: PathLike = "results",
    config: Optional[SolverConfig] = None,
    *,
    jobs: int = 1,
    external: Optional[str] = None,
) -> SweepReport:
    """Non-degenerate encodings for every modulus start <= M <= end."""
    if not 2 <= start <= end:
        raise InputError(f"need 2 <= start <= end, got {start}..{end}")
    outdir = Path(outdir)
    report = _sweep(list(range(start, end + 1)), Mode.CYCLIC, outdir, config, jobs, external)
    _write_summaries(report, outdir, CYCLIC_RESULTS)
    write_manifest(outdir)
    return report


def read_sweep(path: PathLike) -> SweepReport:
    """Rebuild a report (without timings) from a written CSV summary."""
    text = Path(path).read_text()
    rows = list(csv.reader(io.StringIO(text)))
    mode = Mode.STRONG if rows[0][0] == "p" else Mode.CYCLIC
    rep = SweepReport(mode)
    for m, st, wit, pr in rows[1:]:
        rep.entries.append(SweepEntry(
            int(m), mode, Status(st), Word(wit) if wit else None,
            True if pr == "DRAT ok" else None, "" if pr == "DRAT ok" else pr,
        ))
    return rep


def classify_minimal_period(p: int, witness: Union[str, Word]) -> int:
    """Minimal period of an avoiding coloring on a prime cycle.

    The witness itself has period p. A period q < p would make the step
    q progressions constant, and q is not a multiple of p; we confirm
    mechanically that the witness repeats with no period q < p and that
    every q-periodic coloring really fails at step q.
    """
    w = Word(witness)
    if not is_prime(p) or len(w) != p or not verify_strong(p, w).ok:
        raise InputError(f"{witness!r} is not a valid strong-form witness for p={p}")
    for q in range(1, p):
        if all(w[i] == w[(i + q) % p] for i in range(p)):
            raise AssertionError(f"valid witness {w} repeats with period {q} < {p}")
        # any coloring c of period q: c(i) = c(i+q) = c(i+2q) = c(i+3q)
        block = w[:q]
        c = [block[i % q] for i in range(4 * q)]
        if not c[0] == c[q] == c[2 * q] == c[3 * q]:
            raise AssertionError("period-divides-step obstruction failed")
    return p


@dataclass(frozen=True)
class ManifestEntry:
    filename: str
    byte_length: int
    sha256: str


@dataclass(frozen=True)
class Manifest:
    entries: tuple[ManifestEntry, ...] = ()

    def to_json(self) -> str:
        body = {"files": [vars(e) for e in self.entries]}
        return json.dumps(body, indent=2) + "\n"


def build_manifest(outdir: PathLike) -> Manifest:
    outdir = Path(outdir)
    if not outdir.is_dir():
        raise FileNotFoundError(f"{outdir} is not a directory")
    entries = []
    for path in sorted(p for p in outdir.rglob("*") if p.is_file()):
        rel = path.relative_to(outdir).as_posix()
        if rel == MANIFEST_NAME:
            continue
        data = path.read_bytes()
        entries.append(ManifestEntry(rel, len(data), hashlib.sha256(data).hexdigest()))
    entries.sort(key=lambda e: e.filename)
    return Manifest(tuple(entries))


def write_manifest(outdir: PathLike) -> Manifest:
    """Hash every file under ``outdir`` (except the manifest) into artifact_manifest.json."""
    m = build_manifest(outdir)
    (Path(outdir) / MANIFEST_NAME).write_text(m.to_json())
    return m


@dataclass(frozen=True)
class Table1Row:
    p: int
    exists: str  # "Y", "N" or "?"
    solutions: Optional[int] = None
    orbits: Optional[int] = None
    orbits_swap: Optional[int] = None

    def cells(self) -> tuple[str, ...]:
        def s(x):
            return "--" if x is None else str(x)

        return (str(self.p), self.exists, s(self.solutions), s(self.orbits), s(self.orbits_swap))


@dataclass
class Table1:
    rows: list[Table1Row] = field(default_factory=list)
    gaps: list[str] = field(default_factory=list)

    HEADER = ("p", "Exists?", "#solutions", "#orbits D_p", "#orbits D_p x <tau>")

    def row(self, p: int) -> Optional[Table1Row]:
        return next((r for r in self.rows if r.p == p), None)

    def to_csv(self) -> str:
        return "\n".join(",".join(r) for r in [self.HEADER, *(x.cells() for x in self.rows)]) + "\n"

    def render(self, collapse_from: int = 29) -> str:
        """Aligned text table; a tail of 'N' rows from ``collapse_from`` on becomes one line."""
        body = [r.cells() for r in self.rows if r.p < collapse_from]
        tail = [r for r in self.rows if r.p >= collapse_from]
        if tail and all(r.exists == "N" for r in tail):
            body.append((f"{tail[0].p}--{tail[-1].p} (primes)", "N", "--", "--", "--"))
        else:
            body += [r.cells() for r in tail]
        table = [self.HEADER, *body]
        widths = [max(len(r[i]) for r in table) for i in range(len(self.HEADER))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table]
        lines += [f"! {g}" for g in self.gaps]
        return "\n".join(lines) + "\n"


def _orbit_row(p: int, outdir: Path) -> Table1Row:
    from cyclicap.symmetry import orbits

    sol_path = outdir / f"solutions_p{p}.txt"
    if sol_path.exists():
        words = read_words(sol_path)
    else:
        res = enumerate_all(p, Mode.STRONG)
        write_solutions(res, sol_path)
        words = list(res.solutions)
    plain, swapped = orbits(words), orbits(words, with_swap=True)
    summary = {"D": plain.to_dict(), "D_swap": swapped.to_dict()}
    (outdir / f"orbit_summary_p{p}.json").write_text(json.dumps(summary, indent=2) + "\n")
    return Table1Row(p, "Y" if words else "N", len(words), plain.num_orbits, swapped.num_orbits)


def table1_report(outdir: PathLike) -> Table1:
    """Existence, counts and orbit counts per prime, in the layout of the published Table 1.

    Status comes from primes_results.csv in ``outdir``; counts and orbits
    for the satisfiable primes come from exhaustive enumeration (reusing
    solutions_p{p}.txt when present). Without a sweep summary the table
    falls back to the primes small enough to enumerate and says so.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    table = Table1()
    summary = outdir / f"{PRIME_RESULTS}.csv"
    if summary.exists():
        statuses = {e.modulus: e.status for e in read_sweep(summary).entries}
    else:
        table.gaps.append(f"{summary.name} missing: statuses taken from enumeration, p <= {DEFAULT_LIMIT_GUARD}")
        statuses = {}
        for p in primes_in_range(5, DEFAULT_LIMIT_GUARD):
            statuses[p] = Status.SAT if enumerate_all(p).count else Status.UNSAT
    for p, st in sorted(statuses.items()):
        if st is Status.SAT:
            if p > DEFAULT_LIMIT_GUARD:
                table.gaps.append(f"p={p}: satisfiable but too large to enumerate")
                table.rows.append(Table1Row(p, "Y"))
            else:
                table.rows.append(_orbit_row(p, outdir))
        elif st is Status.UNSAT:
            table.rows.append(Table1Row(p, "N"))
        else:
            table.gaps.append(f"p={p}: status unknown")
            table.rows.append(Table1Row(p, "?"))
    (outdir / "table1.csv").write_text(table.to_csv())
    (outdir / "table1.txt").write_text(table.render())
    return table
