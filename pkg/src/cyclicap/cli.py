"""Command-line entry point: ``cyclicap <command> ...``.

Exit codes: 0 success, 1 verification or certificate failure, 2 usage
error. ``solve`` follows the SAT-competition convention instead (10 SAT,
20 UNSAT, 0 unknown) so it can stand in for an external DIMACS solver.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from cyclicap.cnf import DimacsError, encode, model_lines, model_to_word, parse_dimacs, parse_model, provenance_comment, to_dimacs
from cyclicap.coloring import InputError, Word, verify_cyclic, verify_strong
from cyclicap.core import Mode
from cyclicap.drat import DratParseError
from cyclicap.dratcheck import CheckConfig, check, parse_drat
from cyclicap.enumeration import balance_histogram, enumerate_all, read_words, write_solutions
from cyclicap.pipeline import (
    DEFAULT_MAX_PRIME,
    FULL_MAX_PRIME,
    CertificateError,
    classify_minimal_period,
    cyclic_sweep,
    prime_sweep,
    table1_report,
    write_manifest,
)
from cyclicap.solver import SolverConfig, Status, solve
from cyclicap.symmetry import orbits


def cmd_verify(args) -> int:
    word = Word.parse(args.word)
    report = verify_strong(args.modulus, word) if args.strong else verify_cyclic(args.modulus, word)
    print(report)
    return 0 if report.ok else 1


def cmd_enumerate(args) -> int:
    res = enumerate_all(args.modulus, args.mode, args.limit_guard)
    if args.out:
        write_solutions(res, args.out)
    hist = {f"{b}B{r}R": n for (b, r), n in balance_histogram(res).items()}
    print(json.dumps({"modulus": res.modulus, "mode": res.mode.value, "count": res.count, "balance": hist}, indent=2))
    return 0


def cmd_orbits(args) -> int:
    print(orbits(read_words(args.solutions), with_swap=args.with_swap).to_json(), end="")
    return 0


def cmd_encode(args) -> int:
    mode = Mode.parse(args.mode)
    comment = provenance_comment(args.modulus, mode) if args.comment else None
    data = to_dimacs(encode(args.modulus, mode), comment=comment)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())
    return 0


def cmd_decode(args) -> int:
    model = parse_model(Path(args.output).read_text(errors="ignore"), strict=not args.lenient)
    if model is None:
        print("no 'v' lines found", file=sys.stderr)
        return 1
    print(model_to_word(args.modulus, model))
    return 0


def cmd_solve(args) -> int:
    cnf = args.cnf or args.cnf_pos
    proof_path = args.proof or args.proof_pos
    if not cnf:
        raise InputError("solve needs a CNF file")
    f = parse_dimacs(Path(cnf).read_bytes())
    cfg = SolverConfig(timeout=args.timeout, seed=args.seed, proof=bool(proof_path) or args.external is None)
    if args.external:
        from cyclicap.external import solve_external

        out = solve_external(f, args.external, cfg, proof_path=proof_path)
    else:
        out = solve(f, cfg)
        if out.status is Status.UNSAT and proof_path:
            Path(proof_path).write_bytes(out.proof.to_bytes())
    st = out.stats
    print(f"c conflicts {st.conflicts} decisions {st.decisions} propagations {st.propagations}")
    if out.status is Status.SAT:
        print("s SATISFIABLE")
        print(model_lines(out.model, f.num_vars), end="")
        return 10
    if out.status is Status.UNSAT:
        print("s UNSATISFIABLE")
        return 20
    print(f"c {out.reason}")
    print("s UNKNOWN")
    return 0


def cmd_check(args) -> int:
    f = parse_dimacs(Path(args.cnf).read_bytes())
    proof = parse_drat(Path(args.proof).read_bytes())
    verdict = check(f, proof, CheckConfig(rat=args.rat, strict_delete=args.strict_delete))
    print(verdict.transcript(), end="")
    return 0 if verdict.verified else 1


def _solver_config(args) -> SolverConfig:
    return SolverConfig(timeout=args.timeout, seed=args.seed)


def cmd_sweep_primes(args) -> int:
    max_p = FULL_MAX_PRIME if args.full else args.max
    report = prime_sweep(max_p, args.out, _solver_config(args), jobs=args.jobs, external=args.external)
    print(report.to_tsv(), end="")
    print(report.summary(), end="")
    return 0


def cmd_sweep_cyclic(args) -> int:
    report = cyclic_sweep(args.start, args.end, args.out, _solver_config(args), jobs=args.jobs, external=args.external)
    print(report.to_tsv(), end="")
    print(report.summary(), end="")
    return 0


def cmd_table1(args) -> int:
    table = table1_report(args.out)
    print(table.render(), end="")
    return 0


def cmd_manifest(args) -> int:
    print(write_manifest(args.dir).to_json(), end="")
    return 0


def cmd_period(args) -> int:
    print(classify_minimal_period(args.modulus, Word.parse(args.word)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclicap", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check one word")
    p.add_argument("--modulus", "-M", type=int, required=True)
    p.add_argument("--word", "-w", required=True)
    p.add_argument("--strong", action="store_true", help="all residue steps on a prime cycle")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list every valid word of one length")
    p.add_argument("--modulus", "-M", type=int, required=True)
    p.add_argument("--mode", choices=["strong", "cyclic"], default="strong")
    p.add_argument("--out", help="solution list file, one word per line")
    p.add_argument("--limit-guard", type=int, default=24)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("orbits", help="orbit summary of a solution list")
    p.add_argument("--solutions", required=True)
    p.add_argument("--with-swap", action="store_true")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("encode", help="write the DIMACS encoding")
    p.add_argument("--modulus", "-M", type=int, required=True)
    p.add_argument("--mode", choices=["strong", "cyclic"], default="strong")
    p.add_argument("--out")
    p.add_argument("--comment", action="store_true", help="add a provenance comment line")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode-model", help="solver output to a B/R word")
    p.add_argument("--modulus", "-M", type=int, required=True)
    p.add_argument("--output", required=True, help="raw solver output file")
    p.add_argument("--lenient", action="store_true", help="scan every integer token, not just 'v' lines")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("solve", help="solve a DIMACS file (positional CNF [PROOF] also accepted)")
    p.add_argument("cnf_pos", nargs="?", metavar="CNF")
    p.add_argument("proof_pos", nargs="?", metavar="PROOF")
    p.add_argument("--cnf")
    p.add_argument("--proof")
    p.add_argument("--external", help="external solver command instead of the built-in one")
    p.add_argument("--timeout", type=float, default=600.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check-proof", help="check a textual DRAT proof")
    p.add_argument("--cnf", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--strict-delete", action="store_true")
    p.add_argument("--rat", action="store_true")
    p.set_defaults(func=cmd_check)

    for name, func in (("sweep-primes", cmd_sweep_primes), ("sweep-cyclic", cmd_sweep_cyclic)):
        p = sub.add_parser(name)
        if name == "sweep-primes":
            p.add_argument("--max", type=int, default=DEFAULT_MAX_PRIME)
            p.add_argument("--full", action="store_true", help=f"sweep to p={FULL_MAX_PRIME}")
        else:
            p.add_argument("--start", type=int, default=13)
            p.add_argument("--end", type=int, default=34)
        p.add_argument("--out", default="results")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--external")
        p.add_argument("--timeout", type=float, default=600.0)
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=func)

    p = sub.add_parser("table1", help="existence/count/orbit table from a prime sweep directory")
    p.add_argument("--out", default="results")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("manifest", help="write artifact_manifest.json for a directory")
    p.add_argument("--dir", required=True)
    p.set_defaults(func=cmd_manifest)

    p = sub.add_parser("period", help="minimal period of a strong-form witness")
    p.add_argument("--modulus", "-M", type=int, required=True)
    p.add_argument("--word", "-w", required=True)
    p.set_defaults(func=cmd_period)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InputError, DimacsError, DratParseError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
