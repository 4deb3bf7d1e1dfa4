"""Acceptance gate: one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
written straight to the terminal so they show up without ``-s``. The
extended sweep to p=997 runs only when CYCLICAP_EXTENDED=1.
"""

import os
import random
import time
from itertools import product

import pytest

from conftest import PUBLISHED_CYCLIC_WITNESSES, PUBLISHED_WITNESSES, naive_rup, naive_solutions
from cyclicap import core
from cyclicap.cnf import CnfFormula, encode
from cyclicap.coloring import (
    Word,
    periodic_extension_check,
    run_length_max,
    verify_cyclic,
    verify_strong,
)
from cyclicap.core import Mode, primes_in_range, windows
from cyclicap.drat import DratProof, ProofStep
from cyclicap.dratcheck import check
from cyclicap.enumeration import enumerate_all
from cyclicap.pipeline import build_manifest, classify_minimal_period, cyclic_sweep, prime_sweep
from cyclicap.solver import Status, solve
from cyclicap.symmetry import orbits, reflection_fixed_candidates, stabilizer

SWEEP_BUDGET_S = 30 * 60


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    return emit


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def prime_runs(tmp_path_factory):
    da, db = tmp_path_factory.mktemp("primes_a"), tmp_path_factory.mktemp("primes_b")
    a, ta = _timed(prime_sweep, 97, da)
    b = prime_sweep(97, db)
    return a, ta, b, (da, db)


@pytest.fixture(scope="module")
def cyclic_runs(tmp_path_factory):
    da, db = tmp_path_factory.mktemp("cyclic_a"), tmp_path_factory.mktemp("cyclic_b")
    return cyclic_sweep(13, 34, da), cyclic_sweep(13, 34, db), (da, db)


def test_criterion_1_witness_verification(report):
    expected = {5: 20, 7: 42, 11: 110}
    core._windows.cache_clear()
    core._nondegenerate.cache_clear()
    problems = []
    worst = 0.0
    for p, w in PUBLISHED_WITNESSES.items():
        res, dt = _timed(verify_strong, p, w)
        worst = max(worst, dt)
        if not res.ok or res.windows_checked != expected[p] or dt >= 1e-3:
            problems.append(f"p={p} ok={res.ok} windows={res.windows_checked} t={dt * 1e3:.3f}ms")
    ok = not problems
    report(1, ok, f"windows 20/42/110, slowest call {worst * 1e3:.3f} ms" if ok else "; ".join(problems))
    assert ok


def test_criterion_2_enumeration_counts(report):
    expected = {5: 20, 7: 28, 11: 44, 13: 0}
    problems = []
    for p, n in expected.items():
        res, dt = _timed(enumerate_all, p, Mode.STRONG)
        if res.count != n or dt >= 10:
            problems.append(f"p={p} count={res.count} t={dt:.2f}s")
    for M in range(2, 13):
        modes = [Mode.CYCLIC] + ([Mode.STRONG] if core.is_prime(M) else [])
        for mode in modes:
            got = sorted(enumerate_all(M, mode).solutions)
            if got != naive_solutions(M, mode is Mode.CYCLIC):
                problems.append(f"M={M} {mode.value} differs from naive filter")
    ok = not problems
    report(2, ok, "counts 20/28/44/0; naive filter agrees for M<=12" if ok else "; ".join(problems))
    assert ok


def test_criterion_3_orbit_structure(report, strong_solutions):
    problems = []
    expected = {5: (4, 2), 7: (2, 1), 11: (2, 1)}
    for p, (plain, swapped) in expected.items():
        a = orbits(strong_solutions[p])
        b = orbits(strong_solutions[p], with_swap=True)
        if (a.num_orbits, b.num_orbits) != (plain, swapped):
            problems.append(f"p={p} orbits {a.num_orbits}/{b.num_orbits}")
    s7 = orbits(strong_solutions[7])
    s7x = orbits(strong_solutions[7], with_swap=True)
    if list(s7.orbit_sizes) != [14, 14] or sorted(s7.representatives) != ["BBBRBRR", "BBRBRRR"]:
        problems.append(f"p=7 sizes {s7.orbit_sizes} reps {s7.representatives}")
    if list(s7x.orbit_sizes) != [28]:
        problems.append(f"p=7 swap sizes {s7x.orbit_sizes}")
    # stated requirement: every solution has trivial stabilizer
    for p in (5, 7, 11):
        orders = {len(stabilizer(w)) for w in strong_solutions[p]}
        if orders != {1}:
            problems.append(f"p={p} stabilizer orders {sorted(orders)} (not trivial)")
    ok = not problems
    report(3, ok, "orbits 4/2, 2/1, 2/1; all stabilizers trivial" if ok else "; ".join(problems))
    assert ok


def test_criterion_4_reflection_exclusion(report):
    checks = passes = 0
    for axis in range(7):
        cands = reflection_fixed_candidates(7, axis)
        checks += len(cands)
        passes += sum(verify_strong(7, w).ok for w in cands)
    ok = checks == 112 and passes == 0
    report(4, ok, f"{checks} candidates checked, {passes} pass")
    assert ok


def test_criterion_5_encoding(report):
    problems = []
    for p in primes_in_range(5, 97):
        f = encode(p, Mode.STRONG)
        if f.num_vars != p or f.num_clauses != 2 * p * (p - 1):
            problems.append(f"p={p}: {f.num_vars} vars {f.num_clauses} clauses")
    for M in range(2, 13):
        modes = [Mode.CYCLIC] + ([Mode.STRONG] if core.is_prime(M) else [])
        for mode in modes:
            f = encode(M, mode)
            verify = verify_strong if mode is Mode.STRONG else verify_cyclic
            for colors in product("BR", repeat=M):
                w = Word("".join(colors))
                assign = {j + 1: c == "R" for j, c in enumerate(w)}
                if f.is_satisfied_by(assign) != verify(M, w).ok:
                    problems.append(f"M={M} {mode.value} disagrees on {w}")
                    break
    ok = not problems
    report(5, ok, "p vars, 2p(p-1) clauses for primes 5..97; exhaustive match for M<=12"
           if ok else "; ".join(problems[:5]))
    assert ok


@pytest.mark.slow
def test_criterion_6_prime_sweep(report, prime_runs, strong_solutions):
    rep, elapsed = prime_runs[:2]
    problems = []
    if rep.moduli(Status.SAT) != [5, 7, 11]:
        problems.append(f"SAT at {rep.moduli(Status.SAT)}")
    for e in rep.entries:
        if e.status is Status.SAT:
            if not verify_strong(e.modulus, e.witness).ok or e.witness not in strong_solutions[e.modulus]:
                problems.append(f"p={e.modulus} witness {e.witness} rejected")
        elif e.status is not Status.UNSAT or not e.proof_verified:
            problems.append(f"p={e.modulus} {e.status.value} proof={e.proof_verified}")
    if [e.modulus for e in rep.entries] != primes_in_range(5, 97):
        problems.append("prime list incomplete")
    if elapsed > SWEEP_BUDGET_S:
        problems.append(f"took {elapsed:.0f}s")
    ok = not problems
    report(6, ok, f"SAT {{5,7,11}}, {len(rep.moduli(Status.UNSAT))} UNSAT proofs verified, {elapsed:.1f}s"
           if ok else "; ".join(problems))
    assert ok


@pytest.mark.slow
@pytest.mark.extended
@pytest.mark.skipif(os.environ.get("CYCLICAP_EXTENDED") != "1", reason="set CYCLICAP_EXTENDED=1 for the p<=997 sweep")
def test_criterion_6_extended_to_997(report, tmp_path):
    rep, elapsed = _timed(prime_sweep, 997, tmp_path)
    unsat_ok = all(e.proof_verified for e in rep.entries if e.status is Status.UNSAT)
    ok = rep.moduli(Status.SAT) == [5, 7, 11] and unsat_ok and len(rep.entries) == len(primes_in_range(5, 997))
    report("6 (extended)", ok, f"{len(rep.entries)} primes to 997 in {elapsed:.0f}s")
    assert ok


@pytest.mark.slow
def test_criterion_7_cyclic_sweep(report, cyclic_runs):
    rep = cyclic_runs[0]
    problems = []
    if rep.moduli(Status.SAT) != [14, 15, 18, 21, 22, 33]:
        problems.append(f"SAT at {rep.moduli(Status.SAT)}")
    for e in rep.entries:
        if e.status is Status.SAT and not verify_cyclic(e.modulus, e.witness).ok:
            problems.append(f"M={e.modulus} witness rejected")
        if e.status is Status.UNSAT and not e.proof_verified:
            problems.append(f"M={e.modulus} proof not verified")
        if e.status is Status.UNKNOWN:
            problems.append(f"M={e.modulus} UNKNOWN")
    for M, w in PUBLISHED_CYCLIC_WITNESSES.items():
        if not verify_cyclic(M, w).ok:
            problems.append(f"published witness for M={M} rejected")
    if rep.conclusion != "SAT at M=33 and UNSAT at M=34 -> W_c(4,2)=34.":
        problems.append(f"conclusion {rep.conclusion!r}")
    ok = not problems
    report(7, ok, rep.conclusion if ok else "; ".join(problems))
    assert ok


def _mutants(proof: DratProof, num_vars: int, rng: random.Random, n: int):
    adds = [i for i, s in enumerate(proof.steps[:-1]) if not s.delete and s.clause]
    for k in range(n):
        steps = list(proof.steps)
        i = rng.choice(adds)
        kind = k % 3
        if kind == 0:
            del steps[i]
        elif kind == 1:
            c = list(steps[i].clause)
            j = rng.randrange(len(c))
            c[j] = -c[j]
            steps[i] = ProofStep(tuple(c))
        else:
            c = list(steps[i].clause)
            c[rng.randrange(len(c))] = rng.choice([1, -1]) * rng.randint(1, num_vars)
            steps[i] = ProofStep(tuple(c))
        yield DratProof(steps)


def _naive_replay(clauses, proof: DratProof) -> bool:
    active = [tuple(c) for c in clauses]
    for step in proof.steps:
        if step.delete:
            continue
        if not naive_rup(active, step.clause):
            return False
        if not step.clause:
            return True
        active.append(step.clause)
    return False


@pytest.mark.slow
def test_criterion_8_proof_integrity(report, prime_runs, cyclic_runs):
    problems = []
    for rep in (prime_runs[0], cyclic_runs[0]):
        for e in rep.entries:
            if e.status is Status.UNSAT and not e.proof_verified:
                problems.append(f"{e.modulus}: proof not verified")
    f = encode(13, Mode.STRONG)
    out = solve(f)
    if not out.proof.ends_with_empty_clause or not check(f, out.proof).verified:
        problems.append("p=13 proof does not verify")
    false_accepts = rejected = 0
    for m in _mutants(out.proof, f.num_vars, random.Random(13), 100):
        if check(f, m).verified:
            if not _naive_replay(f.clauses, m):
                false_accepts += 1
        else:
            rejected += 1
    if false_accepts:
        problems.append(f"{false_accepts} mutants falsely verified")
    triv = CnfFormula(1, [(1,), (-1,)])
    t = solve(triv)
    if t.status is not Status.UNSAT or not check(triv, t.proof).verified:
        problems.append("trivial instance failed")
    ok = not problems
    report(8, ok, f"all sweep proofs verified; mutants rejected {rejected}/100, false accepts 0; trivial ok"
           if ok else "; ".join(problems))
    assert ok


def _reversal_pairing(M):
    for r in range(1, M):
        a = {frozenset(w.indices) for w in windows(M) if w.step == r}
        b = {frozenset(w.indices) for w in windows(M) if w.step == M - r}
        if a != b:
            return False
    return True


def _divides_step_mono(w: str, reps: int) -> bool:
    T = len(w)
    ext = w * reps
    for d in range(T, len(ext), T):
        for i in range(len(ext) - 3 * d):
            if len({ext[i + k * d] for k in range(4)}) != 1:
                return False
    return True


def test_criterion_9_structural_properties(report, strong_solutions):
    problems = []
    bad = [M for M in range(2, 51) if not _reversal_pairing(M)]
    if bad:
        problems.append(f"reversal pairing fails at {bad}")
    sols = {(p, w) for p, ws in strong_solutions.items() for w in ws}
    sols |= {(M, w) for M in (14, 15, 18) for w in enumerate_all(M, Mode.CYCLIC).solutions}
    runs = [(M, w) for M, w in sols if run_length_max(w) >= 4]
    if runs:
        problems.append(f"{len(runs)} solutions with a run of four")
    for p, w in PUBLISHED_WITNESSES.items():
        if not periodic_extension_check(p, w, 20):
            problems.append(f"lifting fails for p={p}")
        if not _divides_step_mono(w, 20):
            problems.append(f"step multiple of {p} not monochromatic")
        if classify_minimal_period(p, w) != p:
            problems.append(f"minimal period of p={p} witness")
    rot = [(p, w) for p, ws in strong_solutions.items() for w in ws
           if any(g.kind == "rotation" and not g.is_identity for g in stabilizer(w))]
    if rot:
        problems.append(f"{len(rot)} solutions fixed by a rotation")
    ok = not problems
    report(9, ok, f"reversal M<=50, runs on {len(sols)} solutions, lifting x20, step multiples, rotations"
           if ok else "; ".join(problems))
    assert ok


@pytest.mark.slow
def test_criterion_10_determinism(report, prime_runs, cyclic_runs):
    problems = []
    for label, (da, db) in (("primes", prime_runs[3]), ("cyclic", cyclic_runs[2])):
        ma, mb = build_manifest(da), build_manifest(db)
        if ma != mb:
            diff = {e.filename for e in ma.entries} ^ {e.filename for e in mb.entries}
            diff |= {x.filename for x, y in zip(ma.entries, mb.entries) if x != y}
            problems.append(f"{label}: differing files {sorted(diff)[:5]}")
        if (da / "artifact_manifest.json").read_bytes() != (db / "artifact_manifest.json").read_bytes():
            problems.append(f"{label}: manifest bytes differ")
        if not ma.entries:
            problems.append(f"{label}: empty manifest")
    ok = not problems
    report(10, ok, "two runs byte-identical, proofs included (jobs=1)" if ok else "; ".join(problems))
    assert ok
