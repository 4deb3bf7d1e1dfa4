"""Independent brute-force oracles shared by the test modules.

None of these call into cyclicap; they re-derive windows and checks from
the definitions so the library can be compared against them.
"""

from itertools import product

import pytest


def brute_windows(M, nondegenerate_only=False):
    out = []
    for r in range(1, M):
        for i in range(M):
            idx = tuple((i + k * r) % M for k in range(4))
            if nondegenerate_only and len(set(idx)) != 4:
                continue
            out.append(idx)
    return out


def brute_ok(word, nondegenerate_only):
    M = len(word)
    return not any(len({word[j] for j in idx}) == 1 for idx in brute_windows(M, nondegenerate_only))


def naive_solutions(M, nondegenerate_only):
    """Filter all 2^M words, the way the original enumeration scripts do."""
    wins = brute_windows(M, nondegenerate_only)
    keep = []
    for colors in product("BR", repeat=M):
        if not any(colors[a] == colors[b] == colors[c] == colors[d] for a, b, c, d in wins):
            keep.append("".join(colors))
    return sorted(keep)


def is_prime_slow(n):
    return n >= 2 and all(n % d for d in range(2, n))


def naive_rup(clauses, lemma):
    """Fixpoint unit propagation with no indexing at all.

    Clauses are read as sets, so a repeated literal counts once.
    """
    val = {}
    for l in lemma:
        if val.get(abs(l), -l > 0) != (-l > 0):
            return True
        val[abs(l)] = -l > 0
    changed = True
    while changed:
        changed = False
        for c in clauses:
            c = set(c)
            open_lits = []
            sat = False
            for l in c:
                v = val.get(abs(l))
                if v is None:
                    open_lits.append(l)
                elif v == (l > 0):
                    sat = True
                    break
            if sat:
                continue
            if not open_lits:
                return True
            if len(open_lits) == 1:
                val[abs(open_lits[0])] = open_lits[0] > 0
                changed = True
    return False


PUBLISHED_WITNESSES = {5: "BBBRR", 7: "BBBRBRR", 11: "BBBRBBRBRRR"}
PUBLISHED_CYCLIC_WITNESSES = {
    22: "RRRBRRBRBBBRRRBRRBRBBB",
    33: "BBBRBRRBRRRBBBRBRRBRRRBBBRBRRBRRR",
}


@pytest.fixture(scope="session")
def strong_solutions():
    from cyclicap.enumeration import enumerate_all

    return {p: enumerate_all(p, "strong").solutions for p in (5, 7, 11)}
