"""Acceptance criteria, one test each.

Every criterion is a plain function returning ``(passed, detail)``; the
tests assert on it and record a PASS/FAIL line that is printed at the end of
the pytest run.  ``python3 tests/test_acceptance.py`` runs them standalone.
"""
import json
import sys
import time
from itertools import combinations

import pytest

from wsnecklace.conjectures import report_json, run_conjectures
from wsnecklace.cyclic_core import GroundContext, Subset, is_separated_system
from wsnecklace.necklace import all_permutations, largest_necklace, permutation_to_necklace
from wsnecklace.plabic import build_tiling, complex_check, fills_region, necklace_curve
from wsnecklace.purity import grassmann_rank, is_maximal, maximal_separated_collections
from wsnecklace.regions import Collection, interior
from wsnecklace.verify import (
    claim_catalan,
    claim_corollary1,
    claim_corollary2,
    claim_lemma1,
    claim_lemma2,
    claim_lemma3,
    claim_mutation_connectivity,
    claim_prop1,
    claim_prop3,
    claim_prop4,
    claim_prop5,
    claim_prop6,
    claim_theorem1,
    claim_theorem2,
    claim_theorem3,
    claim_theorem3prime,
    claim_theorem4,
)

C73_LITS = ["127", "123", "234", "345", "456", "567", "167", "126", "124", "134", "346", "467", "146"]


def _all(*results):
    ok = all(r.passed for r in results)
    detail = ", ".join(f"{r.claim} checked={r.checked}" + ("" if r.passed else f" witness={r.witness}")
                       for r in results)
    return ok, detail


def criterion_1():
    res = claim_theorem1(n_max=7)
    g = lambda n, r: Collection.grassmannian(GroundContext(n, r))  # noqa: E731
    spot = (len(maximal_separated_collections(g(4, 2))[0]) == 5
            and len(maximal_separated_collections(g(7, 3), limit=100)[0]) == 13)
    ok, detail = _all(res)
    return ok and spot, detail + f", spot sizes 5 and 13: {spot}"


def criterion_2():
    return _all(claim_theorem2(n_max=6), claim_prop3(n_max=6))


def criterion_3():
    return _all(claim_prop1(n_max=6))


def criterion_4():
    return _all(claim_theorem3(n_max=6))


def criterion_5():
    return _all(claim_theorem3prime(n_max=6, seed=0, trials=100, exhaustive_max=5))


def criterion_6():
    return _all(claim_theorem4(n_max=6))


def criterion_7():
    return _all(claim_prop4(n_max=5), claim_corollary1(n_max=5), claim_corollary2(n_max=5))


def criterion_8():
    return _all(claim_lemma1(n_max=6), claim_lemma2(n_max=7), claim_lemma3(n_max=5))


def _strict_subsystems_fail(n_max):
    """Every proper subfamily of every maximal system of Int(N) misses part of in(N)."""
    checked = 0
    for n in range(1, n_max + 1):
        for pi in all_permutations(n):
            N = permutation_to_necklace(pi)
            if not N.connected:
                continue
            curve = necklace_curve(N)
            for C in maximal_separated_collections(interior(N)):
                members = C.sorted()
                for k in range(len(members)):
                    for keep in combinations(members, k):
                        checked += 1
                        if fills_region(build_tiling(Collection.of(C.ctx, keep)), curve, validate=False):
                            return False, checked
    return True, checked


def criterion_9():
    ok, detail = _all(claim_prop5(n_max=6), claim_prop6(n_max=6))
    strict, checked = _strict_subsystems_fail(5)
    return ok and strict, detail + f", all strict subsystems n <= 5: {strict} ({checked})"


def criterion_10():
    res = claim_catalan(3, 8)
    n8 = len(maximal_separated_collections(Collection.grassmannian(GroundContext(8, 2)), limit=100))
    ok, detail = _all(claim_mutation_connectivity(n_max=6), res)
    return ok and n8 == 132, detail + f", Gr(2,8) maximal={n8}"


def criterion_11():
    ctx = GroundContext(7, 3)
    C = Collection.of(ctx, (Subset.parse(t, 7) for t in C73_LITS))
    N = largest_necklace(ctx)
    T = build_tiling(C)
    rep = complex_check(T)
    checks = {
        "separated": is_separated_system(C.members),
        "maximal": is_maximal(C, Collection.grassmannian(ctx)),
        "contains_necklace": N.members() <= C.members,
        "size": len(C) == grassmann_rank(ctx) == 13,
        "complex": rep.ok,
        "euler": T.euler == 1,
        "fills": fills_region(T, necklace_curve(N)),
    }
    return all(checks.values()), json.dumps(checks, sort_keys=True)


def criterion_12():
    reports = [run_conjectures(n, r) for n in range(2, 5) for r in range(1, n)]
    text = report_json({"reports": reports})
    parsed = json.loads(text)
    keys = {"n", "r", "mode", "seed", "generalized_necklaces", "necklace_cases", "necklace_cases_hold",
            "counterexamples", "results"}
    well_formed = all(keys <= set(rep) for rep in parsed["reports"])
    hold = all(rep["necklace_cases_hold"] for rep in reports)
    cases = sum(rep["necklace_cases"] for rep in reports)
    found = sum(rep["generalized_necklaces"] for rep in reports)
    ce = {c: sum(len(rep["counterexamples"][c]) for rep in reports) for c in ("conj1", "conj2", "conj3")}
    return well_formed and hold and cases > 0, (
        f"{found} generalized necklaces, {cases} necklace cases all hold={hold}, counterexamples={ce}")


CRITERIA = [
    (1, "maximal system sizes, n <= 7", criterion_1),
    (2, "Int/Out purity and rank formula, n <= 6", criterion_2),
    (3, "Int = chamber sets, n <= 6", criterion_3),
    (4, "Int || Out, n <= 6", criterion_4),
    (5, "restriction to Int stays maximal", criterion_5),
    (6, "square rule, n <= 6", criterion_6),
    (7, "four-cell ranks, ring and union, n <= 5", criterion_7),
    (8, "lemmas", criterion_8),
    (9, "inside test and fill criterion, n <= 6", criterion_9),
    (10, "mutation connectivity and Catalan count", criterion_10),
    (11, "C(7,3) tiling fixture", criterion_11),
    (12, "conjecture harness, n <= 4", criterion_12),
]


def _line(num, title, ok, detail, seconds):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {title} ({seconds:.1f}s) -- {detail}"


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, acceptance_log):
    t0 = time.perf_counter()
    ok, detail = fn()
    line = _line(num, title, ok, detail, time.perf_counter() - t0)
    acceptance_log.append((num, line))
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for num, title, fn in CRITERIA:
        t0 = time.perf_counter()
        ok, detail = fn()
        failed += not ok
        print(_line(num, title, ok, detail, time.perf_counter() - t0), flush=True)
    sys.exit(1 if failed else 0)
