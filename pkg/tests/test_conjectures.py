import json
import random

import pytest

from wsnecklace.conjectures import (
    as_grassmann_necklace,
    canonical_cycle,
    enumerate_generalized,
    report_json,
    run_conjectures,
    sample_generalized,
)
from wsnecklace.cyclic_core import GroundContext, Subset, is_separated_system, neighbors
from wsnecklace.errors import InputError
from wsnecklace.necklace import all_dummy_free_necklaces, validate_generalized
from wsnecklace.plabic import curve_of, is_simple_curve


def test_gr24_quadrilaterals():
    ctx = GroundContext(4, 2)
    found = enumerate_generalized(ctx)
    quads = [K for K in found if K.m == 4]
    assert quads
    for K in found:
        validate_generalized(K.sets)
    rep = run_conjectures(4, 2)
    assert rep["generalized_necklaces"] == len(found)
    assert set(rep["counterexamples"]) == {"conj1", "conj2", "conj3"}


@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_is_complete_for_necklaces(n):
    # every connected necklace appears exactly once, up to rotation and reversal
    for r in range(1, n):
        found = {K.sets for K in enumerate_generalized(GroundContext(n, r))}
        for N in all_dummy_free_necklaces(n, r):
            if N.connected:
                assert canonical_cycle(N.sets) in found


@pytest.mark.parametrize("n,r", [(4, 2), (5, 2)])
def test_enumeration_entries_are_valid_and_canonical(n, r):
    found = enumerate_generalized(GroundContext(n, r))
    assert len({K.sets for K in found}) == len(found)
    for K in found:
        assert canonical_cycle(K.sets) == K.sets
        assert is_separated_system(K.sets)
        assert all(neighbors(K.sets[t], K.sets[(t + 1) % K.m]) for t in range(K.m))
        assert is_simple_curve(curve_of(K.sets))


def test_necklace_detection():
    sets = tuple(Subset.parse(t, 4) for t in ("12", "23", "34", "14"))
    K = validate_generalized(canonical_cycle(sets))
    assert as_grassmann_necklace(K) is not None
    tri = validate_generalized([Subset.parse(t, 4) for t in ("12", "13", "23")])
    assert as_grassmann_necklace(tri) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_necklace_cases_hold(n):
    for r in range(1, n):
        rep = run_conjectures(n, r)
        assert rep["necklace_cases_hold"]
        for res in rep["results"]:
            if res["grassmann_necklace"]:
                assert res["matches_necklace_interior"]


def test_report_is_deterministic():
    a = report_json(run_conjectures(5, 2, mode="sample", trials=30, seed=7))
    b = report_json(run_conjectures(5, 2, mode="sample", trials=30, seed=7))
    assert a == b
    json.loads(a)


def test_sampled_entries_are_valid():
    for K in sample_generalized(GroundContext(6, 3), 40, random.Random(2)):
        validate_generalized(K.sets)
        assert canonical_cycle(K.sets) == K.sets


def test_bad_arguments():
    with pytest.raises(InputError):
        run_conjectures(6, 3, mode="exhaustive")
    with pytest.raises(InputError):
        run_conjectures(4, 2, mode="guess")
    with pytest.raises(InputError):
        run_conjectures(4, 2, trials=0)
