"""Harness for the generalized-necklace conjectures.

A generalized necklace is a cyclic sequence of pairwise separated r-sets in
which consecutive sets are neighbours and whose embedded closed curve is
simple.  For each one the harness tests

* purity of Int(K) and Out(K),
* that C ∩ Int(K) and C ∩ Out(K) are maximal there for every maximal
  Grassmannian system C containing K,
* Int(K) ∥ Out(K),

and reports counterexamples instead of asserting.
"""
from __future__ import annotations

import json
import random
from typing import Any

from .cyclic_core import GroundContext, Subset, separated_mask
from .errors import InputError, ResourceLimitError
from .necklace import GeneralizedNecklace, Necklace, validate_necklace
from .plabic import curve_of, is_simple_curve
from .purity import (
    DEFAULT_LIMIT,
    greedy_maximal,
    maximal_separated_collections,
    purity_report,
    restriction_is_maximal,
)
from .regions import Collection, generalized_exterior, generalized_interior, interior

EXHAUSTIVE_MAX_N = 5
MODES = ("exhaustive", "sample")


def _neighbor_table(grass: list[Subset]) -> dict[Subset, list[Subset]]:
    return {
        x: [y for y in grass if (x.mask ^ y.mask).bit_count() == 2 and separated_mask(x.mask, y.mask, x.n)]
        for x in grass
    }


def canonical_cycle(sets: tuple[Subset, ...]) -> tuple[Subset, ...]:
    """Rotate to start at the smallest set, then pick the smaller of the two directions."""
    m = len(sets)
    k = min(range(m), key=lambda t: sets[t])
    fwd = sets[k:] + sets[:k]
    back = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, back, key=lambda s: [x.elements for x in s])


def _is_generalized(sets: tuple[Subset, ...]) -> bool:
    return len(sets) >= 3 and is_simple_curve(curve_of(sets))


def enumerate_generalized(ctx: GroundContext) -> list[GeneralizedNecklace]:
    """All generalized necklaces over ``ctx`` up to rotation and reversal, canonically sorted."""
    grass = ctx.grassmannian()
    nbrs = _neighbor_table(grass)
    n = ctx.n
    found: set[tuple[Subset, ...]] = set()

    def extend(path: list[Subset], used: set[Subset]):
        start, last = path[0], path[-1]
        for y in nbrs[last]:
            if y == start and len(path) >= 3:
                cyc = tuple(path)
                if cyc[1] < cyc[-1] and _is_generalized(cyc):
                    found.add(cyc)
                continue
            # the start is the smallest member; everything on the path is pairwise separated
            if y in used or y < start:
                continue
            if all(separated_mask(y.mask, z.mask, n) for z in path):
                path.append(y)
                used.add(y)
                extend(path, used)
                used.discard(y)
                path.pop()

    for s in grass:
        extend([s], {s})
    return [GeneralizedNecklace(c) for c in sorted(found, key=lambda c: [x.elements for x in c])]


def sample_generalized(ctx: GroundContext, trials: int, rng: random.Random) -> list[GeneralizedNecklace]:
    """Seeded random walks in the neighbour graph; closed walks that qualify are kept."""
    grass = ctx.grassmannian()
    nbrs = _neighbor_table(grass)
    n = ctx.n
    found: set[tuple[Subset, ...]] = set()
    for _ in range(trials):
        path = [rng.choice(grass)]
        while True:
            last = path[-1]
            if len(path) >= 3 and path[0] in nbrs[last] and rng.random() < 0.5:
                cyc = tuple(path)
                if _is_generalized(cyc):
                    found.add(canonical_cycle(cyc))
                break
            options = [y for y in nbrs[last] if y not in path
                       and all(separated_mask(y.mask, z.mask, n) for z in path)]
            if not options:
                if len(path) >= 3 and path[0] in nbrs[last] and _is_generalized(tuple(path)):
                    found.add(canonical_cycle(tuple(path)))
                break
            path.append(rng.choice(options))
    return [GeneralizedNecklace(c) for c in sorted(found, key=lambda c: [x.elements for x in c])]


def as_grassmann_necklace(K: GeneralizedNecklace) -> Necklace | None:
    """The Grassmann necklace K is (after rotation or reversal), if any."""
    if K.m != K.n:
        return None
    for seq in (K.sets, (K.sets[0],) + tuple(reversed(K.sets[1:]))):
        for k in range(K.m):
            try:
                N = validate_necklace(seq[k:] + seq[:k])
            except InputError:
                continue
            return N
    return None


def _lits(C: Collection) -> list[str]:
    return C.literals()


def check_generalized(K: GeneralizedNecklace, grass_maximal: list[Collection],
                      limit: int = DEFAULT_LIMIT) -> dict[str, Any]:
    inner = generalized_interior(K)
    outer = generalized_exterior(K)
    rin = purity_report(inner, limit)
    rout = purity_report(outer, limit)
    kset = frozenset(K.sets)
    pool = [C for C in grass_maximal if kset <= C.members]
    conj2_fail = None
    for C in pool:
        bad = [name for name, dom in (("Int", inner), ("Out", outer)) if not restriction_is_maximal(C, dom)]
        if bad:
            conj2_fail = {"C": _lits(C), "regions": bad}
            break
    crossing = None
    for x in inner.sorted():
        for y in outer.sorted():
            if not separated_mask(x.mask, y.mask, K.n):
                crossing = [str(x), str(y)]
                break
        if crossing:
            break
    N = as_grassmann_necklace(K)
    out: dict[str, Any] = {
        "K": [str(s) for s in K.sets],
        "m": K.m,
        "grassmann_necklace": N is not None,
        "conj1": {
            "holds": rin.pure and rout.pure,
            "int_sizes": sorted(set(rin.sizes)),
            "out_sizes": sorted(set(rout.sizes)),
        },
        "conj2": {"holds": conj2_fail is None, "checked": len(pool), "witness": conj2_fail},
        "conj3": {"holds": crossing is None, "witness": crossing},
    }
    if N is not None:
        out["matches_necklace_interior"] = inner.members == interior(N).members
    return out


def run_conjectures(n: int, r: int, mode: str = "exhaustive", trials: int = 200, seed: int = 0,
                    limit: int = DEFAULT_LIMIT, max_grass_maximal: int = 20_000) -> dict[str, Any]:
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    ctx = GroundContext(n, r)
    if mode == "exhaustive" and n > EXHAUSTIVE_MAX_N:
        raise InputError(f"exhaustive mode is limited to n <= {EXHAUSTIVE_MAX_N}; use --mode sample")
    if trials < 1:
        raise InputError("trials must be positive")
    grass = Collection.grassmannian(ctx)
    rng = random.Random(seed)
    if mode == "exhaustive":
        necks = enumerate_generalized(ctx)
    else:
        necks = sample_generalized(ctx, trials, rng)
    try:
        gmax = maximal_separated_collections(grass, limit=max_grass_maximal)
        conj2_mode = "exhaustive"
    except ResourceLimitError:
        # too many maximal systems to list: fall back to seeded greedy completions
        gmax = None
        conj2_mode = "sampled"
    results = []
    for K in necks:
        pool = gmax
        if pool is None:
            pool = [greedy_maximal(K.sets, grass, rng) for _ in range(trials)]
        results.append(check_generalized(K, pool, limit))
    counter = {c: [res["K"] for res in results if not res[c]["holds"]] for c in ("conj1", "conj2", "conj3")}
    necklace_cases = [res for res in results if res["grassmann_necklace"]]
    return {
        "n": n,
        "r": r,
        "mode": mode,
        "trials": trials if mode == "sample" else None,
        "seed": seed,
        "conj2_pool": conj2_mode,
        "generalized_necklaces": len(results),
        "necklace_cases": len(necklace_cases),
        "necklace_cases_hold": all(
            res["conj1"]["holds"] and res["conj2"]["holds"] and res["conj3"]["holds"]
            and res.get("matches_necklace_interior", True)
            for res in necklace_cases
        ),
        "counterexamples": counter,
        "results": results,
    }


def report_json(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
