"""Maximal separated subsystems, purity and rank, mutations.

Enumeration is the ground truth here: rank formulas are checked against it,
never used to shortcut it.
"""
from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable

from .cyclic_core import GroundContext, Subset, separated_mask, systems_separated
from .errors import InputError, ResourceLimitError
from .necklace import Necklace, Permutation, alignments, is_less, permutation_to_necklace
from .regions import Collection, exterior, interior

DEFAULT_LIMIT = 300


def grassmann_rank(ctx: GroundContext) -> int:
    return ctx.r * (ctx.n - ctx.r) + 1


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SeparationGraph:
    """Weak-separation graph on a domain; ``rows[v]`` omits the loop at v."""

    vertices: tuple[Subset, ...]
    rows: tuple[int, ...]

    @classmethod
    def build(cls, domain: Collection) -> "SeparationGraph":
        verts = tuple(domain.sorted())
        n = domain.ctx.n
        masks = [v.mask for v in verts]
        rows = [0] * len(verts)
        for a in range(len(verts)):
            for b in range(a + 1, len(verts)):
                if separated_mask(masks[a], masks[b], n):
                    rows[a] |= 1 << b
                    rows[b] |= 1 << a
        return cls(verts, tuple(rows))

    def adjacent(self, a: int, b: int) -> bool:
        return a == b or bool(self.rows[a] >> b & 1)

    def maximal_cliques(self) -> list[int]:
        """Bron-Kerbosch with Tomita pivoting over bit rows; cliques as vertex bitmasks."""
        rows = self.rows
        out: list[int] = []

        def expand(R: int, P: int, X: int):
            if not P:
                if not X:
                    out.append(R)
                return
            best, pivot = -1, -1
            for u in _bits(P | X):
                c = (P & rows[u]).bit_count()
                if c > best:
                    best, pivot = c, u
            for v in _bits(P & ~rows[pivot]):
                bit = 1 << v
                expand(R | bit, P & rows[v], X & rows[v])
                P &= ~bit
                X |= bit

        expand(0, (1 << len(self.vertices)) - 1, 0)
        return out


def _check_limit(domain: Collection, limit: int):
    if len(domain) > limit:
        raise ResourceLimitError(
            f"domain has {len(domain)} sets, above the enumeration limit {limit}; "
            "use is_maximal spot checks or raise --limit"
        )


def _canonical(cols: Iterable[Collection]) -> list[Collection]:
    return sorted(cols, key=lambda c: [s.elements for s in c.sorted()])


def maximal_separated_collections(domain: Collection, limit: int = DEFAULT_LIMIT) -> list[Collection]:
    """Every inclusion-maximal separated subsystem of ``domain``, each once, canonically ordered."""
    _check_limit(domain, limit)
    g = SeparationGraph.build(domain)
    out = []
    for clique in g.maximal_cliques():
        out.append(Collection.of(domain.ctx, (g.vertices[v] for v in _bits(clique))))
    return _canonical(out)


def is_maximal(C: Collection, domain: Collection) -> bool:
    if not C <= domain:
        raise InputError(f"{C} is not contained in the domain")
    if not C.is_separated():
        raise InputError(f"{C} is not a separated system")
    n = domain.ctx.n
    cm = [s.mask for s in C.members]
    for x in domain.members - C.members:
        if all(separated_mask(x.mask, c, n) for c in cm):
            return False
    return True


def greedy_maximal(start: Iterable[Subset], domain: Collection, rng: random.Random) -> Collection:
    """Grow a separated ``start`` to a maximal system of ``domain`` in random order."""
    chosen = list(start)
    n = domain.ctx.n
    taken = set(chosen)
    rest = sorted(domain.members - taken)
    rng.shuffle(rest)
    masks = [s.mask for s in chosen]
    for x in rest:
        if all(separated_mask(x.mask, c, n) for c in masks):
            chosen.append(x)
            masks.append(x.mask)
    return Collection.of(domain.ctx, chosen)


@dataclass
class PurityReport:
    ctx: GroundContext
    domain_size: int
    maximal_collections: list[Collection]
    sizes: list[int]
    label: str = ""
    elapsed_ms: float = 0.0
    alignments: int | None = None
    seed: int | None = None

    @property
    def pure(self) -> bool:
        return len(set(self.sizes)) <= 1

    @property
    def rank(self) -> int:
        return max(self.sizes, default=0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.ctx.n,
            "r": self.ctx.r,
            "domain": self.label,
            "domain_size": self.domain_size,
            "num_maximal": len(self.maximal_collections),
            "sizes": sorted(set(self.sizes)),
            "pure": self.pure,
            "rank": self.rank,
            "alignments": self.alignments,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "seed": self.seed,
        }


def purity_report(domain: Collection, limit: int = DEFAULT_LIMIT, label: str = "") -> PurityReport:
    t0 = time.perf_counter()
    cols = maximal_separated_collections(domain, limit)
    return PurityReport(
        ctx=domain.ctx,
        domain_size=len(domain),
        maximal_collections=cols,
        sizes=[len(c) for c in cols],
        label=label,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
    )


# ---------------------------------------------------------------- mutations


@dataclass(frozen=True)
class Mutation:
    """Swap of a square's diagonal: ``source`` (present) becomes ``target`` (absent)."""

    A: Subset
    quad: tuple[int, int, int, int]
    source: Subset
    target: Subset

    def inverse(self) -> "Mutation":
        return Mutation(self.A, self.quad, self.target, self.source)

    def __str__(self):
        i, j, k, l = self.quad
        return f"A={self.A} ({i},{j},{k},{l}): {self.source} -> {self.target}"


def find_mutations(C: Collection) -> list[Mutation]:
    """Squares ``Aij, Ajk, Akl, Ali`` in C with exactly one diagonal ``Aik``/``Ajl`` present."""
    n, r = C.ctx.n, C.ctx.r
    if r < 2 or n - r < 2:
        return []
    present = {s.mask for s in C.members}
    out = []
    for a_elems in combinations(range(n), r - 2):
        A = 0
        for e in a_elems:
            A |= 1 << e
        free = [e for e in range(n) if not A >> e & 1]
        for i, j, k, l in combinations(free, 4):
            bi, bj, bk, bl = 1 << i, 1 << j, 1 << k, 1 << l
            if not (A | bi | bj in present and A | bj | bk in present
                    and A | bk | bl in present and A | bl | bi in present):
                continue
            ik, jl = A | bi | bk, A | bj | bl
            has_ik, has_jl = ik in present, jl in present
            if has_ik == has_jl:
                continue
            src, dst = (ik, jl) if has_ik else (jl, ik)
            out.append(Mutation(Subset(A, n), (i + 1, j + 1, k + 1, l + 1), Subset(src, n), Subset(dst, n)))
    return out


def apply_mutation(C: Collection, m: Mutation) -> Collection:
    if m not in find_mutations(C):
        raise InputError(f"mutation {m} does not apply to {C}")
    return C.remove(m.source).add(m.target)


def mutation_graph(domain: Collection, limit: int = DEFAULT_LIMIT) -> tuple[list[Collection], set[tuple[int, int]]]:
    """Maximal collections of ``domain`` and the single-mutation edges between them."""
    nodes = maximal_separated_collections(domain, limit)
    index = {c.members: t for t, c in enumerate(nodes)}
    edges = set()
    for t, c in enumerate(nodes):
        for m in find_mutations(c):
            if m.target not in domain:
                continue
            u = index.get((c.members - {m.source}) | {m.target})
            if u is not None:
                edges.add((min(t, u), max(t, u)))
    return nodes, edges


def mutation_connected(domain: Collection, limit: int = DEFAULT_LIMIT) -> bool:
    nodes, edges = mutation_graph(domain, limit)
    if len(nodes) <= 1:
        return True
    adj: dict[int, list[int]] = {t: [] for t in range(len(nodes))}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        for u in adj[queue.popleft()]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(nodes)


def square_rule_holds(C: Collection) -> list[tuple[Subset, tuple[int, int, int, int]]]:
    """Squares of C with neither diagonal present (empty for maximal C)."""
    n, r = C.ctx.n, C.ctx.r
    if r < 2 or n - r < 2:
        return []
    present = {s.mask for s in C.members}
    bad = []
    for a_elems in combinations(range(n), r - 2):
        A = sum(1 << e for e in a_elems)
        free = [e for e in range(n) if not A >> e & 1]
        for i, j, k, l in combinations(free, 4):
            bi, bj, bk, bl = 1 << i, 1 << j, 1 << k, 1 << l
            if (A | bi | bj in present and A | bj | bk in present
                    and A | bk | bl in present and A | bl | bi in present
                    and A | bi | bk not in present and A | bj | bl not in present):
                bad.append((Subset(A, n), (i + 1, j + 1, k + 1, l + 1)))
    return bad


# ---------------------------------------------------------------- verifiers


@dataclass
class CheckReport:
    claim: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)
    witness: dict[str, Any] | None = None
    skipped: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "passed": self.passed,
            "skipped": self.skipped,
            "details": self.details,
            "witness": self.witness,
        }


def verify_rank_formula(pi: Permutation, limit: int = DEFAULT_LIMIT) -> CheckReport:
    """rk Int(N_pi) = r(n-r)+1 - #alignments and rk Out(N_pi) = #alignments, both pure."""
    N = permutation_to_necklace(pi)
    a = len(alignments(pi))
    rep_in = purity_report(interior(N), limit)
    rep_out = purity_report(exterior(N), limit)
    expected = grassmann_rank(N.ctx) - a
    ok = (rep_in.pure and rep_in.rank == expected and rep_out.pure and rep_out.rank == a)
    details = {
        "perm": str(pi),
        "r": N.r,
        "alignments": a,
        "int_sizes": sorted(set(rep_in.sizes)),
        "out_sizes": sorted(set(rep_out.sizes)),
        "expected_int_rank": expected,
    }
    return CheckReport("rank_formula", ok, details, None if ok else details)


def _lit(C: Collection) -> list[str]:
    return C.literals()


def verify_prop4(N1: Necklace, N2: Necklace, limit: int = DEFAULT_LIMIT) -> CheckReport:
    """Purity of the four cells I/O x I/O and their rank sum; ring and union special cases."""
    if N1.ctx != N2.ctx:
        raise InputError("necklaces must share (n, r)")
    if not systems_separated(N1.sets, N2.sets):
        return CheckReport("prop4", True, {"reason": "necklaces not separated"}, skipped=True)
    total = grassmann_rank(N1.ctx)
    I1, I2 = interior(N1), interior(N2)
    O1, O2 = exterior(N1), exterior(N2)
    cells = {"I1&I2": I1 & I2, "I1&O2": I1 & O2, "O1&I2": O1 & I2, "O1&O2": O1 & O2}
    reps = {k: purity_report(v, limit) for k, v in cells.items()}
    ranks = {k: rep.rank for k, rep in reps.items()}
    failures = []
    for k, rep in reps.items():
        if not rep.pure:
            failures.append(f"{k} not pure: sizes {sorted(set(rep.sizes))}")
    if sum(ranks.values()) != total:
        failures.append(f"rank sum {sum(ranks.values())} != {total}")

    details: dict[str, Any] = {"N1": str(N1), "N2": str(N2), "ranks": ranks, "less": False, "union_case": False}
    if is_less(N1, N2):
        details["less"] = True
        ring = purity_report(I2 & O1, limit)
        want = total - purity_report(I1, limit).rank - purity_report(O2, limit).rank
        details["ring_rank"] = ring.rank
        if not ring.pure or ring.rank != want:
            failures.append(f"ring I2&O1 rank {ring.rank} (pure={ring.pure}) != {want}")
    if systems_separated(I1.members, N2.sets) and systems_separated(I2.members, N1.sets):
        details["union_case"] = True
        union = purity_report(I1 | I2, limit)
        want = ranks["I1&I2"] + ranks["I1&O2"] + ranks["O1&I2"]
        details["union_rank"] = union.rank
        if not union.pure or union.rank != want:
            failures.append(f"union I1|I2 rank {union.rank} (pure={union.pure}) != {want}")
        if not (I1 & I2).members:
            add = purity_report(I1, limit).rank + purity_report(I2, limit).rank
            if union.rank != add:
                failures.append(f"disjoint union rank {union.rank} != {add}")
    ok = not failures
    witness = None if ok else {**details, "failures": failures}
    return CheckReport("prop4", ok, details, witness)


def restriction_is_maximal(C: Collection, domain: Collection) -> bool:
    return is_maximal(C & domain, domain)


def verify_theorem3prime(
    N: Necklace,
    trials: int = 100,
    seed: int = 0,
    grass_maximal: list[Collection] | None = None,
) -> CheckReport:
    """C ⊇ N maximal in the Grassmannian  =>  C ∩ Int(N) maximal in Int(N).

    With ``grass_maximal`` given, every listed collection containing N is
    checked; otherwise ``trials`` seeded greedy completions of N are used.
    """
    ctx = N.ctx
    grass = Collection.grassmannian(ctx)
    inner = interior(N)
    nset = N.members()
    if grass_maximal is not None:
        pool = [c for c in grass_maximal if nset <= c.members]
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        pool = [greedy_maximal(N.sets, grass, rng) for _ in range(trials)]
        mode = "sampled"
    for C in pool:
        if not is_maximal(C, grass):
            return CheckReport("theorem3prime", False, {"N": str(N)}, {"N": str(N), "C": _lit(C), "reason": "C not maximal"})
        if not restriction_is_maximal(C, inner):
            return CheckReport(
                "theorem3prime", False, {"N": str(N)},
                {"N": str(N), "C": _lit(C), "restriction": _lit(C & inner)},
            )
    return CheckReport("theorem3prime", True, {"N": str(N), "mode": mode, "checked": len(pool), "seed": None if grass_maximal is not None else seed})
