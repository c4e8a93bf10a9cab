import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from wsnecklace.cyclic_core import GroundContext, Subset
from wsnecklace.errors import InputError, ResourceLimitError
from wsnecklace.necklace import (
    Permutation,
    all_permutations,
    largest_necklace,
    permutation_to_necklace,
)
from wsnecklace.purity import (
    SeparationGraph,
    apply_mutation,
    find_mutations,
    greedy_maximal,
    is_maximal,
    maximal_separated_collections,
    mutation_connected,
    mutation_graph,
    purity_report,
    square_rule_holds,
    verify_prop4,
    verify_rank_formula,
    verify_theorem3prime,
)
from wsnecklace.regions import Collection, exterior, interior

PI = Permutation.parse("4,3,1,2")
N_PI = permutation_to_necklace(PI)
G42 = Collection.grassmannian(GroundContext(4, 2))


def col(n, *lits):
    sets = [Subset.parse(t, n) for t in lits]
    return Collection.of(GroundContext(n, len(sets[0])), sets)


C73 = col(7, "127", "123", "234", "345", "456", "567", "167", "126", "124", "134", "346", "467", "146")


def test_gr24_maximal_collections():
    got = maximal_separated_collections(G42)
    assert [sorted(c.literals()) for c in got] == [
        ["12", "13", "14", "23", "34"],
        ["12", "14", "23", "24", "34"],
    ]


def test_single_necklace_domain():
    N = largest_necklace(GroundContext(5, 2))
    dom = Collection.of(N.ctx, N.sets)
    assert maximal_separated_collections(dom) == [dom]
    assert maximal_separated_collections(interior(N_PI)) == [interior(N_PI)]


def test_empty_domain():
    dom = Collection.of(GroundContext(4, 2))
    assert maximal_separated_collections(dom) == [dom]
    rep = purity_report(dom)
    assert rep.pure and rep.rank == 0


def test_is_maximal_examples():
    assert is_maximal(col(4, "12", "23", "34", "14", "13"), G42)
    assert not is_maximal(col(4, "12", "23"), G42)
    assert is_maximal(C73, Collection.grassmannian(GroundContext(7, 3)))
    with pytest.raises(InputError):
        is_maximal(col(4, "13", "24"), G42)


def test_purity_report_examples():
    rep = purity_report(G42)
    assert rep.pure and rep.rank == 5 and rep.sizes == [5, 5]
    rep = purity_report(interior(N_PI))
    assert rep.pure and rep.rank == 4
    rep = purity_report(exterior(N_PI))
    assert rep.pure and rep.rank == 1
    d = purity_report(G42, label="grassmannian").to_dict()
    assert set(d) == {"n", "r", "domain", "domain_size", "num_maximal", "sizes", "pure", "rank",
                      "alignments", "elapsed_ms", "seed"}


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        maximal_separated_collections(Collection.grassmannian(GroundContext(8, 4)), limit=20)


def test_mutation_examples():
    C = col(4, "12", "23", "34", "14", "13")
    muts = find_mutations(C)
    assert len(muts) == 1
    m = muts[0]
    assert m.A == Subset(0, 4) and m.quad == (1, 2, 3, 4)
    assert str(m.source) == "13" and str(m.target) == "24"
    C2 = apply_mutation(C, m)
    assert sorted(C2.literals()) == ["12", "14", "23", "24", "34"]
    assert apply_mutation(C2, m.inverse()) == C
    N = largest_necklace(GroundContext(5, 2))
    assert find_mutations(Collection.of(N.ctx, N.sets)) == []


def test_mutation_graph_gr24():
    nodes, edges = mutation_graph(G42)
    assert len(nodes) == 2 and edges == {(0, 1)}
    assert mutation_connected(G42)
    assert mutation_connected(interior(N_PI))


def test_rank_formula_examples():
    rep = verify_rank_formula(Permutation.rotation(5, 2))
    assert rep.passed and rep.details["int_sizes"] == [7] and rep.details["out_sizes"] == [0]
    rep = verify_rank_formula(PI)
    assert rep.passed and rep.details["int_sizes"] == [4] and rep.details["out_sizes"] == [1]


def test_prop4_examples():
    L = largest_necklace(GroundContext(4, 2))
    rep = verify_prop4(N_PI, N_PI)
    assert rep.passed and rep.details["ranks"]["I1&O2"] == 0
    rep = verify_prop4(N_PI, L)
    assert rep.passed and rep.details["less"] and rep.details["ring_rank"] == 1
    # necklaces that are not separated from each other are skipped, not failed
    b = permutation_to_necklace(Permutation.parse("1,3,4,2"))
    c = permutation_to_necklace(Permutation.parse("2,3,1,4"))
    rep = verify_prop4(b, c)
    assert rep.passed and rep.skipped


def test_theorem3prime_examples():
    assert verify_theorem3prime(largest_necklace(GroundContext(4, 2)), grass_maximal=maximal_separated_collections(G42)).passed
    rep = verify_theorem3prime(N_PI, grass_maximal=maximal_separated_collections(G42))
    # only the collection holding the diagonal 24 contains the necklace
    assert rep.passed and rep.details["checked"] == 1
    rep = verify_theorem3prime(N_PI, trials=10, seed=3)
    assert rep.passed and rep.details["mode"] == "sampled"


def test_square_rule_on_gr24():
    for C in maximal_separated_collections(G42):
        assert square_rule_holds(C) == []
    # drop both diagonals: the square 12, 23, 34, 14 is left without either
    bad = col(4, "12", "23", "34", "14")
    assert square_rule_holds(bad)


# ---------------------------------------------------------------- oracles


@pytest.mark.parametrize("n,r", [(3, 1), (4, 2), (5, 2), (5, 3), (6, 2), (6, 4)])
def test_grassmannian_enumeration_matches_brute_force(n, r):
    got = {c.members for c in maximal_separated_collections(Collection.grassmannian(GroundContext(n, r)))}
    want = oracles.maximal_subsystems(oracles.grassmannian(n, r), n)
    assert {frozenset(frozenset(s.elements) for s in c) for c in got} == set(want)


@pytest.mark.parametrize("n", [4, 5])
def test_interior_enumeration_matches_brute_force(n):
    for pi in all_permutations(n):
        N = permutation_to_necklace(pi)
        I = interior(N)
        got = {frozenset(frozenset(s.elements) for s in c.members) for c in maximal_separated_collections(I)}
        want = set(oracles.maximal_subsystems([frozenset(s.elements) for s in I.members], n))
        assert got == want


@pytest.mark.parametrize("n,count", [(4, 2), (5, 5), (6, 14), (7, 42)])
def test_catalan_counts(n, count):
    assert count == oracles.catalan(n - 2)
    assert len(maximal_separated_collections(Collection.grassmannian(GroundContext(n, 2)))) == count


def test_known_counts_gr36_gr37():
    assert len(maximal_separated_collections(Collection.grassmannian(GroundContext(6, 3)))) == 34
    assert len(maximal_separated_collections(Collection.grassmannian(GroundContext(7, 3)), limit=100)) == 259


def test_output_is_canonical_and_stable():
    dom = Collection.grassmannian(GroundContext(6, 3))
    a = maximal_separated_collections(dom)
    b = maximal_separated_collections(Collection.of(dom.ctx, reversed(dom.sorted())))
    assert a == b
    keys = [[s.elements for s in c.sorted()] for c in a]
    assert keys == sorted(keys)


# ---------------------------------------------------------------- properties


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(5, 2), (6, 2), (6, 3), (7, 3)]))
def test_greedy_completion_is_maximal_of_full_rank(seed, nr):
    ctx = GroundContext(*nr)
    grass = Collection.grassmannian(ctx)
    C = greedy_maximal([], grass, random.Random(seed))
    assert C.is_separated() and is_maximal(C, grass)
    assert len(C) == ctx.r * (ctx.n - ctx.r) + 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_mutation_preserves_maximality(seed):
    ctx = GroundContext(6, 3)
    grass = Collection.grassmannian(ctx)
    rng = random.Random(seed)
    C = greedy_maximal([], grass, rng)
    for m in find_mutations(C):
        C2 = apply_mutation(C, m)
        assert C2.is_separated() and is_maximal(C2, grass) and len(C2) == len(C)
        assert apply_mutation(C2, m.inverse()) == C


@settings(max_examples=30, deadline=None)
@given(st.permutations(list(range(1, 7))).map(tuple))
def test_separation_graph_is_symmetric(image):
    N = permutation_to_necklace(Permutation(image))
    g = SeparationGraph.build(interior(N))
    k = len(g.vertices)
    for a in range(k):
        for b in range(k):
            assert g.adjacent(a, b) == g.adjacent(b, a)
