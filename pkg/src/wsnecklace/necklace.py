"""Grassmann necklaces, their permutations, alignments and the "less than" order."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _permutations
from typing import Iterable, Iterator, Sequence

from .cyclic_core import (
    GroundContext,
    Subset,
    cyclic_interval,
    cyclic_rank,
    dominates_mask,
    format_elements,
    neighbors,
    separated_mask,
)
from .errors import InputError, ValidationError


@dataclass(frozen=True)
class Permutation:
    """A bijection of [n]; ``image[k-1]`` is the image of ``k``."""

    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        if n == 0 or sorted(self.image) != list(range(1, n + 1)):
            raise InputError(f"not a permutation of [1, {n}]: {self.image}")

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))
        except ValueError:
            raise InputError(f"bad permutation literal {text!r}") from None

    @classmethod
    def rotation(cls, n: int, r: int) -> "Permutation":
        return cls(tuple((i - 1 + r) % n + 1 for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.image, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def __str__(self):
        return ",".join(str(j) for j in self.image)


def all_permutations(n: int) -> Iterator[Permutation]:
    for p in _permutations(range(1, n + 1)):
        yield Permutation(p)


@dataclass(frozen=True)
class Necklace:
    """A validated necklace ``(N_1, ..., N_n)``; equality is positional."""

    sets: tuple[Subset, ...]

    @property
    def n(self) -> int:
        return len(self.sets)

    @property
    def r(self) -> int:
        return len(self.sets[0])

    @property
    def ctx(self) -> GroundContext:
        return GroundContext(self.n, self.r)

    def __getitem__(self, i: int) -> Subset:
        """1-based, cyclic: ``N[n+1] == N[1]``."""
        return self.sets[(i - 1) % self.n]

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.sets)

    def __len__(self):
        return self.n

    @property
    def dummies(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self[i])

    @property
    def dummy_free(self) -> bool:
        return not self.dummies

    @property
    def connected(self) -> bool:
        return len(set(self.sets)) == self.n

    def members(self) -> frozenset[Subset]:
        return frozenset(self.sets)

    def __str__(self):
        return "(" + ", ".join(str(s) for s in self.sets) + ")"


def validate_necklace(sets: Sequence[Subset]) -> Necklace:
    """Check ``N_{i+1} ⊇ N_i - {i}`` at every i and return the necklace."""
    sets = tuple(sets)
    if not sets:
        raise ValidationError("a necklace needs at least one set")
    n = len(sets)
    for t, s in enumerate(sets, start=1):
        if s.n != n:
            raise ValidationError(
                f"N_{t}={s} lives over [{s.n}] but the necklace has {n} positions", t
            )
        if len(s) != len(sets[0]):
            raise ValidationError(f"N_{t}={s} has cardinality {len(s)} != {len(sets[0])}", t)
    for i in range(1, n + 1):
        cur, nxt = sets[i - 1], sets[i % n]
        rest = cur.without(i)
        if not rest.issubset(nxt):
            missing = format_elements((rest - nxt).elements, n)
            raise ValidationError(
                f"chain condition fails at i={i}: N_{i % n + 1}={nxt} does not contain "
                f"N_{i}-{{{i}}}={rest} (missing {missing})",
                i,
            )
    return Necklace(sets)


def parse_necklace(lines: Iterable[str]) -> Necklace:
    """One set literal per line; blank lines and ``#`` comments are skipped."""
    literals = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            literals.append(line)
    n = len(literals)
    if n == 0:
        raise InputError("empty necklace file")
    return validate_necklace([Subset.parse(t, n) for t in literals])


def format_necklace(N: Necklace) -> str:
    return "".join(f"{s}\n" for s in N.sets)


def reduce_dummies(N: Necklace) -> tuple[Necklace, frozenset[int]]:
    """Delete every i with ``i ∉ N_i`` and relabel the survivors to 1..n'."""
    removed = N.dummies
    if not removed:
        return N, frozenset()
    kept = [i for i in range(1, N.n + 1) if i not in removed]
    if not kept:
        raise ValidationError("every element is a dummy; nothing survives reduction")
    relabel = {old: new for new, old in enumerate(kept, start=1)}
    n2 = len(kept)
    sets = [Subset.of((relabel[e] for e in N[i]), n2) for i in kept]
    return validate_necklace(sets), frozenset(removed)


def largest_necklace(ctx: GroundContext) -> Necklace:
    if ctx.r < 1:
        raise InputError("the largest necklace needs r >= 1")
    return Necklace(tuple(cyclic_interval(i, ctx.r, ctx) for i in range(1, ctx.n + 1)))


def necklace_to_permutation(N: Necklace) -> Permutation:
    if not N.dummy_free:
        raise ValidationError(f"necklace has dummies {N.dummies}; reduce them first")
    image = []
    for i in range(1, N.n + 1):
        added = (N[i + 1] - N[i].without(i)).elements
        if len(added) != 1:
            raise ValidationError(f"N_{i + 1} is not N_{i} with {i} swapped out", i)
        image.append(added[0])
    return Permutation(tuple(image))


def permutation_to_necklace(pi: Permutation) -> Necklace:
    """``N_i = {j : j <=_i pi^{-1}(j)}``."""
    n = pi.n
    inv = pi.inverse()
    sets = []
    for i in range(1, n + 1):
        sets.append(
            Subset.of(
                (j for j in range(1, n + 1) if cyclic_rank(i, j, n) <= cyclic_rank(i, inv(j), n)),
                n,
            )
        )
    return Necklace(tuple(sets))


def average_rotation(pi: Permutation) -> int:
    """Mean clockwise step ``k(i)`` with ``pi(i) = i + k(i)``, ``0 < k(i) <= n``.

    Fixed points step by a full turn, so the result equals ``|N_i|`` for the
    necklace of ``pi`` (a fixed point lies in every ``N_i``).
    """
    n = pi.n
    total = sum((pi(i) - i - 1) % n + 1 for i in range(1, n + 1))
    assert total % n == 0
    return total // n


def all_dummy_free_necklaces(n: int, r: int | None = None) -> Iterator[Necklace]:
    """Every dummy-free necklace over [n] (optionally of rank r), via permutations."""
    for pi in all_permutations(n):
        N = permutation_to_necklace(pi)
        if r is None or N.r == r:
            yield N


def enumerate_necklaces(ctx: GroundContext) -> list[Necklace]:
    """Every sequence of r-subsets satisfying the chain condition (dummies allowed).

    Independent of the permutation route: depth-first over the chain condition.
    """
    n = ctx.n
    grass = ctx.grassmannian()
    out = []

    def extend(prefix: list[Subset]):
        i = len(prefix)
        if i == n:
            if prefix[-1].without(n).issubset(prefix[0]):
                out.append(Necklace(tuple(prefix)))
            return
        need = prefix[-1].without(i)
        for s in grass:
            if need.issubset(s):
                prefix.append(s)
                extend(prefix)
                prefix.pop()

    for first in grass:
        extend([first])
    return out


# ---------------------------------------------------------------- alignments


def _weak_cyclic_order(a: int, b: int, c: int, d: int, n: int) -> bool:
    """``a, b, c, d`` cyclically ordered, strict except that ``d == c`` is allowed."""
    rb, rc, rd = (b - a) % n, (c - a) % n, (d - a) % n
    return 0 < rb < rc <= rd


def is_alignment(pi: Permutation, i: int, j: int) -> bool:
    """``i =>_pi j``: ``pi^{-1}(i), i, j, pi^{-1}(j)`` in cyclic order.

    ``pi^{-1}(j) == j`` is admitted; any other coincidence disqualifies the pair.
    """
    if i == j:
        return False
    inv = pi.inverse()
    pi_i, pj = inv(i), inv(j)
    if pi_i == i:
        return False
    return _weak_cyclic_order(pi_i, i, j, pj, pi.n)


def alignments(pi: Permutation) -> frozenset[tuple[int, int]]:
    n = pi.n
    inv = pi.inverse()
    out = set()
    for i in range(1, n + 1):
        pi_i = inv(i)
        if pi_i == i:
            continue
        for j in range(1, n + 1):
            if j != i and _weak_cyclic_order(pi_i, i, j, inv(j), n):
                out.add((i, j))
    return frozenset(out)


def _is_simple(pi: Permutation, i: int, j: int) -> bool:
    inv = pi.inverse()
    # pi^{-1}(j) immediately precedes pi^{-1}(i) cyclically.
    return (inv(i) - inv(j)) % pi.n == 1


def find_simple_alignment(pi: Permutation) -> tuple[int, int] | None:
    for i, j in sorted(alignments(pi)):
        if _is_simple(pi, i, j):
            return i, j
    return None


def reduce_simple_alignment(pi: Permutation, alignment: tuple[int, int]) -> Permutation:
    """Swap the images of ``p = pi^{-1}(i)`` and ``q = pi^{-1}(j)``, removing ``i => j``."""
    i, j = alignment
    if not is_alignment(pi, i, j) or not _is_simple(pi, i, j):
        raise InputError(f"({i},{j}) is not a simple alignment of {pi}")
    inv = pi.inverse()
    p, q = inv(i), inv(j)
    image = list(pi.image)
    image[p - 1], image[q - 1] = j, i
    return Permutation(tuple(image))


def reduce_to_rotation(pi: Permutation) -> list[Permutation]:
    """Iterate simple-alignment reductions; the chain ends at an alignment-free permutation."""
    chain = [pi]
    while (a := find_simple_alignment(chain[-1])) is not None:
        chain.append(reduce_simple_alignment(chain[-1], a))
    return chain


# ---------------------------------------------------------------- order


def in_interior(N: Necklace, x: Subset) -> bool:
    """``N_i <<_i X`` for every i."""
    n = N.n
    return all(dominates_mask(N[i].mask, x.mask, i, n) for i in range(1, n + 1))


def is_less(N1: Necklace, N2: Necklace) -> bool:
    """``Int(N1) ⊆ Int(N2)``, decided by ``N1 ⊆ Int(N2)``."""
    if N1.ctx != N2.ctx:
        raise InputError(f"necklaces live in different Grassmannians ({N1.ctx} vs {N2.ctx})")
    return all(in_interior(N2, x) for x in N1.sets)


def is_less_oracle(N1: Necklace, N2: Necklace) -> bool:
    from .regions import interior

    return interior(N1).members <= interior(N2).members


# ---------------------------------------------------------------- generalized


@dataclass(frozen=True)
class GeneralizedNecklace:
    sets: tuple[Subset, ...]

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def n(self) -> int:
        return self.sets[0].n

    @property
    def r(self) -> int:
        return len(self.sets[0])

    @property
    def ctx(self) -> GroundContext:
        return GroundContext(self.n, self.r)

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.sets)

    def __str__(self):
        return "(" + ", ".join(str(s) for s in self.sets) + ")"


class NeighborhoodError(ValidationError):
    pass


class SeparationError(ValidationError):
    pass


class SimplicityError(ValidationError):
    pass


def validate_generalized(sets: Sequence[Subset]) -> GeneralizedNecklace:
    from .plabic import is_simple_curve, curve_of

    sets = tuple(sets)
    m = len(sets)
    if m < 3:
        raise ValidationError(f"a generalized necklace needs m >= 3 sets, got {m}")
    n, r = sets[0].n, len(sets[0])
    for t, s in enumerate(sets, start=1):
        if s.n != n or len(s) != r:
            raise ValidationError(f"K_{t}={s} is not in C({n},{r})", t)
    for t in range(m):
        a, b = sets[t], sets[(t + 1) % m]
        if not neighbors(a, b):
            raise NeighborhoodError(f"K_{t + 1}={a} and K_{(t + 1) % m + 1}={b} are not neighbors", t + 1)
    for s in range(m):
        for t in range(s + 1, m):
            if not separated_mask(sets[s].mask, sets[t].mask, n):
                raise SeparationError(f"K_{s + 1}={sets[s]} and K_{t + 1}={sets[t]} are not separated", s + 1)
    if not is_simple_curve(curve_of(sets)):
        raise SimplicityError("the closed curve through the embedded sets is not simple")
    return GeneralizedNecklace(sets)
