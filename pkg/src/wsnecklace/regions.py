"""Set-systems cut out by a necklace: S(N), Int(N), Out(N) and their generalized forms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .cyclic_core import GroundContext, Subset, parse_elements, separated_mask
from .errors import InputError, PreconditionError
from .necklace import (
    GeneralizedNecklace,
    Necklace,
    Permutation,
    alignments,
    average_rotation,
    in_interior,
)


@dataclass(frozen=True)
class Collection:
    """A finite set of r-subsets of [n]; iteration is lexicographic."""

    ctx: GroundContext
    members: frozenset[Subset]

    def __post_init__(self):
        for s in self.members:
            if s.n != self.ctx.n or len(s) != self.ctx.r:
                raise InputError(f"{s} is not an element of {self.ctx}")

    @classmethod
    def of(cls, ctx: GroundContext, members: Iterable[Subset] = ()) -> "Collection":
        return cls(ctx, frozenset(members))

    @classmethod
    def grassmannian(cls, ctx: GroundContext) -> "Collection":
        return cls(ctx, frozenset(ctx.grassmannian()))

    def sorted(self) -> list[Subset]:
        return sorted(self.members)

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.sorted())

    def __len__(self):
        return len(self.members)

    def __contains__(self, x) -> bool:
        return x in self.members

    def _check(self, other: "Collection"):
        if other.ctx != self.ctx:
            raise InputError(f"collections over {self.ctx} and {other.ctx} cannot be combined")

    def __and__(self, other: "Collection") -> "Collection":
        self._check(other)
        return Collection(self.ctx, self.members & other.members)

    def __or__(self, other: "Collection") -> "Collection":
        self._check(other)
        return Collection(self.ctx, self.members | other.members)

    def __sub__(self, other: "Collection") -> "Collection":
        self._check(other)
        return Collection(self.ctx, self.members - other.members)

    def __le__(self, other: "Collection") -> bool:
        return self.members <= other.members

    def add(self, x: Subset) -> "Collection":
        return Collection(self.ctx, self.members | {x})

    def remove(self, x: Subset) -> "Collection":
        return Collection(self.ctx, self.members - {x})

    def is_separated(self) -> bool:
        ms = [s.mask for s in self.members]
        n = self.ctx.n
        return all(separated_mask(a, b, n) for t, a in enumerate(ms) for b in ms[t + 1:])

    def literals(self) -> list[str]:
        return [str(s) for s in self.sorted()]

    def __str__(self):
        return "{" + ", ".join(self.literals()) + "}"


def parse_collection(lines: Iterable[str], n: int | None = None) -> Collection:
    """One set literal per line, ``#`` comments.  Without ``n`` the largest element is used."""
    literals = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            literals.append(line)
    if not literals:
        if n is None:
            raise InputError("empty collection file needs an explicit n")
        return Collection(GroundContext(n, 0), frozenset())
    parsed = [parse_elements(t) for t in literals]
    if n is None:
        n = max((max(p) for p in parsed if p), default=1)
    sizes = {len(p) for p in parsed}
    if len(sizes) != 1:
        raise InputError(f"collection mixes cardinalities {sorted(sizes)}")
    return Collection.of(GroundContext(n, sizes.pop()), (Subset.of(p, n) for p in parsed))


def format_collection(C: Collection) -> str:
    return "".join(f"{s}\n" for s in C.sorted())


def _require_dummy_free(N: Necklace):
    if not N.dummy_free:
        raise PreconditionError(
            f"necklace {N} has dummies {N.dummies}; apply reduce_dummies first"
        )


def is_in_fan(N: Necklace, x: Subset) -> bool:
    n = N.n
    return all(separated_mask(s.mask, x.mask, n) for s in N.sets)


def separated_fan(N: Necklace) -> Collection:
    _require_dummy_free(N)
    ctx = N.ctx
    return Collection.of(ctx, (x for x in ctx.grassmannian() if is_in_fan(N, x)))


def interior(N: Necklace) -> Collection:
    _require_dummy_free(N)
    ctx = N.ctx
    return Collection.of(ctx, (x for x in ctx.grassmannian() if in_interior(N, x)))


def exterior(N: Necklace) -> Collection:
    return separated_fan(N) - interior(N)


def is_chamber_set(x: Subset, pi: Permutation, _aligns=None) -> bool:
    """Every alignment ``i => j`` of pi with ``i ∈ X`` has ``j ∈ X``."""
    if x.n != pi.n or len(x) != average_rotation(pi):
        raise InputError(f"{x} does not have size {average_rotation(pi)} over [{pi.n}]")
    aligns = alignments(pi) if _aligns is None else _aligns
    return all(j in x for i, j in aligns if i in x)


def interior_chamber(pi: Permutation) -> Collection:
    ctx = GroundContext(pi.n, average_rotation(pi))
    aligns = alignments(pi)
    return Collection.of(
        ctx, (x for x in ctx.grassmannian() if is_chamber_set(x, pi, aligns))
    )


def generalized_fan(K: GeneralizedNecklace) -> Collection:
    ctx = K.ctx
    n = ctx.n
    return Collection.of(
        ctx,
        (x for x in ctx.grassmannian() if all(separated_mask(k.mask, x.mask, n) for k in K.sets)),
    )


def generalized_interior(K: GeneralizedNecklace) -> Collection:
    """Sets separated from K whose embedded point lies in the closed inside of the curve."""
    from .plabic import curve_of, embed, point_inside

    curve = curve_of(K.sets)
    fan = generalized_fan(K)
    return Collection.of(fan.ctx, (x for x in fan.members if point_inside(curve, embed(x))))


def generalized_exterior(K: GeneralizedNecklace) -> Collection:
    return generalized_fan(K) - generalized_interior(K)
