"""Cyclic orders on [n], the dominance relation and weak separation.

Subsets of ``[n] = {1, ..., n}`` are stored as bit-vectors: element ``k``
lives at bit ``k - 1``.  Everything user-facing is 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

from .errors import InputError

MAX_N = 32


@dataclass(frozen=True)
class GroundContext:
    """The pair ``(n, r)`` fixing the discrete Grassmannian C(n, r)."""

    n: int
    r: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise InputError(f"n must lie in [1, {MAX_N}], got {self.n}")
        if not 0 <= self.r <= self.n:
            raise InputError(f"r must lie in [0, n={self.n}], got {self.r}")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def grassmannian(self) -> list["Subset"]:
        """All r-subsets of [n] in lexicographic order."""
        return [
            Subset.of(c, self.n) for c in combinations(range(1, self.n + 1), self.r)
        ]

    def __str__(self):
        return f"C({self.n},{self.r})"


def _elements(mask: int) -> tuple[int, ...]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


@dataclass(frozen=True, order=False)
class Subset:
    """A subset of [n] with value semantics.

    Equality and hashing go through ``(mask, n)``; ordering is lexicographic on
    the sorted element tuple, which is the canonical order used for output.
    """

    mask: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise InputError(f"n must lie in [1, {MAX_N}], got {self.n}")
        if self.mask < 0 or self.mask >> self.n:
            raise InputError(f"mask {self.mask:#x} has bits outside [1, {self.n}]")

    @classmethod
    def of(cls, elements: Iterable[int], n: int) -> "Subset":
        mask = 0
        for e in elements:
            if not 1 <= e <= n:
                raise InputError(f"element {e} outside [1, {n}]")
            mask |= 1 << (e - 1)
        return cls(mask, n)

    @classmethod
    def parse(cls, text: str, n: int) -> "Subset":
        return cls.of(parse_elements(text), n)

    @property
    def elements(self) -> tuple[int, ...]:
        return _elements(self.mask)

    @property
    def ctx(self) -> GroundContext:
        return GroundContext(self.n, len(self))

    def __len__(self):
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, e: int) -> bool:
        return 1 <= e <= self.n and bool(self.mask >> (e - 1) & 1)

    def __lt__(self, other: "Subset") -> bool:
        return self.elements < other.elements

    def __le__(self, other: "Subset") -> bool:
        return self.elements <= other.elements

    def __sub__(self, other: "Subset") -> "Subset":
        return Subset(self.mask & ~other.mask, self.n)

    def __or__(self, other: "Subset") -> "Subset":
        return Subset(self.mask | other.mask, self.n)

    def __and__(self, other: "Subset") -> "Subset":
        return Subset(self.mask & other.mask, self.n)

    def issubset(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0

    def with_(self, e: int) -> "Subset":
        return Subset(self.mask | 1 << (e - 1), self.n)

    def without(self, e: int) -> "Subset":
        return Subset(self.mask & ~(1 << (e - 1)), self.n)

    def __str__(self):
        return format_elements(self.elements, self.n)

    def __repr__(self):
        return f"Subset('{self}', n={self.n})"


# ---------------------------------------------------------------- literals


def parse_elements(text: str) -> list[int]:
    """Parse a set literal: ``"127"`` or ``"1,2,12"``; ``""``/``"-"`` is empty."""
    text = text.strip()
    if text in ("", "-", "{}", "∅"):
        return []
    text = text.strip("{}")
    try:
        if "," in text or " " in text:
            parts = [p for p in text.replace(",", " ").split() if p]
            return [int(p) for p in parts]
        return [int(ch) for ch in text]
    except ValueError:
        raise InputError(f"bad set literal {text!r}") from None


def format_elements(elements: Iterable[int], n: int) -> str:
    elements = sorted(elements)
    if not elements:
        return "-"
    if n <= 9:
        return "".join(str(e) for e in elements)
    return ",".join(str(e) for e in elements)


# ---------------------------------------------------------------- orders


def _check_element(e: int, n: int):
    if not 1 <= e <= n:
        raise InputError(f"element {e} outside [1, {n}]")


def cyclic_rank(i: int, a: int, n: int) -> int:
    """Position of ``a`` in the order ``i <_i i+1 <_i ... <_i i-1`` (0-based)."""
    return (a - i) % n


def cyclic_less(i: int, a: int, b: int, ctx: GroundContext) -> bool:
    n = ctx.n
    for e in (i, a, b):
        _check_element(e, n)
    return cyclic_rank(i, a, n) < cyclic_rank(i, b, n)


def cyclic_interval(start: int, length: int, ctx: GroundContext) -> Subset:
    """``{start, start+1, ..., start+length-1}`` taken modulo n."""
    n = ctx.n
    _check_element(start, n)
    if not 0 <= length <= n:
        raise InputError(f"interval length {length} outside [0, {n}]")
    return Subset.of(((start - 1 + t) % n + 1 for t in range(length)), n)


def rotate_mask(mask: int, shift: int, n: int) -> int:
    """Relabel ``k -> k - shift`` (mod n); bit of element ``shift+1`` moves to bit 0."""
    shift %= n
    full = (1 << n) - 1
    return ((mask >> shift) | (mask << (n - shift))) & full


def _check_pair(x: Subset, y: Subset):
    if x.n != y.n:
        raise InputError(f"subsets live in different ground sets ({x.n} vs {y.n})")
    if len(x) != len(y):
        raise InputError(f"cardinalities differ: |{x}|={len(x)}, |{y}|={len(y)}")


def dominates_mask(x: int, y: int, i: int, n: int) -> bool:
    """Mask form of ``X <<_i Y``."""
    a = x & ~y
    b = y & ~x
    if not a:
        return True
    # In <_i coordinates every element of X-Y must precede every element of Y-X:
    # the highest rotated bit of a sits below the lowest rotated bit of b.
    ra = rotate_mask(a, i - 1, n)
    rb = rotate_mask(b, i - 1, n)
    return ra.bit_length() <= (rb & -rb).bit_length() - 1


def dominates(x: Subset, y: Subset, i: int) -> bool:
    """``X <<_i Y``: every element of X-Y is <_i-smaller than every element of Y-X."""
    _check_pair(x, y)
    _check_element(i, x.n)
    return dominates_mask(x.mask, y.mask, i, x.n)


@lru_cache(maxsize=1 << 20)
def separated_mask(x: int, y: int, n: int) -> bool:
    """Run-count test: the circular A/B label sequence of X-Y, Y-X has <= 2 runs."""
    a = x & ~y
    b = y & ~x
    if not a:
        return True
    labels = []
    for k in range(n):
        bit = 1 << k
        if a & bit:
            labels.append(0)
        elif b & bit:
            labels.append(1)
    changes = sum(1 for t in range(len(labels)) if labels[t] != labels[t - 1])
    return changes <= 2


def separated_naive_mask(x: int, y: int, n: int) -> bool:
    return any(dominates_mask(x, y, j, n) for j in range(1, n + 1))


def weakly_separated(x: Subset, y: Subset) -> bool:
    _check_pair(x, y)
    return separated_mask(x.mask, y.mask, x.n)


def weakly_separated_naive(x: Subset, y: Subset) -> bool:
    """Reference oracle: scan every cyclic shift j for ``X <<_j Y``."""
    _check_pair(x, y)
    return separated_naive_mask(x.mask, y.mask, x.n)


def neighbors(x: Subset, y: Subset) -> bool:
    _check_pair(x, y)
    return (x.mask ^ y.mask).bit_count() == 2


def is_separated_system(sets: Iterable[Subset]) -> bool:
    sets = list(sets)
    return all(
        weakly_separated(a, b) for t, a in enumerate(sets) for b in sets[t + 1:]
    )


def systems_separated(xs: Iterable[Subset], ys: Iterable[Subset]) -> bool:
    """``X || Y`` for collections: every member of one is separated from every member of the other."""
    ys = list(ys)
    return all(weakly_separated(a, b) for a in xs for b in ys)
