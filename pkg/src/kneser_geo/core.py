"""Subset combinatorics, colorings, the brute-force witness oracle and exact
chromatic numbers of small Kneser graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CapacityError, InputError

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class KneserInstance:
    """The ground set {1..n} together with the subset size k."""

    n: int
    k: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.k, int)):
            raise InputError(f"n and k must be integers, got n={self.n!r}, k={self.k!r}")
        if self.k < 1:
            raise InputError(f"k must be >= 1, got k={self.k}")
        if self.n < 2 * self.k:
            raise InputError(f"n must be >= 2k, got n={self.n}, k={self.k}")

    @property
    def d(self) -> int:
        """Embedding dimension n - 2k + 1, also the number of colors the theorem allows."""
        return self.n - 2 * self.k + 1

    @property
    def num_subsets(self) -> int:
        return comb(self.n, self.k)

    def check_subset(self, s: "KSubset") -> None:
        if len(s.members) != self.k or s.members[-1] > self.n:
            raise InputError(f"subset {s.key} is not a {self.k}-subset of 1..{self.n}")

    @cached_property
    def _subsets(self) -> tuple:
        return tuple(enumerate_k_subsets(self))

    @cached_property
    def member_index(self) -> np.ndarray:
        """(C(n,k), k) array of zero-based member indices in rank order."""
        return np.array([s.members for s in self._subsets], dtype=np.intp).reshape(-1, self.k) - 1

    @cached_property
    def masks(self) -> np.ndarray:
        if self.n <= 63:
            return np.array([s.mask for s in self._subsets], dtype=np.uint64)
        return np.array([s.mask for s in self._subsets], dtype=object)


@dataclass(frozen=True, order=True)
class KSubset:
    """A set of positive integers stored as a strictly increasing tuple."""

    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise InputError("a k-subset needs at least one member")
        for m in members:
            if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
                raise InputError(f"subset members must be positive integers, got {members!r}")
        if any(a >= b for a, b in zip(members, members[1:])):
            raise InputError(f"subset members must be strictly increasing, got {members!r}")
        object.__setattr__(self, "members", tuple(int(m) for m in members))

    @classmethod
    def of(cls, *members: int) -> "KSubset":
        return cls(tuple(sorted(members)))

    @property
    def mask(self) -> int:
        out = 0
        for m in self.members:
            out |= 1 << (m - 1)
        return out

    @property
    def key(self) -> str:
        return ",".join(map(str, self.members))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        return "{" + self.key + "}"


def _cap_check(instance: KneserInstance, cap: int) -> None:
    if instance.num_subsets > cap:
        raise CapacityError(
            f"C({instance.n},{instance.k}) = {instance.num_subsets} exceeds the cap {cap}"
        )


def enumerate_k_subsets(instance: KneserInstance, cap: int = DEFAULT_CAP) -> list[KSubset]:
    """All k-subsets in lexicographic order; list position equals rank."""
    _cap_check(instance, cap)
    return [KSubset(c) for c in itertools.combinations(range(1, instance.n + 1), instance.k)]


def rank_subset(instance: KneserInstance, s: KSubset) -> int:
    """Lexicographic rank via the combinatorial number system.

    Mapping each member c to n - c turns lex order into reverse colex order,
    so the rank is C(n,k) - 1 minus the colex rank of the image.
    """
    if not isinstance(s, KSubset):
        s = KSubset(tuple(s))
    instance.check_subset(s)
    n, k = instance.n, instance.k
    colex = sum(comb(n - c, k - i) for i, c in enumerate(s.members))
    return comb(n, k) - 1 - colex


def unrank_subset(instance: KneserInstance, r: int) -> KSubset:
    n, k = instance.n, instance.k
    total = comb(n, k)
    if not isinstance(r, (int, np.integer)) or not 0 <= r < total:
        raise InputError(f"rank {r!r} outside [0, {total})")
    r = int(r)
    members = []
    c = 1
    for i in range(k, 0, -1):
        # subsets whose next member is c number C(n - c, i - 1)
        while comb(n - c, i - 1) <= r:
            r -= comb(n - c, i - 1)
            c += 1
        members.append(c)
        c += 1
    return KSubset(tuple(members))


def are_disjoint(a: KSubset, b: KSubset) -> bool:
    return a.mask & b.mask == 0


@dataclass(frozen=True)
class Coloring:
    """Dense assignment of color ids to the k-subsets, indexed by rank."""

    instance: KneserInstance
    assignment: tuple

    def __post_init__(self):
        assignment = tuple(int(c) for c in self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if len(assignment) != self.instance.num_subsets:
            raise InputError(
                f"coloring has {len(assignment)} entries, expected C({self.instance.n},{self.instance.k})"
                f" = {self.instance.num_subsets}"
            )
        if min(assignment) < 0:
            raise InputError("color ids must be non-negative")
        used = set(assignment)
        top = max(assignment)
        missing = [c for c in range(top + 1) if c not in used]
        if missing:
            raise InputError(f"color ids are not dense: color {missing[0]} is never used")

    @classmethod
    def from_function(cls, instance: KneserInstance, rule) -> "Coloring":
        """Build a coloring by calling ``rule(subset)`` on every subset in rank order."""
        return cls(instance, tuple(rule(s) for s in enumerate_k_subsets(instance)))

    @property
    def num_colors(self) -> int:
        return max(self.assignment) + 1

    def color_of(self, s: KSubset) -> int:
        return self.assignment[rank_subset(self.instance, s)]

    @cached_property
    def colors(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.intp)

    @cached_property
    def classes(self) -> tuple:
        """Member ranks of each color class, ascending."""
        order = np.argsort(self.colors, kind="stable")
        bounds = np.searchsorted(self.colors[order], np.arange(self.num_colors + 1))
        return tuple(order[bounds[c]:bounds[c + 1]] for c in range(self.num_colors))


@dataclass(frozen=True)
class WitnessPair:
    """Two disjoint k-subsets of the same color, ordered so that rank(a) < rank(b).

    ``provenance`` is ``"brute"`` for the exhaustive oracle and ``"geometric"``
    when a Helly failure at ``direction`` exposed the pair.
    """

    a: KSubset
    b: KSubset
    color: int
    provenance: str = "brute"
    direction: Optional[tuple] = field(default=None)

    def validate(self, coloring: Coloring) -> bool:
        inst = coloring.instance
        return (
            self.a != self.b
            and are_disjoint(self.a, self.b)
            and coloring.color_of(self.a) == self.color
            and coloring.color_of(self.b) == self.color
            and len(self.a) == len(self.b) == inst.k
        )


def verify_coloring(coloring: Coloring) -> Optional[WitnessPair]:
    """First disjoint same-colored pair by (rank, rank), or None for a proper coloring."""
    inst = coloring.instance
    masks = inst.masks
    colors = coloring.colors
    subsets = inst._subsets
    for i in range(len(masks) - 1):
        hits = np.flatnonzero(((masks[i + 1:] & masks[i]) == 0) & (colors[i + 1:] == colors[i]))
        if hits.size:
            j = i + 1 + int(hits[0])
            return WitnessPair(subsets[i], subsets[j], int(colors[i]), "brute")
    return None


def canonical_coloring(instance: KneserInstance) -> Coloring:
    """The standard proper coloring with n - 2k + 2 colors.

    Subsets with minimum i <= n-2k+1 get color i-1; the rest live inside the
    last 2k-1 elements, pairwise intersect, and share color n-2k+1.
    """
    d = instance.d
    return Coloring.from_function(instance, lambda s: min(s.members[0], d + 1) - 1)


def random_coloring(
    instance: KneserInstance, c: int, seed: int, cap: int = DEFAULT_CAP
) -> Coloring:
    if c < 1:
        raise InputError(f"number of colors must be >= 1, got {c}")
    _cap_check(instance, cap)
    rng = np.random.default_rng(seed)
    raw = rng.integers(0, c, size=instance.num_subsets)
    _, dense = np.unique(raw, return_inverse=True)
    return Coloring(instance, tuple(dense.tolist()))


def _kneser_adjacency(instance: KneserInstance) -> list[list[int]]:
    masks = [int(m) for m in instance.masks]
    return [[j for j, mj in enumerate(masks) if mi & mj == 0] for mi in masks]


def _greedy_dsatur(adj: Sequence[Sequence[int]]) -> int:
    n = len(adj)
    colors = [-1] * n
    seen = [set() for _ in range(n)]
    for _ in range(n):
        u = max((v for v in range(n) if colors[v] < 0), key=lambda v: (len(seen[v]), len(adj[v]), -v))
        c = 0
        while c in seen[u]:
            c += 1
        colors[u] = c
        for v in adj[u]:
            seen[v].add(c)
    return max(colors) + 1


def _colorable(adj: Sequence[Sequence[int]], num_colors: int) -> bool:
    """DSATUR backtracking; a new color is only ever opened as the next unused id."""
    n = len(adj)
    colors = [-1] * n

    def pick():
        best, key = -1, None
        for v in range(n):
            if colors[v] < 0:
                sat = len({colors[u] for u in adj[v] if colors[u] >= 0})
                cand = (sat, len(adj[v]))
                if key is None or cand > key:
                    best, key = v, cand
        return best

    def solve(colored: int, used: int) -> bool:
        if colored == n:
            return True
        v = pick()
        blocked = {colors[u] for u in adj[v]}
        for c in range(min(used + 1, num_colors)):
            if c in blocked:
                continue
            colors[v] = c
            if solve(colored + 1, max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    return solve(0, 0)


def exact_chromatic_number(instance: KneserInstance, vertex_cap: int = 40) -> int:
    """Chromatic number of KG(n, k) by branch and bound.

    The clique of floor(n/k) pairwise disjoint subsets bounds from below and a
    greedy DSATUR coloring from above; each count in between is decided by
    exhaustive backtracking.
    """
    if instance.num_subsets > vertex_cap:
        raise CapacityError(
            f"KG({instance.n},{instance.k}) has {instance.num_subsets} vertices, cap is {vertex_cap}"
        )
    adj = _kneser_adjacency(instance)
    lower = instance.n // instance.k
    upper = _greedy_dsatur(adj)
    for c in range(lower, upper):
        if _colorable(adj, c):
            return c
    return upper


def subsets_of(instance: KneserInstance, ranks: Iterable[int]) -> list[KSubset]:
    return [instance._subsets[int(r)] for r in ranks]
