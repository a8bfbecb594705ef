"""q-cyclotomic cosets modulo a length and the (q, s)-partition calculus.

Everything here is pure combinatorics on Z_ell.  A cyclotomic partition is
stored as its level map: every coset representative is sent to a level in
{0, ..., s}, and the s + 1 component sets are materialized on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Mapping

from .errors import ContextMismatch, InputError

__all__ = [
    "CycContext",
    "CycSet",
    "CycPartition",
    "Interval",
    "multiplicative_order",
    "euler_phi",
    "coset_count_formula",
    "q_closure",
    "cosets",
    "set_transform",
    "longest_interval",
    "partition_make",
    "partition_join",
    "partition_meet",
    "partition_dual",
    "partition_embed",
    "partition_project",
    "zero_partition",
    "full_partition",
    "all_partitions",
]


def multiplicative_order(q: int, ell: int) -> int:
    """Smallest i > 0 with q**i == 1 (mod ell)."""
    if ell == 1:
        return 1
    if gcd(q, ell) != 1:
        raise InputError(f"{q} is not invertible modulo {ell}")
    i, x = 1, q % ell
    while x != 1:
        x = (x * q) % ell
        i += 1
    return i


def euler_phi(n: int) -> int:
    result, k, x = n, 2, n
    while k * k <= x:
        if x % k == 0:
            while x % k == 0:
                x //= k
            result -= result // k
        k += 1
    if x > 1:
        result -= result // x
    return result


def coset_count_formula(ell: int, q: int) -> int:
    """Number of q-cyclotomic cosets mod ell as sum over d | ell of phi(d)/ord_d(q)."""
    total = 0
    for d in range(1, ell + 1):
        if ell % d == 0:
            total += euler_phi(d) // multiplicative_order(q, d)
    return total


@dataclass(frozen=True)
class CycContext:
    """Length ell, residue-field size q and nilpotency index s."""

    ell: int
    q: int
    s: int = 1
    m: int = field(init=False)

    def __post_init__(self):
        if self.ell < 1:
            raise InputError(f"length must be positive, got {self.ell}")
        if self.q < 2:
            raise InputError(f"q must be a prime power, got {self.q}")
        if self.s < 1:
            raise InputError(f"s must be >= 1, got {self.s}")
        if gcd(self.ell, self.q) != 1:
            raise InputError(f"gcd(ell={self.ell}, q={self.q}) != 1")
        object.__setattr__(self, "m", multiplicative_order(self.q, self.ell))

    @cached_property
    def _orbits(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        out = []
        for z in range(self.ell):
            if z in seen:
                continue
            orbit = []
            x = z
            while x not in orbit:
                orbit.append(x)
                x = (x * self.q) % self.ell
            seen.update(orbit)
            out.append(tuple(orbit))
        return tuple(out)

    @cached_property
    def reps(self) -> tuple[int, ...]:
        """Coset representatives (the minimum of each coset), ascending."""
        return tuple(orbit[0] for orbit in self._orbits)

    @cached_property
    def rep_of(self) -> tuple[int, ...]:
        """rep_of[z] is the representative of the coset containing z."""
        table = [0] * self.ell
        for orbit in self._orbits:
            for z in orbit:
                table[z] = orbit[0]
        return tuple(table)

    def coset(self, z: int) -> frozenset[int]:
        self.check(z)
        return frozenset(self._orbits[self.reps.index(self.rep_of[z])])

    def check(self, z: int) -> int:
        if not isinstance(z, int) or not 0 <= z < self.ell:
            raise InputError(f"residue {z!r} outside [0, {self.ell - 1}]")
        return z

    @property
    def universe(self) -> frozenset[int]:
        return frozenset(range(self.ell))

    def with_s(self, s: int) -> "CycContext":
        return CycContext(self.ell, self.q, s)


@dataclass(frozen=True)
class CycSet:
    """A subset of Sigma_ell = {0, ..., ell-1} attached to its context."""

    context: CycContext
    members: frozenset[int]

    def __post_init__(self):
        for z in self.members:
            self.context.check(z)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, z) -> bool:
        return z in self.members

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"

    def is_q_closed(self) -> bool:
        ctx = self.context
        return {(z * ctx.q) % ctx.ell for z in self.members} == self.members

    def reps(self) -> tuple[int, ...]:
        """Coset representatives of a q-closed set."""
        rep_of = self.context.rep_of
        return tuple(sorted({rep_of[z] for z in self.members}))


def _as_members(A, ctx: CycContext) -> frozenset[int]:
    if isinstance(A, CycSet):
        return A.members
    return frozenset(ctx.check(z) for z in A)


def q_closure(A: Iterable[int] | CycSet, ctx: CycContext) -> CycSet:
    """Smallest q-closed superset of A."""
    members = _as_members(A, ctx)
    rep_of = ctx.rep_of
    wanted = {rep_of[z] for z in members}
    out: set[int] = set()
    for z in range(ctx.ell):
        if rep_of[z] in wanted:
            out.add(z)
    return CycSet(ctx, frozenset(out))


def cosets(ctx: CycContext) -> tuple[list[CycSet], tuple[int, ...], int]:
    sets = [CycSet(ctx, ctx.coset(r)) for r in ctx.reps]
    return sets, ctx.reps, len(sets)


def set_transform(A: CycSet, kind: str) -> CycSet:
    """opposite: -A, complement: Sigma minus A, dual: complement of -A."""
    ctx = A.context
    if kind == "opposite":
        return CycSet(ctx, frozenset((-z) % ctx.ell for z in A.members))
    if kind == "complement":
        return CycSet(ctx, ctx.universe - A.members)
    if kind == "dual":
        return set_transform(set_transform(A, "opposite"), "complement")
    raise InputError(f"unknown set transform {kind!r}")


@dataclass(frozen=True)
class Interval:
    """The set {u*a, u*(a+1), ..., u*(a+delta-1)} modulo ell."""

    start: int
    multiplier: int
    delta: int
    ell: int

    def members(self) -> frozenset[int]:
        return frozenset((self.multiplier * (self.start + i)) % self.ell
                         for i in range(self.delta))


def longest_interval(A: CycSet) -> Interval:
    """Longest interval contained in A over all multipliers coprime to ell.

    Runs are circular.  Ties go to the smallest (multiplier, start).
    """
    ell = A.context.ell
    members = A.members
    best = Interval(0, 1, 0, ell)
    if not members:
        return best
    for u in range(1, max(ell, 2)):
        if gcd(u, ell) != 1:
            continue
        u_inv = pow(u, -1, ell)
        scaled = {(u_inv * z) % ell for z in members}
        if len(scaled) == ell:
            return Interval(0, u, ell, ell)
        for a in range(ell):
            if a not in scaled or (a - 1) % ell in scaled:
                continue
            length = 0
            while (a + length) % ell in scaled:
                length += 1
            if length > best.delta:
                best = Interval(a, u, length, ell)
    return best


@dataclass(frozen=True)
class CycPartition:
    """A (q, s)-cyclotomic partition, stored as levels aligned with ``context.reps``."""

    context: CycContext
    levels: tuple[int, ...]

    def __post_init__(self):
        ctx = self.context
        if len(self.levels) != len(ctx.reps):
            raise InputError("one level per coset representative is required")
        for lv in self.levels:
            if not isinstance(lv, int) or not 0 <= lv <= ctx.s:
                raise InputError(f"level {lv!r} outside [0, {ctx.s}]")

    @property
    def level_map(self) -> dict[int, int]:
        return dict(zip(self.context.reps, self.levels))

    def level_of(self, z: int) -> int:
        ctx = self.context
        return self.levels[ctx.reps.index(ctx.rep_of[ctx.check(z)])]

    def sets(self) -> tuple[CycSet, ...]:
        """The components (A_0, ..., A_s)."""
        ctx = self.context
        buckets: list[set[int]] = [set() for _ in range(ctx.s + 1)]
        for z in range(ctx.ell):
            buckets[self.level_of(z)].add(z)
        return tuple(CycSet(ctx, frozenset(b)) for b in buckets)

    def to_string(self) -> str:
        return ",".join(f"{r}={lv}" for r, lv in zip(self.context.reps, self.levels))

    __str__ = to_string

    @classmethod
    def parse(cls, text: str, ctx: CycContext) -> "CycPartition":
        """Parse ``rep=level`` pairs; omitted representatives get level s."""
        levels = {}
        text = text.strip()
        if text:
            for item in text.split(","):
                key, sep, value = item.partition("=")
                if not sep:
                    raise InputError(f"malformed partition item {item!r}")
                try:
                    rep, lv = int(key.strip()), int(value.strip())
                except ValueError:
                    raise InputError(f"malformed partition item {item!r}") from None
                if rep in levels:
                    raise InputError(f"representative {rep} given twice")
                levels[rep] = lv
        full = {r: ctx.s for r in ctx.reps}
        for rep, lv in levels.items():
            if rep not in full:
                raise InputError(f"{rep} is not a coset representative mod {ctx.ell}")
            full[rep] = lv
        return partition_make(full, ctx)


def partition_make(levels: Mapping[int, int], ctx: CycContext) -> CycPartition:
    if set(levels) != set(ctx.reps):
        unknown = set(levels) - set(ctx.reps)
        if unknown:
            raise InputError(f"unknown representatives {sorted(unknown)}")
        raise InputError(f"missing representatives {sorted(set(ctx.reps) - set(levels))}")
    return CycPartition(ctx, tuple(levels[r] for r in ctx.reps))


def _same_context(a: CycPartition, b: CycPartition) -> CycContext:
    if a.context != b.context:
        raise ContextMismatch(f"{a.context} vs {b.context}")
    return a.context


def _from_sets(sets: list[set[int]], ctx: CycContext) -> CycPartition:
    levels = {}
    for t, comp in enumerate(sets):
        for z in comp:
            levels[ctx.rep_of[z]] = t
    return partition_make(levels, ctx)


def partition_join(a: CycPartition, b: CycPartition) -> CycPartition:
    """C_0 = A_0 | B_0 and C_t = (A_t | B_t) minus everything already placed."""
    ctx = _same_context(a, b)
    sa, sb = a.sets(), b.sets()
    placed: set[int] = set()
    out = []
    for t in range(ctx.s + 1):
        comp = (set(sa[t].members) | set(sb[t].members)) - placed
        placed |= comp
        out.append(comp)
    return _from_sets(out, ctx)


def partition_dual(a: CycPartition) -> CycPartition:
    """(A_0, ..., A_s) -> (-A_s, ..., -A_0)."""
    ctx = a.context
    comps = a.sets()
    out = [set(set_transform(comps[ctx.s - t], "opposite").members)
           for t in range(ctx.s + 1)]
    return _from_sets(out, ctx)


def partition_meet(a: CycPartition, b: CycPartition) -> CycPartition:
    _same_context(a, b)
    return partition_dual(partition_join(partition_dual(a), partition_dual(b)))


def partition_embed(A: CycSet, s: int | None = None) -> CycPartition:
    """A -> (A, empty, ..., empty, complement of A)."""
    ctx = A.context if s is None else A.context.with_s(s)
    if not A.is_q_closed():
        raise InputError(f"{A!r} is not q-closed")
    return partition_make({r: (0 if r in A.members else ctx.s) for r in ctx.reps}, ctx)


def partition_project(a: CycPartition) -> CycSet:
    return a.sets()[0]


def zero_partition(ctx: CycContext) -> CycPartition:
    return CycPartition(ctx, (ctx.s,) * len(ctx.reps))


def full_partition(ctx: CycContext) -> CycPartition:
    return CycPartition(ctx, (0,) * len(ctx.reps))


def all_partitions(ctx: CycContext) -> Iterator[CycPartition]:
    for levels in itertools.product(range(ctx.s + 1), repeat=len(ctx.reps)):
        yield CycPartition(ctx, levels)
