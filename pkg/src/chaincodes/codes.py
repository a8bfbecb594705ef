"""Cyclic codes over a chain ring built from cyclotomic partitions.

A cyclic R-linear code of length ell is the direct sum of theta**t times the
trace codes of the components A_t of its partition.  Lattice operations and
duals are computed on partitions; the linear-algebra layer serves as an
independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable

from . import linalg
from .cyclotomic import (
    CycContext,
    CycPartition,
    CycSet,
    Interval,
    all_partitions,
    longest_interval,
    partition_dual,
    partition_embed,
    partition_join,
    partition_meet,
    q_closure,
    set_transform,
)
from .errors import ContextMismatch, InputError, NotCyclicError, SizeLimitError
from .linalg import RMatrix, StandardForm
from .ring import RingElement, RingSpec, make_ring

__all__ = [
    "CodeContext",
    "make_context",
    "PolyCode",
    "CyclicCode",
    "CodeReport",
    "GaloisOps",
    "MdsReport",
    "PsiReport",
    "poly_code",
    "trace_matrix",
    "trace_code",
    "build",
    "code_sum",
    "code_meet",
    "code_dual",
    "self_dual_flags",
    "enumerate_self_dual",
    "bch_bound",
    "bch_interval",
    "min_weight",
    "mds_family",
    "irreducible_decompose",
    "identify_partition",
    "psi_z_check",
    "galois_ops",
    "closure",
    "restriction",
    "trace_image",
    "extension",
    "generators_orthogonal",
    "component_matrix",
    "enumerate_all",
    "DEFAULT_MAX_CATALOG",
]

DEFAULT_MAX_CATALOG = 2 ** 16


@dataclass(frozen=True)
class CodeContext:
    """Base ring R of invariants (q, s), length ell and the extension S of degree ord_ell(q)."""

    p: int
    n: int
    s: int
    ell: int
    family: str = "galois-ring"

    def __post_init__(self):
        # validates coprimality and computes m
        self.cyc  # noqa: B018

    @cached_property
    def cyc(self) -> CycContext:
        return CycContext(self.ell, self.p ** self.n, self.s)

    @property
    def q(self) -> int:
        return self.p ** self.n

    @property
    def m(self) -> int:
        return self.cyc.m

    @cached_property
    def ring(self) -> RingSpec:
        return make_ring(self.p, self.n, self.s, self.m, self.family)

    @property
    def xi(self) -> RingElement:
        return self.ring.xi

    @cached_property
    def eta(self) -> RingElement:
        return self.ring.root_of_unity(self.ell)

    @cached_property
    def eta_powers(self) -> tuple:
        """Raw coefficients of eta**i for i in [0, ell)."""
        spec = self.ring
        out, x = [], spec.one_c
        for _ in range(self.ell):
            out.append(x)
            x = spec.mul_c(x, self.eta.c)
        return tuple(out)

    def describe(self) -> dict:
        return {"p": self.p, "n": self.n, "q": self.q, "s": self.s, "ell": self.ell,
                "m": self.m, "family": self.family, "ring": self.ring.to_json()}


@lru_cache(maxsize=None)
def make_context(p: int, n: int = 1, s: int = 1, ell: int = 1,
                 family: str = "galois-ring") -> CodeContext:
    return CodeContext(p, n, s, ell, family)


def _check_set(ctx: CodeContext, A: Iterable[int]) -> frozenset[int]:
    if isinstance(A, CycSet):
        return A.members
    return frozenset(ctx.cyc.check(int(z)) for z in A)


@dataclass(frozen=True)
class PolyCode:
    """The evaluation code L_eta(S; A) with generator rows (eta**(a*j))_j."""

    context: CodeContext
    defining_set: frozenset[int]
    matrix: RMatrix

    @property
    def rank(self) -> int:
        return len(self.defining_set)


def poly_code(ctx: CodeContext, A: Iterable[int]) -> PolyCode:
    A = _check_set(ctx, A)
    ell, pw = ctx.ell, ctx.eta_powers
    rows = [[pw[(a * j) % ell] for j in range(ell)] for a in sorted(A)]
    return PolyCode(ctx, A, RMatrix(ctx.ring, rows, ell, base=False))


def _trace_rows(ctx: CodeContext, z: int) -> list[list]:
    spec, ell, pw = ctx.ring, ctx.ell, ctx.eta_powers
    rows = []
    for k in range(ctx.m):
        b = spec.pow_c(ctx.xi.c, k)
        rows.append([spec.trace_c(spec.mul_c(b, pw[(z * j) % ell])) for j in range(ell)])
    return rows


@lru_cache(maxsize=None)
def _trace_matrix_cached(ctx: CodeContext, reps: tuple[int, ...]) -> RMatrix:
    rows = []
    for z in reps:
        rows.extend(_trace_rows(ctx, z))
    return linalg.standard_form(RMatrix(ctx.ring, rows, ctx.ell, base=True)).matrix


def trace_matrix(ctx: CodeContext, A: Iterable[int]) -> RMatrix:
    """Standard-form generators of Tr(L_eta(S; A)); only coset representatives are used."""
    closed = q_closure(_check_set(ctx, A), ctx.cyc)
    return _trace_matrix_cached(ctx, closed.reps())


def trace_code(ctx: CodeContext, A: Iterable[int]) -> "CyclicCode":
    """The free cyclic code C_eta(R; A), which depends only on the q-closure of A."""
    closed = q_closure(_check_set(ctx, A), ctx.cyc)
    return CyclicCode(ctx, partition_embed(closed))


@dataclass(frozen=True)
class CodeReport:
    label: str | None
    partition: str
    type: tuple[int, ...]
    rank: int
    cardinality: int
    cardinality_power: str
    bch_bound: int
    min_weight: int | None
    self_dual: bool
    self_orthogonal: bool
    free: bool

    def to_dict(self) -> dict:
        out = {}
        if self.label is not None:
            out["label"] = self.label
        out.update({
            "partition": self.partition,
            "type": list(self.type),
            "rank": self.rank,
            "cardinality": str(self.cardinality),
            "cardinality_power": self.cardinality_power,
            "bch_bound": self.bch_bound,
        })
        if self.min_weight is not None:
            out["min_weight"] = self.min_weight
        out.update({"self_dual": self.self_dual, "self_orthogonal": self.self_orthogonal,
                    "free": self.free})
        return out


@dataclass(frozen=True)
class CyclicCode:
    """The cyclic code C_{ell,R}(partition)."""

    context: CodeContext
    partition: CycPartition

    def __post_init__(self):
        if self.partition.context != self.context.cyc:
            raise ContextMismatch("partition and code context disagree")

    @cached_property
    def generator(self) -> RMatrix:
        """Stack of theta**t times the trace-code generators of A_t, t < s."""
        ctx = self.context
        spec = ctx.ring
        rows = []
        for t, A in enumerate(self.partition.sets()[:-1]):
            if not A.members:
                continue
            for row in trace_matrix(ctx, A).rows:
                rows.append([spec.mul_theta_c(c, t) for c in row])
        return RMatrix(spec, rows, ctx.ell, base=True)

    @cached_property
    def standard(self) -> StandardForm:
        return linalg.standard_form(self.generator)

    @property
    def type(self) -> tuple[int, ...]:
        return tuple(len(A) for A in self.partition.sets()[:-1])

    @property
    def rank(self) -> int:
        return sum(self.type)

    @property
    def cardinality_exponent(self) -> int:
        s = self.context.s
        return sum((s - t) * k for t, k in enumerate(self.type))

    @property
    def cardinality(self) -> int:
        return linalg.cardinality(self.type, self.context.q, self.context.s)

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def bch_bound(self) -> int:
        return bch_bound(self)

    def min_weight(self, max_enum: int = linalg.DEFAULT_MAX_WEIGHT_ENUM) -> int:
        return min_weight(self, max_enum)

    def flags(self) -> dict[str, bool]:
        return self_dual_flags(self)

    def words(self, max_enum: int = linalg.DEFAULT_MAX_SPAN_ENUM) -> frozenset[bytes]:
        return linalg.codeword_set(self.generator, max_enum)

    def report(self, label: str | None = None, with_weight: bool = False,
               max_weight_enum: int = linalg.DEFAULT_MAX_WEIGHT_ENUM) -> CodeReport:
        f = self.flags()
        return CodeReport(
            label=label,
            partition=self.partition.to_string(),
            type=self.type,
            rank=self.rank,
            cardinality=self.cardinality,
            cardinality_power=f"{self.context.q}^{self.cardinality_exponent}",
            bch_bound=self.bch_bound(),
            min_weight=self.min_weight(max_weight_enum) if with_weight else None,
            self_dual=f["self_dual"],
            self_orthogonal=f["self_orthogonal"],
            free=f["free"],
        )


def build(ctx: CodeContext, partition: CycPartition | str) -> CyclicCode:
    if isinstance(partition, str):
        partition = CycPartition.parse(partition, ctx.cyc)
    return CyclicCode(ctx, partition)


def _pair_context(a: CyclicCode, b: CyclicCode) -> CodeContext:
    if a.context != b.context:
        raise ContextMismatch(f"{a.context} vs {b.context}")
    return a.context


def code_sum(a: CyclicCode, b: CyclicCode) -> CyclicCode:
    return CyclicCode(_pair_context(a, b), partition_join(a.partition, b.partition))


def code_meet(a: CyclicCode, b: CyclicCode) -> CyclicCode:
    return CyclicCode(_pair_context(a, b), partition_meet(a.partition, b.partition))


def code_dual(c: CyclicCode) -> CyclicCode:
    return CyclicCode(c.context, partition_dual(c.partition))


def _inner(spec: RingSpec, x, y):
    acc = spec.zero_c
    for a, b in zip(x, y):
        acc = spec.add_c(acc, spec.mul_c(a, b))
    return acc


def generators_orthogonal(G: RMatrix) -> bool:
    """Every pair of rows (a row with itself included) has inner product zero."""
    spec = G.spec
    rows = G.rows
    return all(not any(_inner(spec, rows[i], rows[j]))
               for i in range(len(rows)) for j in range(i, len(rows)))


def self_dual_flags(c: CyclicCode, check_generators: bool = False) -> dict[str, bool]:
    """Partition criteria for self-duality, self-orthogonality and freeness.

    With ``check_generators`` the self-orthogonality verdict is also computed
    from generator inner products and returned under its own key.
    """
    P = c.partition
    s = c.context.s
    comps = P.sets()
    self_dual = all(comps[t].members == set_transform(comps[s - t], "opposite").members
                    for t in range(s + 1))
    self_orth = partition_meet(P, partition_dual(P)) == P
    free = all(not comps[t].members for t in range(1, s))
    out = {"self_dual": self_dual, "self_orthogonal": self_orth, "free": free}
    if check_generators:
        out["self_orthogonal_by_generators"] = generators_orthogonal(c.generator)
    return out


def enumerate_self_dual(ctx: CodeContext) -> list[CyclicCode]:
    """All self-dual codes, sorted by partition string; empty when s is odd."""
    if ctx.s % 2:
        return []
    codes = [CyclicCode(ctx, P) for P in all_partitions(ctx.cyc)]
    return sorted((c for c in codes if self_dual_flags(c)["self_dual"]),
                  key=lambda c: c.partition.to_string())


def bch_interval(c: CyclicCode) -> Interval | None:
    """Longest interval inside the complement of the union of -A_t, t < s."""
    if c.is_zero:
        return None
    cyc = c.context.cyc
    union: set[int] = set()
    for A in c.partition.sets()[:-1]:
        union |= set_transform(A, "opposite").members
    return longest_interval(CycSet(cyc, cyc.universe - union))


def bch_bound(c: CyclicCode) -> int:
    """delta + 1 for the longest interval; the zero code reports 0."""
    interval = bch_interval(c)
    return 0 if interval is None else interval.delta + 1


def min_weight(c: CyclicCode, max_enum: int = linalg.DEFAULT_MAX_WEIGHT_ENUM) -> int:
    return linalg.min_weight(c.generator, max_enum)


@dataclass(frozen=True)
class MdsReport:
    ring: str
    ell: int
    d: int
    A: tuple[int, ...]
    A_dual: tuple[int, ...]
    rank: int
    min_weight: int
    singleton: int
    mds: bool
    dual_set_is_A_plus_zero: bool
    dual_matches: bool
    self_orthogonal: bool
    small_code_rank: int
    small_code_min_weight: int
    small_code_self_orthogonal: bool
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def mds_family(p: int, n: int, s: int, family: str = "galois-ring",
               max_enum: int = linalg.DEFAULT_MAX_WEIGHT_ENUM) -> MdsReport:
    """The evaluation code L(A^dual) with A = {1, ..., d-1}, ell = q - 1, d = (ell+1)/2.

    S plays the role of the base ring (m = 1), so q is the residue size of S.
    The report also covers L(A) itself, whose dual is L(A^dual).
    """
    if p != 2:
        raise InputError("the MDS family needs even q")
    q = p ** n
    ell = q - 1
    if ell < 1:
        raise InputError("q must exceed 2")
    ctx = make_context(p, n, s, ell, family)
    d = (ell + 1) // 2
    A = CycSet(ctx.cyc, frozenset(range(1, d)))
    A_dual = set_transform(A, "dual")
    big = poly_code(ctx, A_dual).matrix
    small = poly_code(ctx, A).matrix
    k = linalg.standard_form(big).rank
    wt = linalg.min_weight(big, max_enum)
    dual_matches = linalg.same_span(linalg.kernel(big), small)
    notes = (f"ell is taken as q - 1 = {ell} so that an order-ell root of unity exists",)
    return MdsReport(
        ring=ctx.ring.name, ell=ell, d=d,
        A=tuple(A), A_dual=tuple(A_dual),
        rank=k, min_weight=wt, singleton=ell - k + 1, mds=(wt == ell - k + 1),
        dual_set_is_A_plus_zero=(A_dual.members == A.members | {0}),
        dual_matches=dual_matches,
        self_orthogonal=generators_orthogonal(big),
        small_code_rank=linalg.standard_form(small).rank,
        small_code_min_weight=linalg.min_weight(small, max_enum),
        small_code_self_orthogonal=generators_orthogonal(small),
        notes=notes,
    )


def irreducible_decompose(c: CyclicCode) -> list[tuple[int, int]]:
    """(t_z, z) for every coset representative z whose level is below s."""
    s = c.context.s
    return [(lv, z) for z, lv in zip(c.context.cyc.reps, c.partition.levels) if lv < s]


def component_matrix(ctx: CodeContext, t: int, z: int) -> RMatrix:
    """Generators of theta**t C_eta(R; {z})."""
    spec = ctx.ring
    M = trace_matrix(ctx, [z])
    return M.with_rows([[spec.mul_theta_c(c, t) for c in row] for row in M.rows])


def identify_partition(G: RMatrix, ctx: CodeContext) -> CycPartition:
    """The partition whose code is the row span of G (an R-linear cyclic code)."""
    if G.spec != ctx.ring or G.ncols != ctx.ell:
        raise ContextMismatch("matrix does not match the code context")
    if not G.base:
        raise InputError("expected an R-linear generator matrix")
    if not linalg.is_shift_closed(G):
        raise NotCyclicError("row span is not closed under the cyclic shift")
    s = ctx.s
    levels = {}
    for z in ctx.cyc.reps:
        part = linalg.standard_form(linalg.module_intersection(G, trace_matrix(ctx, [z])))
        vals = set(part.valuations)
        if len(vals) > 1:
            raise NotCyclicError(f"component at {z} is not a theta-power of a trace code")
        levels[z] = vals.pop() if vals else s
    P = CycPartition(ctx.cyc, tuple(levels[z] for z in ctx.cyc.reps))
    return P


@dataclass(frozen=True)
class PsiReport:
    z: int
    m_z: int
    rank: int
    injective: bool
    linear: bool
    intertwines_shift: bool

    @property
    def ok(self) -> bool:
        return (self.injective and self.linear and self.intertwines_shift
                and self.rank == self.m_z)


def psi_z_check(ctx: CodeContext, z: int) -> PsiReport:
    """Check a -> (Tr(a * eta**(z*j)))_j on R[eta**z] with basis eta**(z*i), i < m_z.

    Tr is the trace of R[eta**z] over R.
    """
    spec, ell, pw = ctx.ring, ctx.ell, ctx.eta_powers
    z = ctx.cyc.check(z)
    m_z = len(ctx.cyc.coset(z))

    def trace_down(a):
        # trace of R[eta**z] over R; the trace from S would scale by m / m_z
        acc = spec.zero_c
        for i in range(m_z):
            acc = spec.add_c(acc, spec.frobenius_c(a, i))
        return acc

    def psi(a):
        return tuple(trace_down(spec.mul_c(a, pw[(z * j) % ell])) for j in range(ell))

    basis = [pw[(z * i) % ell] for i in range(m_z)]
    images = [psi(b) for b in basis]
    sf = linalg.standard_form(RMatrix(spec, images, ell, base=True))
    injective = sf.rank == m_z and sf.type[0] == m_z
    theta = spec.theta.c
    linear = all(
        psi(spec.add_c(a, b)) == tuple(spec.add_c(x, y) for x, y in zip(psi(a), psi(b)))
        for a in basis for b in basis
    ) and all(
        psi(spec.mul_c(theta, a)) == tuple(spec.mul_c(theta, x) for x in psi(a)) for a in basis
    )
    zeta = pw[(-z) % ell]
    intertwines = all(psi(spec.mul_c(zeta, a)) == linalg.cyclic_shift(psi(a)) for a in basis)
    return PsiReport(z, m_z, sf.rank, injective, linear, intertwines)


@dataclass(frozen=True)
class GaloisOps:
    closure: RMatrix
    restriction: RMatrix
    trace: RMatrix
    extension: RMatrix


def _sigma_matrix(G: RMatrix, power: int = 1) -> list[list]:
    spec = G.spec
    return [[spec.frobenius_c(c, power) for c in row] for row in G.rows]


def closure(B: RMatrix) -> RMatrix:
    """S-span of sigma^i(B) for 0 <= i < m."""
    rows = []
    for i in range(B.spec.m):
        rows.extend(_sigma_matrix(B, i))
    return linalg.standard_form(RMatrix(B.spec, rows, B.ncols, base=False)).matrix


def restriction(B: RMatrix) -> RMatrix:
    """span_S(B) intersected with R^ell.

    Over the prime ring P, span_S(B) is generated by xi**k * b for the rows b
    of B.  A P-combination is fixed by sigma exactly when its coefficient
    vector kills the images (sigma - id)(xi**k * b), which is a kernel problem
    over P.
    """
    spec = B.spec
    P = spec.prime_ring
    gens = []
    # in equal characteristic P = F_p, so theta-multiples need their own generators
    depth = 1 if spec.family == "galois-ring" else spec.s
    for row in linalg.standard_form(B.over(False)).matrix.rows:
        for beta in spec.scalar_basis(False):
            for j in range(depth):
                scalar = spec.mul_theta_c(beta.c, j)
                gens.append([spec.mul_c(scalar, c) for c in row])
    if not gens:
        return linalg.zero_matrix(spec, B.ncols, base=True)
    diffs = [[x for c in g for x in spec.sub_c(spec.sigma_c(c), c)] for g in gens]
    # columns of diffs become rows: solve coeffs . diffs = 0
    cols = [[(diffs[i][j],) for i in range(len(gens))] for j in range(len(diffs[0]))]
    K = linalg.kernel(RMatrix(P, cols, len(gens), base=True))
    rows = []
    for coeffs in K.rows:
        acc = [spec.zero_c] * B.ncols
        for (c,), g in zip(coeffs, gens):
            if c:
                acc = [spec.add_c(a, spec.scale_c(x, c)) for a, x in zip(acc, g)]
        rows.append(acc)
    return linalg.standard_form(RMatrix(spec, rows, B.ncols, base=True)).matrix


def trace_image(B: RMatrix) -> RMatrix:
    """R-span of Tr(xi**k * b) over the rows b of B and k < m."""
    spec = B.spec
    rows = []
    for row in B.rows:
        for k in range(spec.m):
            x = spec.pow_c(spec.xi.c, k)
            rows.append([spec.trace_c(spec.mul_c(x, c)) for c in row])
    return linalg.standard_form(RMatrix(spec, rows, B.ncols, base=True)).matrix


def extension(C: RMatrix) -> RMatrix:
    return linalg.standard_form(C.over(False)).matrix


def galois_ops(B: RMatrix) -> GaloisOps:
    return GaloisOps(closure(B), restriction(B), trace_image(B), extension(restriction(B)))


def enumerate_all(ctx: CodeContext, max_count: int = DEFAULT_MAX_CATALOG,
                  labels: dict[str, str] | None = None, with_weights: bool = False,
                  max_weight_enum: int = linalg.DEFAULT_MAX_WEIGHT_ENUM) -> list[CodeReport]:
    """One report per partition, sorted by partition string."""
    total = (ctx.s + 1) ** len(ctx.cyc.reps)
    if total > max_count:
        raise SizeLimitError(f"catalog has {total} codes (bound {max_count})")
    labels = labels or {}
    reports = []
    for P in all_partitions(ctx.cyc):
        key = P.to_string()
        reports.append(CyclicCode(ctx, P).report(labels.get(key), with_weights, max_weight_enum))
    return sorted(reports, key=lambda r: r.partition)
