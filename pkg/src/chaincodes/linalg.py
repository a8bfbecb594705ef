"""Matrices and finitely generated modules over a chain ring.

Entries are stored as raw coefficient tuples of the ambient ring S.  The
``base`` flag on :class:`RMatrix` says which scalars act on the row span:
``True`` means the base ring R (the code is an R-linear code and every entry
must lie in R), ``False`` means S itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, SizeLimitError
from .ring import RingElement, RingSpec

__all__ = [
    "RMatrix",
    "StandardForm",
    "DEFAULT_MAX_WEIGHT_ENUM",
    "DEFAULT_MAX_SPAN_ENUM",
    "standard_form",
    "cardinality",
    "dual_type",
    "kernel",
    "annihilator_matrix",
    "residue_code",
    "min_weight",
    "min_weight_by_enumeration",
    "in_span",
    "contains",
    "same_span",
    "module_sum",
    "module_intersection",
    "span_words",
    "codeword_set",
    "cyclic_shift",
    "is_shift_closed",
]

DEFAULT_MAX_WEIGHT_ENUM = 2 ** 24
DEFAULT_MAX_SPAN_ENUM = 2 ** 20


class RMatrix:
    """A rows x cols matrix over a chain ring."""

    __slots__ = ("spec", "rows", "ncols", "base")

    def __init__(self, spec: RingSpec, rows: Iterable[Sequence], ncols: int | None = None,
                 base: bool = True):
        self.spec = spec
        self.base = base
        rows = tuple(tuple(_raw(spec, e) for e in row) for row in rows)
        if ncols is None:
            if not rows:
                raise InputError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise InputError("matrix rows have different lengths")
        self.rows = rows
        self.ncols = ncols

    @classmethod
    def from_ints(cls, spec: RingSpec, rows, base: bool = True) -> "RMatrix":
        return cls(spec, [[spec.from_int(int(v)).c for v in row] for row in rows], base=base)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> RingElement:
        return RingElement(self.spec, self.rows[i][j])

    def row_elements(self, i: int) -> list[RingElement]:
        return [RingElement(self.spec, c) for c in self.rows[i]]

    def with_rows(self, rows) -> "RMatrix":
        return RMatrix(self.spec, rows, self.ncols, self.base)

    def over(self, base: bool) -> "RMatrix":
        return RMatrix(self.spec, self.rows, self.ncols, base)

    def to_json(self) -> list:
        return [[list(c) for c in row] for row in self.rows]

    @classmethod
    def from_json(cls, spec: RingSpec, data, base: bool = True) -> "RMatrix":
        rows = [[spec.element(c).c for c in row] for row in data]
        ncols = len(data[0]) if data else 0
        return cls(spec, rows, ncols, base)

    def to_ints(self) -> list[list[int]]:
        """Constant coefficients; only meaningful when every entry lies in the prime ring."""
        return [[c[0] for c in row] for row in self.rows]

    def __repr__(self) -> str:
        kind = "R" if self.base else "S"
        return f"RMatrix({self.spec.name}, {self.nrows}x{self.ncols}, over {kind})"


def _raw(spec: RingSpec, e):
    if isinstance(e, RingElement):
        return e.c
    if isinstance(e, int):
        return spec.from_int(e).c
    c = tuple(e)
    if len(c) != spec.N:
        raise InputError(f"entry {e!r} has the wrong number of coefficients")
    return c


def _row_sub_mul(spec: RingSpec, row, c, pivot_row):
    """row - c * pivot_row."""
    return [spec.sub_c(a, spec.mul_c(c, b)) if any(b) else a
            for a, b in zip(row, pivot_row)]


def _row_mul(spec: RingSpec, c, row):
    return [spec.mul_c(c, a) for a in row]


def _low_digits(spec: RingSpec, b, t: int):
    """Sum of the Teichmuller digits of b below theta**t."""
    low = spec.zero_c
    th = spec.one_c
    a = b
    for _ in range(t):
        g = spec.teichmuller_c(a)
        low = spec.add_c(low, spec.mul_c(g, th))
        a = spec.div_theta_c(spec.sub_c(a, g), 1) if spec.s > 1 else spec.zero_c
        th = spec.mul_theta_c(th)
    return low


@dataclass(frozen=True)
class StandardForm:
    """Result of :func:`standard_form`.

    ``matrix`` keeps the original column order; ``pivots[i]`` is the
    (column, valuation) of row i and ``permutation`` lists the pivot columns
    first, then the rest ascending, so ``matrix`` restricted to that column
    order has the block staircase shape.
    """

    matrix: RMatrix
    pivots: tuple[tuple[int, int], ...]
    permutation: tuple[int, ...]
    type: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(self.type)

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(t for _, t in self.pivots)

    def permuted(self) -> RMatrix:
        M = self.matrix
        return M.with_rows([[row[j] for j in self.permutation] for row in M.rows])

    def to_json(self) -> dict:
        return {"type": list(self.type), "rank": self.rank,
                "permutation": list(self.permutation),
                "matrix": self.matrix.to_json()}


def standard_form(G: RMatrix) -> StandardForm:
    """Gaussian elimination with pivoting by minimal theta-valuation.

    Ties go to the smallest column, then the smallest row.  Each pivot row is
    scaled so the pivot entry is exactly theta**t; its column is cleared below
    and reduced modulo theta**t above.
    """
    spec = G.spec
    s = spec.s
    remaining = [list(r) for r in G.rows if any(any(c) for c in r)]
    done: list[list] = []
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    while remaining:
        best = None
        for j in range(G.ncols):
            if j in used:
                continue
            for i, row in enumerate(remaining):
                v = spec.valuation_c(row[j])
                if v < s and (best is None or v < best[0]):
                    best = (v, j, i)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        t, j, i = best
        row = remaining.pop(i)
        unit = spec.div_theta_c(row[j], t)
        row = _row_mul(spec, spec.inverse_c(unit), row)
        # the unit part is only defined modulo theta^(s-t); pin the pivot exactly
        row[j] = spec.mul_theta_c(spec.one_c, t)
        nxt = []
        for r in remaining:
            b = r[j]
            if any(b):
                r = _row_sub_mul(spec, r, spec.div_theta_c(b, t), row)
            if any(any(c) for c in r):
                nxt.append(r)
        remaining = nxt
        for k, r in enumerate(done):
            b = r[j]
            if not any(b):
                continue
            if spec.valuation_c(b) >= t:
                c = spec.div_theta_c(b, t)
            else:
                c = spec.div_theta_c(spec.sub_c(b, _low_digits(spec, b, t)), t)
            done[k] = _row_sub_mul(spec, r, c, row)
        done.append(row)
        pivots.append((j, t))
        used.add(j)
    type_vec = [0] * s
    for _, t in pivots:
        type_vec[t] += 1
    perm = [j for j, _ in pivots] + [j for j in range(G.ncols) if j not in used]
    return StandardForm(G.with_rows(done), tuple(pivots), tuple(perm), tuple(type_vec))


def cardinality(type_vec: Sequence[int], q: int, s: int | None = None) -> int:
    """q ** sum_t (s - t) k_t."""
    s = len(type_vec) if s is None else s
    return q ** sum((s - t) * k for t, k in enumerate(type_vec))


def dual_type(type_vec: Sequence[int], ell: int) -> tuple[int, ...]:
    """(k_0, ..., k_{s-1}) -> (ell - k, k_{s-1}, ..., k_1)."""
    k = sum(type_vec)
    if k > ell:
        raise InputError(f"rank {k} exceeds length {ell}")
    return (ell - k,) + tuple(reversed(type_vec[1:]))


def kernel(G: RMatrix) -> RMatrix:
    """Generator matrix (standard form) of {x : G x^T = 0}.

    G is diagonalized with row and column operations; the column operations
    are accumulated in Q so that the kernel is read off Q's columns.
    """
    spec = G.spec
    s = spec.s
    ell = G.ncols
    A = [list(r) for r in G.rows]
    Q = [[spec.one_c if i == j else spec.zero_c for j in range(ell)] for i in range(ell)]
    diag: list[int] = []
    r = 0
    while r < min(len(A), ell):
        best = None
        for i in range(r, len(A)):
            for j in range(r, ell):
                v = spec.valuation_c(A[i][j])
                if v < s and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        t, i, j = best
        A[r], A[i] = A[i], A[r]
        for M in (A, Q):
            for row in M:
                row[r], row[j] = row[j], row[r]
        unit = spec.div_theta_c(A[r][r], t)
        A[r] = _row_mul(spec, spec.inverse_c(unit), A[r])
        A[r][r] = spec.mul_theta_c(spec.one_c, t)
        for i2 in range(r + 1, len(A)):
            b = A[i2][r]
            if any(b):
                A[i2] = _row_sub_mul(spec, A[i2], spec.div_theta_c(b, t), A[r])
        for j2 in range(r + 1, ell):
            b = A[r][j2]
            if not any(b):
                continue
            c = spec.div_theta_c(b, t)
            for M in (A, Q):
                for row in M:
                    if any(row[r]):
                        row[j2] = spec.sub_c(row[j2], spec.mul_c(c, row[r]))
        diag.append(t)
        r += 1
    gens = []
    for i in range(ell):
        col = [Q[k][i] for k in range(ell)]
        if i < len(diag):
            if diag[i] == 0:
                continue
            col = [spec.mul_theta_c(c, s - diag[i]) for c in col]
        gens.append(col)
    return standard_form(RMatrix(spec, gens, ell, G.base)).matrix


def annihilator_matrix(sf: StandardForm) -> RMatrix:
    """theta**(s-1) times the unit-normalized standard-form rows."""
    M = sf.matrix
    spec = M.spec
    rows = []
    for row, (_, t) in zip(M.rows, sf.pivots):
        rows.append([spec.mul_theta_c(spec.div_theta_c(c, t), spec.s - 1) for c in row])
    return M.with_rows(rows)


def _normalized_rows(sf: StandardForm) -> list[list]:
    spec = sf.matrix.spec
    return [[spec.div_theta_c(c, t) for c in row]
            for row, (_, t) in zip(sf.matrix.rows, sf.pivots)]


def residue_code(G: RMatrix) -> RMatrix:
    """pi applied entry-wise, then row reduced over the residue field."""
    spec = G.spec
    F = spec.residue_field
    rows = [[spec.residue_c(c) for c in row] for row in G.rows]
    return standard_form(RMatrix(F, rows, G.ncols, G.base)).matrix


def _fp_generators(spec: RingSpec, rows: list[list], base: bool) -> np.ndarray:
    """F_p-basis vectors for the residue-field span of ``rows``.

    ``rows`` hold residue-field coordinates; the scalars are F_q (base) or
    F_{q^m}, expanded over F_p with the residue of the scalar basis.
    """
    F = spec.residue_field
    betas = [spec.residue_c(b.c) for b in spec.scalar_basis(base)]
    gens = []
    for row in rows:
        for beta in betas:
            gens.append([x for c in row for x in F.mul_c(beta, c)])
    return np.array(gens, dtype=np.int64).reshape(len(gens), -1)


def _combos(gens: np.ndarray, radix: int) -> np.ndarray:
    """All combinations sum z_i * gens[i] with z_i in [0, radix), mod radix."""
    words = np.zeros((1, gens.shape[1]), dtype=np.int64)
    steps = np.arange(radix, dtype=np.int64)
    for g in gens:
        words = (words[:, None, :] + steps[None, :, None] * g[None, None, :]) % radix
        words = words.reshape(-1, gens.shape[1])
    return words


def min_weight(G: RMatrix, max_enum: int = DEFAULT_MAX_WEIGHT_ENUM) -> int:
    """Minimum Hamming weight of the row span, via the annihilator.

    wt(C) = wt(Annih_C(theta)) and theta**(s-1) * v is nonzero exactly where v
    is a unit, so it suffices to enumerate the residue-field code spanned by
    the unit-normalized standard-form rows.  The zero code reports 0.
    """
    spec = G.spec
    sf = standard_form(G)
    if sf.rank == 0:
        return 0
    rows = [[spec.residue_c(c) for c in row] for row in _normalized_rows(sf)]
    gens = _fp_generators(spec, rows, G.base)
    total = spec.p ** gens.shape[0]
    if total > max_enum:
        raise SizeLimitError(f"min weight needs {total} words (bound {max_enum})")
    p, ell, D = spec.p, G.ncols, spec.D
    split = min(gens.shape[0], max(1, 16 // max(1, p.bit_length())))
    head = _combos(gens[:split], p)
    tails = _combos(gens[split:], p) if split < gens.shape[0] else np.zeros((1, gens.shape[1]), np.int64)
    best = ell
    for tail in tails:
        words = (head + tail) % p
        weights = words.reshape(len(words), ell, D).any(axis=2).sum(axis=1)
        nz = weights[weights > 0]
        if nz.size:
            best = min(best, int(nz.min()))
            if best == 1:
                break
    return best


def span_words(G: RMatrix, max_enum: int = DEFAULT_MAX_SPAN_ENUM) -> np.ndarray:
    """Every codeword of the row span, each flattened to ncols*N ambient coordinates.

    Built from the standard form: row i of valuation t contributes scalars
    from (R or S) modulo theta**(s-t), expanded over the prime ring, so every
    codeword appears exactly once.
    """
    spec = G.spec
    sf = standard_form(G)
    size = cardinality(sf.type, spec.q if G.base else spec.Q, spec.s)
    if size > max_enum:
        raise SizeLimitError(f"span has {size} words (bound {max_enum})")
    width = G.ncols * spec.N
    words = np.zeros((1, width), dtype=np.int64)
    M = spec.coeff_mod
    betas = spec.scalar_basis(G.base)
    for row, (_, t) in zip(sf.matrix.rows, sf.pivots):
        if spec.family == "galois-ring":
            gens = [(b.c, spec.p ** (spec.s - t)) for b in betas]
        else:
            gens = [(spec.mul_theta_c(b.c, j), spec.p)
                    for j in range(spec.s - t) for b in betas]
        for scalar, radix in gens:
            vec = np.array([x for c in row for x in spec.mul_c(scalar, c)], dtype=np.int64)
            steps = np.arange(radix, dtype=np.int64)
            words = (words[:, None, :] + steps[None, :, None] * vec[None, None, :]) % M
            words = words.reshape(-1, width)
    return words


def codeword_set(G: RMatrix, max_enum: int = DEFAULT_MAX_SPAN_ENUM) -> frozenset[bytes]:
    words = span_words(G, max_enum).astype(np.int32)
    return frozenset(w.tobytes() for w in words)


def min_weight_by_enumeration(G: RMatrix, max_enum: int = DEFAULT_MAX_SPAN_ENUM) -> int:
    """Minimum weight over every nonzero codeword of the full code."""
    spec = G.spec
    words = span_words(G, max_enum)
    weights = words.reshape(len(words), G.ncols, spec.N).any(axis=2).sum(axis=1)
    nz = weights[weights > 0]
    return int(nz.min()) if nz.size else 0


def in_span(sf: StandardForm, v: Sequence) -> bool:
    """Membership of the word v in the row span recorded by ``sf``."""
    spec = sf.matrix.spec
    v = [_raw(spec, e) for e in v]
    for row, (j, t) in zip(sf.matrix.rows, sf.pivots):
        b = v[j]
        if not any(b):
            continue
        if spec.valuation_c(b) < t:
            return False
        v = _row_sub_mul(spec, v, spec.div_theta_c(b, t), row)
    return not any(any(c) for c in v)


def contains(A: RMatrix, B: RMatrix) -> bool:
    """span(B) is a subset of span(A)."""
    sf = standard_form(A)
    for row in B.rows:
        if not in_span(sf, row):
            return False
    if B.base is False and A.base is True:
        # S-multiples of B's rows must lie in an R-span too
        for b in B.spec.scalar_basis(False)[1:]:
            for row in B.rows:
                if not in_span(sf, [B.spec.mul_c(b.c, c) for c in row]):
                    return False
    return True


def same_span(A: RMatrix, B: RMatrix) -> bool:
    return contains(A, B) and contains(B, A)


def module_sum(A: RMatrix, B: RMatrix) -> RMatrix:
    if A.spec != B.spec or A.ncols != B.ncols or A.base != B.base:
        raise InputError("cannot add modules over different rings or lengths")
    return standard_form(A.with_rows(A.rows + B.rows)).matrix


def module_intersection(A: RMatrix, B: RMatrix) -> RMatrix:
    """(A^perp + B^perp)^perp, computed with :func:`kernel`."""
    return kernel(module_sum(kernel(A), kernel(B)))


def cyclic_shift(row: Sequence) -> tuple:
    """(c_0, ..., c_{l-1}) -> (c_{l-1}, c_0, ..., c_{l-2})."""
    row = tuple(row)
    return row[-1:] + row[:-1]


def is_shift_closed(G: RMatrix) -> bool:
    sf = standard_form(G)
    return all(in_span(sf, cyclic_shift(row)) for row in sf.matrix.rows)


def identity(spec: RingSpec, k: int, base: bool = True) -> RMatrix:
    return RMatrix(spec, [[spec.one_c if i == j else spec.zero_c for j in range(k)]
                          for i in range(k)], k, base)


def zero_matrix(spec: RingSpec, ncols: int, base: bool = True) -> RMatrix:
    return RMatrix(spec, [], ncols, base)

