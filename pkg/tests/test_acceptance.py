"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with its runtime."""

import itertools
import random
import time
from contextlib import contextmanager

from chaincodes import codes, linalg
from chaincodes.catalog import bundled_catalog, check_identities, compare_golden, load_golden
from chaincodes.codes import build, code_dual, enumerate_all, make_context
from chaincodes.cyclotomic import (
    CycContext,
    CycPartition,
    all_partitions,
    cosets,
    q_closure,
    set_transform,
)
from chaincodes.linalg import RMatrix
from chaincodes.ring import make_ring, prime_factors

from conftest import ACCEPTANCE_LINES

RINGS_USED: dict = {}


def note_ring(ctx):
    RINGS_USED[(ctx.ring, ctx.ell)] = ctx


def first_line(exc):
    text = str(exc)
    return text.splitlines()[0] if text else ""


@contextmanager
def criterion(number, title, limit):
    """Run a criterion body, record PASS/FAIL with elapsed time, re-raise failures."""
    state = {"detail": ""}
    start = time.perf_counter()
    try:
        yield state
    except AssertionError as exc:
        elapsed = time.perf_counter() - start
        line = f"criterion {number}: FAIL {title} ({elapsed:.2f}s / {limit}s) {first_line(exc)}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    line = (f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} "
            f"({elapsed:.2f}s / {limit}s) {state['detail']}").rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"runtime {elapsed:.2f}s exceeds {limit}s"


def test_criterion_1_table_reproduction():
    with criterion(1, "catalog over Z_4, length 7 matches the bundled table", 10) as st:
        ctx = make_context(2, 1, 2, 7)
        note_ring(ctx)
        reports = enumerate_all(ctx)
        golden = load_golden(bundled_catalog(), ctx)
        assert len(reports) == 27 == len(golden)
        diffs = compare_golden(reports, golden)
        bad = sorted({key for key, _ in diffs})
        st["detail"] = f"{27 - len(bad)}/27 rows"
        assert not diffs, f"{27 - len(bad)}/27 rows; " + "; ".join(msg for _, msg in diffs)


def test_criterion_2_lattice_identities():
    with criterion(2, "five lattice identities at partition and codeword level", 5) as st:
        ctx = make_context(2, 1, 2, 7)
        golden = load_golden(bundled_catalog(), ctx)
        results = check_identities(ctx, golden, with_words=True, max_enum=2 ** 12)
        st["detail"] = ", ".join(f"{r.name}={'ok' if r.ok else 'bad'}" for r in results)
        assert len(results) == 5
        assert all(r.partition_ok and r.words_ok for r in results), st["detail"]


def shift_closed_submodules_z4_cubed():
    """Every Z_4-submodule of Z_4^3 by lattice search; keep the shift-closed ones."""
    def span(gens):
        words = {(0, 0, 0)}
        frontier = [(0, 0, 0)]
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    v = tuple((a + b) % 4 for a, b in zip(w, g))
                    if v not in words:
                        words.add(v)
                        nxt.append(v)
            frontier = nxt
        return frozenset(words)

    vectors = list(itertools.product(range(4), repeat=3))
    seen = {span([])}
    todo = list(seen)
    while todo:
        M = todo.pop()
        for v in vectors:
            if v not in M:
                N = span(list(M) + [v])
                if N not in seen:
                    seen.add(N)
                    todo.append(N)
    return [M for M in seen if all((w[2], w[0], w[1]) in M for w in M)]


def test_criterion_3_count_law():
    with criterion(3, "distinct partition-built codes equal (s+1)^cosets", 60) as st:
        details = []
        for p, s, ell in ((2, 2, 3), (2, 2, 7), (2, 3, 7), (3, 2, 4), (2, 1, 7)):
            ctx = make_context(p, 1, s, ell)
            note_ring(ctx)
            built = [build(ctx, P) for P in all_partitions(ctx.cyc)]
            expect = (s + 1) ** len(ctx.cyc.reps)
            assert all(linalg.is_shift_closed(c.generator) for c in built)
            by_type: dict = {}
            for c in built:
                by_type.setdefault(c.standard.type, []).append(c)
            duplicates = sum(linalg.same_span(a.generator, b.generator)
                             for group in by_type.values()
                             for a, b in itertools.combinations(group, 2))
            distinct = len(built) - duplicates
            details.append(f"q={p} s={s} ell={ell}: {distinct}/{expect}")
            assert duplicates == 0 and distinct == expect, details[-1]
        brute = shift_closed_submodules_z4_cubed()
        ctx = make_context(2, 1, 2, 3)
        built = {c.words() for c in (build(ctx, P) for P in all_partitions(ctx.cyc))}
        spec = ctx.ring
        brute_words = {linalg.codeword_set(RMatrix(spec, [[spec.from_int(x).c for x in w]
                                                          for w in sorted(M)], 3))
                       for M in brute}
        details.append(f"brute Z_4^3 cyclic submodules: {len(brute)}")
        st["detail"] = "; ".join(details)
        assert len(brute) == 9 and brute_words == built, st["detail"]


def test_criterion_4_z8_example():
    with criterion(4, "Z_8 example: type (1,1,1) and weight 3 via the annihilator", 1) as st:
        Z8 = make_ring(2, 1, 3)
        G = RMatrix.from_ints(Z8, [[1, 1, 3, 4, 0, 5], [0, 2, 2, 6, 4, 0], [0, 0, 4, 0, 4, 4]])
        sf = linalg.standard_form(G)
        ann = linalg.annihilator_matrix(sf)
        w = linalg.min_weight(G)
        st["detail"] = f"type={sf.type} weight={w}"
        assert sf.type == (1, 1, 1)
        assert linalg.min_weight_by_enumeration(ann) == w == 3


def test_criterion_5_cosets_mod_20():
    with criterion(5, "cosets mod 20 under 3 and the dual of C_3({0,1,2,4,5,10})", 1) as st:
        ctx = CycContext(20, 3)
        sets, reps, count = cosets(ctx)
        printed = [{0}, {1, 3, 9, 7}, {2, 6, 18, 14}, {4, 12, 16, 8}, {5, 15}, {10},
                   {11, 13, 19, 17}]
        assert count == 7
        assert sorted(map(sorted, (s.members for s in sets))) == sorted(map(sorted, printed))
        A = q_closure({0, 1, 2, 4, 5, 10}, ctx)
        dual = set_transform(A, "dual")
        st["detail"] = f"dual={sorted(dual.members)}"
        assert dual == q_closure({1}, ctx)


def test_criterion_6_bch_soundness():
    with criterion(6, "brute-force weight is at least the BCH bound on every catalog code", 30) as st:
        ctx = make_context(2, 1, 2, 7)
        golden = load_golden(bundled_catalog(), ctx)
        margins = []
        for key, row in golden.items():
            c = build(ctx, key)
            w = linalg.min_weight_by_enumeration(c.generator)
            b = c.bch_bound()
            assert w >= b, f"{row.label}: weight {w} < bound {b}"
            margins.append(w - b)
        worst = min(margins)
        rep = build(ctx, "0=0")
        assert rep.bch_bound() == 7 == linalg.min_weight_by_enumeration(rep.generator)
        st["detail"] = f"27 codes, tightest margin {worst}"


def test_criterion_7_duality_oracle():
    with criterion(7, "partition dual equals kernel dual on 100 seeded codes", 120) as st:
        rng = random.Random(7)
        contexts = [make_context(2, 1, 2, ell) for ell in (3, 5, 7)] + [make_context(3, 1, 2, 4)]
        for ctx in contexts:
            note_ring(ctx)
        agree = 0
        for i in range(100):
            ctx = contexts[i % len(contexts)]
            levels = tuple(rng.randrange(ctx.s + 1) for _ in ctx.cyc.reps)
            c = codes.CyclicCode(ctx, CycPartition(ctx.cyc, levels))
            oracle = linalg.codeword_set(linalg.kernel(c.generator))
            agree += oracle == code_dual(c).words()
        st["detail"] = f"{agree}/100 agree"
        assert agree == 100, st["detail"]


def random_s_code(ctx, rng):
    spec = ctx.ring
    rows = [[spec.element([rng.randrange(spec.coeff_mod) for _ in range(spec.N)]).c
             for _ in range(ctx.ell)] for _ in range(rng.randint(1, 3))]
    B = RMatrix(spec, rows, ctx.ell, base=False)
    return codes.closure(B) if rng.random() < 0.4 else B


def test_criterion_8_delsarte_and_galois():
    with criterion(8, "Delsarte identity and trace equivalences on 25 seeded S-codes", 120) as st:
        ctx = make_context(2, 1, 2, 7)
        rng = random.Random(8)
        invariant_count = 0
        for _ in range(25):
            B = random_s_code(ctx, rng)
            ops = codes.galois_ops(B)
            res_perp = linalg.codeword_set(linalg.kernel(ops.restriction))
            assert linalg.codeword_set(codes.trace_image(linalg.kernel(B))) == res_perp
            invariant = linalg.same_span(ops.closure, B)
            trace_eq = linalg.codeword_set(ops.trace) == linalg.codeword_set(ops.restriction)
            types_eq = linalg.standard_form(ops.restriction).type == linalg.standard_form(B).type
            assert invariant == trace_eq == types_eq
            invariant_count += invariant
        st["detail"] = f"25 codes, {invariant_count} sigma-invariant"


def test_criterion_9_mds_family():
    with criterion(9, "MDS family over S of invariants (8,2), length 7", 10) as st:
        r = codes.mds_family(2, 3, 2)
        RINGS_USED[(make_ring(2, 3, 2, 1), 7)] = None
        st["detail"] = (f"rank={r.rank} weight={r.min_weight} singleton={r.singleton} "
                        f"self_orthogonal={r.self_orthogonal}")
        assert (r.ell, r.d) == (7, 4)
        assert r.rank == 4 and r.min_weight == 4 == r.singleton
        assert r.self_orthogonal, st["detail"]


def check_ring_invariants(spec, ell):
    m = spec.m
    xi = spec.xi
    orbit = [xi.frobenius(i) for i in range(m + 1)]
    assert orbit[m] == xi and len(set(orbit[:m])) == m, "Frobenius order"
    # fixed subring size by a kernel count over the prime ring
    P = spec.prime_ring
    imgs = []
    for k in range(spec.N):
        e = [0] * spec.N
        e[k] = 1
        imgs.append(spec.sub_c(spec.sigma_c(tuple(e)), tuple(e)))
    K = linalg.kernel(RMatrix(P, [[(imgs[k][i],) for k in range(spec.N)] for i in range(spec.N)],
                              spec.N))
    assert linalg.cardinality(linalg.standard_form(K).type, P.q, P.s) == spec.q ** spec.s, \
        "fixed subring size"
    # nondegenerate trace form: the Gram matrix on the basis 1, xi, ..., xi^(m-1) is invertible
    gram = [[spec.trace_c(spec.pow_c(xi.c, i + j)) for j in range(m)] for i in range(m)]
    assert linalg.standard_form(RMatrix(spec, gram, m)).type[0] == m, "trace nondegeneracy"
    if ell is not None:
        eta = spec.root_of_unity(ell)
        assert eta ** ell == 1 and all(eta ** (ell // r) != 1 for r in prime_factors(ell)), \
            "eta order"
        for i in range(1, ell):
            acc = spec.zero
            for j in range(ell):
                acc = acc + eta ** (i * j)
            assert acc == 0, "character sum"


def test_criterion_10_invariant_suite():
    with criterion(10, "ring invariants for every ring used above", 30) as st:
        pairs = {(spec, ell) for spec, ell in RINGS_USED}
        pairs |= {(make_ring(2, 1, 2, 3), 7), (make_ring(2, 1, 3, 1), None),
                  (make_ring(2, 3, 2, 1), 7), (make_ring(2, 1, 2, 2), 3),
                  (make_ring(2, 1, 2, 4), 5), (make_ring(3, 1, 2, 2), 4),
                  (make_ring(2, 1, 3, 3), 7), (make_ring(2, 1, 1, 3), 7)}
        for spec, ell in sorted(pairs, key=lambda x: (x[0].name, x[0].m, x[1] or 0)):
            check_ring_invariants(spec, ell)
        st["detail"] = f"{len(pairs)} rings"
