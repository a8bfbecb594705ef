import itertools
import random

import pytest

from chaincodes import codes, linalg
from chaincodes.catalog import bundled_catalog, load_golden
from chaincodes.codes import (
    build,
    code_dual,
    code_meet,
    code_sum,
    make_context,
    poly_code,
    trace_code,
    trace_matrix,
)
from chaincodes.cyclotomic import (
    CycPartition,
    all_partitions,
    full_partition,
    partition_embed,
    partition_join,
    partition_meet,
    q_closure,
    zero_partition,
)
from chaincodes.errors import ContextMismatch, InputError, NotCyclicError, SizeLimitError
from chaincodes.linalg import RMatrix

CTX = make_context(2, 1, 2, 7)
GOLDEN = load_golden(bundled_catalog(), CTX)
BY_LABEL = {r.label: build(CTX, k) for k, r in GOLDEN.items()}
ALL = [build(CTX, P) for P in all_partitions(CTX.cyc)]
WORDS = {c.partition: c.words() for c in ALL}


class TestContext:
    def test_gr43(self):
        ctx = make_context(2, 1, 2, 7)
        assert ctx.m == 3 and ctx.q == 2
        assert ctx.eta.multiplicative_order() == 7
        assert ctx.eta == ctx.xi ** ((2 ** 3 - 1) // 7)

    def test_z9_length_4(self):
        ctx = make_context(3, 1, 2, 4)
        assert ctx.m == 2 and ctx.eta.multiplicative_order() == 4

    def test_bad(self):
        with pytest.raises(InputError):
            make_context(2, 1, 2, 6)


class TestPolyCode:
    def test_repetition(self):
        pc = poly_code(CTX, {0})
        assert pc.rank == 1
        assert all(c == CTX.ring.one_c for c in pc.matrix.rows[0])

    def test_empty(self):
        assert poly_code(CTX, set()).rank == 0

    def test_full_and_reed_solomon(self):
        assert poly_code(CTX, range(7)).rank == 7
        for k in range(1, 7):
            pc = poly_code(CTX, range(k))
            assert pc.rank == k
            assert linalg.standard_form(pc.matrix).type[0] == k
            # Reed-Solomon codes meet the Singleton bound
            if k >= 4:
                assert linalg.min_weight(pc.matrix) == 7 - k + 1

    def test_shift_closed(self):
        rng = random.Random(1)
        for _ in range(8):
            A = set(rng.sample(range(7), rng.randint(1, 4)))
            assert linalg.is_shift_closed(poly_code(CTX, A).matrix)

    def test_out_of_range(self):
        with pytest.raises(InputError):
            poly_code(CTX, {7})

    def test_orthogonality_with_dual_set(self):
        from chaincodes.cyclotomic import CycSet, set_transform
        rng = random.Random(3)
        spec = CTX.ring
        for _ in range(10):
            A = CycSet(CTX.cyc, frozenset(rng.sample(range(7), rng.randint(0, 6))))
            Ad = set_transform(A, "dual")
            W, Wd = poly_code(CTX, A).matrix, poly_code(CTX, Ad).matrix
            for r1 in W.rows:
                for r2 in Wd.rows:
                    acc = spec.zero_c
                    for x, y in zip(r1, r2):
                        acc = spec.add_c(acc, spec.mul_c(x, y))
                    assert not any(acc)


class TestTraceCode:
    def test_examples(self):
        rep = trace_code(CTX, {0})
        assert rep.rank == 1 and rep.type == (1, 0)
        c1 = trace_code(CTX, {1})
        assert c1.type == (3, 0) and c1.standard.type == (3, 0)
        assert linalg.same_span(c1.generator, trace_code(CTX, {2}).generator)

    def test_rank_law(self):
        rng = random.Random(50)
        setups = [(2, 1, 2, 7), (2, 1, 2, 15), (2, 1, 2, 5), (3, 1, 2, 4), (3, 1, 2, 8),
                  (2, 1, 3, 7), (2, 2, 2, 5), (2, 1, 1, 9), (3, 1, 1, 13)]
        for i in range(50):
            p, n, s, ell = setups[i % len(setups)]
            ctx = make_context(p, n, s, ell)
            A = set(rng.sample(range(ell), rng.randint(0, min(3, ell))))
            G = trace_matrix(ctx, A)
            sf = linalg.standard_form(G)
            assert sf.rank == len(q_closure(A, ctx.cyc)) == sf.type[0], (p, n, s, ell, A)

    def test_trace_equals_restriction_of_closed_poly_code(self):
        for A in ({0}, {1}, {3}, {0, 1}, {1, 3}):
            cA = q_closure(A, CTX.cyc).members
            L = poly_code(CTX, cA).matrix
            t = codes.trace_image(L)
            r = codes.restriction(L)
            assert linalg.same_span(t, r)
            assert linalg.same_span(t, trace_matrix(CTX, A))


class TestBuild:
    def test_full_space(self):
        c = build(CTX, full_partition(CTX.cyc))
        assert linalg.same_span(c.generator, linalg.identity(CTX.ring, 7))

    def test_c8(self):
        c = build(CTX, "0=0,1=1,3=2")
        assert c.type == (1, 3) and c.cardinality == 2 ** 5 and c.standard.type == (1, 3)

    def test_c1(self):
        c = BY_LABEL["C_1"]
        assert c.type == (0, 1) and c.cardinality == 2

    def test_types_match_standard_form_and_enumeration(self):
        for c in ALL:
            assert c.standard.type == c.type
            assert len(c.words()) == c.cardinality

    def test_bijection(self):
        assert len(ALL) == 27 == len(set(WORDS.values()))

    def test_shift_closure(self):
        for c in ALL:
            assert linalg.is_shift_closed(c.generator)

    def test_other_rings(self):
        for args in ((2, 1, 3, 7), (3, 1, 2, 4), (2, 1, 2, 3), (2, 1, 2, 7, "equal-characteristic")):
            ctx = make_context(*args)
            for P in itertools.islice(all_partitions(ctx.cyc), 0, None, 3):
                c = build(ctx, P)
                assert c.standard.type == c.type
                assert linalg.is_shift_closed(c.generator)


class TestLattice:
    def test_examples(self):
        L = BY_LABEL
        assert code_sum(L["C_8"], L["C_12"]).partition == L["C_15"].partition
        assert code_meet(L["C_8"], L["C_12"]).partition == L["C_6"].partition
        assert code_dual(L["C_8"]).partition == L["C_19"].partition
        zero = build(CTX, zero_partition(CTX.cyc))
        full = build(CTX, full_partition(CTX.cyc))
        assert code_sum(L["C_8"], zero).partition == L["C_8"].partition
        assert code_meet(L["C_8"], full).partition == L["C_8"].partition

    def test_context_mismatch(self):
        other = build(make_context(2, 1, 3, 7), "0=0")
        with pytest.raises(ContextMismatch):
            code_sum(BY_LABEL["C_8"], other)

    def test_duality_against_kernel(self):
        for c in ALL:
            d = code_dual(c)
            K = linalg.kernel(c.generator)
            assert linalg.same_span(K, d.generator)
            assert WORDS[d.partition] == linalg.codeword_set(K)
            assert code_dual(d).partition == c.partition

    def test_isomorphism_on_all_pairs(self):
        for a, b in itertools.product(ALL, repeat=2):
            join = partition_join(a.partition, b.partition)
            meet = partition_meet(a.partition, b.partition)
            summed = linalg.codeword_set(linalg.module_sum(a.generator, b.generator))
            assert summed == WORDS[join]
            assert WORDS[a.partition] & WORDS[b.partition] == WORDS[meet]

    def test_free_sublattice_distributes(self):
        closed = [q_closure(sub, CTX.cyc) for k in range(4)
                  for sub in itertools.combinations((0, 1, 3), k)]
        free = [build(CTX, partition_embed(A)) for A in closed]
        for a, b, c in itertools.product(free, repeat=3):
            lhs = WORDS[code_sum(a, code_meet(b, c)).partition]
            rhs = WORDS[code_meet(code_sum(a, b), code_sum(a, c)).partition]
            assert lhs == rhs
        assert all(x.flags()["free"] for x in free)


class TestSelfDual:
    def test_flags(self):
        assert BY_LABEL["C_12"].flags()["self_dual"]
        full = build(CTX, full_partition(CTX.cyc))
        f = full.flags()
        assert f["free"] and not f["self_orthogonal"] and not f["self_dual"]
        theta = build(CTX, CycPartition(CTX.cyc, (1, 1, 1)))
        assert theta.flags()["self_dual"]

    def test_generator_check_agrees_with_partition_order(self):
        for c in ALL:
            f = codes.self_dual_flags(c, check_generators=True)
            assert f["self_orthogonal"] == codes.generators_orthogonal(c.generator)

    def test_enumerated_self_dual_codes_are_self_dual(self):
        found = codes.enumerate_self_dual(CTX)
        assert found
        for c in found:
            assert WORDS[c.partition] == linalg.codeword_set(linalg.kernel(c.generator))
        brute = {c.partition for c in ALL
                 if WORDS[c.partition] == linalg.codeword_set(linalg.kernel(c.generator))}
        assert {c.partition for c in found} == brute

    def test_listed_example_codes(self):
        found = {c.partition for c in codes.enumerate_self_dual(CTX)}
        wanted = {BY_LABEL[x].partition for x in ("C_12", "C_13", "C_19", "C_18")}
        wanted.add(CycPartition(CTX.cyc, (1, 1, 1)))
        assert wanted <= found

    def test_length_3_only_trivial(self):
        ctx = make_context(2, 1, 2, 3)
        found = codes.enumerate_self_dual(ctx)
        assert [c.partition.levels for c in found] == [(1, 1)]

    def test_odd_s_none(self):
        assert codes.enumerate_self_dual(make_context(2, 1, 3, 7)) == []
        assert codes.enumerate_self_dual(make_context(2, 1, 1, 7)) == []


class TestBchAndWeight:
    def test_examples(self):
        assert BY_LABEL["C_8"].bch_bound() == 3
        assert BY_LABEL["C_2"].bch_bound() == 7
        assert BY_LABEL["C_26"].bch_bound() == 1
        assert BY_LABEL["C_0"].bch_bound() == 0

    def test_weights(self):
        assert BY_LABEL["C_2"].min_weight() == 7
        assert BY_LABEL["C_26"].min_weight() == 1
        assert 3 <= BY_LABEL["C_8"].min_weight() <= 7

    @pytest.mark.parametrize("args", [(2, 1, 2, 7), (2, 1, 2, 3), (2, 1, 3, 7), (3, 1, 2, 4),
                                      (2, 1, 1, 7), (2, 1, 2, 5), (3, 1, 2, 8)])
    def test_soundness(self, args):
        ctx = make_context(*args)
        for P in all_partitions(ctx.cyc):
            c = build(ctx, P)
            w = c.min_weight()
            assert w >= c.bch_bound(), P.to_string()
            if c.cardinality <= 2 ** 16:
                assert w == linalg.min_weight_by_enumeration(c.generator)

    def test_interval(self):
        iv = codes.bch_interval(BY_LABEL["C_2"])
        assert iv.delta == 6
        assert codes.bch_interval(BY_LABEL["C_0"]) is None


class TestMds:
    def test_gr43_rank_weight_and_dual(self):
        r = codes.mds_family(2, 3, 2)
        assert (r.ell, r.d, r.A) == (7, 4, (1, 2, 3))
        assert r.rank == 4 and r.min_weight == 4 == r.singleton and r.mds
        assert r.dual_set_is_A_plus_zero and r.dual_matches

    def test_gr43_self_orthogonal(self):
        assert codes.mds_family(2, 3, 2).self_orthogonal

    def test_f4(self):
        r = codes.mds_family(2, 2, 1)
        assert (r.ell, r.d, r.rank, r.min_weight) == (3, 2, 2, 2)
        assert r.self_orthogonal

    def test_small_code_is_self_orthogonal(self):
        r = codes.mds_family(2, 3, 2)
        assert r.small_code_rank == 3 and r.small_code_self_orthogonal
        assert r.small_code_min_weight == 5

    def test_odd_rejected(self):
        with pytest.raises(InputError):
            codes.mds_family(3, 1, 2)


class TestDecomposition:
    def test_examples(self):
        assert codes.irreducible_decompose(BY_LABEL["C_8"]) == [(0, 0), (1, 1)]
        full = build(CTX, full_partition(CTX.cyc))
        assert codes.irreducible_decompose(full) == [(0, 0), (0, 1), (0, 3)]
        assert codes.irreducible_decompose(BY_LABEL["C_0"]) == []
        ranks = [linalg.standard_form(codes.component_matrix(CTX, t, z)).rank
                 for t, z in codes.irreducible_decompose(BY_LABEL["C_8"])]
        assert ranks == [1, 3]

    def test_components_rebuild_code(self):
        for c in ALL:
            comps = [codes.component_matrix(CTX, t, z) for t, z in codes.irreducible_decompose(c)]
            total = linalg.zero_matrix(CTX.ring, 7)
            card = 1
            for M in comps:
                total = linalg.module_sum(total, M)
                card *= linalg.cardinality(linalg.standard_form(M).type, 2, 2)
            assert linalg.same_span(total, c.generator)
            assert card == c.cardinality

    def test_identify_round_trip(self):
        rng = random.Random(8)
        spec = CTX.ring
        for c in ALL:
            rows = [list(r) for r in c.generator.rows]
            for _ in range(4):
                if len(rows) > 1:
                    i, j = rng.sample(range(len(rows)), 2)
                    k = spec.from_int(rng.randrange(4)).c
                    rows[i] = [spec.add_c(a, spec.mul_c(k, b)) for a, b in zip(rows[i], rows[j])]
            rng.shuffle(rows)
            G = RMatrix(spec, rows, 7)
            assert codes.identify_partition(G, CTX) == c.partition

    def test_identify_identity_and_error(self):
        assert codes.identify_partition(linalg.identity(CTX.ring, 7), CTX) == \
            full_partition(CTX.cyc)
        e1 = RMatrix.from_ints(CTX.ring, [[1, 0, 0, 0, 0, 0, 0]])
        with pytest.raises(NotCyclicError):
            codes.identify_partition(e1, CTX)

    @pytest.mark.parametrize("z,m_z", [(0, 1), (1, 3), (3, 3)])
    def test_psi(self, z, m_z):
        r = codes.psi_z_check(CTX, z)
        assert r.m_z == m_z and r.rank == m_z and r.ok

    def test_psi_zero_is_repetition(self):
        spec = CTX.ring
        row = [spec.trace_c(CTX.eta_powers[0]) for _ in range(7)]
        assert linalg.same_span(RMatrix(spec, [row], 7), trace_matrix(CTX, {0}))

    def test_psi_other_rings(self):
        for args in ((3, 1, 2, 8), (2, 1, 2, 15), (2, 1, 3, 7), (2, 1, 2, 5)):
            ctx = make_context(*args)
            for z in ctx.cyc.reps:
                assert codes.psi_z_check(ctx, z).ok


def random_s_code(ctx, rng):
    spec = ctx.ring
    k = rng.randint(1, 3)
    rows = [[spec.element([rng.randrange(spec.coeff_mod) for _ in range(spec.N)]).c
             for _ in range(ctx.ell)] for _ in range(k)]
    B = RMatrix(spec, rows, ctx.ell, base=False)
    if rng.random() < 0.4:
        B = codes.closure(B)
    return B


class TestGaloisOps:
    def test_invariant_closure_is_identity(self):
        B = poly_code(CTX, {1, 2, 4}).matrix
        assert linalg.same_span(codes.closure(B), B)

    def test_closure_of_single_exponent(self):
        B = poly_code(CTX, {1}).matrix
        assert linalg.same_span(codes.closure(B), poly_code(CTX, {1, 2, 4}).matrix)

    def test_delsarte_on_example(self):
        B = poly_code(CTX, {1}).matrix
        lhs = codes.trace_image(linalg.kernel(B))
        rhs = linalg.kernel(codes.restriction(B))
        assert linalg.codeword_set(lhs) == linalg.codeword_set(rhs)

    def test_restriction_against_enumeration(self):
        import numpy as np
        rng = random.Random(2)
        for args in ((2, 1, 2, 3), (2, 1, 1, 3), (2, 1, 2, 3, "equal-characteristic")):
            ctx = make_context(*args)
            spec = ctx.ring
            for _ in range(5):
                B = random_s_code(ctx, rng)
                words = linalg.span_words(B).reshape(-1, ctx.ell, spec.N)
                fixed = [tuple(tuple(int(x) for x in c) for c in w) for w in words
                         if all(spec.is_base_c(tuple(int(x) for x in c)) for c in w)]
                R = codes.restriction(B)
                expect = {np.array([x for c in w for x in c], dtype=np.int32).tobytes()
                          for w in fixed}
                assert linalg.codeword_set(R) == expect
                # the restriction always sits inside the trace image
                assert linalg.contains(codes.trace_image(B), R)

    def test_random_codes(self):
        rng = random.Random(25)
        saw = {True: 0, False: 0}
        for _ in range(25):
            B = random_s_code(CTX, rng)
            ops = codes.galois_ops(B)
            invariant = linalg.same_span(ops.closure, B)
            trace_eq = linalg.codeword_set(ops.trace) == linalg.codeword_set(ops.restriction)
            types_eq = linalg.standard_form(ops.restriction).type == linalg.standard_form(B).type
            res_perp = linalg.codeword_set(linalg.kernel(ops.restriction))
            perp_res = linalg.codeword_set(codes.restriction(linalg.kernel(B)))
            assert invariant == trace_eq == types_eq == (res_perp == perp_res)
            delsarte_l = linalg.codeword_set(codes.trace_image(linalg.kernel(B)))
            assert delsarte_l == res_perp
            assert linalg.same_span(ops.extension, codes.extension(ops.restriction))
            saw[invariant] += 1
        assert saw[True] and saw[False]

    def test_equal_characteristic(self):
        ctx = make_context(2, 1, 2, 7, "equal-characteristic")
        rng = random.Random(4)
        for _ in range(6):
            B = random_s_code(ctx, rng)
            ops = codes.galois_ops(B)
            invariant = linalg.same_span(ops.closure, B)
            trace_eq = linalg.codeword_set(ops.trace) == linalg.codeword_set(ops.restriction)
            assert invariant == trace_eq
            assert linalg.codeword_set(codes.trace_image(linalg.kernel(B))) == \
                linalg.codeword_set(linalg.kernel(ops.restriction))


class TestEnumerateAll:
    @pytest.mark.parametrize("args,count", [((2, 1, 2, 7), 27), ((2, 1, 2, 3), 9),
                                            ((2, 1, 1, 7), 8), ((3, 1, 2, 4), 27)])
    def test_counts(self, args, count):
        reports = codes.enumerate_all(make_context(*args))
        assert len(reports) == count
        keys = [r.partition for r in reports]
        assert keys == sorted(keys) and len(set(keys)) == count

    def test_bound(self):
        with pytest.raises(SizeLimitError):
            codes.enumerate_all(make_context(2, 1, 2, 7), max_count=10)

    def test_report_invariants(self):
        for r in codes.enumerate_all(CTX, with_weights=True):
            assert r.cardinality == 2 ** sum((2 - t) * k for t, k in enumerate(r.type))
            assert r.min_weight >= r.bch_bound
            d = r.to_dict()
            assert d["cardinality"] == str(r.cardinality)
