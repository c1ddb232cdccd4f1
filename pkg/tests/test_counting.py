"""Counting kernels against literal-enumeration oracles and closed forms."""

from __future__ import annotations

import itertools
import math
import os

import pytest

from multirank.errors import BudgetError
from multirank.field import kernel, make_field
from multirank.counting import (
    BoxSpec,
    CountProfile,
    box_solutions,
    count_box,
    count_fiber,
    count_NR,
    count_SF,
    count_SF_naive,
    count_singular,
    fiber_counts,
    matrix_rank,
    projective_points,
    sf_profile,
    zero_fiber_target,
)
from multirank.tensor import (
    HomogeneousForm,
    IntMultilinearForm,
    MultilinearForm,
    diagonal,
    int_diagonal,
    random_form,
    random_int_form,
)

F2 = make_field(2, 1)
F3 = make_field(3, 1)
F5 = make_field(5, 1)


def all_tensors_f2_2_2_3():
    """All 256 tensors over F_2 with n = 2, d = 3."""
    out = []
    for bits in range(256):
        coeffs = tuple((bits >> k) & 1 for k in range(8))
        out.append(MultilinearForm(F2, 3, 2, coeffs))
    return out


def diag_count_formula(m, n, d, Q):
    return (Q ** (d - 1) - (Q - 1) ** (d - 1)) ** m * Q ** ((n - m) * (d - 1))


def test_projective_points_basic():
    pts = projective_points(2, 2)
    assert pts == [(1, 0), (1, 1), (0, 1)]
    assert len(projective_points(3, 3)) == (27 - 1) // 2


def test_count_sf_identity_matrix():
    Id = diagonal(2, 2, 2, F2)
    assert count_SF(Id) == 1


def test_count_sf_zero_tensor():
    for n, d, l, spec in [(2, 3, 1, F2), (1, 3, 2, F3), (2, 2, 3, F2)]:
        Z = MultilinearForm.zeros(spec, d, n)
        assert count_SF(Z, l) == spec.q ** (l * n * (d - 1))


def test_count_sf_diagonal_example():
    D = diagonal(2, 2, 3, F2)
    # oracle: per-coordinate count of (a_1, a_2) with zero product
    naive = 0
    for bits in itertools.product(range(2), repeat=4):
        x, y = bits[:2], bits[2:]
        if all(x[i] * y[i] == 0 for i in range(2)):
            naive += 1
    assert naive == 9
    assert count_SF(D) == 9
    assert count_SF(D) == diag_count_formula(2, 2, 3, 2)


def test_count_sf_matches_naive_exhaustive_f2():
    for F in all_tensors_f2_2_2_3():
        assert count_SF(F) == count_SF_naive(F)


def test_count_sf_matches_naive_random_f3():
    for seed in range(100):
        F = random_form(F3, 3, 2, 7000 + seed)
        assert count_SF(F) == count_SF_naive(F)


def test_count_sf_matches_naive_level2_and_n3():
    for seed in range(10):
        F = random_form(F2, 3, 2, 61 + seed)
        assert count_SF(F, 2) == count_SF_naive(F, 2)
    for seed in range(5):
        F = random_form(F2, 3, 3, 81 + seed)
        assert count_SF(F) == count_SF_naive(F)
    G = random_form(F2, 4, 2, 9)
    assert count_SF(G) == count_SF_naive(G)


def test_count_sf_diagonal_level2():
    D = diagonal(1, 1, 3, F2)
    assert count_SF(D, 2) == 7  # (4^2 - 3^2), brute-forced below
    F4 = make_field(2, 2)
    D4 = diagonal(1, 1, 3, F4)
    K = kernel(F4)
    naive = sum(1 for a in range(4) for b in range(4) if K.mul(a, b) == 0)
    assert naive == 7
    assert count_SF(D4, 1) == 7


def test_count_sf_budget_error():
    D = diagonal(2, 3, 3, F3)
    with pytest.raises(BudgetError):
        count_SF(D, 7)  # 3^21 slice space exceeds 2^28 at default budget
    with pytest.raises(BudgetError):
        count_SF_naive(D, 3, budget_bits=18)


def test_diag_formula_grid():
    for q, spec in [(2, F2), (3, F3)]:
        for n in (1, 2, 3):
            for m in range(n + 1):
                D = diagonal(m, n, 3, spec)
                for l in (1, 2):
                    Q = q ** l
                    assert count_SF(D, l) == diag_count_formula(m, n, 3, Q)


def test_sf_profile_and_validation():
    D = diagonal(1, 2, 3, F2)
    prof = sf_profile(D, 3)
    assert prof.base == 2 and prof.ambient_exp == 4
    assert [l for l, _ in prof.entries] == [1, 2, 3]
    dims = prof.dims()
    assert len(dims) == 3
    with pytest.raises(ValueError):
        CountProfile(2, 2, ((1, 0),))  # count below 1
    with pytest.raises(ValueError):
        CountProfile(2, 2, ((1, 5),))  # count above ambient


def test_schwartz_zippel_shape_bound():
    # diagonal(m, n, d): count / Q^((d-1)n - m) <= 2^(m(d-1)) uniformly in l
    for m, n, d, spec in [(1, 2, 3, F2), (2, 2, 3, F2), (1, 1, 3, F3)]:
        D = diagonal(m, n, d, spec)
        for l in range(1, 9):
            Q = spec.q ** l
            if (d - 2) * n * math.log2(Q) > 24:
                break
            count = count_SF(D, l)
            assert count <= 2 ** (m * (d - 1)) * Q ** ((d - 1) * n - m)


def test_lang_weil_gap_closed_form_and_monotone():
    # gap = log_Q(count) - dim = m * log_Q(2 - 1/Q) for d = 3 diagonals
    for m, n, spec, lmax in [(1, 2, F2, 8), (2, 2, F2, 8), (1, 2, F3, 5), (2, 3, F3, 5)]:
        D = diagonal(m, n, 3, spec)
        dim = 2 * n - m
        gaps = []
        for l in range(1, lmax + 1):
            Q = spec.q ** l
            count = count_SF(D, l)
            gap = math.log(count) / math.log(Q) - dim
            assert abs(gap - m * math.log(2 - 1 / Q) / math.log(Q)) < 1e-9
            gaps.append(abs(gap))
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        Qlast = spec.q ** lmax
        if Qlast >= 256 and m <= 2:
            assert gaps[-1] < 0.25


def test_count_singular_examples():
    # f = x^3 + y^3 over F_5: gradient (3x^2, 3y^2) vanishes only at origin
    f = HomogeneousForm.from_terms(F5, 2, 3, {(3, 0): 1, (0, 3): 1})
    brute = 0
    for x in range(5):
        for y in range(5):
            if (3 * x * x) % 5 == 0 and (3 * y * y) % 5 == 0:
                brute += 1
    assert brute == 1
    assert count_singular(f) == 1

    # f = x^2 y: gradient (2xy, x^2) vanishes on the line x = 0
    g = HomogeneousForm.from_terms(F5, 2, 3, {(2, 1): 1})
    brute = sum(1 for x in range(5) for y in range(5)
                if (2 * x * y) % 5 == 0 and (x * x) % 5 == 0)
    assert brute == 5
    assert count_singular(g) == 5
    assert count_singular(g, 2) == 25

    z = HomogeneousForm.zero(F5, 2, 3)
    assert count_singular(z) == 25
    assert count_singular(z, 2) == 625


def naive_count_NR(F, R):
    """Oracle: literal enumeration of polynomial blocks."""
    q, n, d = F.field.q, F.n, F.d
    K = kernel(F.field)
    space = q ** (n * R)

    def decode(flat):
        polys = []
        for _ in range(n):
            cs = []
            for _ in range(R):
                flat, r = divmod(flat, q)
                cs.append(r)
            polys.append(tuple(cs))
        return polys

    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
        return out

    count = 0
    for flat in range(space ** (d - 1)):
        t = flat
        blocks = []
        for _ in range(d - 1):
            t, b = divmod(t, space)
            blocks.append(decode(b))
        ok = True
        for i in range(n):
            acc = [0]
            for idx in itertools.product(range(n), repeat=d - 1):
                c = F.coeff(tuple(idx) + (i,)).index
                if not c:
                    continue
                term = [c]
                for k, j in enumerate(idx):
                    term = poly_mul(term, blocks[k][j])
                if len(acc) < len(term):
                    acc += [0] * (len(term) - len(acc))
                for s, v in enumerate(term):
                    acc[s] = K.add(acc[s], v)
            if any(acc):
                ok = False
                break
        if ok:
            count += 1
    return count


def test_count_nr_examples():
    D = diagonal(1, 1, 3, F2)
    assert count_NR(D, 1) == 3  # degree-0 polynomials reduce to |S_F(F_2)|
    assert count_NR(D, 1) == count_SF(D)
    # R = 2: pairs (a, b) of degree-<2 polys with ab = 0 in F_2[t]
    brute = 0
    for abits in range(4):
        for bbits in range(4):
            prod = [0, 0, 0]
            a = [abits & 1, abits >> 1]
            b = [bbits & 1, bbits >> 1]
            for i in range(2):
                for j in range(2):
                    prod[i + j] ^= a[i] & b[j]
            if not any(prod):
                brute += 1
    assert brute == 7
    assert count_NR(D, 2) == 7
    Z = MultilinearForm.zeros(F2, 3, 2)
    assert count_NR(Z, 2) == 2 ** (2 * 2 * 2)


def test_count_nr_matches_naive():
    for seed in range(8):
        F = random_form(F2, 3, 2, 300 + seed)
        assert count_NR(F, 2) == naive_count_NR(F, 2)
    for seed in range(4):
        F = random_form(F3, 3, 1, 400 + seed)
        assert count_NR(F, 2) == naive_count_NR(F, 2)
    M = random_form(F2, 2, 2, 11)
    assert count_NR(M, 2) == naive_count_NR(M, 2)
    assert count_NR(M, 3) == naive_count_NR(M, 3)


def test_count_fiber_examples():
    D = diagonal(1, 1, 3, F2)
    y00 = zero_fiber_target(D, 1)
    assert count_fiber(D, 2, 1, y00) == 4  # x, y in {0, t}: products vanish mod t^2
    y11 = (((1,),), ((1,),))
    assert count_fiber(D, 2, 1, y11) == 0  # constant term of the product is 1
    y01 = (((0,),), ((1,),))
    assert count_fiber(D, 2, 1, y01) == 2
    # b = 0: the single fiber carries the whole solution count
    total = count_fiber(D, 2, 0, zero_fiber_target(D, 0))
    brute = 0
    for a in range(4):
        for b in range(4):
            av = (a & 1, a >> 1)
            bv = (b & 1, b >> 1)
            prod = (av[0] & bv[0], (av[0] & bv[1]) ^ (av[1] & bv[0]))
            if not any(prod):
                brute += 1
    assert total == brute == 8  # 4 + 2 + 2 + 0 over the four mod-t fibers


def test_fiber_counts_histogram_matches_count_fiber():
    for spec, seeds in [(F2, range(4)), (F3, range(2))]:
        for seed in seeds:
            F = random_form(spec, 3, 2, 500 + seed)
            for a, b in [(1, 0), (1, 1), (2, 1), (2, 2), (2, 0)]:
                hist = fiber_counts(F, a, b)
                q, n, d = spec.q, F.n, F.d
                # check every fiber, including absent ones
                space = q ** (n * b)
                checked = 0
                for flat in range(space ** (d - 1)):
                    t = flat
                    y = []
                    for _ in range(d - 1):
                        t, bk = divmod(t, space)
                        vec = []
                        for _ in range(n):
                            cs = []
                            for _ in range(b):
                                bk, r = divmod(bk, q)
                                cs.append(r)
                            vec.append(tuple(cs))
                        y.append(tuple(vec))
                    key = tuple(y)
                    expected = count_fiber(F, a, b, key)
                    assert hist.get(key, 0) == expected
                    checked += 1
                assert sum(hist.values()) == count_fiber(F, a, 0, zero_fiber_target(F, 0))


def test_count_box_examples():
    G = int_diagonal(1, 1, 3)  # x * y with integer slots
    # Z-variant, B = 2: entries in {-1, 0, 1}
    brute = sum(1 for a in (-1, 0, 1) for b in (-1, 0, 1) if a * b == 0)
    assert brute == 5
    assert count_box(G, BoxSpec(2, signed=True)) == 5
    # N-variant, B = 4: entries in [0, 4)
    brute = sum(1 for a in range(4) for b in range(4) if a * b == 0)
    assert brute == 7
    assert count_box(G, BoxSpec(4, signed=False)) == 7
    Z = IntMultilinearForm.zeros(3, 2)
    assert count_box(Z, BoxSpec(3, signed=False)) == 3 ** 4


def test_count_box_mod_L():
    G = int_diagonal(1, 1, 3)
    # pairs (a, b) in [0, 10)^2 with ab = 0 mod 10
    brute = sum(1 for a in range(10) for b in range(10) if (a * b) % 10 == 0)
    assert count_box(G, BoxSpec(10, signed=False, modulus=10)) == brute
    sols = box_solutions(G, BoxSpec(10, signed=False, modulus=10))
    assert len(sols) == brute
    assert all((a * b) % 10 == 0 for a, b in sols)


def test_box_numpy_path_matches_pure():
    # widths above the numpy threshold, cross-checked against the pure path
    from multirank import counting

    G = random_int_form(3, 2, 3, 77)
    box = BoxSpec(8, signed=True, modulus=50)
    pure = counting._box_pure(G, box, True)
    fast = counting._box_numpy(G, box, True)
    assert pure[0] == fast[0]
    assert pure[1] == fast[1]
    box2 = BoxSpec(7, signed=False)
    assert counting._box_pure(G, box2, False)[0] == counting._box_numpy(G, box2, False)[0]


def test_chunk_determinism_across_threads():
    D = diagonal(1, 2, 3, F3)
    f = HomogeneousForm.from_terms(F5, 2, 3, {(2, 1): 1, (0, 3): 2})
    G = random_int_form(3, 2, 2, 5)
    results = []
    for t in ("1", "2", "8"):
        os.environ["MULTIRANK_THREADS"] = t
        try:
            results.append((
                count_SF(D, 3),
                count_SF_naive(D, 2),
                count_singular(f, 2),
                count_NR(D, 2),
                count_box(G, BoxSpec(3, signed=True)),
            ))
        finally:
            del os.environ["MULTIRANK_THREADS"]
    assert results[0] == results[1] == results[2]


def test_monotone_ambient_bound():
    for seed in range(20):
        F = random_form(F3, 3, 2, 900 + seed)
        c = count_SF(F)
        assert 1 <= c <= 3 ** 4


def test_matrix_rank_small():
    K = kernel(F5)
    assert matrix_rank([[0, 0], [0, 0]], 2, K) == 0
    assert matrix_rank([[1, 2], [2, 4]], 2, K) == 1
    assert matrix_rank([[1, 2], [2, 3]], 2, K) == 2
    rows = [[1, 2, 3], [2, 4, 1], [0, 0, 4]]  # row2 = 2*row1 mod 5
    assert matrix_rank([r[:] for r in rows], 3, K) == 2
    rows = [[1, 0, 0], [2, 1, 0], [3, 4, 1]]
    assert matrix_rank([r[:] for r in rows], 3, K) == 3
