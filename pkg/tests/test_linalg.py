"""Field fixtures, counting multiplication, powering, and the prime scans."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choiceless_lab.errors import ValidationError
from choiceless_lab.linalg import (
    BinNat,
    FieldMatrix,
    IntMatrix,
    det_prime_divisors,
    frequency_experiment,
    gf,
    gl_order,
    identity,
    mat_mul,
    mat_pow,
    nonsingular_int,
    nonsingular_rect,
    nonsingular_rect_block,
    nonsingular_square,
    random_matrix,
    rank_gaussian,
    sieve_first_primes,
    solve_gaussian,
    transpose,
    zp,
)
from choiceless_lab.linalg.intmatrix import scan_width

from oracles import bareiss_det, leibniz_det_mod, naive_mat_mul, partial_product

GF2 = zp(2)
GF3 = zp(3)


def dense(field, rows, labels=None):
    n = len(rows)
    labels = labels or list(range(n))
    idx = frozenset(labels)
    entries = {
        (labels[i], labels[j]): rows[i][j] % field.order
        for i in range(n)
        for j in range(n)
    }
    return FieldMatrix(field, idx, idx, entries, square=True)


def as_rows(field, m, order):
    return [[m.entry(i, j) for j in order] for i in order]


# ---------------------------------------------------------------- fields


@pytest.mark.parametrize("q", [2, 3, 5, 7, 4, 8, 9])
def test_field_fixtures_satisfy_axioms(q):
    field = gf(q)  # construction itself runs the axiom check for q <= 64
    assert field.order == q
    for a in field.elements:
        assert field.add(a, field.zero) == a
        assert field.mul(a, field.one) == a
        if a != field.zero:
            assert field.mul(a, field.inv(a)) == field.one


def test_field_addition_is_order_independent():
    field = gf(9)
    rng = random.Random(5)
    values = [rng.randrange(9) for _ in range(12)]
    totals = set()
    for _ in range(20):
        rng.shuffle(values)
        acc = field.zero
        for v in values:
            acc = field.add(acc, v)
        totals.add(acc)
    assert len(totals) == 1


def test_zp_rejects_composite():
    with pytest.raises(ValidationError):
        zp(6)


# ---------------------------------------------------------------- binnat


@given(st.integers(min_value=0, max_value=10**9), st.integers(min_value=0, max_value=10**9))
@settings(max_examples=150, deadline=None)
def test_binnat_add_mul(a, b):
    x, y = BinNat.from_int(a), BinNat.from_int(b)
    assert x.add(y).to_int() == a + b
    assert x.mul(y).to_int() == a * b
    if a >= b:
        assert x.sub(y).to_int() == a - b


def test_binnat_sub_negative_rejected():
    with pytest.raises(ValueError):
        BinNat.from_int(3).sub(BinNat.from_int(5))


def test_binnat_pow():
    assert BinNat.from_int(3).pow_int(4).to_int() == 81
    assert BinNat.from_int(7).pow_int(0).to_int() == 1


# ---------------------------------------------------------------- mat_mul


def test_mat_mul_identity():
    m = dense(GF2, [[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    assert mat_mul(GF2, m, identity(GF2, m.rows)) == m
    assert mat_mul(GF2, identity(GF2, m.rows), m) == m


def test_mat_mul_hand_example():
    m = dense(GF2, [[0, 1], [1, 1]])
    sq = mat_mul(GF2, m, m)
    assert as_rows(GF2, sq, [0, 1]) == [[1, 1], [1, 0]]


@pytest.mark.parametrize("q", [3, 5])
def test_mat_mul_matches_naive_dot_product(q):
    field = zp(q)
    rng = random.Random(100 + q)
    for _ in range(100):
        n = rng.randrange(1, 5)
        a = dense(field, [[rng.randrange(q) for _ in range(n)] for _ in range(n)])
        b = dense(field, [[rng.randrange(q) for _ in range(n)] for _ in range(n)])
        got = mat_mul(field, a, b)
        order = list(range(n))
        expected = naive_mat_mul(field, a, b, order, order, order)
        assert got.entries == expected


def test_mat_mul_dimension_mismatch():
    a = dense(GF2, [[1]])
    b = dense(GF2, [[1, 0], [0, 1]])
    with pytest.raises(ValidationError):
        mat_mul(GF2, a, b)


# ---------------------------------------------------------------- mat_pow


def test_mat_pow_examples():
    eye = identity(GF2, frozenset(range(3)))
    for r in (1, 2, 7, 100):
        assert mat_pow(GF2, eye, r) == eye
    swap = dense(GF2, [[0, 1], [1, 0]])
    assert mat_pow(GF2, swap, 2) == identity(GF2, swap.rows)
    shear = dense(GF2, [[1, 1], [0, 1]])
    assert mat_pow(GF2, shear, 2) == identity(GF2, shear.rows)
    fib = dense(GF2, [[0, 1], [1, 1]])
    assert mat_pow(GF2, fib, 3) == identity(GF2, fib.rows)


def test_mat_pow_matches_repeated_multiplication():
    rng = random.Random(11)
    for q in (2, 3):
        field = zp(q)
        for _ in range(20):
            n = rng.randrange(1, 4)
            m = dense(field, [[rng.randrange(q) for _ in range(n)] for _ in range(n)])
            acc = m
            for r in range(1, 9):
                assert mat_pow(field, m, r) == acc
                acc = mat_mul(field, acc, m)


def test_mat_pow_rejects_zero_exponent():
    with pytest.raises(ValidationError):
        mat_pow(GF2, identity(GF2, frozenset([0])), 0)


# ---------------------------------------------------------------- gl_order


def test_gl_order_values():
    assert gl_order(2, 1).to_int() == 1
    assert gl_order(2, 2).to_int() == 6
    assert gl_order(2, 3).to_int() == 168
    assert gl_order(3, 2).to_int() == 48


def test_gl_order_matches_brute_enumeration_n2():
    for q in (2, 3):
        field = zp(q)
        count = 0
        for flat in itertools.product(range(q), repeat=4):
            rows = [[flat[0], flat[1]], [flat[2], flat[3]]]
            if (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) % q != 0:
                count += 1
        assert gl_order(q, 2).to_int() == count


def test_gl_order_bit_bound():
    for q, n in [(2, 3), (2, 5), (3, 3), (5, 2)]:
        g = gl_order(q, n)
        bound = n * n * max(1, (q - 1).bit_length()) + n
        assert g.max_bit < bound


# ------------------------------------------------------- nonsingularity


def test_nonsingular_square_examples():
    assert nonsingular_square(GF2, identity(GF2, frozenset("abc")))
    assert not nonsingular_square(GF2, dense(GF2, [[1, 1], [1, 1]]))
    assert nonsingular_square(GF2, dense(GF2, [[0, 1], [1, 1]]))
    assert nonsingular_square(GF2, dense(GF2, []))  # empty convention


def test_exhaustive_sweep_2x2_and_3x3_gf2():
    for flat in itertools.product((0, 1), repeat=4):
        rows = [list(flat[:2]), list(flat[2:])]
        m = dense(GF2, rows)
        expected = rank_gaussian(GF2, m, [0, 1], [0, 1]) == 2
        assert nonsingular_square(GF2, m) == expected
    for flat in itertools.product((0, 1), repeat=9):
        rows = [list(flat[:3]), list(flat[3:6]), list(flat[6:])]
        m = dense(GF2, rows)
        expected = rank_gaussian(GF2, m, [0, 1, 2], [0, 1, 2]) == 3
        assert nonsingular_square(GF2, m) == expected


def test_exhaustive_sweep_2x2_gf3():
    for flat in itertools.product((0, 1, 2), repeat=4):
        rows = [list(flat[:2]), list(flat[2:])]
        m = dense(GF3, rows)
        expected = rank_gaussian(GF3, m, [0, 1], [0, 1]) == 2
        assert nonsingular_square(GF3, m) == expected


def test_singularity_absorbs_in_powers():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randrange(1, 4)
        m = dense(GF2, [[rng.randrange(2) for _ in range(n)] for _ in range(n)])
        order = list(range(n))
        if rank_gaussian(GF2, m, order, order) < n:
            power = m
            for _ in range(4):
                assert rank_gaussian(GF2, power, order, order) < n
                assert power != identity(GF2, m.rows)
                power = mat_mul(GF2, power, m)


def test_verdicts_invariant_under_index_renaming():
    rng = random.Random(23)
    for q in (2, 3):
        field = zp(q)
        for _ in range(30):
            n = rng.randrange(1, 5)
            rows = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
            plain = dense(field, rows)
            renamed = dense(field, rows, labels=[f"x{i}" for i in range(n)])
            assert nonsingular_square(field, plain) == nonsingular_square(field, renamed)


# ---------------------------------------------------------------- gauss


def test_rank_gaussian_basics():
    z = dense(GF2, [[0, 0], [0, 0]])
    assert rank_gaussian(GF2, z, [0, 1], [0, 1]) == 0
    eye = identity(GF3, frozenset(range(4)))
    assert rank_gaussian(GF3, eye, list(range(4)), list(range(4))) == 4


def test_rank_gaussian_order_independent():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randrange(1, 5)
        m = dense(GF3, [[rng.randrange(3) for _ in range(n)] for _ in range(n)])
        base = list(range(n))
        ranks = set()
        for _ in range(4):
            ro, co = base[:], base[:]
            rng.shuffle(ro)
            rng.shuffle(co)
            ranks.add(rank_gaussian(GF3, m, ro, co))
        assert len(ranks) == 1


def test_solve_gaussian():
    m = FieldMatrix(
        GF2,
        frozenset(["h1", "h2"]),
        frozenset(["s1", "s2", "s3"]),
        {("h1", "s1"): 1, ("h1", "s2"): 1, ("h2", "s2"): 1, ("h2", "s3"): 1},
    )
    sol = solve_gaussian(GF2, m, {"h1": 1, "h2": 0}, ["h1", "h2"], ["s1", "s2", "s3"])
    assert sol is not None
    assert (sol["s1"] + sol["s2"]) % 2 == 1
    assert (sol["s2"] + sol["s3"]) % 2 == 0
    # inconsistent: rows sum to zero but rhs sums to one
    m2 = FieldMatrix(
        GF2,
        frozenset(["a", "b"]),
        frozenset(["x"]),
        {("a", "x"): 1, ("b", "x"): 1},
    )
    assert solve_gaussian(GF2, m2, {"a": 1, "b": 0}, ["a", "b"], ["x"]) is None


# ---------------------------------------------------------------- primes


def test_sieve_examples():
    assert sieve_first_primes(5) == [2, 3, 5, 7, 11]
    assert sieve_first_primes(8)[-1] == 19
    assert sieve_first_primes(32)[-1] == 131
    assert sieve_first_primes(1)[0] == 2


# ---------------------------------------------------------- int matrices


def test_int_matrix_roundtrip():
    entries = {(0, 0): 5, (0, 1): -3, (1, 0): 0, (1, 1): 256}
    m = IntMatrix.from_int_entries(entries, index_set={0, 1})
    assert m.entry(0, 0) == 5
    assert m.entry(0, 1) == -3
    assert m.entry(1, 0) == 0
    assert m.entry(1, 1) == 256
    assert m.digit_count == 9
    assert scan_width(m) == 9
    assert (1, 0) not in m.positives


def test_nonsingular_int_examples():
    sing = IntMatrix.from_int_entries({(0, 0): 2, (0, 1): 4, (1, 0): 1, (1, 1): 2})
    assert not nonsingular_int(sing)
    unim = IntMatrix.from_int_entries({(0, 0): 2, (0, 1): 1, (1, 0): 1, (1, 1): 1})
    assert nonsingular_int(unim)


def test_nonsingular_int_matches_exact_determinant():
    rng = random.Random(41)
    for _ in range(60):
        n = rng.randrange(1, 5)
        rows = [[rng.randrange(-8, 9) for _ in range(n)] for _ in range(n)]
        m = IntMatrix.from_int_entries(
            {(i, j): rows[i][j] for i in range(n) for j in range(n)},
            index_set=set(range(n)),
        )
        assert nonsingular_int(m) == (bareiss_det(rows) != 0)


def test_det_prime_divisors_examples():
    diag = IntMatrix.from_int_entries({(0, 0): 2, (0, 1): 0, (1, 0): 0, (1, 1): 3})
    divs = det_prime_divisors(diag)
    assert {2, 3} <= divs
    n = scan_width(diag)
    listed = sieve_first_primes(2 * n * n)
    assert divs == {p for p in listed if 6 % p == 0}
    eye = IntMatrix.from_int_entries({(0, 0): 1, (1, 1): 1}, index_set={0, 1})
    assert det_prime_divisors(eye) == frozenset()


def test_nonsingular_int_invariant_under_renaming():
    rng = random.Random(53)
    for _ in range(15):
        n = rng.randrange(1, 5)
        rows = [[rng.randrange(-16, 17) for _ in range(n)] for _ in range(n)]
        plain = IntMatrix.from_int_entries(
            {(i, j): rows[i][j] for i in range(n) for j in range(n)},
            index_set=set(range(n)),
        )
        renamed = IntMatrix.from_int_entries(
            {(f"x{i}", f"x{j}"): rows[i][j] for i in range(n) for j in range(n)},
            index_set={f"x{i}" for i in range(n)},
        )
        assert nonsingular_int(plain) == nonsingular_int(renamed)


def test_crt_soundness_some_prime_misses_nonzero_determinants():
    # the determinant bound guarantees a nonzero determinant cannot be
    # divisible by every scanned prime
    rng = random.Random(47)
    for _ in range(40):
        n = rng.randrange(1, 5)
        rows = [[rng.randrange(-256, 257) for _ in range(n)] for _ in range(n)]
        d = bareiss_det(rows)
        if d == 0:
            continue
        m = IntMatrix.from_int_entries(
            {(i, j): rows[i][j] for i in range(n) for j in range(n)},
            index_set=set(range(n)),
        )
        listed = sieve_first_primes(2 * scan_width(m) ** 2)
        assert any(d % p != 0 for p in listed)


def test_det_prime_divisors_matches_trial_division():
    rng = random.Random(43)
    for _ in range(10):
        n = rng.randrange(1, 4)
        rows = [[rng.randrange(-5, 6) for _ in range(n)] for _ in range(n)]
        m = IntMatrix.from_int_entries(
            {(i, j): rows[i][j] for i in range(n) for j in range(n)},
            index_set=set(range(n)),
        )
        d = bareiss_det(rows)
        listed = sieve_first_primes(2 * scan_width(m) ** 2)
        assert det_prime_divisors(m) == {p for p in listed if d % p == 0}


# ---------------------------------------------------------- rectangular


def test_nonsingular_rect_hand_example():
    field = GF3
    m = FieldMatrix(
        field,
        frozenset(["i1", "i2"]),
        frozenset(["j1", "j2"]),
        {
            ("i1", "j1"): 1,
            ("i1", "j2"): 2,
            ("i2", "j1"): 2,
            ("i2", "j2"): 1,
        },
    )
    gram = mat_mul(field, m, transpose(m))
    assert gram.entry("i1", "i1") == 2
    assert gram.entry("i1", "i2") == 1
    assert gram.entry("i2", "i2") == 2
    assert not nonsingular_rect(field, m)
    assert not nonsingular_rect_block(field, m)


def test_nonsingular_rect_bijection_matrix():
    m = FieldMatrix(
        GF2,
        frozenset(["i1", "i2"]),
        frozenset(["j1", "j2"]),
        {("i1", "j2"): 1, ("i2", "j1"): 1},
    )
    assert nonsingular_rect(GF2, m)
    assert nonsingular_rect_block(GF2, m)


def test_rect_agrees_with_rank_and_block():
    rng = random.Random(71)
    for q in (2, 3, 5):
        field = zp(q)
        for _ in range(40):
            n = rng.randrange(1, 5)
            row_labels = [f"r{i}" for i in range(n)]
            col_labels = [f"c{j}" for j in range(n)]
            m = FieldMatrix(
                field,
                frozenset(row_labels),
                frozenset(col_labels),
                {
                    (row_labels[i], col_labels[j]): rng.randrange(q)
                    for i in range(n)
                    for j in range(n)
                },
            )
            by_rank = rank_gaussian(field, m, row_labels, col_labels) == n
            assert nonsingular_rect(field, m) == by_rank
            assert nonsingular_rect_block(field, m) == by_rank


# ---------------------------------------------------------------- random


def test_random_matrix_deterministic():
    a = random_matrix(GF2, 4, seed=9)
    b = random_matrix(GF2, 4, seed=9)
    assert a == b
    c = random_matrix(GF2, 4, seed=10)
    assert a != c


def test_frequency_experiment_reference_constants():
    frac2 = frequency_experiment(GF2, 20, 4000, seed=1)
    assert abs(frac2 - partial_product(2.0)) < 0.02
    frac3 = frequency_experiment(GF3, 15, 1500, seed=1)
    assert abs(frac3 - partial_product(3.0)) < 0.03
    assert frequency_experiment(GF2, 20, 500, seed=2) == frequency_experiment(
        GF2, 20, 500, seed=2
    )


def test_power_criterion_matches_leibniz_mod_p():
    rng = random.Random(77)
    for p in (2, 3, 5, 7, 11):
        field = zp(p)
        for _ in range(8):
            n = rng.randrange(1, 5)
            rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
            m = dense(field, rows)
            assert nonsingular_square(field, m) == (leibniz_det_mod(rows, p) != 0)
