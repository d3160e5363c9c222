"""Tests for the exact linear algebra kernel.

The expected values here were fixed by small independent oracles
(exhaustive vector enumeration over F2, exhaustive box search for
nonnegative kernel vectors) before the implementations were written.
"""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sutured.exactlin import (
    BinaryMatrix,
    IntegerMatrix,
    cokernel_residue,
    f2_rank,
    f2_rank_kernel,
    positive_kernel_witness,
    q_kernel_basis,
    q_solve_unique,
    smith_normal_form,
    z_image_contains,
    z_kernel_basis,
)


# ---------------------------------------------------------------------------
# oracles


def brute_f2_rank_kernel(rows, cols):
    """Enumerate all vectors of F2^cols; count kernel size -> nullity."""
    kernel = []
    for bits in itertools.product((0, 1), repeat=cols):
        if all(sum(r * b for r, b in zip(row, bits)) % 2 == 0 for row in rows):
            kernel.append(bits)
    nullity = 0
    size = len(kernel)
    while size > 1:
        size //= 2
        nullity += 1
    return cols - nullity, kernel


def brute_positive_witness(rows, cols, box=5):
    """Exhaustive search over the coefficient box [0, box]^cols."""
    for vec in itertools.product(range(box + 1), repeat=cols):
        if not any(vec):
            continue
        if all(sum(r * v for r, v in zip(row, vec)) == 0 for row in rows):
            return vec
    return None


def random_int_matrix(rng, nr, nc, lo=-3, hi=3):
    return [[rng.randint(lo, hi) for _ in range(nc)] for _ in range(nr)]


# ---------------------------------------------------------------------------
# F2


def test_f2_empty_and_identity():
    assert f2_rank_kernel(BinaryMatrix(0, 0, frozenset())) == (0, [])
    ident = BinaryMatrix.from_rows([[1, 0], [0, 1]])
    assert f2_rank_kernel(ident) == (2, [])


def test_f2_repeated_row():
    m = BinaryMatrix.from_rows([[1, 1], [1, 1]])
    rank, basis = f2_rank_kernel(m)
    assert rank == 1
    assert basis == [(1, 1)]


def test_f2_matches_brute_force():
    rng = random.Random(11)
    for _ in range(40):
        nr = rng.randint(0, 5)
        nc = rng.randint(1, 6)
        rows = [[rng.randint(0, 1) for _ in range(nc)] for _ in range(nr)]
        rank, basis = f2_rank_kernel(BinaryMatrix.from_rows(rows) if nr else BinaryMatrix(0, nc, frozenset()))
        brank, bkernel = brute_f2_rank_kernel(rows, nc)
        assert rank == brank
        assert rank + len(basis) == nc
        for vec in basis:
            assert all(sum(r * v for r, v in zip(row, vec)) % 2 == 0 for row in rows)
        # basis spans the full kernel: sizes match
        assert 2 ** len(basis) == len(bkernel)


@given(st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_f2_rank_nullity(rows):
    rank, basis = f2_rank_kernel(BinaryMatrix.from_rows(rows))
    assert rank + len(basis) == 4
    bitrows = [sum(1 << j for j, v in enumerate(row) if v) for row in rows]
    assert f2_rank(bitrows) == rank


# ---------------------------------------------------------------------------
# Z


def test_smith_normal_form_properties():
    rng = random.Random(5)
    for _ in range(25):
        nr = rng.randint(1, 4)
        nc = rng.randint(1, 4)
        A = random_int_matrix(rng, nr, nc)
        S, U, V = smith_normal_form(A)
        # S == U A V
        UA = [[sum(U[i][k] * A[k][j] for k in range(nr)) for j in range(nc)] for i in range(nr)]
        UAV = [[sum(UA[i][k] * V[k][j] for k in range(nc)) for j in range(nc)] for i in range(nr)]
        assert UAV == S
        # diagonal, nonnegative, divisibility chain
        for i in range(nr):
            for j in range(nc):
                if i != j:
                    assert S[i][j] == 0
        diag = [S[i][i] for i in range(min(nr, nc))]
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            if a != 0:
                assert b % a == 0 or b == 0 or a == 0
            else:
                assert b == 0


def test_z_kernel_forced_cases():
    m = IntegerMatrix.from_rows([[1, -1]])
    basis = z_kernel_basis(m)
    assert len(basis) == 1
    assert basis[0] in ((1, 1), (-1, -1))
    assert z_kernel_basis(IntegerMatrix.from_rows([[1, 0], [0, 1]])) == []


def test_z_kernel_primitivity():
    m = IntegerMatrix.from_rows([[2, 4]])
    basis = z_kernel_basis(m)
    assert len(basis) == 1
    v = basis[0]
    assert v in ((2, -1), (-2, 1))
    # substitution check
    assert m.mul_vec(v) == (0,)


def test_z_kernel_is_saturated():
    rng = random.Random(7)
    for _ in range(25):
        nr = rng.randint(1, 4)
        nc = rng.randint(1, 5)
        A = random_int_matrix(rng, nr, nc)
        m = IntegerMatrix.from_rows(A)
        basis = z_kernel_basis(m)
        for v in basis:
            assert all(x == 0 for x in m.mul_vec(v))
        # nullity over Q equals the basis size
        assert len(q_kernel_basis(A)) == len(basis)
        # saturation: the Smith form of the basis matrix has unit diagonal
        if basis:
            S, _, _ = smith_normal_form([list(v) for v in basis])
            for i in range(len(basis)):
                assert S[i][i] == 1


def test_z_image_contains():
    m = IntegerMatrix.from_rows([[2, 0], [0, 3]])
    assert z_image_contains(m, (4, 9)) == (2, 3)
    assert z_image_contains(m, (1, 0)) is None
    rng = random.Random(13)
    for _ in range(25):
        nr, nc = rng.randint(1, 4), rng.randint(1, 4)
        A = random_int_matrix(rng, nr, nc)
        m = IntegerMatrix.from_rows(A)
        x = tuple(rng.randint(-3, 3) for _ in range(nc))
        b = m.mul_vec(x)
        got = z_image_contains(m, b)
        assert got is not None
        assert m.mul_vec(got) == b


def test_cokernel_residue_classifies():
    rng = random.Random(17)
    for _ in range(20):
        nr, nc = rng.randint(1, 4), rng.randint(0, 4)
        A = random_int_matrix(rng, nr, nc)
        m = IntegerMatrix.from_rows(A) if nc else IntegerMatrix(nr, 0, ())
        key = cokernel_residue(m)
        for _ in range(10):
            b1 = tuple(rng.randint(-4, 4) for _ in range(nr))
            b2 = tuple(rng.randint(-4, 4) for _ in range(nr))
            diff = tuple(a - b for a, b in zip(b1, b2))
            same = z_image_contains(m, diff) is not None
            assert (key(b1) == key(b2)) == same


# ---------------------------------------------------------------------------
# Q helpers


def test_q_solve_unique():
    sol = q_solve_unique([[1, 1], [1, -1], [0, 2]], [3, 1, 2])
    assert sol == [Fraction(2), Fraction(1)]
    assert q_solve_unique([[1, 0], [0, 1], [1, 1]], [1, 1, 3]) is None
    with pytest.raises(ValueError):
        q_solve_unique([[1, 1]], [2])


def test_q_kernel_basis():
    basis = q_kernel_basis([[1, 1, 0], [0, 0, 1]])
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and v[2] == 0


# ---------------------------------------------------------------------------
# positive kernel witnesses


def test_witness_forced():
    w = positive_kernel_witness(IntegerMatrix.from_rows([[1, -1]]))
    assert w is not None and w[0] == w[1] > 0


def test_witness_none_for_identity():
    assert positive_kernel_witness(IntegerMatrix.from_rows([[1, 0], [0, 1]])) is None


def test_witness_mixed_sign_kernel():
    # kernel spanned by (1, -1): no nonnegative point besides 0
    assert positive_kernel_witness(IntegerMatrix.from_rows([[1, 1]])) is None


def test_witness_against_box_oracle():
    rng = random.Random(23)
    for _ in range(60):
        nr = rng.randint(1, 3)
        nc = rng.randint(1, 4)
        A = random_int_matrix(rng, nr, nc, lo=-2, hi=2)
        got = positive_kernel_witness(IntegerMatrix.from_rows(A))
        expect = brute_positive_witness(A, nc)
        if expect is None:
            # the box search is complete for small boxes only when rays are
            # short; verify by scaling the returned witness if one appears
            if got is not None:
                # must still be a genuine witness
                assert all(sum(r * v for r, v in zip(row, got)) == 0 for row in A)
                assert all(v >= 0 for v in got) and any(got)
                # and the oracle must find its pattern once the box is grown
                m = max(got)
                assert brute_positive_witness(A, nc, box=m) is not None
        else:
            assert got is not None
            assert all(sum(r * v for r, v in zip(row, got)) == 0 for row in A)
            assert all(v >= 0 for v in got) and any(got)


@given(
    st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=3)
)
@settings(max_examples=60, deadline=None)
def test_witness_sound(rows):
    got = positive_kernel_witness(IntegerMatrix.from_rows(rows))
    if got is not None:
        assert all(v >= 0 for v in got) and any(got)
        assert all(sum(r * v for r, v in zip(row, got)) == 0 for row in rows)
