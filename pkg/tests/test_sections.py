import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bezout import CoeffSeries, convolve, example, gram_section, hankel_section, toeplitz_section
from bezout.instances import degenerate_scalar, random_symbol
from bezout.sections import block_column, blocks_of, margin_ladder, strict_positivity_margin

from conftest import series


def brute_gram(G, N):
    r = G.rows
    A = np.zeros((N * r, N * r), dtype=complex)
    for i in range(N):
        for j in range(N):
            A[i * r:(i + 1) * r, j * r:(j + 1) * r] = sum(
                G.coeff(i - k) @ G.coeff(j - k).conj().T for k in range(min(i, j) + 1))
    return A


def test_toeplitz_gold_pattern(gold):
    T = toeplitz_section(gold, 3).matrix
    expected = [[1, 0, 0, 0, 0, 0],
                [1, -1, 1, 0, 0, 0],
                [0, 0, 1, -1, 1, 0]]
    np.testing.assert_array_equal(T, expected)


def test_toeplitz_identity():
    assert np.array_equal(toeplitz_section(CoeffSeries.identity(2), 5).matrix, np.eye(10))


def test_toeplitz_applies_convolution():
    rng = np.random.default_rng(1)
    F = CoeffSeries(rng.standard_normal((5, 2, 3)) + 1j * rng.standard_normal((5, 2, 3)))
    x = CoeffSeries(rng.standard_normal((4, 3, 1)))
    N = 12
    y = toeplitz_section(F, N).matrix @ block_column(x, N)
    np.testing.assert_allclose(blocks_of(y, 2), convolve(F, x).padded(0, N - 1), atol=1e-13)


def test_hankel_gold(gold):
    H = hankel_section(gold, 4)
    np.testing.assert_array_equal(H.block(0, 0), [[1, -1]])
    assert np.count_nonzero(H.matrix) == 2


def test_hankel_of_constant_is_zero():
    assert not np.any(hankel_section(example("constant"), 6).matrix)


def test_hankel_support_bound():
    rng = np.random.default_rng(2)
    d = 3
    F = CoeffSeries(rng.standard_normal((d + 1, 2, 2)))
    H = hankel_section(F, 6)
    for i in range(6):
        for j in range(6):
            if i + j + 1 > d:
                assert not np.any(H.block(i, j))
            else:
                np.testing.assert_array_equal(H.block(i, j), F.coeff(i + j + 1))


def test_gram_constant_is_identity():
    assert np.allclose(gram_section(example("constant"), 7), np.eye(7))


def test_gram_gold_entries(gold):
    A = gram_section(gold, 5)
    assert A[0, 0] == 1 and A[1, 1] == 3 and A[4, 4] == 3
    assert A[1, 0] == 1 and A[2, 1] == 1 and A[2, 0] == 0
    np.testing.assert_allclose(A, brute_gram(gold, 5))


def test_gram_random_matches_brute_force():
    G = random_symbol(np.random.default_rng(3), 2, 3, 4)
    A = gram_section(G, 16)
    assert np.abs(A - A.conj().T).max() <= 1e-14
    np.testing.assert_allclose(A, brute_gram(G, 16), atol=1e-13)


def test_margin_constant():
    assert strict_positivity_margin(example("constant"), 10) == pytest.approx(1.0, abs=1e-15)


def test_margin_gold_between_bounds(gold):
    for N in (8, 32, 128):
        mgn = strict_positivity_margin(gold, N)
        assert 0 < mgn <= 3


def test_degenerate_margin_decays():
    ladder = margin_ladder(degenerate_scalar(), [16, 32, 64, 128])
    values = [v for _, v in ladder]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-3


@settings(max_examples=25, deadline=None)
@given(series(rows=1, cols=2, max_len=4), st.integers(2, 12))
def test_margin_interlaces(G, N):
    # sections are nested principal submatrices
    assert strict_positivity_margin(G, N + 1) <= strict_positivity_margin(G, N) + 1e-10


@settings(max_examples=25, deadline=None)
@given(series(rows=2, cols=3, max_len=4), st.integers(3, 10))
def test_toeplitz_commutes_with_shift(F, N):
    T = toeplitz_section(F, N).matrix
    S2 = np.kron(np.eye(N, k=-1), np.eye(2))
    S3 = np.kron(np.eye(N, k=-1), np.eye(3))
    assert np.allclose(T @ S3, S2 @ T, atol=1e-12)
