import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import crandn
from mimoic.hermitian import (
    DimensionMismatch,
    NotPositiveDefinite,
    block_logdet_check,
    capped_sqrt,
    gram,
    jacobi_eigvalsh,
    logdet2_gram,
    logdet2_hpd,
    psd_check,
    resolvent_identity_check,
    schur_capped,
)


def random_hpd(rng, n, floor=0.1):
    g = crandn(rng, n, n)
    return g @ g.conj().T + floor * np.eye(n)


def naive_product(s):
    rows, cols = s.shape
    out = np.zeros((rows, rows), complex)
    for i in range(rows):
        for j in range(rows):
            for k in range(cols):
                out[i, j] += s[i, k] * np.conj(s[j, k])
    return out


# --- Jacobi eigensolver, checked against LAPACK once so it can serve as oracle


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
def test_jacobi_matches_lapack(rng, n):
    a = crandn(rng, n, n)
    a = a + a.conj().T
    assert np.allclose(jacobi_eigvalsh(a), np.linalg.eigvalsh(a), atol=1e-12 * n)


def test_jacobi_diagonal_and_real():
    assert np.allclose(jacobi_eigvalsh(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])
    assert np.allclose(jacobi_eigvalsh([[2, 1], [1, 2]]), [1, 3])


def test_jacobi_rejects_large():
    with pytest.raises(DimensionMismatch):
        jacobi_eigvalsh(np.eye(17))


# --- logdet2_hpd


def test_logdet_identity_and_diag():
    assert logdet2_hpd(np.eye(3)) == 0.0
    assert logdet2_hpd(np.diag([4.0, 4.0])) == pytest.approx(4.0, abs=1e-15)


def test_logdet_matches_eigen_product(rng):
    for _ in range(20):
        a = random_hpd(rng, 4)
        oracle = float(np.sum(np.log2(jacobi_eigvalsh(a))))
        assert logdet2_hpd(a) == pytest.approx(oracle, rel=1e-12, abs=1e-12)


def test_logdet_block_diagonal_additive(rng):
    for _ in range(20):
        a, b = random_hpd(rng, 3), random_hpd(rng, 2)
        full = np.block([[a, np.zeros((3, 2))], [np.zeros((2, 3)), b]])
        assert logdet2_hpd(full) == pytest.approx(logdet2_hpd(a) + logdet2_hpd(b), rel=1e-10)


def test_logdet_jitter_rescues_semidefinite_noise():
    a = np.array([[1.0, 1.0], [1.0, 1.0 - 1e-17]])
    assert math.isfinite(logdet2_hpd(a))


def test_logdet_indefinite_raises():
    with pytest.raises(NotPositiveDefinite):
        logdet2_hpd(np.diag([1.0, -1.0]))


def test_logdet_gram_matches_assembled(rng):
    for _ in range(20):
        f = crandn(rng, 3, 5) * 3
        d = rng.uniform(0.5, 2.0, 3)
        assembled = np.diag(d) + f @ f.conj().T
        assert logdet2_gram(f, d) == pytest.approx(logdet2_hpd(assembled), rel=1e-12)
    assert logdet2_gram(np.zeros((2, 0))) == 0.0
    assert logdet2_gram(np.zeros((2, 0)), [2.0, 2.0]) == pytest.approx(2.0)


def test_logdet_gram_huge_gain_slope():
    # log2 det(I + rho h h^H) for unit h grows by exactly 1 bit per doubling of rho
    h = np.ones((1, 1))
    assert logdet2_gram(math.sqrt(2e24) * h) - logdet2_gram(math.sqrt(1e24) * h) == pytest.approx(1.0, abs=1e-12)


# --- gram


def test_gram_examples(rng):
    assert np.all(gram(crandn(rng, 3, 2), 0.0) == 0)
    assert gram([[2.0]], 3.0)[0, 0] == 12.0
    s = crandn(rng, 3, 2)
    assert np.allclose(gram(s, 1.0), naive_product(s), atol=1e-14)


# --- schur_capped


def test_schur_capped_examples():
    assert np.allclose(schur_capped(np.eye(2), np.zeros((2, 3))), np.eye(2))
    k, s = 2.5, 0.7 - 0.3j
    assert schur_capped([[k]], [[s]])[0, 0].real == pytest.approx(k / (1 + abs(s) ** 2 * k))


def test_schur_capped_monotone_and_bounded(rng):
    for _ in range(200):
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        g1, g2 = crandn(rng, m, m), crandn(rng, m, m)
        k1 = g1 @ g1.conj().T
        k2 = k1 + g2 @ g2.conj().T
        s = crandn(rng, m, n) * 10 ** rng.uniform(-1, 2)
        l1, l2 = schur_capped(k1, s), schur_capped(k2, s)
        assert psd_check(l1, l2)
        assert psd_check(l1, k1) and psd_check(l1)


def test_schur_capped_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        schur_capped(np.eye(2), np.ones((3, 1)))


# --- block_logdet_check


def test_block_examples():
    assert block_logdet_check(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2)) == (0.0, 0.0)
    full, split = block_logdet_check([[2.0]], [[1.0]], [[1.0]], [[2.0]])
    assert full == pytest.approx(math.log2(3)) and split == pytest.approx(math.log2(3))


def test_block_random(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n))
        a = random_hpd(rng, n)
        full, split = block_logdet_check(a[:k, :k], a[:k, k:], a[k:, :k], a[k:, k:])
        assert abs(full - split) <= 1e-10 * max(1.0, abs(full))


def test_block_shape_errors():
    with pytest.raises(DimensionMismatch):
        block_logdet_check(np.eye(2), np.eye(2), np.eye(3), np.eye(3))


# --- resolvent identity


def test_resolvent_examples():
    assert resolvent_identity_check(np.eye(3), 0.0) == 0.0
    assert resolvent_identity_check([[1.0]], 3.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("rho", [0.0, 1.0, 1e3, 1e6, 1e9])
def test_resolvent_contract(rng, rho):
    for _ in range(20):
        h = crandn(rng, 4, 4)
        assert resolvent_identity_check(h, rho) <= 1e-9 * (1 + rho)


# --- psd_check


def test_psd_examples():
    assert psd_check(np.zeros((2, 2)), np.eye(2))
    assert not psd_check(np.diag([1.0, -0.1]))
    assert not psd_check(np.eye(2), 0.5 * np.eye(2))
    with pytest.raises(DimensionMismatch):
        psd_check(np.eye(2), np.eye(3))


# --- capped_sqrt


def test_capped_sqrt_against_explicit_inverse(rng):
    for rows, cols in [(3, 2), (2, 3), (1, 1), (4, 4)]:
        h = crandn(rng, rows, cols)
        keep, drop = capped_sqrt(h, 7.0)
        p = np.linalg.inv(np.eye(cols) + 7.0 * h.conj().T @ h)
        assert np.allclose(keep @ keep, p, atol=1e-13)
        assert np.allclose(drop @ drop, np.eye(cols) - p, atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(
    rows=st.integers(1, 4),
    cols=st.integers(1, 4),
    log_rho=st.floats(0, 12),
    seed=st.integers(0, 2**32 - 1),
)
def test_capped_sqrt_is_contraction(rows, cols, log_rho, seed):
    h = crandn(np.random.default_rng(seed), rows, cols)
    keep, drop = capped_sqrt(h, 10**log_rho)
    assert psd_check(keep @ keep, np.eye(cols))
    assert np.allclose(keep @ keep + drop @ drop, np.eye(cols), atol=1e-12)
