"""Blaschke-Potapov products: unitarity, degree, divisibility, coprimeness."""

import numpy as np

from btk import (
    BlaschkeProduct,
    Rational,
    coprime_with_scalar,
    degree_inner,
    det_potapov,
    eval_potapov,
    extract_left_factor,
    gcd_diagonal_family,
    is_left_inner_divisor,
    lcm_diagonal_family,
    right_coprime_pair,
    inner_outer,
)
from btk.matrix_inner import DiagonalConstantInner, PotapovFactor, PotapovProduct
from btk._rational import rmat_eval, rmat_eye

from conftest import circle, rand_disk


def _random_potapov(rng, n, nfac):
    factors = []
    for _ in range(nfac):
        alpha = rand_disk(rng, 0.6)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = v / np.linalg.norm(v)
        factors.append(PotapovFactor(alpha, np.outer(v, v.conj())))
    T = PotapovProduct.identity(n)
    for f in factors:
        T = T * PotapovProduct(np.eye(n), [f])
    return T


def test_eval_unitary_on_circle(rng):
    for _ in range(5):
        T = _random_potapov(rng, 2, int(rng.integers(1, 4)))
        for z in circle(256):
            U = eval_potapov(T, z)
            assert np.linalg.norm(U.conj().T @ U - np.eye(2)) < 1e-8


def test_degree_additive_under_product(rng):
    for _ in range(10):
        T1 = _random_potapov(rng, 2, int(rng.integers(1, 4)))
        T2 = _random_potapov(rng, 2, int(rng.integers(1, 4)))
        assert degree_inner(T1 * T2) == degree_inner(T1) + degree_inner(T2)
        assert (
            det_potapov(T1 * T2).degree
            == det_potapov(T1).degree + det_potapov(T2).degree
        )


def test_extract_left_factor_reconstructs(rng):
    for _ in range(10):
        T = _random_potapov(rng, 2, 3)
        alpha = det_potapov(T).zeros[0][0]
        fac, rem = extract_left_factor(T, alpha)
        assert fac is not None
        rebuilt = PotapovProduct(np.eye(2), [fac]) * rem
        for z in circle(48):
            err = np.linalg.norm(eval_potapov(rebuilt, z) - eval_potapov(T, z))
            assert err < 1e-8
        assert degree_inner(rem) == degree_inner(T) - 1


def test_left_divisor_detection(rng):
    T = _random_potapov(rng, 2, 3)
    D = PotapovProduct(np.eye(2), T.factors[:1])
    assert is_left_inner_divisor(D, T)
    other = _random_potapov(rng, 2, 1)
    assert not is_left_inner_divisor(other, T)


def _random_analytic_matrix(rng, n, deg):
    A = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
            A[i, j] = Rational(c)
    return A


def test_coprime_with_scalar_matches_inner_part_route(rng):
    for k in range(20):
        theta = BlaschkeProduct.from_points(
            [rand_disk(rng, 0.6) for _ in range(int(rng.integers(1, 4)))]
        )
        A = _random_analytic_matrix(rng, 2, 1)
        if k % 2 == 1:
            a0 = theta.zeros[0][0]
            f = Rational([-a0, 1.0])
            for i in range(2):
                A[i, 0] = (A[i, 0] * f).reduced()
        got = coprime_with_scalar(A, theta)
        inner, _ = inner_outer(A)
        i_theta = rmat_eye(2, scale=theta.to_rational())
        assert got == right_coprime_pair(inner, i_theta)


def test_diagonal_family_lattice():
    t1 = BlaschkeProduct.from_points([0.5, 0.2])
    t2 = BlaschkeProduct.from_points([0.5, -0.3])
    g = gcd_diagonal_family([DiagonalConstantInner(t1), DiagonalConstantInner(t2)])
    l = lcm_diagonal_family([DiagonalConstantInner(t1), DiagonalConstantInner(t2)])
    assert g.theta.blaschke.degree == 1
    assert l.theta.blaschke.degree == 3


def test_char_scalar_inner_diagonal():
    from btk import char_scalar_inner

    t = BlaschkeProduct.from_points([0.5, -0.2])
    # the diagonal inner diag(theta, 1) has characteristic scalar theta
    D = np.empty((2, 2), dtype=object)
    D[0, 0] = t.to_rational()
    D[0, 1] = Rational.const(0.0)
    D[1, 0] = Rational.const(0.0)
    D[1, 1] = Rational.const(1.0)
    m = char_scalar_inner(D)
    assert m.degree == 2
    for alpha, mult in t.zeros:
        assert m.multiplicity_at(alpha) >= mult
