"""Truncated Toeplitz/Hankel operators and the model-space calculus."""

import numpy as np
import pytest

from btk import (
    BlaschkeProduct,
    MatrixSymbol,
    M_matrix,
    P_of_M,
    Rational,
    W_matrix,
    compression,
    fourier,
    hankel,
    is_psd,
    model_basis,
    moore_penrose,
    numerical_rank,
    self_commutator,
    split,
    toeplitz,
    verify_representation,
)
from btk.hardy_ops import _mat

from conftest import circle, rand_disk

_Z = Rational.z()
_ZERO = Rational.const(0.0)


def _scalar_symbol(plus, minus):
    return MatrixSymbol.scalar(plus, minus)


def test_fourier_coefficients_match_taylor():
    phi = _scalar_symbol((3 * _Z).reduced(), (_Z * _Z).reduced())
    win = fourier(phi, 8)
    # positive side from the analytic part, negative from the co-analytic
    assert abs(win.coeff(1)[0, 0] - 3.0) < 1e-12
    assert abs(win.coeff(-2)[0, 0] - 1.0) < 1e-12
    for j in [-5, -1, 0, 2, 4]:
        if j not in (1, -2):
            assert abs(win.coeff(j)[0, 0]) < 1e-12


def test_toeplitz_and_hankel_block_structure():
    phi = _scalar_symbol((2 * _Z).reduced(), _Z)
    T = _mat(toeplitz(phi, 6))
    H = _mat(hankel(phi, 6))
    # T_{i,j} = A_{i-j}: subdiagonal 2, superdiagonal conj coefficient 1
    assert abs(T[1, 0] - 2.0) < 1e-12
    assert abs(T[0, 1] - 1.0) < 1e-12
    assert abs(T[0, 0]) < 1e-12
    # H_{i,j} = A_{-(i+j+1)}: only the (0,0) corner carries the z-bar term
    assert abs(H[0, 0] - 1.0) < 1e-12
    assert np.max(np.abs(H)) - 1.0 < 1e-12
    assert np.linalg.norm(H[1:, 1:]) < 1e-12


def test_hankel_toeplitz_multiplicativity(rng):
    # H_Phi T_Psi = H_{Phi Psi} for analytic Psi, on the leading block
    N, keep = 24, 12
    lau = Rational([1.0, 0.0, 2.0], [0.0, 1.0])
    phi = split(np.array([[lau]], dtype=object))
    g = Rational(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    psi = MatrixSymbol.analytic(np.array([[g]], dtype=object))
    prod = split(np.array([[(lau * g).reduced()]], dtype=object))
    lhs = (_mat(hankel(phi, N)) @ _mat(toeplitz(psi, N)))[:keep, :keep]
    rhs = _mat(hankel(prod, N))[:keep, :keep]
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_self_commutator_matches_direct_truncation():
    lau = Rational([1.0, 0.0, 2.0], [0.0, 1.0])
    phi = split(np.array([[lau]], dtype=object))
    N = 16
    C = _mat(self_commutator(phi, N))
    T = _mat(toeplitz(phi, 4 * N))
    direct = (T.conj().T @ T - T @ T.conj().T)[: N + 1, : N + 1]
    assert np.max(np.abs(C - direct)) < 1e-10
    # the scalar z-bar + 2z case: [T*, T] = 3 e0 e0*
    assert abs(C[0, 0] - 3.0) < 1e-10
    assert np.linalg.norm(C[1:, 1:]) < 1e-10


def test_hankel_kernel_contains_theta_columns(rng):
    theta = BlaschkeProduct.from_points([rand_disk(rng, 0.5), rand_disk(rng, 0.5)])
    c = 1.7 * np.exp(0.3j)
    plus = (c * theta.to_rational()).reduced()
    prod = (Rational.const(0.4) * plus.tconj()).reduced()
    _, co = prod.split_disk()
    phi = _scalar_symbol(plus, co.tconj().reduced())
    N = 32
    H = _mat(hankel(phi, N))
    T_theta = _mat(
        toeplitz(MatrixSymbol.analytic(np.array([[theta.to_rational()]], dtype=object)), N)
    )
    # columns of T_theta span theta H^2 at truncation; they must be killed by H
    for k in range(N // 2):
        v = T_theta[:, k]
        assert np.linalg.norm(H @ v) < 1e-8 * max(1.0, np.linalg.norm(v))


def test_commutator_range_inside_model_space(rng):
    theta = BlaschkeProduct.from_points([rand_disk(rng, 0.5), rand_disk(rng, 0.5)])
    c = 1.9 * np.exp(0.7j)
    plus = (c * theta.to_rational()).reduced()
    prod = (Rational.const(0.5) * plus.tconj()).reduced()
    _, co = prod.split_disk()
    phi = _scalar_symbol(plus, co.tconj().reduced())
    N = 32
    C = _mat(self_commutator(phi, N))
    T_theta = _mat(
        toeplitz(MatrixSymbol.analytic(np.array([[theta.to_rational()]], dtype=object)), N)
    )
    # projection onto theta H^2 must annihilate ran [T*, T]
    proj = (T_theta @ T_theta.conj().T @ C)[: N // 2, :]
    assert np.linalg.norm(proj) < 1e-8 * max(1.0, np.linalg.norm(C))


def test_W_matrix_is_an_isometry(rng):
    theta = BlaschkeProduct.from_points([rand_disk(rng, 0.6) for _ in range(3)])
    W = W_matrix(theta, 2)
    G = W.conj().T @ W
    assert np.linalg.norm(G - np.eye(G.shape[0])) < 1e-9


def test_compression_of_shift_equals_M(rng):
    theta = BlaschkeProduct.from_points([rand_disk(rng, 0.6) for _ in range(3)])
    M = M_matrix(theta)
    C = compression(Rational.z(), theta)
    assert np.max(np.abs(M - C)) < 1e-10


def test_model_basis_orthonormal(rng):
    theta = BlaschkeProduct.from_points([rand_disk(rng, 0.5) for _ in range(3)])
    basis = model_basis(theta)
    zs = circle(2048, offset=0.0)
    vals = np.array([[complex(f(z)) for z in zs] for f in basis.phis])
    gram = vals @ vals.conj().T / len(zs)
    assert np.linalg.norm(gram - np.eye(theta.degree)) < 1e-6


def test_P_of_M_matches_compression(rng):
    theta = BlaschkeProduct.from_points([rand_disk(rng, 0.6) for _ in range(2)])
    coeffs = [
        rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3)
    ]
    assert verify_representation(coeffs, theta, 2) < 1e-9
    M = M_matrix(theta)
    PM = P_of_M(coeffs, M, n=2)
    assert PM.shape == (4, 4)


def test_rank_and_pseudoinverse_utilities(rng):
    A = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    A[:, 3] = A[:, 0] + A[:, 1]  # force rank 3
    assert numerical_rank(A) == 3
    Ap = moore_penrose(A)
    assert np.linalg.norm(A @ Ap @ A - A) < 1e-10
    H = A.conj().T @ A
    assert is_psd(H)
    assert not is_psd(-H)
