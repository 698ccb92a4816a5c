"""Truncated Toeplitz/Hankel numerics and the model-space machinery.

Operators are represented by dense block matrices over the first N+1
Fourier levels.  Commutators are assembled through the Hankel-product
identities, with the Toeplitz term computed from exact rational Laurent
coefficients, so that for rational symbols the truncation error is the
geometric Hankel tail alone.  The model-space half implements the
orthonormal basis of H(theta), the change-of-basis matrix W, the
triangular matrix M of the compressed shift and the P(M)/Q(M) calculus.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._rational import (
    Rational,
    rmat_add,
    rmat_eval,
    rmat_mul,
    rmat_reduced,
    rmat_sub,
    rmat_taylor,
    rmat_tconj,
)
from .errors import ConvergenceError, InputError
from .matrix_inner import _as_rmat
from .scalar_inner import BlaschkeProduct
from .symbol import MatrixSymbol

PSD_REL_TOL = 1e-8
RANK_REL_TOL = 1e-8


def default_truncation(inner_degree, n):
    return max(32, 4 * (int(inner_degree) + int(n)))


@dataclass
class FourierWindow:
    n: int
    N: int
    coeffs: np.ndarray  # shape (2N+1, n, n); index j+N holds A_j
    tail: float = 0.0

    def coeff(self, j):
        if abs(j) > self.N:
            return np.zeros((self.n, self.n), dtype=complex)
        return self.coeffs[j + self.N]


@dataclass
class OperatorMatrix:
    mat: np.ndarray
    kind: str
    n: int = 0
    N: int = 0

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    @property
    def shape(self):
        return self.mat.shape


def _mat(x):
    return x.mat if isinstance(x, OperatorMatrix) else np.asarray(x, dtype=complex)


# ---------------------------------------------------------------------------
# Fourier coefficients.
# ---------------------------------------------------------------------------


def fourier(phi, N):
    """Fourier window of a symbol via an M-point DFT of circle samples."""
    M = max(8 * N, 512)
    n = phi.n
    samples = np.zeros((M, n, n), dtype=complex)
    for k in range(M):
        samples[k] = phi.eval(np.exp(2j * np.pi * k / M))
    hat = np.fft.fft(samples, axis=0) / M
    coeffs = np.zeros((2 * N + 1, n, n), dtype=complex)
    for j in range(-N, N + 1):
        coeffs[j + N] = hat[j % M]
    rho = _decay_rate(phi)
    tail = float(rho ** max(M - N, 1) / (1.0 - rho)) if rho < 1.0 else np.inf
    return FourierWindow(n=n, N=N, coeffs=coeffs, tail=tail)


def _decay_rate(phi):
    """Geometric decay rate of the symbol's Fourier coefficients."""
    rho = 0.0
    for part in (phi.plus, phi.minus):
        for i in range(phi.n):
            for j in range(phi.n):
                p = part[i, j].poles()
                if p.size:
                    rho = max(rho, float(np.max(1.0 / np.abs(p))))
    return min(rho, 1.0 - 1e-12)


def symbol_coeffs(phi, kmax):
    """Exact Laurent coefficients: returns (plus_taylor, minus_taylor).

    A_j = plus_taylor[j] for j >= 0 and A_{-k} = minus_taylor[k]^* for k >= 1.
    """
    return rmat_taylor(phi.plus, kmax), rmat_taylor(phi.minus, kmax)


def _laurent_coeffs_rmat(G, kmax):
    """Laurent coefficients of a rational matrix valid on the circle."""
    n, m = G.shape
    out = np.zeros((2 * kmax + 1, n, m), dtype=complex)
    for i in range(n):
        for j in range(m):
            analytic, co = G[i, j].split_disk()
            if not analytic.is_zero:
                out[kmax:, i, j] = analytic.taylor(0.0, kmax)
            if not co.is_zero:
                neg = np.conj(co.tconj().taylor(0.0, kmax))
                out[:kmax, i, j] = neg[1:][::-1]
    return out


# ---------------------------------------------------------------------------
# Toeplitz and Hankel truncations.
# ---------------------------------------------------------------------------


def _block_toeplitz(coeff, N, n):
    """coeff(j) -> dense [(N+1)n]^2 matrix with block (i,j) = A_{i-j}."""
    T = np.zeros(((N + 1) * n, (N + 1) * n), dtype=complex)
    for i in range(N + 1):
        for j in range(N + 1):
            T[i * n : (i + 1) * n, j * n : (j + 1) * n] = coeff(i - j)
    return T


def _block_hankel(neg_coeff, N, n):
    """neg_coeff(k) = A_{-k}; block (i,j) = A_{-(i+j+1)}."""
    H = np.zeros(((N + 1) * n, (N + 1) * n), dtype=complex)
    for i in range(N + 1):
        for j in range(N + 1):
            H[i * n : (i + 1) * n, j * n : (j + 1) * n] = neg_coeff(i + j + 1)
    return H


def _coeff_fn_from_symbol(phi, kmax):
    plus_t, minus_t = symbol_coeffs(phi, kmax)
    zero = np.zeros((phi.n, phi.n), dtype=complex)

    def coeff(j):
        if j >= 0:
            return plus_t[j] if j <= kmax else zero
        k = -j
        return minus_t[k].conj().T if k <= kmax else zero

    return coeff


def toeplitz(phi, N):
    coeff = _coeff_fn_from_symbol(phi, N)
    return OperatorMatrix(_block_toeplitz(coeff, N, phi.n), "toeplitz", phi.n, N)


def hankel(phi, N):
    _, minus_t = symbol_coeffs(phi, N + N + 1)
    zero = np.zeros((phi.n, phi.n), dtype=complex)

    def neg(k):
        return minus_t[k].conj().T if k <= 2 * N + 1 else zero

    return OperatorMatrix(_block_hankel(neg, N, phi.n), "hankel", phi.n, N)


def _hankel_from_part(part_taylor, N, n):
    """Hankel of a conjugated analytic part: A_{-k} = C_k^*."""
    kmax = part_taylor.shape[0] - 1
    zero = np.zeros((n, n), dtype=complex)

    def neg(k):
        return part_taylor[k].conj().T if k <= kmax else zero

    return _block_hankel(neg, N, n)


def _crop(M, N, n):
    d = (N + 1) * n
    return M[:d, :d]


def _toeplitz_of_rmat(G, N, n):
    co = _laurent_coeffs_rmat(G, N)

    def coeff(j):
        return co[j + N]

    return _block_toeplitz(coeff, N, n)


def self_commutator(phi, N, margin=None):
    """[T_Phi^*, T_Phi] at truncation, via the Hankel-product route."""
    n = phi.n
    Nw = 2 * N + 8 if margin is None else N + margin
    plus_t, minus_t = symbol_coeffs(phi, Nw + Nw + 1)
    H_star = _hankel_from_part(plus_t, Nw, n)
    H_plain = _hankel_from_part(minus_t, Nw, n)
    raw = phi.raw_rmat()
    raw_star = rmat_tconj(raw)
    G = rmat_reduced(rmat_sub(rmat_mul(raw_star, raw), rmat_mul(raw, raw_star)))
    C = _crop(H_star.conj().T @ H_star - H_plain.conj().T @ H_plain, N, n)
    C = C + _toeplitz_of_rmat(G, N, n)
    C = 0.5 * (C + C.conj().T)
    return OperatorMatrix(C, "commutator", n, N)


def _cross_commutator(phi, psi, N):
    """[T_Psi^*, T_Phi] at truncation (Hankel route)."""
    n = phi.n
    Nw = 2 * N + 8
    plus_phi, minus_phi = symbol_coeffs(phi, 2 * Nw + 1)
    plus_psi, minus_psi = symbol_coeffs(psi, 2 * Nw + 1)
    H_phi = _hankel_from_part(minus_phi, Nw, n)
    H_psi = _hankel_from_part(minus_psi, Nw, n)
    H_phi_star = _hankel_from_part(plus_phi, Nw, n)
    H_psi_star = _hankel_from_part(plus_psi, Nw, n)
    raw_phi = phi.raw_rmat()
    raw_psi_star = rmat_tconj(psi.raw_rmat())
    G = rmat_reduced(
        rmat_sub(rmat_mul(raw_psi_star, raw_phi), rmat_mul(raw_phi, raw_psi_star))
    )
    C = _crop(
        H_phi_star.conj().T @ H_psi_star - H_psi.conj().T @ H_phi, N, n
    ) + _toeplitz_of_rmat(G, N, n)
    return C


def pair_commutator(phi, psi, N):
    """Block self-commutator of the pair (T_Phi, T_Psi)."""
    if phi.n != psi.n:
        raise InputError("pair symbols must share a dimension")
    C11 = _mat(self_commutator(phi, N))
    C22 = _mat(self_commutator(psi, N))
    C12 = _cross_commutator(phi, psi, N)
    C21 = _cross_commutator(psi, phi, N)
    top = np.hstack([C11, C12])
    bot = np.hstack([C21, C22])
    C = np.vstack([top, bot])
    C = 0.5 * (C + C.conj().T)
    return OperatorMatrix(C, "commutator", phi.n, N)


def pseudo_commutator(phi, psi, N):
    """[T_Psi^*, T_Phi]_p = H_{Phi+*}^* H_{Psi+*} - H_{Psi-*}^* H_{Phi-*}."""
    n = phi.n
    Nw = 2 * N + 8
    plus_phi, minus_phi = symbol_coeffs(phi, 2 * Nw + 1)
    plus_psi, minus_psi = symbol_coeffs(psi, 2 * Nw + 1)
    C = _crop(
        _hankel_from_part(plus_phi, Nw, n).conj().T @ _hankel_from_part(plus_psi, Nw, n)
        - _hankel_from_part(minus_psi, Nw, n).conj().T
        @ _hankel_from_part(minus_phi, Nw, n),
        N,
        n,
    )
    return OperatorMatrix(C, "commutator", n, N)


def tuple_pseudo_commutator(phis, N):
    """m x m block pseudo-selfcommutator of a tuple of symbols."""
    m = len(phis)
    blocks = [[_mat(pseudo_commutator(phis[i], phis[j], N)) for j in range(m)] for i in range(m)]
    C = np.block(blocks)
    C = 0.5 * (C + C.conj().T)
    return OperatorMatrix(C, "commutator", phis[0].n, N)


def pair_pseudo_commutator(phi, psi, N):
    return tuple_pseudo_commutator([phi, psi], N)


# ---------------------------------------------------------------------------
# PSD / rank / pseudoinverse helpers.
# ---------------------------------------------------------------------------


def min_eig(M):
    M = _mat(M)
    H = 0.5 * (M + M.conj().T)
    return float(np.min(np.linalg.eigvalsh(H))) if H.size else 0.0


def is_psd(M, tol=PSD_REL_TOL):
    M = _mat(M)
    H = 0.5 * (M + M.conj().T)
    if H.size == 0:
        return True
    w = np.linalg.eigvalsh(H)
    scale = max(float(np.max(np.abs(w))), 1e-300)
    return bool(w[0] >= -tol * scale)


def numerical_rank(M, tol=RANK_REL_TOL):
    M = _mat(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] < 1e-300:
        return 0
    return int(np.sum(s > tol * s[0]))


def moore_penrose(M, tol=RANK_REL_TOL):
    M = _mat(M)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    cut = tol * (s[0] if s.size else 0.0)
    inv = np.where(s > cut, 1.0 / np.where(s > cut, s, 1.0), 0.0)
    return Vh.conj().T @ np.diag(inv) @ U.conj().T


def schur_rank(A, B, C, tol=RANK_REL_TOL):
    """rank [[A, B], [B*, C]] = rank A + rank(C - B* A# B) for PSD blocks."""
    A, B, C = _mat(A), _mat(B), _mat(C)
    return numerical_rank(A, tol) + numerical_rank(C - B.conj().T @ moore_penrose(A, tol) @ B, tol)


# ---------------------------------------------------------------------------
# Model space machinery.
# ---------------------------------------------------------------------------


@dataclass
class ModelBasis:
    theta: BlaschkeProduct
    alphas: list
    qs: list
    phis: list = field(repr=False)


def model_basis(theta):
    """Takenaka-Malmquist orthonormal basis of H(theta)."""
    alphas = theta.expand_zeros()
    qs = [float(np.sqrt(1.0 - abs(a) ** 2)) for a in alphas]
    phis = []
    tail = Rational([1.0])
    for a, q in zip(alphas, qs):
        phis.append((Rational([q], [1.0, -np.conj(a)]) * tail).reduced())
        tail = (tail * Rational([-a, 1.0], [1.0, -np.conj(a)])).reduced()
    return ModelBasis(theta=theta, alphas=alphas, qs=qs, phis=phis)


def _adaptive_N(rho, extra, floor=32, tol=1e-16, cap=4000):
    if rho < 1e-12:
        return max(floor, extra)
    N = int(np.ceil(np.log(tol) / np.log(rho))) + extra
    return min(max(floor, N), cap)


def W_matrix(theta, n, N=None):
    """Columns: Fourier coefficients of phi_j (x) e_k up to level N."""
    basis = model_basis(theta)
    d = theta.degree
    if d == 0:
        raise InputError("model space of a constant inner function is trivial")
    maxa = max((abs(a) for a in basis.alphas), default=0.0)
    if N is None:
        N = _adaptive_N(maxa, d + 8)
    W = np.zeros(((N + 1) * n, d * n), dtype=complex)
    for j, phi_j in enumerate(basis.phis):
        c = phi_j.taylor(0.0, N)
        for k in range(n):
            W[k :: n, j * n + k] = c
    return W


def M_matrix(theta):
    """Lower-triangular matrix of the compressed shift on H(theta)."""
    basis = model_basis(theta)
    d = theta.degree
    a = basis.alphas
    q = basis.qs
    M = np.zeros((d, d), dtype=complex)
    for j in range(d):
        M[j, j] = a[j]
        for i in range(j + 1, d):
            prod = 1.0 + 0.0j
            for l in range(j + 1, i):
                prod *= -np.conj(a[l])
            M[i, j] = q[i] * q[j] * prod
    return M


def P_of_M(coeffs, M, n=None):
    """P(M) = sum_i kron(M^i, P_i) for a matrix polynomial P."""
    coeffs = [np.atleast_2d(np.asarray(c, dtype=complex)) for c in coeffs]
    d = M.shape[0]
    out = np.zeros((d * coeffs[0].shape[0], d * coeffs[0].shape[1]), dtype=complex)
    power = np.eye(d, dtype=complex)
    for c in coeffs:
        out += np.kron(power, c)
        power = power @ M
    return out


def Q_of_M(phi, M, kmax_factor=10):
    """Q(M) = Q_-(M)^* + Q_+(M) via the power series of M."""
    if not isinstance(phi, MatrixSymbol):
        raise InputError("Q_of_M expects a MatrixSymbol")
    d = M.shape[0]
    kmax = kmax_factor * d
    plus_t, minus_t = symbol_coeffs(phi, kmax)

    def series(coeff_t):
        norms = np.array([np.linalg.norm(coeff_t[k]) for k in range(kmax + 1)])
        suffix = np.maximum.accumulate(norms[::-1])[::-1]
        out = np.zeros((d * phi.n, d * phi.n), dtype=complex)
        power = np.eye(d, dtype=complex)
        for k in range(kmax + 1):
            if np.linalg.norm(power, 2) * suffix[k] < 1e-12:
                return out
            out += np.kron(power, coeff_t[k])
            power = power @ M
        if np.linalg.norm(power, 2) * (suffix[-1] if suffix.size else 0.0) >= 1e-12:
            raise ConvergenceError("Q(M) power series did not converge")
        return out

    return series(minus_t).conj().T + series(plus_t)


def compression(A, theta, N=None):
    """Matrix of the compression of T_A to H(I_theta) in the model basis."""
    A = _as_rmat(A)
    if isinstance(A, Rational):
        A = np.array([[A]], dtype=object)
    A = rmat_reduced(np.asarray(A, dtype=object))
    n = A.shape[0]
    rho = 0.0
    deg = 0
    for i in range(n):
        for j in range(n):
            p = A[i, j].poles()
            if p.size:
                rho = max(rho, float(np.max(1.0 / np.abs(p))))
            deg = max(deg, A[i, j].deg_num)
    maxa = max((abs(a) for a in theta.expand_zeros()), default=0.0)
    if N is None:
        N = _adaptive_N(max(rho, maxa), theta.degree + deg + 8)
    W = W_matrix(theta, n, N)
    coeffs = rmat_taylor(A, N)
    zero = np.zeros((n, n), dtype=complex)

    def coeff(j):
        return coeffs[j] if 0 <= j <= N else zero

    T = _block_toeplitz(coeff, N, n)
    return OperatorMatrix(W.conj().T @ T @ W, "compression", n, N)


def compression_kernel(A, theta, tol=RANK_REL_TOL):
    C = _mat(compression(A, theta))
    U, s, Vh = np.linalg.svd(C)
    smax = s[0] if s.size else 0.0
    keep = s <= tol * max(smax, 1e-300)
    return Vh[len(s) - int(np.sum(keep)) :].conj().T if np.any(keep) else np.zeros((C.shape[0], 0))


def verify_representation(coeffs, theta, n, N=None):
    """Residual of the identity W^* (T_P)_Theta W = P(M)."""
    coeffs = [np.atleast_2d(np.asarray(c, dtype=complex)) for c in coeffs]
    maxa = max((abs(a) for a in theta.expand_zeros()), default=0.0)
    if N is None:
        N = _adaptive_N(maxa, theta.degree + len(coeffs) + 8)
    W = W_matrix(theta, n, N)
    zero = np.zeros((n, n), dtype=complex)

    def coeff(j):
        return coeffs[j] if 0 <= j < len(coeffs) else zero

    T = _block_toeplitz(coeff, N, n)
    lhs = W.conj().T @ T @ W
    rhs = P_of_M(coeffs, M_matrix(theta), n)
    return float(np.linalg.norm(lhs - rhs, 2))


# ---------------------------------------------------------------------------
# Sup-norm estimation on the circle.
# ---------------------------------------------------------------------------


def sup_norm_on_circle(fn, samples=1024, levels=3):
    """Max spectral norm on the circle: coarse grid plus local refinement."""
    angles = 2.0 * np.pi * np.arange(samples) / samples

    def norm_at(t):
        v = fn(np.exp(1j * t))
        v = np.atleast_2d(np.asarray(v, dtype=complex))
        return float(np.linalg.norm(v, 2))

    vals = np.array([norm_at(t) for t in angles])
    best = float(np.max(vals))
    center = angles[int(np.argmax(vals))]
    width = 2.0 * np.pi / samples
    for _ in range(levels):
        local = center + np.linspace(-width, width, 33)
        lv = np.array([norm_at(t) for t in local])
        best = max(best, float(np.max(lv)))
        center = local[int(np.argmax(lv))]
        width /= 8.0
    return best
