"""Matrix inner functions as finite Blaschke-Potapov products.

A product is nu * prod_m (b_m P_m + (I - P_m)) with nu a constant unitary,
b_m scalar Blaschke factors and P_m orthogonal projections.  Divisibility,
degrees and coprimeness are all driven by factor extraction: at a zero
alpha of the determinant, the largest factor that can be peeled off has
projection range equal to a null space of the evaluated matrix.
"""

from __future__ import annotations

import numpy as np

from ._rational import (
    Rational,
    cluster_points,
    rmat_adjugate,
    rmat_close,
    rmat_det,
    rmat_eval,
    rmat_eye,
    rmat_mul,
    rmat_reduced,
    rmat_scale,
    rmat_zeros,
)
from .errors import CertificationError, InputError
from .scalar_inner import (
    BlaschkeProduct,
    ScalarInner,
    coprime_blaschke,
    gcd_inner,
    lcm_inner,
    same_zero,
)

NULLSPACE_REL_TOL = 1e-8


def _null_space(M, tol=NULLSPACE_REL_TOL):
    """Orthonormal basis of the right null space of M (columns)."""
    M = np.asarray(M, dtype=complex)
    if np.linalg.norm(M) < 1e-10:
        return np.eye(M.shape[1], dtype=complex)
    U, s, Vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * max(smax, 1e-300)))
    return Vh[rank:].conj().T


def _left_null_space(M, tol=NULLSPACE_REL_TOL):
    """Orthonormal basis of {v : M* v = 0} = orthocomplement of ran(M)."""
    return _null_space(np.asarray(M, dtype=complex).conj().T, tol)


def _blaschke_rat(alpha):
    a = complex(alpha)
    return Rational([-a, 1.0], [1.0, -np.conj(a)])


def _blaschke_rat_inv(alpha):
    a = complex(alpha)
    return Rational([1.0, -np.conj(a)], [-a, 1.0])


class PotapovFactor:
    """b_alpha * P + (I - P) for a Hermitian projection P."""

    __slots__ = ("alpha", "proj")

    def __init__(self, alpha, proj):
        alpha = complex(alpha)
        proj = np.asarray(proj, dtype=complex)
        if abs(alpha) >= 1.0:
            raise InputError("factor zero must lie in the open disk")
        if np.linalg.norm(proj @ proj - proj) > 1e-10:
            raise InputError("projection is not idempotent")
        if np.linalg.norm(proj - proj.conj().T) > 1e-10:
            raise InputError("projection is not Hermitian")
        self.alpha = alpha
        self.proj = proj

    @property
    def n(self):
        return self.proj.shape[0]

    @property
    def rank(self):
        return int(round(np.real(np.trace(self.proj))))

    def eval(self, z):
        b = ((z - self.alpha) / (1.0 - np.conj(self.alpha) * z))
        eye = np.eye(self.n, dtype=complex)
        return b * self.proj + (eye - self.proj)

    def to_rmat(self):
        b = _blaschke_rat(self.alpha)
        out = rmat_zeros(self.n)
        for i in range(self.n):
            for j in range(self.n):
                out[i, j] = (b - 1.0) * self.proj[i, j] + (1.0 if i == j else 0.0)
        return out

    def inverse_rmat(self):
        binv = _blaschke_rat_inv(self.alpha)
        out = rmat_zeros(self.n)
        for i in range(self.n):
            for j in range(self.n):
                out[i, j] = (binv - 1.0) * self.proj[i, j] + (1.0 if i == j else 0.0)
        return out


class PotapovProduct:
    """Constant unitary times an ordered product of Blaschke-Potapov factors."""

    __slots__ = ("nu", "factors")

    def __init__(self, nu, factors=()):
        nu = np.asarray(nu, dtype=complex)
        if np.linalg.norm(nu @ nu.conj().T - np.eye(nu.shape[0])) > 1e-8:
            raise InputError("leading constant is not unitary")
        self.nu = nu
        self.factors = tuple(factors)
        for f in self.factors:
            if f.n != nu.shape[0]:
                raise InputError("factor dimension mismatch")

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def diagonal_constant(cls, theta, n):
        """I_theta for a finite Blaschke product theta."""
        eye = np.eye(n, dtype=complex)
        factors = [PotapovFactor(a, eye) for a in theta.expand_zeros()]
        return cls(theta.constant * eye, factors)

    @property
    def n(self):
        return self.nu.shape[0]

    def eval(self, z):
        out = self.nu.copy()
        for f in self.factors:
            out = out @ f.eval(z)
        return out

    __call__ = eval

    def to_rmat(self):
        from ._rational import rmat_const

        out = rmat_const(self.nu)
        for f in self.factors:
            out = rmat_reduced(rmat_mul(out, f.to_rmat()))
        return out

    def __mul__(self, other):
        """Product of two Potapov products, refolded into standard form."""
        if self.n != other.n:
            raise InputError("dimension mismatch")
        # nu1 (prod F) nu2 (prod G) = (nu1 nu2) (nu2* F nu2 ...) (prod G)
        out_factors = [
            PotapovFactor(f.alpha, other.nu.conj().T @ f.proj @ other.nu)
            for f in self.factors
        ]
        out_factors.extend(other.factors)
        return PotapovProduct(self.nu @ other.nu, out_factors)

    def tilde(self):
        """T~(z) = T(conj(z))*: reversed factors with conjugated zeros."""
        nu_star = self.nu.conj().T
        out = []
        for f in reversed(self.factors):
            out.append(
                PotapovFactor(np.conj(f.alpha), self.nu @ f.proj @ self.nu.conj().T)
            )
        return PotapovProduct(nu_star, out)


def eval_potapov(T, z):
    return T.eval(z)


def det_potapov(T):
    c = np.linalg.det(T.nu)
    pts = []
    for f in T.factors:
        pts.extend([f.alpha] * f.rank)
    return BlaschkeProduct(cluster_points(pts, same_zero), c)


def degree_inner(T):
    return det_potapov(T).degree


def _as_rmat(obj):
    if isinstance(obj, PotapovProduct):
        return obj.to_rmat()
    return obj


def _det_disk_zeros(obj):
    """Clustered zeros (with multiplicity) of det(obj) inside the disk."""
    if isinstance(obj, PotapovProduct):
        return list(det_potapov(obj).zeros)
    d = rmat_det(obj).reduced()
    if d.is_zero:
        raise InputError("determinant vanishes identically")
    roots = [r for r in d.zeros() if abs(r) < 1.0 - 1e-9]
    return cluster_points(roots, same_zero)


def _analytic_eval(fn, z, radius=0.01, samples=16):
    """Mean-value evaluation of an analytic matrix function.

    Averaging over a small circle kills removable-singularity noise (the
    negative Laurent modes of the computed product average to zero), so the
    chain of factor inverses can be evaluated right at an extraction point.
    """
    ws = z + radius * np.exp(2j * np.pi * (np.arange(samples) + 0.5) / samples)
    return sum(fn(w) for w in ws) / samples


def potapov_from_rmat(F, det_blaschke, tol=NULLSPACE_REL_TOL):
    """Recover a Potapov product equal to the rational inner matrix F.

    ``det_blaschke`` carries the zeros of det(F); factors are extracted from
    the right at each zero (increasing modulus, ties by argument) until the
    remainder is a constant unitary.  F may be an rmat, a PotapovProduct, or
    a plain callable z -> matrix, analytic in the disk up to removable points.
    The remainder is never expanded as a rational matrix: it is evaluated
    pointwise as F times the closed-form factor inverses, which keeps the
    kernel computations at machine precision however many factors come out.
    """
    if isinstance(F, PotapovProduct):
        base = F.eval
    elif callable(F):
        base = F
    else:
        R0 = rmat_reduced(F)
        base = lambda z: rmat_eval(R0, z)
    n = _analytic_eval(base, 0.23 + 0.11j).shape[0]
    eye = np.eye(n, dtype=complex)
    budget = [[a, m] for a, m in det_blaschke.zeros]
    budget.sort(key=lambda am: (abs(am[0]), np.angle(am[0])))
    factors_rev = []

    def chain_eval(z):
        out = base(z)
        for f in factors_rev:
            binv = (1.0 - np.conj(f.alpha) * z) / (z - f.alpha)
            out = out @ (binv * f.proj + (eye - f.proj))
        return out

    while any(rem > 0 for _, rem in budget):
        for slot in budget:
            alpha, rem = slot
            if rem <= 0:
                continue
            V = _null_space(_analytic_eval(chain_eval, alpha), tol)
            r = V.shape[1]
            if r == 0:
                raise CertificationError(
                    f"no extractable kernel at determinant zero {alpha}"
                )
            if r > rem:
                raise CertificationError("kernel rank exceeds determinant budget")
            Pm = V @ V.conj().T
            fac = PotapovFactor(alpha, Pm)
            factors_rev.append(fac)
            slot[1] = rem - r
            break
    zs = [0.31 + 0.27j, -0.11 + 0.52j, 0.63 - 0.05j]
    vals = [_analytic_eval(chain_eval, z) for z in zs]
    nu = vals[0]
    if np.linalg.norm(nu @ nu.conj().T - np.eye(n)) > 1e-6:
        raise CertificationError("extraction remainder is not unitary")
    for v in vals[1:]:
        if np.linalg.norm(v - nu) > 1e-6:
            raise CertificationError("extraction remainder is not constant")
    T = PotapovProduct(nu, list(reversed(factors_rev)))
    if not _matrices_close(T, F):
        raise CertificationError("Potapov reconstruction mismatch")
    return T


def _as_pointwise(A):
    if isinstance(A, PotapovProduct):
        return A.eval
    if callable(A):
        return A
    return lambda z: rmat_eval(A, z)


def _matrices_close(A, B, tol=1e-7, samples=48):
    zs = np.exp(2j * np.pi * (np.arange(samples) + 0.413) / samples)
    fa = _as_pointwise(A)
    fb = _as_pointwise(B)
    scale = 1e-300
    worst = 0.0
    for z in zs:
        va, vb = fa(z), fb(z)
        scale = max(scale, np.linalg.norm(va), np.linalg.norm(vb))
        worst = max(worst, np.linalg.norm(va - vb))
    return worst <= tol * max(1.0, scale)


def equivalent_up_to_unitary(T1, T2, tol=1e-7):
    """Beurling-Lax-Halmos comparison: T1 = T2 * U for a constant unitary U."""
    z0 = np.exp(0.4173j)
    f1 = T1.eval if isinstance(T1, PotapovProduct) else (lambda z: rmat_eval(T1, z))
    f2 = T2.eval if isinstance(T2, PotapovProduct) else (lambda z: rmat_eval(T2, z))
    U = f2(z0).conj().T @ f1(z0)
    if np.linalg.norm(U @ U.conj().T - np.eye(U.shape[0])) > 1e-6:
        return False
    zs = np.exp(2j * np.pi * (np.arange(48) + 0.129) / 48)
    return all(np.linalg.norm(f1(z) - f2(z) @ U) <= tol * max(1.0, np.linalg.norm(f1(z))) for z in zs)


def char_scalar_inner(T):
    """Minimal scalar Blaschke m with m * T^{-1} analytic on the disk."""
    R = rmat_reduced(_as_rmat(T))
    if R.shape[0] != R.shape[1]:
        raise InputError("characteristic inner function needs a square matrix")
    det_b = det_potapov(T) if isinstance(T, PotapovProduct) else None
    zero_list = list(det_b.zeros) if det_b is not None else _det_disk_zeros(R)
    adj = rmat_reduced(rmat_adjugate(R))
    needed = []
    for alpha, mult in zero_list:
        v = None
        for i in range(R.shape[0]):
            for j in range(R.shape[1]):
                o = adj[i, j].order_at(alpha)
                if o is None:
                    continue
                v = o if v is None else min(v, o)
        if v is None:
            raise InputError("determinant vanishes identically")
        k = mult - v
        if k > 0:
            needed.append((alpha, k))
    return BlaschkeProduct(needed)


def is_left_inner_divisor(D, T, margin=1e-6):
    """True when D^{-1} T is analytic on the disk (so D left-divides T).

    D^{-1} T can only have poles at the disk zeros of det D, so it is enough
    to probe the negative Laurent coefficients of z -> D(z)^{-1} T(z) on a
    small circle around each such zero.  This avoids expanding the quotient
    as one rational matrix, which is numerically hopeless at higher degrees.
    """
    if isinstance(T, np.ndarray):
        for entry in T.flat:
            if not entry.is_analytic_in_disk(margin=margin):
                return False
    fD = _as_pointwise(D)
    fT = _as_pointwise(T)
    zeros = _det_disk_zeros(D)
    for alpha, mult in zeros:
        r = min(0.05, (1.0 - abs(alpha)) / 3.0)
        for beta, _ in zeros:
            if abs(beta - alpha) > 1e-12:
                r = min(r, abs(beta - alpha) / 3.0)
        N = 64
        ws = np.exp(2j * np.pi * (np.arange(N) + 0.5) / N)
        vals = [np.linalg.solve(fD(alpha + r * w), fT(alpha + r * w)) for w in ws]
        c0 = sum(vals) / N
        scale = max(1.0, np.linalg.norm(c0))
        for k in range(1, mult + 1):
            ck = sum(v * (r * w) ** k for v, w in zip(vals, ws)) / N
            if np.linalg.norm(ck) > margin * scale:
                return False
    return True


def extract_left_factor(T, alpha):
    """Peel the largest left factor at alpha: T = (b_a P + I - P) * remainder.

    Returns (None, T) when T(alpha) is invertible.
    """
    M = T.eval(alpha) if isinstance(T, PotapovProduct) else rmat_eval(T, alpha)
    V = _left_null_space(M)
    if V.shape[1] == 0:
        return None, T
    Pm = V @ V.conj().T
    fac = PotapovFactor(alpha, Pm)
    if isinstance(T, PotapovProduct):
        eye = np.eye(T.n, dtype=complex)

        def rem_eval(z):
            binv = (1.0 - np.conj(fac.alpha) * z) / (z - fac.alpha)
            return (binv * Pm + (eye - Pm)) @ T.eval(z)

        det_b = det_potapov(T).divide(BlaschkeProduct([(alpha, V.shape[1])]))
        remainder = potapov_from_rmat(rem_eval, det_b)
    else:
        remainder = rmat_reduced(rmat_mul(fac.inverse_rmat(), _as_rmat(T)))
    return fac, remainder


def right_coprime_pair(T1, T2):
    """No common right inner divisor: null T1(a) and null T2(a) meet trivially."""
    zeros = _det_disk_zeros(T1) + _det_disk_zeros(T2)
    f1 = T1.eval if isinstance(T1, PotapovProduct) else (lambda z: rmat_eval(T1, z))
    f2 = T2.eval if isinstance(T2, PotapovProduct) else (lambda z: rmat_eval(T2, z))
    for alpha, _ in zeros:
        stacked = np.vstack([f1(alpha), f2(alpha)])
        s = np.linalg.svd(stacked, compute_uv=False)
        if s[-1] <= NULLSPACE_REL_TOL * max(s[0], 1e-300):
            return False
    return True


def left_coprime_pair(T1, T2):
    zeros = _det_disk_zeros(T1) + _det_disk_zeros(T2)
    f1 = T1.eval if isinstance(T1, PotapovProduct) else (lambda z: rmat_eval(T1, z))
    f2 = T2.eval if isinstance(T2, PotapovProduct) else (lambda z: rmat_eval(T2, z))
    for alpha, _ in zeros:
        stacked = np.hstack([f1(alpha), f2(alpha)])
        s = np.linalg.svd(stacked, compute_uv=False)
        if s[-1] <= NULLSPACE_REL_TOL * max(s[0], 1e-300):
            return False
    return True


def coprime_with_scalar(A, theta):
    """Coprimeness of I_theta and an analytic matrix A via det A zero sets."""
    d = rmat_det(_as_rmat(A)).reduced()
    if d.is_zero:
        return theta.degree == 0
    zs = np.exp(2j * np.pi * (np.arange(64) + 0.211) / 64)
    scale = float(np.max(np.abs(d(zs))))
    for alpha, _ in theta.zeros:
        if abs(d(alpha)) <= 1e-8 * max(scale, 1e-300):
            return False
    return True


def left_gcd_with_scalar(G, sigma):
    """Greatest common left inner divisor of I_sigma and an analytic matrix G.

    Returns (delta_rmat, delta_det, reduced_G, cofactor) where
    delta * reduced_G = G and cofactor = delta^{-1} * sigma * I (analytic).
    """
    G = rmat_reduced(_as_rmat(G))
    n = G.shape[0]
    budget = [[a, m] for a, m in sigma.zeros]
    budget.sort(key=lambda am: (abs(am[0]), np.angle(am[0])))
    delta = rmat_eye(n)
    delta_det = BlaschkeProduct()
    cofactor = rmat_eye(n, scale=sigma.to_rational())
    acur = G
    progress = True
    while progress:
        progress = False
        for slot in budget:
            alpha, rem = slot
            if rem <= 0:
                continue
            V = _left_null_space(rmat_eval(acur, alpha))
            if V.shape[1] == 0:
                continue
            Pm = V @ V.conj().T
            fac = PotapovFactor(alpha, Pm)
            inv = fac.inverse_rmat()
            acur = rmat_reduced(rmat_mul(inv, acur))
            cofactor = rmat_reduced(rmat_mul(inv, cofactor))
            delta = rmat_reduced(rmat_mul(delta, fac.to_rmat()))
            delta_det = delta_det * BlaschkeProduct([(alpha, V.shape[1])])
            slot[1] = rem - 1
            progress = True
            break
    return delta, delta_det, acur, cofactor


class DiagonalConstantInner:
    """I_theta = theta * I for a scalar inner function theta."""

    __slots__ = ("theta",)

    def __init__(self, theta):
        if isinstance(theta, BlaschkeProduct):
            theta = ScalarInner(theta)
        self.theta = theta

    def eval(self, z, n):
        return self.theta(z) * np.eye(n, dtype=complex)

    def as_potapov(self, n):
        if not self.theta.is_blaschke:
            raise InputError("only Blaschke diagonal inners have Potapov form")
        return PotapovProduct.diagonal_constant(self.theta.blaschke, n)

    def __repr__(self):
        return f"DiagonalConstantInner({self.theta!r})"


def gcd_diagonal_family(thetas):
    acc = None
    for t in thetas:
        if isinstance(t, DiagonalConstantInner):
            t = t.theta
        s = t if isinstance(t, ScalarInner) else ScalarInner(t)
        acc = s if acc is None else gcd_inner(acc, s)
    if acc is None:
        raise InputError("empty family")
    return DiagonalConstantInner(acc)


def lcm_diagonal_family(thetas):
    acc = None
    for t in thetas:
        if isinstance(t, DiagonalConstantInner):
            t = t.theta
        s = t if isinstance(t, ScalarInner) else ScalarInner(t)
        acc = s if acc is None else lcm_inner(acc, s)
    if acc is None:
        raise InputError("empty family")
    return DiagonalConstantInner(acc)
