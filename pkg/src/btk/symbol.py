"""Matrix rational symbols Phi = Phi_-^* + Phi_+ and their factorizations.

``MatrixSymbol`` stores the two analytic halves: ``plus`` (which keeps the
constant term) and ``minus`` (normalized so minus(0) = 0); the boundary
symbol is plus(z) + minus(z)^* for |z| = 1.  The module provides the
splitting of raw Laurent-rational matrices, scalar coprime decompositions
f = theta * conj(a), the left/right Douglas-Shapiro-Shields coprime
factorizations, inner-outer factorization, tensored-scalar singularity
detection and the Delta-lowering/raising transforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from ._rational import (
    Rational,
    rat_one,
    rat_zero,
    rmat,
    rmat_close,
    rmat_det,
    rmat_eval,
    rmat_eye,
    rmat_is_zero,
    rmat_mul,
    rmat_reduced,
    rmat_scale,
    rmat_sub,
    rmat_tconj,
    rmat_tilde,
    rmat_zeros,
)
from .errors import CertificationError, InputError
from .matrix_inner import (
    PotapovProduct,
    _as_rmat,
    _det_disk_zeros,
    _left_null_space,
    degree_inner,
    det_potapov,
    left_gcd_with_scalar,
    potapov_from_rmat,
)
from .scalar_inner import (
    BlaschkeProduct,
    cluster_points,
    disk_zeros_of_rational,
    gcd_blaschke,
    lcm_blaschke,
    same_zero,
)


@dataclass(frozen=True)
class LaurentRational:
    """z^zshift * num(z) / den(z); den must stay away from the circle."""

    num: tuple
    den: tuple = (1.0,)
    zshift: int = 0

    def to_rational(self):
        num = list(self.num)
        den = list(self.den)
        if self.zshift >= 0:
            num = [0.0] * self.zshift + num
        else:
            den = [0.0] * (-self.zshift) + den
        r = Rational(num, den)
        p = r.poles()
        circle = p[np.abs(np.abs(p) - 1.0) < 1e-8] if p.size else p
        if circle.size:
            raise InputError(f"denominator root on the unit circle: {circle}")
        return r


class MatrixSymbol:
    """Phi = minus(z)^* + plus(z) on the circle, both halves analytic."""

    __slots__ = ("n", "plus", "minus")

    def __init__(self, plus, minus, validate=True):
        plus = rmat_reduced(plus)
        minus = rmat_reduced(minus)
        if plus.shape != minus.shape or plus.shape[0] != plus.shape[1]:
            raise InputError("plus/minus must be square and equal-sized")
        if validate:
            for part, name in ((plus, "plus"), (minus, "minus")):
                for i in range(part.shape[0]):
                    for j in range(part.shape[1]):
                        if not part[i, j].is_analytic_in_disk():
                            raise InputError(f"{name}[{i}][{j}] is not analytic")
            at0 = rmat_eval(minus, 0.0)
            if np.linalg.norm(at0) > 1e-9 * max(1.0, _scale_of(minus)):
                raise InputError("minus part must vanish at 0")
        self.n = plus.shape[0]
        self.plus = plus
        self.minus = minus

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_raw(cls, raw):
        return split(raw)

    @classmethod
    def scalar(cls, plus, minus):
        return cls(rmat([[plus]]), rmat([[minus]]))

    @classmethod
    def analytic(cls, plus):
        plus = _as_rmat(plus)
        return cls(plus, rmat_zeros(plus.shape[0]))

    # -- evaluation -------------------------------------------------------

    def eval(self, z):
        return rmat_eval(self.plus, z) + rmat_eval(self.minus, z).conj().T

    __call__ = eval

    def raw_rmat(self):
        """The boundary symbol as a single rational matrix (valid on the circle)."""
        return rmat_reduced(_radd(self.plus, rmat_tconj(self.minus)))

    def adjoint(self):
        """The symbol Phi^*."""
        c = rmat_eval(self.plus, 0.0).conj().T
        new_plus = rmat_reduced(_radd(self.minus, _const_rmat(c)))
        new_minus = rmat_reduced(_rsub_const(self.plus, rmat_eval(self.plus, 0.0)))
        return MatrixSymbol(new_plus, new_minus)

    @property
    def is_analytic(self):
        return rmat_is_zero(self.minus)

    @property
    def is_coanalytic(self):
        return all(
            self.plus[i, j].is_constant or self.plus[i, j].is_zero
            for i in range(self.n)
            for j in range(self.n)
        )

    def __repr__(self):
        return f"MatrixSymbol(n={self.n})"


def _scale_of(part):
    zs = np.exp(2j * np.pi * (np.arange(16) + 0.377) / 16)
    return max(float(np.linalg.norm(rmat_eval(part, z))) for z in zs)


def _radd(A, B):
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j] + B[i, j]
    return out


def _const_rmat(mat):
    from ._rational import rmat_const

    return rmat_const(mat)


def _rsub_const(A, mat):
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j] - complex(mat[i, j])
    return out


def split(raw):
    """Split a raw rational matrix into a MatrixSymbol.

    Poles inside the disk (including negative powers of z) are reflected to
    the ``minus`` half; everything else, constants included, stays in
    ``plus``.  The reconstruction is verified on circle samples.
    """
    raw = np.asarray(raw, dtype=object)
    entries = np.empty(raw.shape, dtype=object)
    for i in range(raw.shape[0]):
        for j in range(raw.shape[1]):
            e = raw[i, j]
            if isinstance(e, LaurentRational):
                e = e.to_rational()
            elif not isinstance(e, Rational):
                e = Rational.const(e)
            entries[i, j] = e
    n = entries.shape[0]
    plus = rmat_zeros(n)
    minus = rmat_zeros(n)
    for i in range(n):
        for j in range(n):
            analytic, co = entries[i, j].split_disk()
            plus[i, j] = analytic
            minus[j, i] = co.tconj()
    sym = MatrixSymbol(plus, minus)
    zs = np.exp(2j * np.pi * (np.arange(256) + 0.391) / 256)
    worst = 0.0
    scale = 1e-300
    for z in zs:
        a = rmat_eval(entries, z)
        b = sym.eval(z)
        worst = max(worst, np.linalg.norm(a - b))
        scale = max(scale, np.linalg.norm(a))
    if worst > 1e-10 * max(1.0, scale):
        raise CertificationError("symbol split failed to reconstruct")
    return sym


# ---------------------------------------------------------------------------
# Scalar coprime decomposition and the naive scalar pull-out.
# ---------------------------------------------------------------------------


def scalar_coprime_decomp(f, tol=1e-8):
    """Write an analytic rational f as theta * conj(a) on the circle.

    theta is the minimal finite Blaschke product absorbing the degree
    overflow (a power of z) and the reflected pole data of f; a is analytic
    with a(zero of theta) != 0.  The identity is certified on samples.
    """
    if not isinstance(f, Rational):
        f = Rational.const(f)
    f = f.reduced()
    if f.is_zero:
        return BlaschkeProduct(), rat_zero()
    if not f.is_analytic_in_disk():
        raise InputError("scalar_coprime_decomp needs an analytic function")
    pts = [0.0] * max(0, f.deg_num - f.deg_den)
    for p in f.poles():
        pts.append(1.0 / np.conj(p))
    theta = BlaschkeProduct.from_points(pts)

    def build(th):
        return (th.to_rational() * f.tconj()).reduced()

    a = build(theta)
    common = gcd_blaschke(theta, disk_zeros_of_rational(a))
    if common.degree > 0:
        theta = theta.divide(common)
        a = build(theta)
    if not a.is_analytic_in_disk():
        raise CertificationError("coprime decomposition produced a non-analytic cofactor")
    zs = np.exp(2j * np.pi * (np.arange(64) + 0.183) / 64)
    lhs = f(zs)
    rhs = theta(zs) * np.conj(a(zs))
    scale = max(float(np.max(np.abs(lhs))), 1.0)
    if float(np.max(np.abs(lhs - rhs))) > tol * scale:
        raise CertificationError("coprime decomposition identity failed")
    return theta, a


def naive_scalar_pullout(part):
    """part = theta * A^* entrywise: theta = lcm of the entry inners."""
    part = rmat_reduced(_as_rmat(part))
    n, m = part.shape
    thetas = np.empty((n, m), dtype=object)
    cofs = np.empty((n, m), dtype=object)
    theta = BlaschkeProduct()
    for i in range(n):
        for j in range(m):
            th, a = scalar_coprime_decomp(part[i, j])
            thetas[i, j] = th
            cofs[i, j] = a
            theta = lcm_blaschke(theta, th)
    A = rmat_zeros(m, n)
    for i in range(n):
        for j in range(m):
            if cofs[i, j].is_zero:
                A[j, i] = rat_zero()
            else:
                extra = theta.divide(thetas[i, j])
                A[j, i] = (cofs[i, j] * extra.to_rational()).reduced()
    return theta, A


# ---------------------------------------------------------------------------
# Douglas-Shapiro-Shields coprime factorizations.
# ---------------------------------------------------------------------------


@dataclass
class CoprimeFactorization:
    side: str
    inner: PotapovProduct
    outerish: np.ndarray
    scalar_form: tuple | None = None

    @property
    def degree(self):
        return degree_inner(self.inner)


def dss_left(part, tol=1e-8):
    """part = A_l^* Omega_l with (A_l, Omega_l) left coprime."""
    part = rmat_reduced(_as_rmat(part))
    n = part.shape[0]
    if rmat_is_zero(part):
        return CoprimeFactorization(
            "left", PotapovProduct.identity(n), rmat_zeros(n), (BlaschkeProduct(), rmat_zeros(n))
        )
    theta, A = naive_scalar_pullout(part)
    delta, delta_det, a_l, omega_rmat = left_gcd_with_scalar(A, theta)
    omega_det = BlaschkeProduct([(a, m * n) for a, m in theta.zeros], theta.constant**n).divide(
        delta_det
    )
    inner = potapov_from_rmat(omega_rmat, omega_det)
    recon = rmat_mul(rmat_tconj(a_l), omega_rmat)
    if not rmat_close(recon, part, tol=tol):
        raise CertificationError("left DSS reconstruction failed")
    _certify_left_coprime(a_l, inner)
    scalar_form = (theta, A) if delta_det.degree == 0 else None
    return CoprimeFactorization("left", inner, a_l, scalar_form)


def dss_right(part, tol=1e-8):
    """part = Omega_r A_r^* with (Omega_r, A_r) right coprime."""
    part = rmat_reduced(_as_rmat(part))
    n = part.shape[0]
    if rmat_is_zero(part):
        return CoprimeFactorization(
            "right", PotapovProduct.identity(n), rmat_zeros(n), (BlaschkeProduct(), rmat_zeros(n))
        )
    fl = dss_left(rmat_tilde(part), tol=tol)
    inner = fl.inner.tilde()
    a_r = rmat_tilde(fl.outerish)
    recon = rmat_mul(inner.to_rmat(), rmat_tconj(a_r))
    if not rmat_close(recon, part, tol=tol):
        raise CertificationError("right DSS reconstruction failed")
    _certify_right_coprime(inner, a_r)
    scalar_form = None
    if fl.scalar_form is not None:
        th, A = fl.scalar_form
        scalar_form = (
            BlaschkeProduct([(np.conj(a), m) for a, m in th.zeros], np.conj(th.constant)),
            rmat_tilde(A),
        )
    return CoprimeFactorization("right", inner, a_r, scalar_form)


def _certify_left_coprime(a_l, inner):
    for alpha, _ in det_potapov(inner).zeros:
        stacked = np.hstack([rmat_eval(a_l, alpha), inner.eval(alpha)])
        s = np.linalg.svd(stacked, compute_uv=False)
        if s[-1] <= 1e-8 * max(s[0], 1e-300):
            raise CertificationError("left coprimeness certificate failed")


def _certify_right_coprime(inner, a_r):
    for alpha, _ in det_potapov(inner).zeros:
        stacked = np.vstack([inner.eval(alpha), rmat_eval(a_r, alpha)])
        s = np.linalg.svd(stacked, compute_uv=False)
        if s[-1] <= 1e-8 * max(s[0], 1e-300):
            raise CertificationError("right coprimeness certificate failed")


def degree_symbol(phi, part="minus"):
    """dim H(Theta) for the chosen half; left and right routes must agree."""
    mat = phi.minus if part == "minus" else phi.plus
    if rmat_is_zero(mat):
        return 0
    dr = dss_right(mat).degree
    dl = dss_left(mat).degree
    if dr != dl:
        raise CertificationError(f"left/right degree mismatch: {dl} vs {dr}")
    return dr


def tensored_singularity(phi, part="minus"):
    """Full-matrix zeros (with orders) of the right-coprime inner factor.

    Reports every alpha where the inner factor Theta vanishes entirely,
    together with the largest p such that I_{b_alpha^p} left-divides Theta.
    """
    mat = phi.minus if part == "minus" else phi.plus
    if rmat_is_zero(mat):
        return []
    inner = dss_right(mat).inner
    R = inner.to_rmat()
    out = []
    scale = max(1.0, _scale_of(R))
    for alpha, _ in det_potapov(inner).zeros:
        if np.linalg.norm(inner.eval(alpha)) > 1e-8 * scale:
            continue
        p = None
        for i in range(R.shape[0]):
            for j in range(R.shape[1]):
                o = R[i, j].order_at(alpha)
                if o is None:
                    continue
                p = o if p is None else min(p, o)
        if p and p >= 1:
            out.append((alpha, p))
    return out


def is_normal(phi, tol=1e-8, samples=256):
    zs = np.exp(2j * np.pi * (np.arange(samples) + 0.253) / samples)
    worst, scale = 0.0, 1.0
    for z in zs:
        v = phi.eval(z)
        worst = max(worst, np.linalg.norm(v @ v.conj().T - v.conj().T @ v))
        scale = max(scale, np.linalg.norm(v) ** 2)
    return worst <= tol * scale


def commutes(phi, psi, tol=1e-8, samples=256):
    zs = np.exp(2j * np.pi * (np.arange(samples) + 0.253) / samples)
    worst, scale = 0.0, 1.0
    for z in zs:
        a, b = phi.eval(z), psi.eval(z)
        worst = max(worst, np.linalg.norm(a @ b - b @ a))
        scale = max(scale, np.linalg.norm(a) * np.linalg.norm(b))
    return worst <= tol * scale


def inner_outer(F, tol=1e-8):
    """F = F_i * F_e with F_i a Potapov product and F_e outer.

    The factors of F_i come from left kernels of F evaluated pointwise
    (with mean-value regularization at the extraction points); the outer
    part is then recovered by sampling F_i(z)^{-1} F(z) on the circle,
    where F_i is unitary, and reading the numerator coefficients off an
    inverse FFT.  No chained rational remainders are formed.
    """
    from .matrix_inner import PotapovFactor, PotapovProduct, _analytic_eval, _left_null_space

    F = rmat_reduced(_as_rmat(F))
    n = F.shape[0]
    det = rmat_det(F).reduced()
    if det.is_zero:
        raise InputError("inner-outer factorization needs det F != 0")
    budget = _det_disk_zeros(F)
    budget = sorted(([a, m] for a, m in budget), key=lambda am: (abs(am[0]), np.angle(am[0])))
    eye = np.eye(n, dtype=complex)
    factors = []

    def cur_eval(z):
        # peel in extraction order: the k-th factor inverse applies after
        # the first k-1 have already been taken off the left
        out = rmat_eval(F, z)
        for f in factors:
            binv = (1.0 - np.conj(f.alpha) * z) / (z - f.alpha)
            out = (binv * f.proj + (eye - f.proj)) @ out
        return out

    for slot in budget:
        alpha, rem = slot
        while rem > 0:
            V = _left_null_space(_analytic_eval(cur_eval, alpha))
            if V.shape[1] == 0:
                raise CertificationError("inner-outer extraction stalled")
            fac = PotapovFactor(alpha, V @ V.conj().T)
            factors.append(fac)
            rem -= fac.rank
        if rem < 0:
            raise CertificationError("inner-outer extraction overshot")
    F_i = PotapovProduct(eye, factors)

    # common denominator and degree budget for the outer part
    den = np.array([1.0 + 0.0j])
    gap = 0
    for entry in F.flat:
        den = P.polymul(den, entry.den)
        gap = max(gap, len(entry.num) - len(entry.den))
    degmax = (len(den) - 1) + max(gap, 0)
    M = 1
    while M < 2 * (degmax + 8):
        M *= 2
    zs = np.exp(2j * np.pi * np.arange(M) / M)
    den_vals = P.polyval(zs, den)
    samples = np.empty((M, n, n), dtype=complex)
    for m, z in enumerate(zs):
        samples[m] = np.linalg.solve(F_i.eval(z), rmat_eval(F, z)) * den_vals[m]
    cur = np.empty((n, n), dtype=object)
    scale = max(1.0, float(np.max(np.abs(samples))))
    for i in range(n):
        for j in range(n):
            coeffs = np.fft.fft(samples[:, i, j]) / M
            if np.max(np.abs(coeffs[degmax + 1 :])) > 1e-7 * scale:
                raise CertificationError("outer part is not rational at the expected degree")
            cur[i, j] = Rational(coeffs[: degmax + 1], den).reduced()
    check = np.exp(2j * np.pi * (np.arange(48) + 0.413) / 48)
    worst, big = 0.0, 1.0
    for z in check:
        target = rmat_eval(F, z)
        got = F_i.eval(z) @ rmat_eval(cur, z)
        worst = max(worst, float(np.linalg.norm(got - target)))
        big = max(big, float(np.linalg.norm(target)))
    if worst > tol * big:
        raise CertificationError("inner-outer reconstruction failed")
    det_e = rmat_det(cur).reduced()
    if any(abs(r) < 1.0 - 1e-8 for r in det_e.zeros()):
        raise CertificationError("outer certificate failed: interior zero remains")
    return F_i, cur


def outer_test(F):
    """Outerness via the inner parts of the maximal minors."""
    from itertools import combinations

    F = rmat_reduced(_as_rmat(F))
    m, n = F.shape
    if m > n:
        F = F.T
        m, n = n, m
    acc = None
    for cols in combinations(range(n), m):
        minor = rmat_det(F[:, list(cols)]).reduced()
        if minor.is_zero:
            continue
        inner = disk_zeros_of_rational(minor)
        acc = inner if acc is None else gcd_blaschke(acc, inner)
        if acc.degree == 0:
            return True
    if acc is None:
        return False
    return acc.degree == 0


def compose_symbol(F, omega):
    """Entrywise composition with a finite Blaschke product omega."""
    w = omega if isinstance(omega, Rational) else omega.to_rational()
    if isinstance(F, MatrixSymbol):
        raw = F.raw_rmat()
        comp = np.empty(raw.shape, dtype=object)
        for i in range(raw.shape[0]):
            for j in range(raw.shape[1]):
                comp[i, j] = raw[i, j].compose_poly(w)
        return split(comp)
    mat = rmat_reduced(_as_rmat(F))
    out = np.empty(mat.shape, dtype=object)
    for i in range(mat.shape[0]):
        for j in range(mat.shape[1]):
            out[i, j] = mat[i, j].compose_poly(w)
    return rmat_reduced(out)


# ---------------------------------------------------------------------------
# Lowering and raising transforms.
# ---------------------------------------------------------------------------


def _as_delta_rmat(delta, n):
    if isinstance(delta, PotapovProduct):
        return delta.to_rmat()
    if isinstance(delta, BlaschkeProduct):
        return rmat_eye(n, scale=delta.to_rational())
    if isinstance(delta, Rational):
        return rmat_eye(n, scale=delta)
    if delta is None:
        return rmat_eye(n)
    return np.asarray(delta, dtype=object)


def _project_minus(G):
    """Strictly-negative-mode part of a rational matrix, as a minus half."""
    n = G.shape[0]
    minus = rmat_zeros(n)
    for i in range(n):
        for j in range(n):
            _, co = G[i, j].split_disk()
            minus[j, i] = co.tconj()
    return minus


def _project_plus_h0(G):
    """Projection onto H^2_0: analytic part with the constant removed."""
    n = G.shape[0]
    plus = rmat_zeros(n)
    for i in range(n):
        for j in range(n):
            analytic, _ = G[i, j].split_disk()
            plus[i, j] = (analytic - analytic(0.0)).reduced()
    return plus


def lower(phi, delta1=None, delta2=None):
    """Phi_{D1,D2} = P_minus(Phi_-^* D1) + P_{H0}(D2^* Phi_+)."""
    d1 = _as_delta_rmat(delta1, phi.n)
    d2 = _as_delta_rmat(delta2, phi.n)
    g1 = rmat_reduced(rmat_mul(rmat_tconj(phi.minus), d1))
    g2 = rmat_reduced(rmat_mul(rmat_tconj(d2), phi.plus))
    return MatrixSymbol(_project_plus_h0(g2), _project_minus(g1))


def upper(phi, delta1=None, delta2=None):
    """Phi^{D1,D2} = P_minus(D1 Phi_-^*) + P_{H0}(Phi_+ D2^*)."""
    d1 = _as_delta_rmat(delta1, phi.n)
    d2 = _as_delta_rmat(delta2, phi.n)
    g1 = rmat_reduced(rmat_mul(d1, rmat_tconj(phi.minus)))
    g2 = rmat_reduced(rmat_mul(phi.plus, rmat_tconj(d2)))
    return MatrixSymbol(_project_plus_h0(g2), _project_minus(g1))
