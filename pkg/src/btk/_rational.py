"""Rational function plumbing used by every other module.

A :class:`Rational` is a quotient of two complex polynomials stored as
ascending coefficient arrays.  The class supports the handful of operations
the rest of the toolkit needs: arithmetic, evaluation, the circle conjugate
f~(z) = conj(f(1/conj(z))) (whose boundary values are conj(f) on the unit
circle), Taylor jets at interior points, and the splitting of a function
with no poles on the circle into an analytic part and a strictly proper
co-analytic part.

Matrices of rationals are plain numpy object arrays; the ``rmat_*`` helpers
at the bottom implement the matrix-level arithmetic.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InputError, PoleOnCircleError

_TRIM_REL = 1e-12
# Sample angles used for cheap "are these the same function" checks.  Kept
# away from the lattice points most test fixtures use.
_CHECK_ANGLES = 2.0 * np.pi * (np.arange(17) + 0.318) / 17.0
_CHECK_POINTS = np.exp(1j * _CHECK_ANGLES)


def trim(c):
    """Drop trailing coefficients that are negligible relative to the rest."""
    c = np.atleast_1d(np.asarray(c, dtype=complex)).ravel()
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0.0 or not np.isfinite(scale):
        if not np.isfinite(scale):
            raise InputError("non-finite polynomial coefficient")
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(c) > _TRIM_REL * scale)[0]
    return c[: keep[-1] + 1].copy()


def poly_roots(c):
    """Roots of an ascending-coefficient polynomial.

    Companion-matrix eigenvalues followed by one Newton polish step.
    """
    c = trim(c)
    if len(c) == 1:
        return np.zeros(0, dtype=complex)
    r = P.polyroots(c)
    dc = P.polyder(c)
    fv = P.polyval(r, c)
    dv = P.polyval(r, dc)
    ok = np.abs(dv) > 1e-30
    step = np.zeros_like(r)
    step[ok] = fv[ok] / dv[ok]
    # Do not polish across a large step; near multiple roots Newton can jump.
    step[np.abs(step) > 0.1] = 0.0
    return r - step


def poly_shift(c, alpha):
    """Coefficients of p(z + alpha) from those of p(z)."""
    out = np.zeros(1, dtype=complex)
    for coef in np.asarray(c, dtype=complex)[::-1]:
        out = P.polyadd(P.polymul(out, [alpha, 1.0]), [coef])
    return np.atleast_1d(out)


def cluster_points(points, same):
    """Greedy clustering of a point list under the predicate ``same``.

    Returns a list of (representative, count) pairs; representatives are the
    running mean of each cluster, which recovers most of the precision lost
    by multiple roots (their computed values scatter symmetrically).
    """
    reps: list[complex] = []
    counts: list[int] = []
    for p in points:
        for i, r in enumerate(reps):
            if same(r, p):
                reps[i] = (r * counts[i] + complex(p)) / (counts[i] + 1)
                counts[i] += 1
                break
        else:
            reps.append(complex(p))
            counts.append(1)
    return list(zip(reps, counts))


class Rational:
    """Quotient of two polynomials in ascending coefficient order."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1.0,)):
        num = trim(num)
        den = trim(den)
        if len(den) == 1 and den[0] == 0:
            raise ZeroDivisionError("denominator is identically zero")
        s = den[np.argmax(np.abs(den))]
        self.num = num / s
        self.den = den / s

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c):
        return cls([complex(c)])

    @classmethod
    def z(cls):
        return cls([0.0, 1.0])

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        roots = np.asarray(list(roots), dtype=complex)
        if roots.size == 0:
            return cls([complex(lead)])
        return cls(complex(lead) * P.polyfromroots(roots))

    # -- basic queries ----------------------------------------------------

    @property
    def deg_num(self):
        return len(self.num) - 1

    @property
    def deg_den(self):
        return len(self.den) - 1

    @property
    def is_zero(self):
        return len(self.num) == 1 and self.num[0] == 0

    @property
    def is_constant(self):
        return self.deg_num == 0 and self.deg_den == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        v = P.polyval(z, self.num) / P.polyval(z, self.den)
        return v if v.shape else complex(v)

    def __repr__(self):
        return f"Rational(num={self.num!r}, den={self.den!r})"

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Rational):
            return other
        return Rational.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        num = P.polyadd(P.polymul(self.num, o.den), P.polymul(o.num, self.den))
        return Rational(num, P.polymul(self.den, o.den)).reduced()

    __radd__ = __add__

    def __neg__(self):
        return Rational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        return Rational(P.polymul(self.num, o.num), P.polymul(self.den, o.den)).reduced()

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("division by the zero rational")
        return Rational(P.polymul(self.num, o.den), P.polymul(self.den, o.num)).reduced()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # -- simplification ---------------------------------------------------

    def reduced(self):
        """Cancel numerically matching numerator/denominator roots.

        The candidate is accepted only if it reproduces the original on a
        fixed circle sample; otherwise the original is returned unchanged.
        """
        if self.is_zero:
            return Rational([0.0])
        if self.deg_num == 0 or self.deg_den == 0:
            return self
        root_n = list(poly_roots(self.num))
        root_d = list(poly_roots(self.den))
        # Multiple roots scatter by roughly eps^(1/m) under roundoff, so try
        # a loose matching tolerance first; the sample check rejects misuse.
        for tol, rtol in ((1e-4, 1e-11), (1e-7, 1e-8)):
            rn = list(root_n)
            rd = list(root_d)
            keep_n = []
            cancelled = False
            for r in rn:
                hit = None
                for i, s in enumerate(rd):
                    if abs(r - s) < tol * (1.0 + abs(s)):
                        hit = i
                        break
                if hit is None:
                    keep_n.append(r)
                else:
                    rd.pop(hit)
                    cancelled = True
            if not cancelled:
                continue
            lead = self.num[-1] / self.den[-1]
            cand = Rational(
                complex(lead) * P.polyfromroots(keep_n) if keep_n else [complex(lead)],
                P.polyfromroots(rd) if rd else [1.0],
            )
            if self._same_function(cand, rtol=rtol):
                return cand
        return self

    def _same_function(self, other, rtol=1e-8):
        a = P.polyval(_CHECK_POINTS, self.num) * P.polyval(_CHECK_POINTS, other.den)
        b = P.polyval(_CHECK_POINTS, other.num) * P.polyval(_CHECK_POINTS, self.den)
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return np.max(np.abs(a - b)) <= rtol * scale

    # -- analytic structure -----------------------------------------------

    def poles(self):
        return poly_roots(self.reduced().den)

    def zeros(self):
        return poly_roots(self.reduced().num)

    def is_analytic_in_disk(self, margin=1e-6):
        """True when every pole lies strictly outside the closed disk."""
        p = self.poles()
        return bool(np.all(np.abs(p) > 1.0 + margin)) if p.size else True

    def tconj(self):
        """The function with boundary values conj(f) on the unit circle.

        Explicitly f~(z) = conj(f(1/conj(z))); reverses and conjugates both
        coefficient arrays, balancing with a power of z.
        """
        if self.is_zero:
            return Rational([0.0])
        n = np.conj(self.num)[::-1]
        d = np.conj(self.den)[::-1]
        k = (len(self.den) - 1) - (len(self.num) - 1)
        if k >= 0:
            n = np.concatenate([np.zeros(k, dtype=complex), n])
        else:
            d = np.concatenate([np.zeros(-k, dtype=complex), d])
        return Rational(n, d)

    def tilde(self):
        """f~(z) = conj(f(conj(z))): conjugate all coefficients."""
        return Rational(np.conj(self.num), np.conj(self.den))

    def deriv(self):
        num = P.polysub(
            P.polymul(P.polyder(self.num), self.den),
            P.polymul(self.num, P.polyder(self.den)),
        )
        return Rational(num, P.polymul(self.den, self.den)).reduced()

    def taylor(self, alpha, kmax):
        """Taylor coefficients f(z) = sum c_k (z-alpha)^k, k = 0..kmax."""
        n = poly_shift(self.num, alpha)
        d = poly_shift(self.den, alpha)
        if abs(d[0]) < 1e-12 * np.max(np.abs(d)):
            raise InputError(f"Taylor expansion at a pole: {alpha}")
        c = np.zeros(kmax + 1, dtype=complex)
        for k in range(kmax + 1):
            s = n[k] if k < len(n) else 0.0
            top = min(k, len(d) - 1)
            for j in range(1, top + 1):
                s -= d[j] * c[k - j]
            c[k] = s / d[0]
        return c

    def order_at(self, alpha, tol=1e-8):
        """Vanishing order at alpha; None when f is identically zero."""
        r = self.reduced()
        if r.is_zero:
            return None
        kmax = r.deg_num + 1
        t = r.taylor(alpha, kmax)
        scale = max(np.max(np.abs(t)), 1e-300)
        for k in range(kmax + 1):
            if abs(t[k]) > tol * scale:
                return k
        return kmax + 1

    def compose_poly(self, w):
        """f(w(z)) for a rational argument w, via Horner on num and den."""

        def horner(coeffs):
            acc = Rational([0.0])
            for c in coeffs[::-1]:
                acc = acc * w + Rational.const(c)
            return acc

        return (horner(self.num) / horner(self.den)).reduced()

    def split_disk(self):
        """Split f = analytic + co with co strictly proper, poles in the disk.

        The analytic part keeps the constant term and every pole outside the
        circle; ``co`` collects the principal parts at poles inside (a pole
        at 0 encodes negative powers).  Raises for poles on the circle.
        """
        r = self.reduced()
        if r.is_zero:
            return Rational([0.0]), Rational([0.0])
        rd = poly_roots(r.den)
        if rd.size and np.any(np.abs(np.abs(rd) - 1.0) < 1e-8):
            raise PoleOnCircleError(f"pole on the unit circle: {rd}")
        inside = rd[np.abs(rd) < 1.0]
        outside = rd[np.abs(rd) >= 1.0]
        if inside.size == 0:
            return r, Rational([0.0])
        d_in = P.polyfromroots(inside)
        d_out = P.polyfromroots(outside) if outside.size else np.array([1.0 + 0j])
        k = len(inside)
        lead = r.den[-1]
        nr = len(r.num)
        n_r_coeffs = max(nr - k, len(d_out), 1)
        width = k + n_r_coeffs
        height = max(nr, (k - 1) + len(d_out), (n_r_coeffs - 1) + len(d_in) + 1)
        A = np.zeros((height, width), dtype=complex)
        for j in range(k):
            col = P.polymul(np.eye(1, j + 1, j).ravel(), d_out)
            A[: len(col), j] = col
        for j in range(n_r_coeffs):
            col = P.polymul(np.eye(1, j + 1, j).ravel(), d_in)
            A[: len(col), k + j] = col
        b = np.zeros(height, dtype=complex)
        b[:nr] = r.num / lead
        sol, *_ = np.linalg.lstsq(A, b, rcond=None)
        resid = np.linalg.norm(A @ sol - b)
        if resid > 1e-9 * max(1.0, np.linalg.norm(b)):
            raise InputError("partial fraction split failed to converge")
        co = Rational(sol[:k], d_in)
        analytic = Rational(sol[k:], d_out)
        return analytic.reduced(), co.reduced()


def rat_zero():
    return Rational([0.0])


def rat_one():
    return Rational([1.0])


# ---------------------------------------------------------------------------
# Matrices of rationals: numpy object arrays with Rational entries.
# ---------------------------------------------------------------------------


def rmat(entries):
    """Build an object-matrix from nested lists of Rational/complex."""
    rows = [[e if isinstance(e, Rational) else Rational.const(e) for e in row] for row in entries]
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            out[i, j] = e
    return out


def rmat_zeros(m, n=None):
    n = m if n is None else n
    out = np.empty((m, n), dtype=object)
    for i in range(m):
        for j in range(n):
            out[i, j] = Rational([0.0])
    return out


def rmat_eye(n, scale=None):
    out = rmat_zeros(n)
    diag = rat_one() if scale is None else scale
    for i in range(n):
        out[i, i] = diag
    return out


def rmat_const(mat):
    mat = np.asarray(mat, dtype=complex)
    out = np.empty(mat.shape, dtype=object)
    for i in range(mat.shape[0]):
        for j in range(mat.shape[1]):
            out[i, j] = Rational.const(mat[i, j])
    return out


def rmat_eval(A, z):
    out = np.zeros(A.shape, dtype=complex)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j](z)
    return out


def rmat_mul(A, B):
    m, k = A.shape
    k2, n = B.shape
    if k != k2:
        raise InputError("rational matrix shape mismatch")
    out = rmat_zeros(m, n)
    for i in range(m):
        for j in range(n):
            acc = Rational([0.0])
            for t in range(k):
                if A[i, t].is_zero or B[t, j].is_zero:
                    continue
                acc = acc + A[i, t] * B[t, j]
            out[i, j] = acc
    return out


def rmat_add(A, B):
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j] + B[i, j]
    return out


def rmat_sub(A, B):
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j] - B[i, j]
    return out


def rmat_scale(s, A):
    """Multiply every entry by a scalar or a Rational."""
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j] * s
    return out


def rmat_tconj(A):
    """Conjugate transpose on the circle: entry (i,j) = tconj(A[j,i])."""
    m, n = A.shape
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            out[i, j] = A[j, i].tconj()
    return out


def rmat_tilde(A):
    """A~(z) = A(conj(z))^*: transpose with coefficient conjugation."""
    m, n = A.shape
    out = np.empty((n, m), dtype=object)
    for i in range(n):
        for j in range(m):
            out[i, j] = A[j, i].tilde()
    return out


def rmat_reduced(A):
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = A[i, j].reduced()
    return out


def rmat_det(A):
    n = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise InputError("determinant of a non-square matrix")
    if n == 1:
        return A[0, 0]
    acc = Rational([0.0])
    for j in range(n):
        if A[0, j].is_zero:
            continue
        minor = np.delete(np.delete(A, 0, axis=0), j, axis=1)
        term = A[0, j] * rmat_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc.reduced()


def rmat_adjugate(A):
    n = A.shape[0]
    out = rmat_zeros(n)
    if n == 1:
        out[0, 0] = rat_one()
        return out
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(A, i, axis=0), j, axis=1)
            c = rmat_det(minor)
            out[j, i] = c if (i + j) % 2 == 0 else -c
    return out


def rmat_taylor(A, kmax, alpha=0.0):
    """Stacked entrywise Taylor coefficients: shape (kmax+1, m, n)."""
    m, n = A.shape
    out = np.zeros((kmax + 1, m, n), dtype=complex)
    for i in range(m):
        for j in range(n):
            if A[i, j].is_zero:
                continue
            out[:, i, j] = A[i, j].taylor(alpha, kmax)
    return out


def rmat_is_zero(A):
    return all(A[i, j].is_zero for i in range(A.shape[0]) for j in range(A.shape[1]))


def rmat_max_on_circle(A, samples=64):
    zs = np.exp(2j * np.pi * (np.arange(samples) + 0.137) / samples)
    return max(np.linalg.norm(rmat_eval(A, z), 2) for z in zs)


def rmat_close(A, B, tol=1e-8, samples=64):
    zs = np.exp(2j * np.pi * (np.arange(samples) + 0.271) / samples)
    scale = 1e-300
    worst = 0.0
    for z in zs:
        va, vb = rmat_eval(A, z), rmat_eval(B, z)
        scale = max(scale, np.linalg.norm(va), np.linalg.norm(vb))
        worst = max(worst, np.linalg.norm(va - vb))
    return worst <= tol * max(1.0, scale)
