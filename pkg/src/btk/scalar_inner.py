"""Scalar inner functions: finite Blaschke products and atomic singular parts.

Exact arithmetic (gcd, lcm, coprimeness, composition) on finite Blaschke
products, plus atomic singular measures with the partition infimum that
drives singular-part coprimeness.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

from ._rational import Rational, cluster_points, poly_roots
from .errors import CertificationError, InputError

ZERO_MATCH_TOL = 1e-8
ATOM_ARC_TOL = 1e-10


def pseudo_hyperbolic(a, b):
    """|b_a(b)|, the pseudo-hyperbolic distance of two disk points."""
    a, b = complex(a), complex(b)
    return abs((b - a) / (1.0 - np.conj(a) * b))


def same_zero(a, b, tol=ZERO_MATCH_TOL):
    return pseudo_hyperbolic(a, b) < tol


class BlaschkeProduct:
    """c * prod ((z - alpha)/(1 - conj(alpha) z))^m over the zero multiset."""

    __slots__ = ("constant", "zeros")

    def __init__(self, zeros=(), constant=1.0):
        c = complex(constant)
        if abs(abs(c) - 1.0) > 1e-6:
            raise InputError("Blaschke constant must be unimodular")
        c /= abs(c)
        merged: list[tuple[complex, int]] = []
        for alpha, mult in zeros:
            alpha = complex(alpha)
            mult = int(mult)
            if mult <= 0:
                raise InputError("zero multiplicity must be positive")
            if abs(alpha) >= 1.0 - 1e-12:
                raise InputError(f"Blaschke zero outside the open disk: {alpha}")
            for i, (a, m) in enumerate(merged):
                if same_zero(a, alpha):
                    merged[i] = (a, m + mult)
                    break
            else:
                merged.append((alpha, mult))
        merged.sort(key=lambda am: (abs(am[0]), np.angle(am[0])))
        self.constant = c
        self.zeros = tuple(merged)

    @classmethod
    def one(cls):
        return cls()

    @classmethod
    def from_points(cls, points, constant=1.0):
        """Build from a flat list of zeros (repetitions mean multiplicity)."""
        return cls(cluster_points(points, same_zero), constant)

    @property
    def degree(self):
        return sum(m for _, m in self.zeros)

    def expand_zeros(self):
        out = []
        for a, m in self.zeros:
            out.extend([a] * m)
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        v = np.full(z.shape, self.constant, dtype=complex)
        for a, m in self.zeros:
            v *= ((z - a) / (1.0 - np.conj(a) * z)) ** m
        return v if v.shape else complex(v)

    def __repr__(self):
        return f"BlaschkeProduct(zeros={self.zeros!r}, constant={self.constant!r})"

    def __mul__(self, other):
        return BlaschkeProduct(
            list(self.zeros) + list(other.zeros), self.constant * other.constant
        )

    def pow(self, k):
        if k < 0:
            raise InputError("negative Blaschke power")
        return BlaschkeProduct([(a, m * k) for a, m in self.zeros], self.constant**k)

    def multiplicity_at(self, alpha):
        for a, m in self.zeros:
            if same_zero(a, alpha):
                return m
        return 0

    def divides(self, other):
        return all(other.multiplicity_at(a) >= m for a, m in self.zeros)

    def divide(self, other):
        """Exact quotient self / other; raises when other is not a divisor."""
        if not other.divides(self):
            raise InputError("not a Blaschke divisor")
        left = []
        for a, m in self.zeros:
            r = m - other.multiplicity_at(a)
            if r > 0:
                left.append((a, r))
        return BlaschkeProduct(left, self.constant / other.constant)

    def to_rational(self):
        num = np.array([self.constant], dtype=complex)
        den = np.array([1.0], dtype=complex)
        for a, m in self.zeros:
            for _ in range(m):
                num = P.polymul(num, [-a, 1.0])
                den = P.polymul(den, [1.0, -np.conj(a)])
        return Rational(num, den)

    def same_as(self, other, include_constant=False):
        if len(self.zeros) != len(other.zeros):
            return False
        for (a, m), (b, k) in zip(self.zeros, other.zeros):
            if m != k or not same_zero(a, b):
                return False
        if include_constant and abs(self.constant - other.constant) > 1e-8:
            return False
        return True


def blaschke_factor(alpha):
    return BlaschkeProduct([(alpha, 1)])


def eval_blaschke(b, z):
    return b(z)


def gcd_blaschke(b1, b2):
    out = []
    for a, m in b1.zeros:
        k = b2.multiplicity_at(a)
        if k:
            out.append((a, min(m, k)))
    return BlaschkeProduct(out)


def lcm_blaschke(b1, b2):
    out = [(a, max(m, b2.multiplicity_at(a))) for a, m in b1.zeros]
    for a, m in b2.zeros:
        if b1.multiplicity_at(a) == 0:
            out.append((a, m))
    return BlaschkeProduct(out)


def coprime_blaschke(b1, b2):
    return gcd_blaschke(b1, b2).degree == 0


def disk_zeros_of_rational(f, margin=1e-8):
    """Classical inner part data: zeros of f strictly inside the disk."""
    roots = [r for r in f.zeros() if abs(r) < 1.0 - margin]
    return BlaschkeProduct(cluster_points(roots, same_zero))


def compose_blaschke(b, omega):
    """The finite Blaschke product b(omega(z)).

    Zeros are the disk solutions of omega(z) = alpha over the zeros alpha
    of b, found as companion-matrix roots of p - alpha*q for omega = p/q.
    """
    w = omega.to_rational()
    roots = []
    for alpha, mult in b.zeros:
        c = P.polysub(w.num, complex(alpha) * w.den)
        rr = poly_roots(c)
        if len(rr) != omega.degree:
            raise CertificationError("composition lost roots")
        if np.any(np.abs(rr) >= 1.0 - 1e-12):
            raise CertificationError(f"composition root escaped the disk: {rr}")
        roots.extend(list(rr) * mult)
    body = BlaschkeProduct.from_points(roots)
    # Fix the unimodular constant at a circle point.
    z0 = np.exp(0.7321j)
    ref = body(z0)
    val = b(omega(z0))
    c = val / ref
    if abs(abs(c) - 1.0) > 1e-6:
        raise CertificationError("composition constant is not unimodular")
    return BlaschkeProduct(body.zeros, c)


# ---------------------------------------------------------------------------
# Atomic singular measures and singular inner functions.
# ---------------------------------------------------------------------------


def _arc_distance(s, t):
    d = np.angle(s / t)
    return abs(d)


class AtomicSingularMeasure:
    """Finitely many point masses on the unit circle."""

    __slots__ = ("atoms",)

    def __init__(self, atoms=()):
        cleaned = []
        for t, mass in atoms:
            t = complex(t)
            mass = float(mass)
            if abs(abs(t) - 1.0) > 1e-6:
                raise InputError("atom must sit on the unit circle")
            if mass <= 0.0:
                raise InputError("atom mass must be positive")
            cleaned.append((t / abs(t), mass))
        cleaned.sort(key=lambda tm: np.angle(tm[0]))
        for (s, _), (t, _) in zip(cleaned, cleaned[1:]):
            if _arc_distance(s, t) <= ATOM_ARC_TOL:
                raise InputError("atoms closer than the arc tolerance")
        self.atoms = tuple(cleaned)

    @property
    def is_empty(self):
        return not self.atoms

    def total(self):
        return sum(m for _, m in self.atoms)

    def mass_at(self, t):
        for s, m in self.atoms:
            if _arc_distance(s, t) <= ATOM_ARC_TOL:
                return m
        return 0.0

    def __repr__(self):
        return f"AtomicSingularMeasure(atoms={self.atoms!r})"

    def add(self, other):
        pts = {t: m for t, m in self.atoms}
        for t, m in other.atoms:
            for s in list(pts):
                if _arc_distance(s, t) <= ATOM_ARC_TOL:
                    pts[s] += m
                    break
            else:
                pts[t] = m
        return AtomicSingularMeasure(list(pts.items()))


def eval_singular(mu, z):
    """exp(-sum mass*(t+z)/(t-z)); raises when z collides with an atom."""
    z = complex(z)
    s = 0.0 + 0.0j
    for t, mass in mu.atoms:
        if abs(t - z) < 1e-9:
            raise InputError(f"evaluation at a singular atom: {t}")
        s += mass * (t + z) / (t - z)
    return complex(np.exp(-s))


def measure_inf(mu1, mu2):
    """Greatest lower bound: common atoms with the minimum of the masses."""
    out = []
    for t, m in mu1.atoms:
        k = mu2.mass_at(t)
        if k > 0.0:
            out.append((t, min(m, k)))
    return AtomicSingularMeasure(out)


def mutually_singular(mu1, mu2):
    return measure_inf(mu1, mu2).total() < 1e-12


class ScalarInner:
    """A finite Blaschke product times an atomic singular inner function."""

    __slots__ = ("blaschke", "singular")

    def __init__(self, blaschke=None, singular=None):
        self.blaschke = blaschke if blaschke is not None else BlaschkeProduct()
        self.singular = singular if singular is not None else AtomicSingularMeasure()

    @property
    def degree(self):
        if not self.singular.is_empty:
            raise InputError("degree undefined with a singular part present")
        return self.blaschke.degree

    @property
    def is_blaschke(self):
        return self.singular.is_empty

    def __call__(self, z):
        v = self.blaschke(complex(z))
        if not self.singular.is_empty:
            v *= eval_singular(self.singular, z)
        return v

    def __mul__(self, other):
        return ScalarInner(self.blaschke * other.blaschke, self.singular.add(other.singular))

    def __repr__(self):
        return f"ScalarInner(blaschke={self.blaschke!r}, singular={self.singular!r})"


def singular_coprime(s1, s2):
    """Coprimeness of two purely singular inner functions."""
    return mutually_singular(_as_measure(s1), _as_measure(s2))


def singular_gcd(s1, s2):
    return ScalarInner(BlaschkeProduct(), measure_inf(_as_measure(s1), _as_measure(s2)))


def _as_measure(s):
    if isinstance(s, AtomicSingularMeasure):
        return s
    if isinstance(s, ScalarInner):
        return s.singular
    raise InputError("expected a singular measure or scalar inner function")


def gcd_inner(s1, s2):
    return ScalarInner(
        gcd_blaschke(s1.blaschke, s2.blaschke), measure_inf(s1.singular, s2.singular)
    )


def lcm_inner(s1, s2):
    pts = {t: m for t, m in s1.singular.atoms}
    for t, m in s2.singular.atoms:
        for s in list(pts):
            if _arc_distance(s, t) <= ATOM_ARC_TOL:
                pts[s] = max(pts[s], m)
                break
        else:
            pts[t] = m
    return ScalarInner(
        lcm_blaschke(s1.blaschke, s2.blaschke), AtomicSingularMeasure(list(pts.items()))
    )


def coprime_inner(s1, s2):
    return coprime_blaschke(s1.blaschke, s2.blaschke) and mutually_singular(
        s1.singular, s2.singular
    )
