"""The acceptance suite: one function per criterion, shared by the CLI
selftest and the test suite.

Each criterion returns (name, passed, detail).  Randomized criteria are
seeded so every run is reproducible.
"""

from __future__ import annotations

import itertools

import numpy as np

from ._rational import Rational, rmat_det
from .scalar_inner import (
    AtomicSingularMeasure,
    BlaschkeProduct,
    blaschke_factor,
    disk_zeros_of_rational,
    measure_inf,
    singular_coprime,
)
from .matrix_inner import coprime_with_scalar, degree_inner
from .symbol import (
    MatrixSymbol,
    dss_left,
    dss_right,
    inner_outer,
    split,
    tensored_singularity,
)
from .hardy_ops import (
    M_matrix,
    Q_of_M,
    hankel,
    is_psd,
    min_eig,
    self_commutator,
    verify_representation,
    _mat,
)
from .analysis import (
    completion_classify,
    degree_equality_check,
    hyponormal,
    pair_analyze,
    rank_formula,
    solve_c_phi,
)

_Z = Rational.z()
_ZERO = Rational.const(0.0)
_ONE = Rational.const(1.0)


def _rand_disk(rng, r):
    while True:
        w = rng.uniform(-r, r) + 1j * rng.uniform(-r, r)
        if abs(w) <= r:
            return w


def criterion_1(rng):
    """Degree of the right coprime inner factor vs the determinant."""
    b = blaschke_factor(0.5).to_rational()
    F = np.array([[_Z, (-1 * (b * _Z)).reduced()], [_ZERO, _ONE]], dtype=object)
    deg_theta = dss_right(F).degree
    deg_det = disk_zeros_of_rational(rmat_det(F).reduced()).degree
    ok = deg_theta == 2 and deg_det == 1
    return "degree-example", ok, f"deg Theta = {deg_theta}, deg det = {deg_det}"


def criterion_2(rng):
    """Inner-outer degree vs left coprime degree for diag(z, z+2)."""
    F = np.array([[_Z, _ZERO], [_ZERO, Rational([2.0, 1.0])]], dtype=object)
    inner, _ = inner_outer(F)
    d_io = degree_inner(inner)
    d_left = dss_left(F).degree
    ok = d_io == 1 and d_left == 2 and d_io <= d_left
    return "inner-outer-vs-coprime", ok, f"deg inner-outer = {d_io}, deg coprime = {d_left}"


def criterion_3(rng):
    """Vanishing Hankel product with unit-norm factors."""
    phi = MatrixSymbol.from_raw(
        np.array([[_ONE, _ZERO], [_ZERO, _Z.tconj()]], dtype=object)
    )
    psi = MatrixSymbol.from_raw(
        np.array([[_Z.tconj(), _ZERO], [_ZERO, _ONE]], dtype=object)
    )
    H1 = _mat(hankel(phi, 32))
    H2 = _mat(hankel(psi, 32))
    prod = float(np.linalg.norm(H1 @ H2, 2))
    n1 = float(np.linalg.norm(H1, 2))
    n2 = float(np.linalg.norm(H2, 2))
    ok = prod < 1e-10 and abs(n1 - 1.0) < 1e-10 and abs(n2 - 1.0) < 1e-10
    return "hankel-product", ok, f"|H1 H2| = {prod:.2e}, |H1| = {n1}, |H2| = {n2}"


def criterion_4(rng):
    """Hyponormal but non-normal diagonal symbol with no tensored singularity."""
    phi = split(np.array([[_Z + _Z.tconj(), _ZERO], [_ZERO, _Z]], dtype=object))
    v = hyponormal(phi, N=32)
    norm_c = float(np.linalg.norm(_mat(self_commutator(phi, 32)), 2))
    ts = tensored_singularity(phi, part="minus")
    ok = v.hyponormal and v.min_eig >= -1e-8 and norm_c > 0.5 and not ts
    return (
        "abrahamse-counterexample",
        ok,
        f"min eig = {v.min_eig:.2e}, |[T*,T]| = {norm_c:.3f}, singularity = {ts}",
    )


def _family_a(rng):
    alpha = _rand_disk(rng, 0.6)
    b = blaschke_factor(alpha).to_rational()
    phi = (np.exp(1j * rng.uniform(0, 2 * np.pi)) * b + Rational.const(
        rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.5, 0.5)
    )).reduced()
    psi = (np.exp(1j * rng.uniform(0, 2 * np.pi)) * phi).reduced()
    return alpha, phi, psi


def _family_b(rng, mu_abs):
    alpha = _rand_disk(rng, 0.6)
    b = blaschke_factor(alpha).to_rational()
    mu = mu_abs * np.exp(1j * rng.uniform(0, 2 * np.pi))
    zeta = rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.5, 0.5)
    phi = (
        mu * b.tconj()
        + np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.sqrt(1 + abs(mu) ** 2) * b
        + Rational.const(zeta)
    ).reduced()
    psi = (np.exp(1j * (np.pi - 2 * np.angle(mu))) * phi).reduced()
    return alpha, phi, psi


def criterion_5(rng):
    """Both completion families classify Normal with a vanishing commutator."""
    worst = 0.0
    for k in range(10):
        alpha, phi, psi = _family_a(rng)
        v = completion_classify(alpha, alpha, phi, psi, N=48)
        if v.klass != "Normal":
            return "completion-families", False, f"family (a) draw {k}: {v.klass}"
        worst = max(worst, v.case_data["commutator_norm"])
    for k in range(10):
        mu_abs = 0.5 if k % 2 == 0 else 2.0
        alpha, phi, psi = _family_b(rng, mu_abs)
        v = completion_classify(alpha, alpha, phi, psi, N=48)
        if v.klass != "Normal":
            return "completion-families", False, f"family (b) draw {k}: {v.klass}"
        worst = max(worst, v.case_data["commutator_norm"])
    ok = worst < 1e-7
    return "completion-families", ok, f"worst commutator norm = {worst:.2e}"


def criterion_6(rng):
    """Hyponormal pair whose minus parts admit no constant relating matrix."""
    lau = Rational([1.0, 0.0, 2.0], [0.0, 1.0])  # 1/z + 2z on the circle
    phi = split(np.array([[lau, _ZERO], [_ZERO, _ZERO]], dtype=object))
    psi = split(np.array([[_ZERO, _ZERO], [_ZERO, lau]], dtype=object))
    v = pair_analyze(phi, psi, N=32)
    ok = v.min_eig >= -1e-8 and v.hyponormal and v.lambda_residual > 0.1
    return (
        "pair-counterexample",
        ok,
        f"min eig = {v.min_eig:.2e}, lambda residual = {v.lambda_residual:.3f}",
    )


def criterion_7(rng):
    """Scalar pair with distinct inner data that is still hyponormal."""
    b = blaschke_factor(-0.5).to_rational()
    phi = MatrixSymbol.scalar(4 * _Z, _Z)
    psi = MatrixSymbol.scalar((2 * _Z * b).reduced(), _Z)
    v = pair_analyze(phi, psi, N=48)
    t1 = v.theta1
    t3 = v.theta3
    ok = (
        v.hyponormal
        and t1 is not None
        and t1.degree == 0
        and t3 is not None
        and t3.degree == 1
        and t3.multiplicity_at(-0.5) == 1
    )
    return (
        "pair-example",
        ok,
        f"hyponormal = {v.hyponormal}, deg theta1 = {None if t1 is None else t1.degree}, "
        f"deg theta3 = {None if t3 is None else t3.degree}",
    )


def criterion_8(rng):
    """Explicit 6x6 functional calculus matrices for theta = z^3, Q = z^2 I."""
    theta = BlaschkeProduct([(0.0, 3)])
    M = M_matrix(theta)
    phi = MatrixSymbol.analytic(
        np.array([[(_Z * _Z).reduced(), _ZERO], [_ZERO, (_Z * _Z).reduced()]], dtype=object)
    )
    QM = Q_of_M(phi, M)
    expected = np.zeros((6, 6))
    expected[4, 0] = 1.0
    expected[5, 1] = 1.0
    QQ = QM.conj().T @ QM
    expected_qq = np.diag([1.0, 1.0, 0.0, 0.0, 0.0, 0.0])
    # (Q*Q)(M): the symbol of Q*Q is the constant identity.
    qq_of_m = Q_of_M(
        MatrixSymbol.analytic(np.array([[_ONE, _ZERO], [_ZERO, _ONE]], dtype=object)), M
    )
    ok = (
        np.max(np.abs(QM - expected)) < 1e-12
        and np.max(np.abs(QQ - expected_qq)) < 1e-12
        and np.max(np.abs(qq_of_m - np.eye(6))) < 1e-12
    )
    return "functional-calculus-matrices", ok, f"max entry error = {np.max(np.abs(QM - expected)):.1e}"


def criterion_9(rng):
    """Compression of an analytic polynomial equals its M-calculus value."""
    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(1, 5))
        theta = BlaschkeProduct.from_points([_rand_disk(rng, 0.6) for _ in range(d)])
        degp = int(rng.integers(0, 4))
        coeffs = [
            rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            for _ in range(degp + 1)
        ]
        worst = max(worst, verify_representation(coeffs, theta, 2))
    ok = worst < 1e-9
    return "representation-identity", ok, f"worst residual = {worst:.2e}"


def _rank_formula_pair(rng):
    a0 = _rand_disk(rng, 0.5)
    a1 = _rand_disk(rng, 0.5)
    while abs(a0 - a1) < 0.3:
        a1 = _rand_disk(rng, 0.5)
    theta = BlaschkeProduct.from_points([a0, a1])
    c = (1.0 + rng.uniform(0, 0.8)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    plus = (c * theta.to_rational()).reduced()
    k = rng.uniform(0.2, 0.9) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    prod = (Rational.const(k) * plus.tconj()).reduced()
    _, co = prod.split_disk()
    minus = co.tconj().reduced()
    phi = MatrixSymbol.scalar(plus, minus)
    w = np.exp(1j * rng.uniform(0, 2 * np.pi))
    psi = MatrixSymbol.scalar((w * plus).reduced(), (np.conj(w) * minus).reduced())
    return phi, psi


def criterion_10(rng):
    """Triple rank equality on randomized hyponormal pairs."""
    for k in range(10):
        phi, psi = _rank_formula_pair(rng)
        v = pair_analyze(phi, psi, N=32)
        if not v.hyponormal:
            return "rank-formula", False, f"draw {k} unexpectedly not hyponormal"
        r1, r2, r3 = rank_formula(phi, psi, N=32)
        if not (r1 == r2 == r3):
            return "rank-formula", False, f"draw {k}: ranks {(r1, r2, r3)}"
    return "rank-formula", True, "ranks coincide on 10 draws"


def criterion_11(rng):
    """Measure infimum against the brute-force partition oracle."""
    grid = [np.exp(2j * np.pi * k / 8) for k in range(8)]
    masses = [1.0 + k / 10.0 for k in range(8)]
    subsets = []
    for size in range(5):
        subsets.extend(itertools.combinations(range(8), size))
    checked = 0
    for s1 in subsets:
        mu1 = AtomicSingularMeasure([(grid[k], masses[k]) for k in s1])
        for s2 in subsets:
            mu2 = AtomicSingularMeasure([(grid[k], masses[k]) for k in s2])
            inf_total = measure_inf(mu1, mu2).total()
            union = sorted(set(s1) | set(s2))
            best = None
            for bits in range(1 << len(union)):
                v1 = sum(
                    masses[t] for i, t in enumerate(union)
                    if (bits >> i) & 1 and t in s1
                )
                v2 = sum(
                    masses[t] for i, t in enumerate(union)
                    if not (bits >> i) & 1 and t in s2
                )
                tot = v1 + v2
                best = tot if best is None else min(best, tot)
            oracle = best if best is not None else 0.0
            if abs(inf_total - oracle) > 1e-12:
                return (
                    "measure-infimum",
                    False,
                    f"{s1} vs {s2}: inf {inf_total} oracle {oracle}",
                )
            disjoint = not (set(s1) & set(s2))
            if singular_coprime(mu1, mu2) != disjoint:
                return "measure-infimum", False, f"coprime mismatch {s1} {s2}"
            checked += 1
    return "measure-infimum", True, f"{checked} pairs checked"


def criterion_12(rng):
    """Scalar coprimeness agrees with the singular-value oracle."""
    for k in range(50):
        d = int(rng.integers(1, 5))
        zeros = [_rand_disk(rng, 0.6) for _ in range(d)]
        theta = BlaschkeProduct.from_points(zeros)
        A0 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        A = np.empty((2, 2), dtype=object)
        for i in range(2):
            for j in range(2):
                A[i, j] = Rational(
                    [A0[i, j], 0.3 * (rng.standard_normal() + 1j * rng.standard_normal())]
                )
        if k % 2 == 1:
            # force a common zero with theta in the first column
            a0 = zeros[0]
            factor = Rational([-a0, 1.0])
            for i in range(2):
                A[i, 0] = (A[i, 0] * factor).reduced()
        got = coprime_with_scalar(A, theta)
        oracle = True
        for alpha, _ in theta.zeros:
            M = np.array(
                [[complex(A[i, j](alpha)) for j in range(2)] for i in range(2)]
            )
            s = np.linalg.svd(M, compute_uv=False)
            if s[-1] <= 1e-8 * max(s[0], 1e-300):
                oracle = False
        if got != oracle:
            return "coprimeness-oracle", False, f"draw {k}: got {got}, oracle {oracle}"
    return "coprimeness-oracle", True, "50 draws agree"


def criterion_13(rng):
    """Interpolation and membership residuals of the C(Phi) solver."""
    worst = 0.0
    for _ in range(20):
        A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        B = 0.3 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        while True:
            z0 = _rand_disk(rng, 0.5)
            z1 = _rand_disk(rng, 0.5)
            if abs(z0 - z1) > 0.3 and abs(z0) > 0.05 and abs(z1) > 0.05:
                break
        th0 = BlaschkeProduct.from_points([z0])
        th1 = BlaschkeProduct.from_points([z1])
        t01 = (th0 * th1).to_rational()
        t0r = th0.to_rational()
        plus = np.empty((2, 2), dtype=object)
        minus = np.empty((2, 2), dtype=object)
        for i in range(2):
            for j in range(2):
                m = (t0r * np.conj(B[j, i])).reduced()
                minus[i, j] = (m - Rational.const(complex(m(0.0)))).reduced()
        for i in range(2):
            for j in range(2):
                c0 = complex((t0r * np.conj(B[i, j])).reduced()(0.0))
                plus[i, j] = (
                    (t01 * np.conj(A[j, i])).reduced() + Rational.const(np.conj(c0))
                ).reduced()
        cert = solve_c_phi(MatrixSymbol(plus, minus))
        worst = max(worst, cert.interpolation_residual, cert.membership_residual)
    ok = worst < 1e-8
    return "hermite-fejer-fidelity", ok, f"worst residual = {worst:.2e}"


def criterion_14(rng):
    """Equal minus-degrees on hyponormal polynomial pairs; unequal fail."""
    for k in range(10):
        c = (1.0 + rng.uniform(0.1, 1.0)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        w = np.exp(1j * rng.uniform(0, 2 * np.pi))
        phi = MatrixSymbol.scalar((c * _Z).reduced(), _Z)
        psi = MatrixSymbol.scalar((w * c * _Z).reduced(), (np.conj(w) * _Z).reduced())
        v = pair_analyze(phi, psi, N=24)
        if not v.hyponormal:
            return "degree-equality", False, f"equal draw {k} not hyponormal"
        if not degree_equality_check(phi, psi):
            return "degree-equality", False, f"equal draw {k}: degree mismatch"
    z2 = (_Z * _Z).reduced()
    for k in range(10):
        c = (1.0 + rng.uniform(0.1, 1.0)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        phi = MatrixSymbol.scalar((c * _Z).reduced(), _Z)
        psi = MatrixSymbol.scalar((c * z2).reduced(), z2)
        v = pair_analyze(phi, psi, N=24)
        if v.hyponormal:
            return "degree-equality", False, f"unequal draw {k} reported hyponormal"
        if degree_equality_check(phi, psi):
            return "degree-equality", False, f"unequal draw {k}: degrees reported equal"
    return "degree-equality", True, "10 equal pass, 10 unequal fail as required"


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
    criterion_13,
    criterion_14,
]


def run_all(seed=0):
    """Run every acceptance criterion; returns a list of result triples."""
    results = []
    for i, crit in enumerate(CRITERIA, start=1):
        rng = np.random.default_rng(seed + i)
        try:
            name, ok, detail = crit(rng)
        except Exception as exc:  # a crash is a failure, not an abort
            name, ok, detail = crit.__name__, False, f"exception: {exc!r}"
        results.append((f"{i:02d}-{name}", bool(ok), detail))
    return results
