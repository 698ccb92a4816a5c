"""Decision procedures: interpolation certificates, verdicts, classification."""

import numpy as np
import pytest

from btk import (
    BlaschkeProduct,
    InfeasibleError,
    MatrixSymbol,
    Rational,
    abrahamse_check,
    completion_classify,
    hyponormal,
    kernel_inclusion,
    pair_analyze,
    rank_formula,
    self_commutator,
    solve_c_phi,
    split,
    toeplitz,
    tuple_analyze,
)
from btk.hardy_ops import _mat

from conftest import circle, rand_disk

_Z = Rational.z()
_ZERO = Rational.const(0.0)


def _jet_instance(rng):
    """A 2x2 symbol whose C(Phi) solution is pinned by two simple nodes."""
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    B = 0.3 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    while True:
        z0 = rand_disk(rng, 0.5)
        z1 = rand_disk(rng, 0.5)
        if abs(z0 - z1) > 0.3 and abs(z0) > 0.05 and abs(z1) > 0.05:
            break
    t01 = (BlaschkeProduct.from_points([z0]) * BlaschkeProduct.from_points([z1])).to_rational()
    t0r = BlaschkeProduct.from_points([z0]).to_rational()
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
    return MatrixSymbol(plus, minus)


def test_solve_c_phi_reproduces_jets(rng):
    for _ in range(5):
        phi = _jet_instance(rng)
        cert = solve_c_phi(phi)
        assert cert.interpolation_residual < 1e-8
        assert cert.membership_residual < 1e-8
        # re-derive the jets from the assembled K by finite Taylor steps
        worst = 0.0
        for (alpha, mult), Ks in zip(cert.data.points, cert.data.K_blocks):
            worst = max(worst, np.linalg.norm(cert.K_at(alpha) - Ks[0]))
        assert worst < 1e-8


def test_solve_c_phi_infeasible_when_kernels_do_not_nest():
    phi = MatrixSymbol.scalar(_Z, (_Z * _Z).reduced())
    assert not kernel_inclusion(phi)
    with pytest.raises(InfeasibleError):
        solve_c_phi(phi)


def test_certificate_coherence():
    # normal scalar: K = 1, commutator PSD and zero
    lau = Rational([1.0, 0.0, 1.0], [0.0, 1.0])  # z-bar + z
    phi = split(np.array([[lau]], dtype=object))
    v = hyponormal(phi, N=24)
    assert v.hyponormal and v.normal
    assert v.certificate is not None and v.certificate.contraction
    # anti-hyponormal scalar: K = 2, no contraction certificate with
    # a clearly negative commutator
    lau2 = Rational([2.0, 0.0, 1.0], [0.0, 1.0])  # 2 z-bar + z
    psi = split(np.array([[lau2]], dtype=object))
    w = hyponormal(psi, N=24)
    assert not w.hyponormal
    assert w.min_eig < -1e-6
    assert w.certificate is None or not w.certificate.contraction


def _scalar_theta_pair(rng):
    a0 = rand_disk(rng, 0.5)
    a1 = rand_disk(rng, 0.5)
    while abs(a0 - a1) < 0.3:
        a1 = rand_disk(rng, 0.5)
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


def test_rank_formula_triple_equality(rng):
    for _ in range(3):
        phi, psi = _scalar_theta_pair(rng)
        assert pair_analyze(phi, psi, N=32).hyponormal
        r1, r2, r3 = rank_formula(phi, psi, N=32)
        assert r1 == r2 == r3


def test_pair_verdict_monotone(rng):
    cases = []
    for _ in range(3):
        cases.append(_scalar_theta_pair(rng))
    lau = Rational([1.0, 0.0, 2.0], [0.0, 1.0])
    bad = split(np.array([[Rational([2.0, 0.0, 1.0], [0.0, 1.0])]], dtype=object))
    cases.append((split(np.array([[lau]], dtype=object)), bad))
    for phi, psi in cases:
        v = pair_analyze(phi, psi, N=24)
        if v.hyponormal:
            assert hyponormal(phi, N=24).hyponormal
            assert hyponormal(psi, N=24).hyponormal


def test_hyponormal_l2_bound(rng):
    # every hyponormal verdict must satisfy |Phi_-|_2 <= |Phi_+|_2
    instances = [_scalar_theta_pair(rng)[0] for _ in range(3)]
    instances.append(split(np.array([[Rational([1.0, 0.0, 2.0], [0.0, 1.0])]], dtype=object)))
    zs = circle(512)
    for phi in instances:
        v = hyponormal(phi, N=24)
        if not v.hyponormal:
            continue
        # compute the L2 norms directly from samples of the two halves
        from btk._rational import rmat_eval

        p = np.mean([np.linalg.norm(rmat_eval(phi.plus, z)) ** 2 for z in zs])
        m = np.mean([np.linalg.norm(rmat_eval(phi.minus, z)) ** 2 for z in zs])
        assert m <= p + 1e-8


def _brute_two_hyponormal(raw, Ncomp=40):
    phi = split(raw)
    T = _mat(toeplitz(phi, Ncomp))
    keep = (Ncomp // 2) * raw.shape[0]

    def comm(j, i):
        A = np.linalg.matrix_power(T.conj().T, j)
        B = np.linalg.matrix_power(T, i)
        C = A @ B - B @ A
        return C[:keep, :keep]

    M2 = np.block([[comm(1, 1), comm(2, 1)], [comm(1, 2), comm(2, 2)]])
    M2 = (M2 + M2.conj().T) / 2
    ev = np.linalg.eigvalsh(M2)
    scale = max(1.0, float(np.max(np.abs(ev))))
    return float(ev[0]) >= -1e-8 * scale


def test_completion_agrees_with_brute_force(rng):
    zb = _Z.tconj()
    for k in range(10):
        th = rng.uniform(0, 2 * np.pi)
        zeta = rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.5, 0.5)
        f = (np.exp(1j * th) * _Z + Rational.const(zeta)).reduced()
        g = (np.exp(1j * rng.uniform(0, 2 * np.pi)) * f).reduced()
        v = completion_classify(0.0, 0.0, f, g, N=40)
        raw = np.array([[zb, f], [g, zb]], dtype=object)
        assert v.klass == "Normal"
        assert _brute_two_hyponormal(raw)
    for k in range(10):
        c = rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.5, 0.5)
        f = (zb + Rational.const(c)).reduced()
        g = ((zb * zb).reduced() + Rational.const(c)).reduced()
        v = completion_classify(0.0, 0.0, f, g, N=40)
        raw = np.array([[zb, f], [g, zb]], dtype=object)
        assert v.klass == "NotSubnormal"
        assert not _brute_two_hyponormal(raw)


def test_completion_distinct_points_not_subnormal():
    f = (_Z + Rational.const(0.2)).reduced()
    v = completion_classify(0.1, 0.4, f, f, N=32)
    assert v.klass == "NotSubnormal"


def test_abrahamse_dichotomy():
    # diagonal-constant co-analytic part plus commuting structure: forced normal
    b = BlaschkeProduct.from_points([0.3]).to_rational()
    f = (np.exp(0.4j) * b + Rational.const(0.1)).reduced()
    g = (np.exp(1.1j) * f).reduced()
    bz = BlaschkeProduct.from_points([0.3]).to_rational().tconj()
    raw = np.array([[bz.reduced(), f], [g, bz.reduced()]], dtype=object)
    phi = split(raw)
    assert abrahamse_check(phi, N=40) == "NormalForced"
    free = split(np.array([[(_Z + _Z.tconj()).reduced(), _ZERO], [_ZERO, _Z]], dtype=object))
    assert abrahamse_check(free, N=32) == "NoConstraint"


def test_tuple_matches_subpairs(rng):
    phi, psi = _scalar_theta_pair(rng)
    v = tuple_analyze([phi, psi, phi], N=24)
    assert v.equivalence
    assert v.hyponormal == all(v.subpairs_hyponormal)
