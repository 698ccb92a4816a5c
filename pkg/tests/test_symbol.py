"""Symbol splitting, coprime factorizations, and singularity structure."""

import numpy as np
import pytest

from btk import (
    BlaschkeProduct,
    InputError,
    MatrixSymbol,
    Rational,
    compose_symbol,
    degree_inner,
    degree_symbol,
    dss_left,
    dss_right,
    eval_potapov,
    inner_outer,
    right_coprime_pair,
    scalar_coprime_decomp,
    split,
    tensored_singularity,
)
from btk._rational import rmat_det, rmat_eval, rmat_tconj

from conftest import circle, rand_disk

_Z = Rational.z()
_ZERO = Rational.const(0.0)
_ONE = Rational.const(1.0)


def _random_laurent_rmat(rng, n, deg=2):
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            plus = Rational(rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
            co = Rational(
                np.concatenate([[0.0], rng.standard_normal(deg) + 1j * rng.standard_normal(deg)])
            )
            out[i, j] = (plus + co.tconj()).reduced()
    return out


def test_split_reconstructs_raw(rng):
    for _ in range(10):
        raw = _random_laurent_rmat(rng, 2)
        phi = split(raw)
        back = phi.raw_rmat()
        for z in circle(32):
            err = np.linalg.norm(rmat_eval(back, z) - rmat_eval(raw, z))
            assert err < 1e-10 * max(1.0, np.linalg.norm(rmat_eval(raw, z)))
        assert np.linalg.norm(rmat_eval(phi.minus, 0.0)) < 1e-12


def test_minus_part_must_vanish_at_zero():
    plus = np.array([[_Z]], dtype=object)
    minus = np.array([[_ONE]], dtype=object)
    with pytest.raises(InputError):
        MatrixSymbol(plus, minus)


def test_dss_reconstruction_and_certificate(rng):
    for _ in range(5):
        part = _random_laurent_rmat(rng, 2, deg=1)
        # the analytic representative of the co-analytic half
        phi = split(part)
        target = phi.minus
        fac = dss_right(target)
        omega = fac.inner
        a_star = rmat_tconj(fac.outerish)
        for z in circle(24):
            got = eval_potapov(omega, z) @ rmat_eval(a_star, z)
            want = rmat_eval(target, z)
            assert np.linalg.norm(got - want) < 1e-8 * max(1.0, np.linalg.norm(want))
        assert right_coprime_pair(omega, fac.outerish)


def test_degree_left_equals_right(rng):
    for _ in range(8):
        raw = _random_laurent_rmat(rng, 2, deg=2)
        phi = split(raw)
        d_l = dss_left(phi.minus).degree
        d_r = dss_right(phi.minus).degree
        assert d_l == d_r
        assert degree_symbol(phi) == d_r


def test_inner_outer_degree_bounded_by_coprime_degree(rng):
    for _ in range(10):
        F = np.empty((2, 2), dtype=object)
        for i in range(2):
            for j in range(2):
                F[i, j] = Rational(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        if rmat_det(F).reduced().is_zero:
            continue
        inner, outer = inner_outer(F)
        assert degree_inner(inner) <= dss_left(F).degree
        # outer certificate: no determinant zeros strictly inside the disk
        det_e = rmat_det(outer).reduced()
        assert all(abs(r) >= 1.0 - 1e-8 for r in det_e.zeros())


def test_tensored_singularity_rank_characterization():
    # diagonal-constant co-analytic part: ker H contained in z H^2
    phi = MatrixSymbol.from_raw(
        np.array([[_Z.tconj(), _ZERO], [_ZERO, _Z.tconj()]], dtype=object)
    )
    assert tensored_singularity(phi, part="minus")
    # distinct powers: Theta(alpha) keeps full rank at no common point
    psi = MatrixSymbol.from_raw(
        np.array([[_ONE, _ZERO], [_ZERO, _Z.tconj()]], dtype=object)
    )
    assert tensored_singularity(psi, part="minus") == []


def test_scalar_coprime_decomp_certified(rng):
    for _ in range(15):
        num = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        pole = 1.0 / np.conj(rand_disk(rng, 0.6) + 0.2)
        f = Rational(num, np.polynomial.polynomial.polyfromroots([pole])).reduced()
        assert f.is_analytic_in_disk()
        th, a_back = scalar_coprime_decomp(f)
        # identity on the circle and coprimality of the pair
        for z in circle(32):
            got = complex(th(z)) * np.conj(complex(a_back(z)))
            assert abs(got - complex(f(z))) < 1e-7 * max(1.0, abs(complex(f(z))))
        for alpha, _ in th.zeros:
            assert abs(complex(a_back(alpha))) > 1e-8


def test_compose_symbol_matches_pointwise():
    raw = np.array([[(_Z + _Z.tconj()).reduced()]], dtype=object)
    phi = split(raw)
    omega = (_Z * _Z).reduced()
    out = compose_symbol(phi, omega)
    for z in circle(16):
        w = complex(omega(z))
        assert np.linalg.norm(out.eval(z) - phi.eval(w)) < 1e-9


def test_hankel_product_law_with_singularity(rng):
    from btk import hankel
    from btk.hardy_ops import _mat

    # Phi = conj(z) I has a tensored-scalar singularity; any Psi with
    # H_Psi H_Phi ~ 0 must have a tiny Hankel factor itself.
    phi = MatrixSymbol.from_raw(
        np.array([[_Z.tconj(), _ZERO], [_ZERO, _Z.tconj()]], dtype=object)
    )
    assert tensored_singularity(phi, part="minus")
    H_phi = _mat(hankel(phi, 24))
    psi = split(_random_laurent_rmat(rng, 2, deg=1))
    H_psi = _mat(hankel(psi, 24))
    prod = np.linalg.norm(H_psi @ H_phi, 2)
    if prod < 1e-10:
        assert min(np.linalg.norm(H_phi, 2), np.linalg.norm(H_psi, 2)) < 1e-6
    # an analytic Psi realizes the vanishing-product case
    psi0 = MatrixSymbol.analytic(np.array([[_Z, _ZERO], [_ZERO, _Z]], dtype=object))
    H0 = _mat(hankel(psi0, 24))
    assert np.linalg.norm(H0 @ H_phi, 2) < 1e-10
    assert np.linalg.norm(H0, 2) < 1e-10
