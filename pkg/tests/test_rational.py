"""Properties of the Laurent rational arithmetic layer."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from btk import Rational

from conftest import circle

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
coeff = st.builds(complex, finite, finite)


def coeff_list(min_size=1, max_size=4):
    return st.lists(coeff, min_size=min_size, max_size=max_size)


def _nonzero(c):
    return [x if abs(x) > 1e-3 else x + 1.0 for x in c]


def rationals():
    # denominators shifted away from the unit circle by construction:
    # den(z) = prod (1 - z/p) with |p| >= 1.5
    pole = st.builds(
        complex,
        st.floats(min_value=1.5, max_value=4.0),
        st.floats(min_value=-0.5, max_value=0.5),
    ).map(lambda w: w * np.exp(1j * abs(w)))
    return st.builds(
        lambda num, poles: Rational(
            _nonzero(num),
            np.polynomial.polynomial.polyfromroots(poles) if poles else [1.0],
        ),
        coeff_list(),
        st.lists(pole, min_size=0, max_size=2),
    )


@settings(max_examples=40, deadline=None)
@given(rationals(), rationals())
def test_arithmetic_matches_pointwise(a, b):
    for z in circle(8):
        va, vb = complex(a(z)), complex(b(z))
        assert abs(complex((a + b)(z)) - (va + vb)) < 1e-7 * (1 + abs(va) + abs(vb))
        assert abs(complex((a * b)(z)) - va * vb) < 1e-7 * (1 + abs(va) * abs(vb))


@settings(max_examples=40, deadline=None)
@given(rationals())
def test_tconj_is_conjugate_on_circle(a):
    at = a.tconj()
    for z in circle(8):
        assert abs(complex(at(z)) - np.conj(complex(a(z)))) < 1e-7 * (1 + abs(complex(a(z))))


@settings(max_examples=40, deadline=None)
@given(rationals())
def test_reduced_preserves_function(a):
    r = a.reduced()
    for z in circle(8):
        assert abs(complex(r(z)) - complex(a(z))) < 1e-7 * (1 + abs(complex(a(z))))


def test_split_disk_recombines(rng):
    from conftest import rand_disk

    for _ in range(20):
        # a Laurent rational with poles on both sides of the circle
        p_in = rand_disk(rng, 0.6)
        p_out = 1.0 / np.conj(rand_disk(rng, 0.6))
        num = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        den = np.polynomial.polynomial.polyfromroots([p_in, p_out])
        f = Rational(num, den)
        an, co = f.split_disk()
        assert an.is_analytic_in_disk()
        assert co.tconj().is_analytic_in_disk()
        assert abs(complex(co.tconj()(0.0))) < 1e-9  # strictly proper
        for z in circle(16):
            v = complex(f(z))
            assert abs(complex(an(z)) + complex(co(z)) - v) < 1e-7 * (1 + abs(v))


def test_taylor_matches_derivatives():
    f = Rational([1.0, 2.0, 0.5], [1.0, -0.25])
    alpha = 0.3 + 0.1j
    coeffs = f.taylor(alpha, 4)
    h = 1e-5
    # compare the first two jets against difference quotients
    f0 = complex(f(alpha))
    f1 = (complex(f(alpha + h)) - complex(f(alpha - h))) / (2 * h)
    assert abs(coeffs[0] - f0) < 1e-10
    assert abs(coeffs[1] - f1) < 1e-5


def test_pole_on_circle_rejected_in_eval_context():
    f = Rational([1.0], [1.0, -1.0])  # pole at z = 1
    with pytest.raises(Exception):
        f.split_disk()
