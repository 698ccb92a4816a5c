"""Decision procedures built on top of the symbol and operator layers.

The solver for the commutant-lifting set C(Phi) reduces to a classical
Hermite-Fejer interpolation problem at the zeros of the scalar inner part
of the analytic half.  Hyponormality combines the normality sample test
with positivity of the truncated self-commutator; pair and tuple verdicts
reconcile the direct positivity tests with the structural conditions on
the coprime data.  The subnormal completion classifier implements the
full decision tree for 2x2 block Toeplitz completions with conjugate
Blaschke corners.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from ._rational import (
    Rational,
    rmat_eval,
    rmat_is_zero,
    rmat_mul,
    rmat_reduced,
    rmat_scale,
    rmat_sub,
    rmat_tconj,
    rmat_zeros,
)
from .errors import (
    CertificationError,
    InfeasibleError,
    InputError,
    NoSolutionByThisMethodError,
)
from .hardy_ops import (
    M_matrix,
    P_of_M,
    default_truncation,
    is_psd,
    min_eig,
    numerical_rank,
    pair_commutator,
    pair_pseudo_commutator,
    pseudo_commutator,
    self_commutator,
    sup_norm_on_circle,
    toeplitz,
    tuple_pseudo_commutator,
    _mat,
)
from .matrix_inner import (
    PotapovProduct,
    is_left_inner_divisor,
    left_gcd_with_scalar,
)
from .scalar_inner import (
    BlaschkeProduct,
    gcd_blaschke,
    pseudo_hyperbolic,
    same_zero,
)
from .symbol import (
    MatrixSymbol,
    commutes,
    dss_right,
    is_normal,
    naive_scalar_pullout,
    scalar_coprime_decomp,
    split,
    tensored_singularity,
    upper,
)

PSD_MIN_EIG = 1e-8


def _pullout(part, n):
    """Scalar pullout of a minus/plus half; identity data when zero."""
    if rmat_is_zero(part):
        return BlaschkeProduct(), rmat_zeros(n, n)
    return naive_scalar_pullout(part)


def _part_inner(part):
    if rmat_is_zero(part):
        return PotapovProduct.identity(part.shape[0])
    return dss_right(part).inner


def kernel_inclusion(phi):
    """ker H_{Phi_+^*} is contained in ker H_{Phi_-^*}.

    The Hankel kernels are Omega H^2 for the right coprime inner parts,
    so inclusion is exactly left divisibility of the inner factors.
    """
    omega_plus = _part_inner(phi.plus)
    omega_minus = _part_inner(phi.minus)
    return is_left_inner_divisor(omega_minus, omega_plus)


# ---------------------------------------------------------------------------
# Hermite-Fejer interpolation and C(Phi).
# ---------------------------------------------------------------------------


@dataclass
class InterpolationData:
    points: list  # (alpha_i, m_i)
    A_blocks: list  # A_blocks[i][j], j < m_i
    B_blocks: list
    K_blocks: list


@dataclass
class InterpolationCertificate:
    K: np.ndarray  # (d, n, n) ascending coefficients, d >= 1
    sup_norm: float
    membership_residual: float
    interpolation_residual: float
    data: InterpolationData | None
    theta_plus: BlaschkeProduct

    @property
    def contraction(self):
        return self.sup_norm <= 1.0 + 1e-9

    def K_at(self, z):
        z = complex(z)
        out = np.zeros(self.K.shape[1:], dtype=complex)
        for c in self.K[::-1]:
            out = out * z + c
        return out


def _poly_taylor_coeffs(coeffs, alpha, kmax):
    """Taylor coefficients at alpha of a scalar polynomial."""
    out = []
    cur = np.asarray(coeffs, dtype=complex)
    fact = 1.0
    for j in range(kmax + 1):
        out.append(complex(P.polyval(alpha, cur)) / fact if cur.size else 0.0)
        cur = P.polyder(cur)
        fact *= j + 1
    return out


def solve_c_phi(phi):
    """Solve Phi - K Phi^* in H^infty for a matrix polynomial K of deg d-1.

    Reduces to jet matching K * A = theta_0 * B (mod theta_plus) at the
    zeros of theta_plus, then rebuilds K by the Hermite-Fejer construction.
    """
    n = phi.n
    if not kernel_inclusion(phi):
        raise InfeasibleError("Hankel kernel inclusion fails, C(Phi) is empty")
    theta_p, A = _pullout(phi.plus, n)
    theta_m, B = _pullout(phi.minus, n)
    if not theta_m.divides(theta_p):
        raise NoSolutionByThisMethodError(
            "minus-side scalar inner does not divide the plus side"
        )
    theta0 = theta_p.divide(theta_m).to_rational()
    d = theta_p.degree
    if d == 0:
        K = np.zeros((1, n, n), dtype=complex)
        cert = InterpolationCertificate(K, 0.0, 0.0, 0.0, None, theta_p)
        cert = _certify(cert, phi)
        return cert

    points = list(theta_p.zeros)
    A_blocks, B_blocks, K_blocks = [], [], []
    for alpha, m in points:
        Aj = [_rmat_taylor_at(A, alpha, j) for j in range(m)]
        tB = _scale_rmat(B, theta0)
        Bj = [_rmat_taylor_at(tB, alpha, j) for j in range(m)]
        if np.linalg.cond(Aj[0]) > 1e12:
            raise NoSolutionByThisMethodError(
                f"leading interpolation block singular at {alpha}"
            )
        A0inv = np.linalg.inv(Aj[0])
        Kj = [Bj[0] @ A0inv]
        for j in range(1, m):
            acc = Bj[j].copy()
            for k in range(j):
                acc -= Kj[k] @ Aj[j - k]
            Kj.append(acc @ A0inv)
        A_blocks.append(Aj)
        B_blocks.append(Bj)
        K_blocks.append(Kj)

    # Hermite-Fejer assembly: K(z) = sum_i p_i(z) * sum_j K'_{i,j}(z-a_i)^j.
    K = np.zeros((d, n, n), dtype=complex)
    for i, (alpha, m) in enumerate(points):
        p_i = np.array([1.0], dtype=complex)
        for k, (beta, mk) in enumerate(points):
            if k == i:
                continue
            factor = np.array([-beta, 1.0], dtype=complex) / (alpha - beta)
            for _ in range(mk):
                p_i = P.polymul(p_i, factor)
        c = _poly_taylor_coeffs(p_i, alpha, m - 1)
        Kp = [K_blocks[i][0]]
        for j in range(1, m):
            acc = K_blocks[i][j].copy()
            for k in range(j):
                acc -= Kp[k] * c[j - k]
            Kp.append(acc)
        # expand p_i(z) * sum_j Kp_j (z - alpha)^j into power-basis coeffs
        jet = np.zeros(m, dtype=object)
        poly = np.zeros((d, n, n), dtype=complex)
        shift = np.array([1.0], dtype=complex)
        for j in range(m):
            term = P.polymul(p_i, shift)
            for l, cl in enumerate(term):
                if l < d:
                    poly[l] += cl * Kp[j]
            shift = P.polymul(shift, [-alpha, 1.0])
        del jet
        K += poly

    data = InterpolationData(points, A_blocks, B_blocks, K_blocks)
    interp_res = 0.0
    for i, (alpha, m) in enumerate(points):
        jets = _matrix_poly_taylor(K, alpha, m - 1)
        for j in range(m):
            interp_res = max(interp_res, float(np.linalg.norm(jets[j] - K_blocks[i][j])))
    cert = InterpolationCertificate(K, 0.0, 0.0, interp_res, data, theta_p)
    return _certify(cert, phi)


def _matrix_poly_taylor(K, alpha, jmax):
    d, n, _ = K.shape
    out = []
    for j in range(jmax + 1):
        acc = np.zeros((n, n), dtype=complex)
        for l in range(j, d):
            from math import comb

            acc += comb(l, j) * (alpha ** (l - j)) * K[l]
        out.append(acc)
    return out


def _rmat_taylor_at(A, alpha, j):
    n, m = A.shape
    out = np.zeros((n, m), dtype=complex)
    for i in range(n):
        for k in range(m):
            if not A[i, k].is_zero:
                out[i, k] = A[i, k].taylor(alpha, j)[j]
    return out


def _scale_rmat(A, scalar):
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for k in range(A.shape[1]):
            out[i, k] = (A[i, k] * scalar).reduced()
    return out


def _k_rmat(K):
    d, n, _ = K.shape
    out = rmat_zeros(n, n)
    for i in range(n):
        for j in range(n):
            out[i, j] = Rational(K[:, i, j])
    return out


def _certify(cert, phi):
    """Fill in sup-norm and H^infty membership residual of Phi - K Phi^*."""
    raw = phi.raw_rmat()
    raw_star = rmat_tconj(raw)
    # Max negative Fourier coefficient of Phi - K Phi^*, from a DFT of
    # pointwise samples; combining into one rational first would lose
    # digits to coefficient roundoff near stacked poles.
    M = 1024
    n = phi.n
    samples = np.zeros((M, n, n), dtype=complex)
    for k in range(M):
        z = np.exp(2j * np.pi * k / M)
        samples[k] = rmat_eval(raw, z) - cert.K_at(z) @ rmat_eval(raw_star, z)
    hat = np.fft.fft(samples, axis=0) / M
    res = 0.0
    for k in range(1, M // 4):
        res = max(res, float(np.linalg.norm(hat[M - k])))
    cert.membership_residual = res
    cert.sup_norm = sup_norm_on_circle(cert.K_at)
    return cert


# ---------------------------------------------------------------------------
# Single-symbol verdicts.
# ---------------------------------------------------------------------------


@dataclass
class HyponormalVerdict:
    hyponormal: bool
    normal: bool
    psd: bool
    min_eig: float
    N: int
    certificate: InterpolationCertificate | None = None

    def to_dict(self):
        return {
            "hyponormal": self.hyponormal,
            "normal_symbol": self.normal,
            "commutator_psd": self.psd,
            "min_eig": self.min_eig,
            "truncation": self.N,
            "contraction_certificate": (
                None
                if self.certificate is None
                else {
                    "sup_norm": self.certificate.sup_norm,
                    "membership_residual": self.certificate.membership_residual,
                }
            ),
        }


def _symbol_degree_estimate(phi):
    try:
        tp, _ = _pullout(phi.plus, phi.n)
        tm, _ = _pullout(phi.minus, phi.n)
        return tp.degree + tm.degree
    except (InputError, CertificationError):
        return 4


def _l2_norm(part, samples=128):
    zs = np.exp(2j * np.pi * np.arange(samples) / samples)
    total = 0.0
    for z in zs:
        total += float(np.linalg.norm(rmat_eval(part, z))) ** 2
    return float(np.sqrt(total / samples))


def hyponormal(phi, N=None):
    """Self-commutator positivity at truncation, with an analytic certificate
    attached whenever the interpolation solver produces a contraction."""
    if N is None:
        N = default_truncation(_symbol_degree_estimate(phi), phi.n)
    normal = is_normal(phi)
    C = self_commutator(phi, N)
    me = min_eig(C)
    psd = is_psd(C)
    verdict = bool(normal and psd)
    cert = None
    try:
        cand = solve_c_phi(phi)
        if cand.contraction and cand.membership_residual < 1e-8:
            cert = cand
    except (InfeasibleError, NoSolutionByThisMethodError, CertificationError):
        cert = None
    if cert is not None and normal and not psd and me < -1e-6:
        raise CertificationError(
            "contraction certificate contradicts a negative commutator"
        )
    if verdict and _l2_norm(phi.minus) > _l2_norm(phi.plus) + 1e-8:
        raise CertificationError("hyponormal verdict violates the L2 norm bound")
    return HyponormalVerdict(verdict, normal, psd, me, N, cert)


def abrahamse_check(phi, N=None):
    """Tensored-scalar singularity + commutator-kernel invariance => normal."""
    if N is None:
        N = default_truncation(_symbol_degree_estimate(phi), phi.n)
    if not tensored_singularity(phi, part="minus"):
        return "NoConstraint"
    C = _mat(self_commutator(phi, N))
    norm_c = float(np.linalg.norm(C, 2))
    U, s, Vh = np.linalg.svd(C)
    smax = max(float(s[0]), 1e-300) if s.size else 1e-300
    keep = s <= 1e-8 * max(smax, 1.0)
    V = Vh[np.argmax(keep):].conj().T if np.any(keep) else np.zeros((C.shape[0], 0))
    if V.shape[1] == 0:
        return "NoConstraint"
    T = _mat(toeplitz(phi, N))
    mapped = T @ V
    resid = float(np.linalg.norm(mapped - V @ (V.conj().T @ mapped)))
    scale = max(float(np.linalg.norm(mapped)), 1e-300)
    if resid / scale >= 1e-7:
        return "NoConstraint"
    if norm_c >= 1e-7:
        raise CertificationError(
            "kernel invariance with a nonzero commutator contradicts normality"
        )
    return "NormalForced"


# ---------------------------------------------------------------------------
# Pair analysis.
# ---------------------------------------------------------------------------


@dataclass
class PairVerdict:
    hyponormal: bool
    pseudo_hyponormal: bool
    lam: np.ndarray | None
    lambda_residual: float
    diagnostics: dict
    theta0: BlaschkeProduct | None
    theta1: BlaschkeProduct | None
    theta2: BlaschkeProduct | None
    theta3: BlaschkeProduct | None
    min_eig: float
    N: int

    def to_dict(self):
        def bz(b):
            return None if b is None else [[float(a.real), float(a.imag), m] for a, m in b.zeros]

        return {
            "hyponormal": self.hyponormal,
            "pseudo_hyponormal": self.pseudo_hyponormal,
            "lambda": None
            if self.lam is None
            else [[[v.real, v.imag] for v in row] for row in self.lam],
            "lambda_residual": self.lambda_residual,
            "diagnostics": self.diagnostics,
            "theta0_zeros": bz(self.theta0),
            "theta1_zeros": bz(self.theta1),
            "theta2_zeros": bz(self.theta2),
            "theta3_zeros": bz(self.theta3),
            "min_eig": self.min_eig,
            "truncation": self.N,
        }


def _common_zero(t0, t2):
    """Common zero of largest multiplicity, ties broken by smallest modulus."""
    best = None
    for a, m in t0.zeros:
        k = t2.multiplicity_at(a)
        if k == 0:
            continue
        cand = (min(m, k), -abs(a), a)
        if best is None or cand[:2] > best[:2]:
            best = cand
    return None if best is None else best[2]


def _lambda_least_squares(phi, psi, samples=64):
    """Best constant L with minus_phi ~ L^* minus_psi in least squares."""
    zs = np.exp(2j * np.pi * (np.arange(samples) + 0.311) / samples)
    S_fp = np.zeros((phi.n, phi.n), dtype=complex)
    S_pp = np.zeros((phi.n, phi.n), dtype=complex)
    norm_f = 0.0
    for z in zs:
        Mf = rmat_eval(phi.minus, z)
        Mp = rmat_eval(psi.minus, z)
        S_fp += Mf @ Mp.conj().T
        S_pp += Mp @ Mp.conj().T
        norm_f += float(np.linalg.norm(Mf)) ** 2
    X = S_fp @ np.linalg.pinv(S_pp)
    resid = 0.0
    for z in zs:
        resid += float(np.linalg.norm(rmat_eval(phi.minus, z) - X @ rmat_eval(psi.minus, z))) ** 2
    rel = float(np.sqrt(resid / max(norm_f, 1e-300)))
    return X.conj().T, rel


def pair_analyze(phi, psi, N=None):
    if phi.n != psi.n:
        raise InputError("pair symbols must share a dimension")
    n = phi.n
    if N is None:
        N = default_truncation(
            max(_symbol_degree_estimate(phi), _symbol_degree_estimate(psi)), n
        )
    normal_both = is_normal(phi) and is_normal(psi)
    comm = commutes(phi, psi)
    C = pair_commutator(phi, psi, N)
    me = min_eig(C)
    psd = is_psd(C)
    verdict = bool(normal_both and comm and psd)
    pseudo = is_psd(pair_pseudo_commutator(phi, psi, N))

    theta0, B = _pullout(phi.minus, n)
    theta2, D = _pullout(psi.minus, n)
    theta1 = theta3 = None
    lam = None
    lam_resid = 1.0
    cond_ii = False
    if rmat_is_zero(phi.minus) and rmat_is_zero(psi.minus):
        cond_ii = True
        lam_resid = 0.0
    elif not rmat_is_zero(psi.minus):
        gamma0 = _common_zero(theta0, theta2)
        lam_ls, lam_resid = _lambda_least_squares(phi, psi)
        cond_ii = lam_resid <= 1e-8
        if cond_ii:
            lam = lam_ls
        if gamma0 is not None and lam is None:
            Dg = rmat_eval(D, gamma0)
            if np.linalg.cond(Dg) < 1e12:
                cand = rmat_eval(B, gamma0) @ np.linalg.inv(Dg)
                if _cond_ii_holds(phi, psi, cand):
                    lam, cond_ii = cand, True

    cond_iii = None
    try:
        theta1, theta3, cond_iii = _condition_iii(phi, psi, theta0, theta2, lam, N)
    except (InputError, CertificationError, np.linalg.LinAlgError):
        cond_iii = None
    diagnostics = {
        "i_normal_commuting": bool(normal_both and comm),
        "ii_minus_parts_related": bool(cond_ii),
        "iii_transformed_pseudo_hyponormal": cond_iii,
    }
    return PairVerdict(
        verdict, bool(pseudo), lam, lam_resid, diagnostics,
        theta0, theta1, theta2, theta3, me, N,
    )


def _cond_ii_holds(phi, psi, lam, samples=32, tol=1e-8):
    zs = np.exp(2j * np.pi * (np.arange(samples) + 0.127) / samples)
    X = lam.conj().T
    worst, scale = 0.0, 1.0
    for z in zs:
        Mf = rmat_eval(phi.minus, z)
        Mp = rmat_eval(psi.minus, z)
        worst = max(worst, float(np.linalg.norm(Mf - X @ Mp)))
        scale = max(scale, float(np.linalg.norm(Mf)))
    return worst <= tol * scale


def _condition_iii(phi, psi, theta0, theta2, lam, N):
    """Condition (iii): pseudo-hyponormality of the raised symbol."""
    n = phi.n
    tp_phi, A = _pullout(phi.plus, n)
    tp_psi, Cc = _pullout(psi.plus, n)
    if not theta0.divides(tp_phi) or not theta2.divides(tp_psi):
        return None, None, None
    theta1 = tp_phi.divide(theta0)
    theta3 = tp_psi.divide(theta2)
    if not theta0.same_as(theta2):
        return theta1, theta3, None
    if lam is None:
        return theta1, theta3, None
    theta = gcd_blaschke(theta1, theta3)
    omega1 = theta1.divide(theta).to_rational()
    omega3 = theta3.divide(theta).to_rational()
    G = rmat_sub(
        _scale_rmat(A, omega3),
        _scale_rmat(rmat_mul(Cc, _const_rmat(lam.conj().T, n)), omega1),
    )
    sigma = theta0 * theta
    _, _, _, cofactor = left_gcd_with_scalar(G, sigma)
    omega_mat = rmat_reduced(rmat_scale((omega1 * omega3).reduced(), cofactor))
    raised = upper(psi, None, omega_mat)
    ok = is_psd(pseudo_commutator(raised, raised, N))
    return theta1, theta3, bool(ok)


def _const_rmat(mat, n):
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = Rational([complex(mat[i, j])])
    return out


def degree_equality_check(phi, psi):
    """Compare the degrees of the minus-side right coprime inner parts."""
    d1 = 0 if rmat_is_zero(phi.minus) else dss_right(phi.minus).degree
    d2 = 0 if rmat_is_zero(psi.minus) else dss_right(psi.minus).degree
    return d1 == d2


def rank_formula(phi, psi, N=None):
    """(rank pair commutator, rank single commutator, rank I - K(M)*K(M))."""
    if N is None:
        N = default_truncation(
            max(_symbol_degree_estimate(phi), _symbol_degree_estimate(psi)), phi.n
        )
    r_pair = numerical_rank(pair_commutator(phi, psi, N))
    r_single = numerical_rank(self_commutator(phi, N))
    cert = solve_c_phi(phi)
    M = M_matrix(cert.theta_plus)
    KM = P_of_M(list(cert.K), M)
    eye = np.eye(KM.shape[0], dtype=complex)
    r_kk = numerical_rank(eye - KM.conj().T @ KM)
    return r_pair, r_single, r_kk


# ---------------------------------------------------------------------------
# Subnormal completion of 2x2 partial block Toeplitz matrices.
# ---------------------------------------------------------------------------


@dataclass
class CompletionVerdict:
    klass: str  # Normal | NotSubnormal | SpecialCase
    case_data: dict = field(default_factory=dict)

    def to_dict(self):
        return {"class": self.klass, "case_data": {
            k: v for k, v in self.case_data.items() if isinstance(v, (int, float, str, bool))
        }}


def _scalar_minus_decomp(entry):
    """Coprime data (theta, a) of the co-analytic part of a scalar symbol."""
    _, co = entry.split_disk()
    if co.is_zero:
        return BlaschkeProduct(), Rational.const(0.0)
    f = co.tconj()
    return scalar_coprime_decomp(f)


def completion_classify(alpha, beta, phi_entry, psi_entry, N=48):
    """Decide normal / not subnormal / special case for the completion

        [[T_{conj(b_alpha)}, T_phi], [T_psi, T_{conj(b_beta)}]].
    """
    alpha, beta = complex(alpha), complex(beta)
    if pseudo_hyperbolic(alpha, beta) > 1e-8:
        return CompletionVerdict("NotSubnormal", {"reason": "corner points differ"})
    b_bar = BlaschkeProduct([(alpha, 1)]).to_rational().tconj()
    raw = np.array([[b_bar, phi_entry], [psi_entry, b_bar]], dtype=object)
    sym = split(raw)
    if not is_normal(sym):
        return CompletionVerdict("NotSubnormal", {"reason": "symbol not normal"})
    theta0, a = _scalar_minus_decomp(phi_entry)
    theta1, b = _scalar_minus_decomp(psi_entry)
    m = theta0.multiplicity_at(alpha)
    n_ = theta1.multiplicity_at(alpha)
    data = {"m": m, "n": n_}
    if m != n_ or m > 1:
        data["reason"] = "mismatched or high Blaschke orders at alpha"
        return CompletionVerdict("NotSubnormal", data)
    if m == 1:
        theta0p = theta0.divide(BlaschkeProduct([(alpha, 1)]))
        theta1p = theta1.divide(BlaschkeProduct([(alpha, 1)]))
        ab = complex(a(alpha)) * complex(b(alpha))
        tt = theta0p(alpha) * theta1p(alpha)
        data["ab_at_alpha"] = abs(ab)
        data["theta_primes_at_alpha"] = abs(tt)
        if abs(ab) > 1e-10 and abs(ab - tt) <= 1e-8 * max(1.0, abs(ab)):
            return CompletionVerdict("SpecialCase", data)
    C = self_commutator(sym, N)
    norm_c = float(np.linalg.norm(_mat(C), 2))
    data["commutator_norm"] = norm_c
    if norm_c < 1e-7:
        return CompletionVerdict("Normal", data)
    return CompletionVerdict("NotSubnormal", data)


# ---------------------------------------------------------------------------
# Tuples.
# ---------------------------------------------------------------------------


@dataclass
class TupleVerdict:
    hyponormal: bool
    subpairs_hyponormal: list
    equivalence: bool
    min_eig: float
    N: int

    def to_dict(self):
        return {
            "hyponormal": self.hyponormal,
            "subpairs_hyponormal": self.subpairs_hyponormal,
            "subpair_tuple_equivalence": self.equivalence,
            "min_eig": self.min_eig,
            "truncation": self.N,
        }


def tuple_analyze(phis, N=None):
    """Joint pseudo-hyponormality of a tuple against its subpairs."""
    if not phis:
        raise InputError("empty tuple")
    if N is None:
        N = default_truncation(max(_symbol_degree_estimate(p) for p in phis), phis[0].n)
    C = tuple_pseudo_commutator(phis, N)
    me = min_eig(C)
    tuple_ok = is_psd(C)
    subpairs = []
    for i, j in itertools.combinations(range(len(phis)), 2):
        subpairs.append(bool(is_psd(pair_pseudo_commutator(phis[i], phis[j], N))))
    all_sub = all(subpairs) if subpairs else tuple_ok
    return TupleVerdict(bool(tuple_ok), subpairs, bool(tuple_ok == all_sub), me, N)
