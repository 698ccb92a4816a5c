"""Command-line front end.

Symbols travel as UTF-8 JSON files.  Each matrix entry is a Laurent
rational given by ascending coefficient lists of [re, im] pairs:

    {"num": [[0,0],[1,0]], "den": [[1,0]], "zshift": -1}

which reads num(z) * z**zshift / den(z).  A file holds {"n": ..,
"entries": [[entry, ...], ...]} and optionally explicit "plus" and
"minus" analytic parts in the same entry format.  Complex numbers in
output JSON are [re, im] pairs as well.
"""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np
from numpy.polynomial import polynomial as P

from ._rational import Rational
from .errors import (
    BtkError,
    CertificationError,
    InfeasibleError,
    InputError,
    NoSolutionByThisMethodError,
)
from .scalar_inner import (
    BlaschkeProduct,
    coprime_blaschke,
    disk_zeros_of_rational,
    gcd_blaschke,
)
from .symbol import MatrixSymbol, compose_symbol, dss_left, dss_right, split
from .hardy_ops import M_matrix, Q_of_M, default_truncation
from .analysis import (
    completion_classify,
    hyponormal,
    pair_analyze,
    rank_formula,
    solve_c_phi,
)
from .acceptance import CRITERIA, run_all


# ---------------------------------------------------------------------------
# parsing and serialization

def _pairs_to_coeffs(pairs, what):
    try:
        return np.array([complex(re, im) for re, im in pairs])
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad coefficient list in {what}: {exc}") from exc


def parse_entry(entry, what="entry"):
    """Build a Rational from a JSON entry dict."""
    if not isinstance(entry, dict) or "num" not in entry:
        raise InputError(f"{what} must be an object with a 'num' field")
    num = _pairs_to_coeffs(entry["num"], what)
    den = _pairs_to_coeffs(entry.get("den", [[1.0, 0.0]]), what)
    shift = int(entry.get("zshift", 0))
    if shift > 0:
        num = P.polymul(np.concatenate([np.zeros(shift), [1.0]]), num)
    elif shift < 0:
        den = P.polymul(np.concatenate([np.zeros(-shift), [1.0]]), den)
    r = Rational(num, den).reduced()
    for p in r.poles():
        if abs(abs(p) - 1.0) < 1e-9:
            raise InputError(f"{what} has a pole on the unit circle at {p}")
    return r


def _entry_grid(data, key, n):
    rows = data[key]
    if len(rows) != n or any(len(row) != n for row in rows):
        raise InputError(f"'{key}' must be an {n} x {n} array of entries")
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = parse_entry(rows[i][j], f"{key}[{i}][{j}]")
    return out


def load_symbol(path):
    """Read a symbol file and return a MatrixSymbol."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data:
        raise InputError(f"{path}: expected an object with an 'n' field")
    n = int(data["n"])
    if n < 1:
        raise InputError(f"{path}: n must be positive")
    if "plus" in data and "minus" in data:
        return MatrixSymbol(_entry_grid(data, "plus", n), _entry_grid(data, "minus", n))
    if "entries" not in data:
        raise InputError(f"{path}: need 'entries' or explicit 'plus'/'minus'")
    return split(_entry_grid(data, "entries", n))


def rational_to_entry(r):
    return {
        "num": [[float(c.real), float(c.imag)] for c in r.num],
        "den": [[float(c.real), float(c.imag)] for c in r.den],
        "zshift": 0,
    }


def symbol_to_file_dict(phi):
    n = phi.n
    return {
        "n": n,
        "plus": [[rational_to_entry(phi.plus[i, j]) for j in range(n)] for i in range(n)],
        "minus": [[rational_to_entry(phi.minus[i, j]) for j in range(n)] for i in range(n)],
    }


def _cplx(x):
    x = complex(x)
    return [float(x.real), float(x.imag)]


def _cmat(M):
    M = np.asarray(M, dtype=complex)
    return [[_cplx(M[i, j]) for j in range(M.shape[1])] for i in range(M.shape[0])]


def parse_complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise InputError(f"cannot parse complex number {text!r}") from exc


def parse_inline_entry(text, what):
    """An entry dict given inline on the command line, or in a file."""
    text = text.strip()
    if not text.startswith("{"):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {what}: {exc}") from exc
    try:
        return parse_entry(json.loads(text), what)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from exc


def _blaschke_from_spec(text, what):
    r = parse_inline_entry(text, what)
    theta = disk_zeros_of_rational(r)
    c = complex(r(1.0)) / complex(theta(1.0))
    if abs(abs(c) - 1.0) > 1e-8:
        raise InputError(f"{what} is not a finite Blaschke product")
    theta = BlaschkeProduct(theta.zeros, c / abs(c))
    zs = np.exp(2j * np.pi * np.arange(64) / 64)
    err = max(abs(complex(theta(z)) - complex(r(z))) for z in zs)
    if err > 1e-8:
        raise InputError(f"{what} is not a finite Blaschke product")
    return theta


# ---------------------------------------------------------------------------
# reporting

def emit(ctx, payload, summary):
    click.echo(json.dumps(_jsonable(payload), indent=2))
    if not ctx.obj.get("quiet"):
        click.echo(summary, err=True)


def _exit_code(exc):
    if isinstance(exc, (InfeasibleError, NoSolutionByThisMethodError)):
        return 4
    if isinstance(exc, CertificationError):
        return 3
    return 2


def run_guarded(ctx, fn):
    try:
        fn()
    except BtkError as exc:
        if not ctx.obj.get("quiet"):
            click.echo(f"error: {exc}", err=True)
        sys.exit(_exit_code(exc))


# ---------------------------------------------------------------------------
# the command group

@click.group()
@click.option("--truncation", type=int, default=None, help="Override the block truncation order (>= 8).")
@click.option("--tol", type=float, default=None, help="Decision tolerance (default 1e-8, env BTK_TOL).")
@click.option("--samples", type=int, default=1024, show_default=True, help="Circle sample count for sup norms.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized suites.")
@click.option("--json", "json_only", is_flag=True, help="Suppress everything except the JSON verdict.")
@click.option("--quiet", is_flag=True, help="No human summary on stderr.")
@click.pass_context
def main(ctx, truncation, tol, samples, seed, json_only, quiet):
    """Decision procedures for rational matrix symbols on the circle."""
    if tol is None:
        tol = float(os.environ.get("BTK_TOL", "1e-8"))
    if truncation is not None and truncation < 8:
        click.echo("error: --truncation must be at least 8", err=True)
        sys.exit(2)
    if not (0.0 < tol < 1e-2):
        click.echo("error: --tol must lie in (0, 1e-2)", err=True)
        sys.exit(2)
    if samples < 16:
        click.echo("error: --samples must be at least 16", err=True)
        sys.exit(2)
    ctx.obj = {
        "truncation": truncation,
        "tol": tol,
        "samples": samples,
        "seed": seed,
        "quiet": quiet or json_only,
    }


def _pick_N(ctx, phi, extra=None):
    if ctx.obj["truncation"] is not None:
        return ctx.obj["truncation"]
    syms = [phi] + (extra or [])
    from .symbol import degree_symbol

    d = max(degree_symbol(s) for s in syms)
    return default_truncation(d, max(s.n for s in syms))


@main.command("factorize")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--side", type=click.Choice(["left", "right"]), default="right", show_default=True)
@click.pass_context
def cmd_factorize(ctx, file, side):
    """Coprime inner-times-conjugate factorization of a symbol."""

    def work():
        phi = load_symbol(file)
        part = phi.plus if phi.is_analytic else phi.minus
        fac = dss_left(part) if side == "left" else dss_right(part)
        payload = {
            "verdict": "factorized",
            "side": side,
            "degree": fac.degree,
            "scalar_form": fac.scalar_form is not None,
            "parameters": {"n": phi.n},
        }
        if fac.scalar_form is not None:
            theta, _ = fac.scalar_form
            payload["theta_zeros"] = [
                {"point": _cplx(a), "multiplicity": m} for a, m in theta.zeros
            ]
        emit(ctx, payload, f"{side} coprime factorization: inner degree {fac.degree}")

    run_guarded(ctx, work)


@main.command("hyponormal")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def cmd_hyponormal(ctx, file):
    """Test hyponormality of the Toeplitz operator with this symbol."""

    def work():
        phi = load_symbol(file)
        v = hyponormal(phi, N=_pick_N(ctx, phi))
        payload = v.to_dict()
        word = "hyponormal" if v.hyponormal else "not hyponormal"
        emit(ctx, payload, f"{word} (min eigenvalue {v.min_eig:.3e} at N={v.N})")

    run_guarded(ctx, work)


@main.command("pair")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def cmd_pair(ctx, file_a, file_b):
    """Joint hyponormality analysis of a pair of symbols."""

    def work():
        phi = load_symbol(file_a)
        psi = load_symbol(file_b)
        v = pair_analyze(phi, psi, N=_pick_N(ctx, phi, [psi]))
        payload = v.to_dict()
        word = "jointly hyponormal" if v.hyponormal else "not jointly hyponormal"
        emit(ctx, payload, f"{word} (min eigenvalue {v.min_eig:.3e} at N={v.N})")

    run_guarded(ctx, work)


@main.command("completion")
@click.argument("alpha")
@click.argument("beta")
@click.argument("file_phi", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_psi", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def cmd_completion(ctx, alpha, beta, file_phi, file_psi):
    """Classify the subnormal completion problem for scalar corner data."""

    def work():
        a = parse_complex(alpha)
        b = parse_complex(beta)
        sphi = load_symbol(file_phi)
        spsi = load_symbol(file_psi)
        if sphi.n != 1 or spsi.n != 1:
            raise InputError("completion expects 1 x 1 symbol files")
        N = ctx.obj["truncation"] or 48
        v = completion_classify(a, b, sphi.raw_rmat()[0, 0], spsi.raw_rmat()[0, 0], N=N)
        payload = {"verdict": v.klass, "case_data": _jsonable(v.case_data),
                   "parameters": {"alpha": _cplx(a), "beta": _cplx(b), "N": N}}
        emit(ctx, payload, f"classification: {v.klass}")

    run_guarded(ctx, work)


@main.command("rank")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def cmd_rank(ctx, file_a, file_b):
    """Three independent self-commutator rank computations."""

    def work():
        phi = load_symbol(file_a)
        psi = load_symbol(file_b)
        N = _pick_N(ctx, phi, [psi])
        r1, r2, r3 = rank_formula(phi, psi, N)
        payload = {
            "verdict": "consistent" if r1 == r2 == r3 else "inconsistent",
            "ranks": {"pair_commutator": r1, "self_commutator": r2, "identity_minus_KK": r3},
            "parameters": {"N": N},
        }
        emit(ctx, payload, f"ranks: pair {r1}, single {r2}, I-K*K {r3}")
        if not (r1 == r2 == r3):
            raise CertificationError("the three ranks disagree")

    run_guarded(ctx, work)


@main.command("hermite-fejer")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def cmd_hermite_fejer(ctx, file):
    """Solve the analytic interpolation problem attached to a symbol."""

    def work():
        phi = load_symbol(file)
        cert = solve_c_phi(phi)
        payload = {
            "verdict": "solved",
            "contraction": bool(cert.contraction),
            "sup_norm": cert.sup_norm,
            "residuals": {
                "interpolation": cert.interpolation_residual,
                "membership": cert.membership_residual,
            },
            "K_coefficients": [_cmat(c) for c in cert.K],
            "nodes": [
                {"point": _cplx(a), "multiplicity": int(m)} for a, m in cert.data.points
            ],
        }
        emit(
            ctx,
            payload,
            f"solved: sup |K| = {cert.sup_norm:.6f}, "
            f"membership residual {cert.membership_residual:.2e}",
        )

    run_guarded(ctx, work)


@main.command("compose")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.argument("omega_spec")
@click.pass_context
def cmd_compose(ctx, file, omega_spec):
    """Precompose a symbol with a finite Blaschke product."""

    def work():
        phi = load_symbol(file)
        omega = parse_inline_entry(omega_spec, "omega")
        out = compose_symbol(phi, omega)
        payload = {"verdict": "composed", "symbol": symbol_to_file_dict(out)}
        emit(ctx, payload, f"composed symbol of size {out.n}")

    run_guarded(ctx, work)


@main.command("coprime")
@click.argument("spec1")
@click.argument("spec2")
@click.pass_context
def cmd_coprime(ctx, spec1, spec2):
    """Coprimeness and greatest common divisor of two Blaschke products."""

    def work():
        t1 = _blaschke_from_spec(spec1, "spec1")
        t2 = _blaschke_from_spec(spec2, "spec2")
        g = gcd_blaschke(t1, t2)
        payload = {
            "verdict": "coprime" if coprime_blaschke(t1, t2) else "not coprime",
            "gcd_degree": g.degree,
            "gcd_zeros": [{"point": _cplx(a), "multiplicity": m} for a, m in g.zeros],
            "degrees": [t1.degree, t2.degree],
        }
        emit(ctx, payload, f"{payload['verdict']}, gcd degree {g.degree}")

    run_guarded(ctx, work)


@main.command("model")
@click.argument("theta_spec")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def cmd_model(ctx, theta_spec, file):
    """Evaluate an analytic symbol at the model-space contraction."""

    def work():
        theta = _blaschke_from_spec(theta_spec, "theta")
        if theta.degree == 0:
            raise InputError("theta must be nonconstant")
        phi = load_symbol(file)
        if not phi.is_analytic:
            raise InputError("model evaluation needs an analytic symbol")
        M = M_matrix(theta)
        QM = Q_of_M(phi, M)
        payload = {
            "verdict": "evaluated",
            "Q_of_M": _cmat(QM),
            "M": _cmat(M),
            "parameters": {"theta_degree": theta.degree, "n": phi.n},
        }
        emit(ctx, payload, f"Q(M) computed, size {QM.shape[0]} x {QM.shape[1]}")

    run_guarded(ctx, work)


@main.command("selftest")
@click.option("--list", "list_only", is_flag=True, help="Print the criterion names and exit.")
@click.pass_context
def cmd_selftest(ctx, list_only):
    """Run the full acceptance suite."""
    if list_only:
        for i, crit in enumerate(CRITERIA, start=1):
            doc = (crit.__doc__ or "").strip().splitlines()[0]
            click.echo(f"{i:02d}  {doc}")
        return
    results = run_all(ctx.obj["seed"])
    all_ok = all(ok for _, ok, _ in results)
    payload = {
        "verdict": "pass" if all_ok else "fail",
        "seed": ctx.obj["seed"],
        "criteria": [
            {"name": name, "passed": ok, "detail": detail} for name, ok, detail in results
        ],
    }
    click.echo(json.dumps(payload, indent=2))
    if not ctx.obj["quiet"]:
        for name, ok, detail in results:
            click.echo(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", err=True)
    if not all_ok:
        sys.exit(3)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return _cplx(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.complexfloating):
        return _cplx(complex(obj))
    if isinstance(obj, np.ndarray):
        return _cmat(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


if __name__ == "__main__":
    main()
