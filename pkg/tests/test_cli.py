"""End-to-end checks of the command-line front end."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from btk import MatrixSymbol, Rational, split
from btk.cli import load_symbol, main, symbol_to_file_dict

from conftest import circle


@pytest.fixture
def runner():
    return CliRunner()


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _entry(num, den=((1.0, 0.0),), zshift=0):
    return {"num": [list(p) for p in num], "den": [list(p) for p in den], "zshift": zshift}


_ZERO = _entry([[0.0, 0.0]])
_ONE = _entry([[1.0, 0.0]])
_Z = _entry([[0.0, 0.0], [1.0, 0.0]])


def test_selftest_list(runner):
    res = runner.invoke(main, ["selftest", "--list"])
    assert res.exit_code == 0
    lines = [l for l in res.output.strip().splitlines() if l]
    assert len(lines) == 14
    assert lines[0].startswith("01")


def test_hyponormal_verdict_and_json(runner, tmp_path):
    # diag(z + conj(z), z) is hyponormal and not normal
    zbar = _entry([[0.0, 0.0], [1.0, 0.0]], zshift=-1)
    lau = _entry([[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]], zshift=-1)
    path = _write(tmp_path, "abr.json", {"n": 2, "entries": [[lau, _ZERO], [_ZERO, _Z]]})
    res = runner.invoke(main, ["--json", "hyponormal", path])
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["hyponormal"] is True
    assert out["commutator_psd"] is True
    cert = out["contraction_certificate"]
    assert cert is not None and cert["sup_norm"] <= 1.0 + 1e-9


def test_symbol_file_round_trip(tmp_path):
    z = Rational.z()
    lau = Rational([1.0, 0.0, 2.0], [0.0, 1.0])
    phi = split(np.array([[lau, z], [Rational.const(0.5j), (z * z).reduced()]], dtype=object))
    path = _write(tmp_path, "rt.json", symbol_to_file_dict(phi))
    back = load_symbol(path)
    for zz in circle(24):
        assert np.linalg.norm(back.eval(zz) - phi.eval(zz)) < 1e-10


def test_completion_normal(runner, tmp_path):
    f = _write(tmp_path, "f.json", {"n": 1, "entries": [[_entry([[0.1, 0.0], [1.0, 0.0]])]]})
    g = _write(
        tmp_path, "g.json", {"n": 1, "entries": [[_entry([[0.0, 0.1], [0.0, 1.0]])]]}
    )
    res = runner.invoke(main, ["--json", "completion", "0", "0", f, g])
    assert res.exit_code == 0
    assert json.loads(res.output)["verdict"] == "Normal"


def test_infeasible_exits_4(runner, tmp_path):
    z2 = _entry([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    path = _write(tmp_path, "inf.json", {"n": 1, "plus": [[_Z]], "minus": [[z2]]})
    res = runner.invoke(main, ["--quiet", "hermite-fejer", path])
    assert res.exit_code == 4


def test_bad_input_exits_2(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    res = runner.invoke(main, ["--quiet", "hyponormal", str(path)])
    assert res.exit_code == 2
    # pole on the circle is rejected at parse time
    onpole = _write(
        tmp_path,
        "pole.json",
        {"n": 1, "entries": [[_entry([[1.0, 0.0]], den=[[1.0, 0.0], [-1.0, 0.0]])]]},
    )
    res = runner.invoke(main, ["--quiet", "hyponormal", onpole])
    assert res.exit_code == 2


def test_flag_validation(runner, tmp_path):
    path = _write(tmp_path, "s.json", {"n": 1, "entries": [[_Z]]})
    assert runner.invoke(main, ["--truncation", "4", "hyponormal", path]).exit_code == 2
    assert runner.invoke(main, ["--tol", "0.5", "hyponormal", path]).exit_code == 2
    res = runner.invoke(main, ["hyponormal", path], env={"BTK_TOL": "banana"})
    assert res.exit_code != 0


def test_coprime_command(runner):
    b1 = json.dumps({"num": [[0.0, 0.0], [1.0, 0.0]], "den": [[1.0, 0.0]], "zshift": 0})
    b2 = json.dumps(
        {"num": [[-0.5, 0.0], [1.0, 0.0]], "den": [[1.0, 0.0], [-0.5, 0.0]], "zshift": 0}
    )
    res = runner.invoke(main, ["--json", "coprime", b1, b2])
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["verdict"] == "coprime"
    assert out["gcd_degree"] == 0
    res2 = runner.invoke(main, ["--json", "coprime", b1, b1])
    assert json.loads(res2.output)["verdict"] == "not coprime"


def test_compose_round_trip(runner, tmp_path):
    lau = _entry([[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]], zshift=-1)
    path = _write(tmp_path, "c.json", {"n": 1, "entries": [[lau]]})
    omega = json.dumps({"num": [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]], "den": [[1.0, 0.0]]})
    res = runner.invoke(main, ["--json", "compose", path, omega])
    assert res.exit_code == 0
    sym = json.loads(res.output)["symbol"]
    out_path = _write(tmp_path, "c2.json", sym)
    back = load_symbol(out_path)
    # phi(z^2) = z^2 + conj(z)^2
    for z in circle(16):
        w = z * z
        want = w + np.conj(w)
        assert abs(back.eval(z)[0, 0] - want) < 1e-9


def test_model_matches_library(runner, tmp_path):
    theta = json.dumps(
        {"num": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]], "den": [[1.0, 0.0]]}
    )
    z2 = _entry([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    path = _write(
        tmp_path, "q.json", {"n": 2, "plus": [[z2, _ZERO], [_ZERO, z2]], "minus": [[_ZERO, _ZERO], [_ZERO, _ZERO]]}
    )
    res = runner.invoke(main, ["--json", "model", theta, path])
    assert res.exit_code == 0
    out = json.loads(res.output)
    QM = np.array([[complex(a, b) for a, b in row] for row in out["Q_of_M"]])
    from btk import M_matrix, Q_of_M
    from btk.scalar_inner import BlaschkeProduct

    M = M_matrix(BlaschkeProduct.from_points([0.0, 0.0, 0.0]))
    want = Q_of_M(load_symbol(path), M)
    assert np.max(np.abs(QM - want)) < 1e-10
