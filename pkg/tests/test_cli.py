import json
import subprocess
import sys


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "freeboundary.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_unknown_identity_is_usage_error():
    code, out, err = run_cli("run", "no-such-identity")
    assert code == 2
    assert "valid names" in err


def test_run_symmetry_passes():
    code, out, _ = run_cli("run", "qt-symmetry", "--n", "1", "--alphabet", "1",
                           "--qt-cap", "2", "--x-cap", "2", "--param-cap", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass"
    assert rep["residual"] == []
    assert rep["caps"] == {"qt": 2, "x": 2, "params": 2, "z": 0}
    assert "runtime_ms" not in rep  # deterministic output by default


def test_run_yang_baxter():
    code, out, _ = run_cli("run", "yang-baxter")
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_reports_bit_identical():
    args = ("run", "mehler", "--qt-cap", "2", "--param-cap", "4", "--z-order", "3")
    _, out1, _ = run_cli(*args)
    _, out2, _ = run_cli(*args)
    assert out1 == out2
    assert json.loads(out1)["status"] == "pass"


def test_dump_zn_record():
    code, out, _ = run_cli("dump", "zn", "--n", "1", "--alphabet", "1",
                           "--qt-cap", "1", "--x-cap", "1", "--param-cap", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "zn"
    assert payload["records"][0][-2:] == [1, 1]
    # degenerate alphabet still produces a constant record
    code, out, _ = run_cli("dump", "zn", "--n", "0", "--alphabet", "0",
                           "--qt-cap", "1", "--x-cap", "0", "--param-cap", "0")
    payload = json.loads(out)
    assert payload["records"] == [[0] * 6 + [1, 1]]


def test_dump_distribution():
    code, out, _ = run_cli("dump", "distribution", "--alphabet", "1",
                           "--params", "1/2,-1/4,1/3,-1/5,1/2,1/3",
                           "--rapidities", "1/2", "--n-max", "1")
    assert code == 0
    payload = json.loads(out)
    entries = payload["entries"]
    assert all("/" in k for k in entries)
    from fractions import Fraction as F
    total = sum((F(v) for v in entries.values()), F(0))
    assert total == 1


def test_sample_streams_deterministic():
    args = ("sample", "--alphabet", "2", "--count", "8", "--seed", "5",
            "--params", "1/2,-1/4,1/3,-1/5,1/2,1/3", "--rapidities", "1/2,1/3")
    _, out1, _ = run_cli(*args)
    _, out2, _ = run_cli(*args)
    assert out1 == out2
    lines = out1.strip().splitlines()
    assert len(lines) == 8
    for line in lines:
        bits, h, v = line.split()
        assert set(bits) <= {"0", "1"} and len(bits) == 2
        int(h), int(v)


def test_sample_rejects_bad_regime():
    code, _out, err = run_cli("sample", "--alphabet", "1", "--count", "1",
                              "--params", "1/2,1/4,1/3,1/5,1/2,1/3",
                              "--rapidities", "1/2")
    assert code == 2
    assert "rejected" in err


def test_dump_boundary_weight_takes_shape():
    code, out, _ = run_cli("dump", "series", "--name", "boundary-weight",
                           "--shape", "2,1", "--qt-cap", "1", "--x-cap", "0",
                           "--param-cap", "3", "--alphabet", "0")
    assert code == 0
    payload = json.loads(out)
    # (a+b)(1+ab): four monomials of odd total letter degree
    assert len(payload["records"]) == 4
