import json

import pytest
from test_protocol_symbolic import COUNTDOWN

from zkmc.benchmarks import exb
from zkmc.cli import main
from zkmc.lang import print_explicit


@pytest.fixture()
def exb_file(tmp_path):
    p = tmp_path / "exb.zkx.json"
    p.write_text(print_explicit(*exb(1, 2)))
    return p


def run(*argv):
    return main([str(a) for a in argv])


def test_explicit_pipeline(tmp_path, exb_file, capsys):
    pub, srs, bundle = tmp_path / "pub.json", tmp_path / "srs", tmp_path / "b"
    assert run("check", exb_file) == 0
    assert run("cert", exb_file, "-o", pub) == 0
    assert json.loads(pub.read_text())["format"] == "zkx"
    assert run("setup", pub, "-o", srs, "--insecure-setup", "--seed", 1) == 0
    assert run("prove", exb_file, "--params", srs, "-o", bundle, "--insecure-setup", "--seed", 2) == 0
    assert run("verify", pub, "--params", srs, "--bundle", bundle, "--insecure-setup") == 0
    # release mode refuses test parameters
    assert run("verify", pub, "--params", srs, "--bundle", bundle) == 2
    data = bytearray(bundle.read_bytes())
    data[-5] ^= 1
    bundle.write_bytes(bytes(data))
    assert run("verify", pub, "--params", srs, "--bundle", bundle, "--insecure-setup") == 1


def test_symbolic_pipeline(tmp_path, capsys):
    unit, pub, sp, bundle = (tmp_path / n for n in ("m.zkgc", "pub.json", "sp", "b"))
    unit.write_text(COUNTDOWN)
    flags = ["--bound", 255, "--insecure-setup"]
    assert run("check", unit, "--bound", 255) == 0
    assert "discharged: " in capsys.readouterr().out
    assert run("cert", unit, "-o", pub) == 0
    doc = json.loads(pub.read_text())
    assert "x' = x - 1" not in pub.read_text() and doc["shape"]["vars"] == ["x", "y"]
    assert run("setup", pub, "-o", sp, *flags, "--seed", 3) == 0
    assert run("prove", unit, "--params", sp, "-o", bundle, *flags, "--seed", 4) == 0
    assert run("verify", pub, "--params", sp, "--bundle", bundle, *flags) == 0
    assert "accept" in capsys.readouterr().out


def test_check_rejects_bad_certificate(tmp_path, capsys):
    unit = tmp_path / "bad.zkgc"
    unit.write_text(COUNTDOWN.replace("update x' = x - 1", "update x' = x"))
    assert run("check", unit, "--bound", 255) == 1
    assert "satisfiable" in capsys.readouterr().out


def test_usage_errors(tmp_path, exb_file, capsys):
    assert run("check", tmp_path / "missing.zkgc") == 2
    bad = tmp_path / "bad.zkgc"
    bad.write_text("system { var x : 0..3 }")
    assert run("check", bad) == 2
    assert ":1:" in capsys.readouterr().err
    assert run("check", exb_file, "--scheme", "symbolic") == 2
    assert run("prove", exb_file, "--params", "x", "-o", "y", "--seed", 1) == 2  # seed without test mode
    assert run("frobnicate") == 2


def test_bench_explicit(capsys):
    assert run("bench", "exb_i1a2", "--insecure-setup", "--seed", 1) == 0
    row = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert row["ok"] and row["states"] == 32 and row["sum_E"] == 104
    assert {"enum", "setup", "prover", "verifier"} <= row.keys()
