from pathlib import Path

import pytest

from transreduce import defense, regular, zmachine
from transreduce.cli import FALSE, INCONCLUSIVE, INPUT_ERROR, OK, main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_pcp_solve(capsys):
    code, out, _ = run(capsys, "pcp", "solve", SAMPLES / "ex1.pcp", "--max-len", 3)
    assert code == OK and "solution 1,2" in out
    code, out, _ = run(capsys, "pcp", "solve", SAMPLES / "ex1.pcp", "--max-len", 1)
    assert code == INCONCLUSIVE


def test_pcp_scan_and_witness(capsys):
    code, out, _ = run(capsys, "pcp", "scan", SAMPLES / "ex1.pcp", "--max-seq", 2, "--max-word", 3)
    assert code == OK and out.strip().endswith("violations 0")
    code, out, _ = run(capsys, "pcp", "witness", SAMPLES / "ex1.pcp", "--seq", "1,2")
    assert code == OK
    assert out.splitlines()[0] == "witness (i1.i2.a.b.b, c^8)"
    assert "in L0: yes" in out and "in Lu: no" in out and "in Lv: no" in out
    code, _, err = run(capsys, "pcp", "witness", SAMPLES / "ex1.pcp", "--seq", "1")
    assert code == INPUT_ERROR and "error" in err


def test_zt_build_and_run(capsys, tmp_path):
    out_file = tmp_path / "l0.zt"
    code, out, _ = run(capsys, "zt", "build-chi", SAMPLES / "ex1.pcp", "--side", "l0", "-o", out_file)
    assert code == OK and "deterministic True complete True" in out
    zt = zmachine.parse_zt(out_file)
    assert len(zt.states) == 24
    # chi((i1 a, 3)) = (1000001100010, 16)
    code, out, _ = run(capsys, "zt", "run", out_file, "--word", "1000001100010")
    assert code == OK and out.strip() == "word 1000001100010 outputs {16}"
    code, _, _ = run(capsys, "zt", "run", out_file, "--word", "012")
    assert code == INPUT_ERROR
    for side in ("u", "v"):
        code, _, _ = run(capsys, "zt", "build-chi", SAMPLES / "ex1.pcp", "--side", side, "-o", tmp_path / f"{side}.zt")
        assert code == OK
        assert zmachine.analyze(zmachine.parse_zt(tmp_path / f"{side}.zt")).complete


def test_nds_commands(capsys):
    code, out, _ = run(capsys, "nds", "search", SAMPLES / "drift.nds", "--max-len", 3)
    assert code == OK and "critical 0" in out
    code, out, _ = run(capsys, "nds", "search", SAMPLES / "stay.nds", "--max-len", 3)
    assert code == INCONCLUSIVE
    code, out, _ = run(capsys, "nds", "prob", SAMPLES / "drift.nds", "--word", "01")
    assert code == OK
    assert "node 2 line 1 code 2 p 1" in out and "total 1" in out and "critical" in out


def test_reduce_commands(capsys, tmp_path):
    c, d = SAMPLES / "tiny_c.zt", SAMPLES / "tiny_d.zt"
    code, out, _ = run(capsys, "reduce", "check", c, d, "--bound", 3)
    assert code == OK and "status consistent" in out and "critical 00" in out
    code, out, _ = run(capsys, "reduce", "check", c, c, "--bound", 4)
    assert code == INCONCLUSIVE
    nds_file = tmp_path / "p.nds"
    code, out, _ = run(capsys, "reduce", "zt-to-nds", c, d, "-o", nds_file)
    assert code == OK
    nds = defense.parse_nds(nds_file)
    assert defense.search_critical(nds, 4) == "00"
    phi_file, xi_file = tmp_path / "phi.sub", tmp_path / "xi.sub"
    code, out, _ = run(capsys, "reduce", "nds-to-subs", SAMPLES / "drift.nds", "-o", phi_file, xi_file)
    assert code == OK and "w 01001" in out
    phi, xi = regular.parse_substitution(phi_file), regular.parse_substitution(xi_file)
    assert xi.is_included_in(phi) and phi != xi


def test_subs_commands(capsys):
    code, out, _ = run(capsys, "subs", "decide", SAMPLES / "stay.nds")
    assert code == OK and "equal" in out.splitlines()
    code, out, _ = run(capsys, "subs", "decide", SAMPLES / "drift.nds")
    assert code == OK and "counterexample" in out
    code, out, _ = run(capsys, "subs", "decide", SAMPLES / "sink.nds")
    assert code == FALSE and "images equal although the system is unreliable" in out
    code, out, _ = run(capsys, "subs", "witness", SAMPLES / "drift.nds", "--critical", "0")
    assert code == OK and "in xi(b0c): no" in out
    code, _, err = run(capsys, "subs", "witness", SAMPLES / "stay.nds", "--critical", "0")
    assert code == INPUT_ERROR and "not critical" in err


@pytest.mark.parametrize("name", ["ex1.pcp", "stay.nds", "tiny_c.zt"])
def test_export_text_is_stable(capsys, tmp_path, name):
    first = tmp_path / "a.txt"
    second = tmp_path / "b.txt"
    assert run(capsys, "export", "dot", SAMPLES / name, "--format", "text", "-o", first)[0] == OK
    assert run(capsys, "export", "dot", first, "--format", "text", "-o", second)[0] == OK
    assert first.read_text() == second.read_text()


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export", "dot", SAMPLES / "tiny_c.zt")
    assert code == OK and out.startswith("digraph")
    code, _, err = run(capsys, "export", "dot", SAMPLES / "ex1.pcp")
    assert code == INPUT_ERROR and "--format text" in err


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.nds"
    bad.write_text("lines 1\nrule 1 0 1 0 1/2\n")
    code, _, err = run(capsys, "nds", "search", bad, "--max-len", 2)
    assert code == INPUT_ERROR and str(bad) in err
    code, _, _ = run(capsys, "nds", "search", tmp_path / "missing.nds", "--max-len", 2)
    assert code == INPUT_ERROR
    code, _, _ = run(capsys, "pcp", "solve")
    assert code == INPUT_ERROR
