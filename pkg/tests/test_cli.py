from __future__ import annotations

import csv
import io
import json

import pytest

from cpfactor.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_gamma_sylow_normalizer(capsys):
    code, out = run(capsys, "gamma", "--group", "alt:5", "--base", "sylow-normalizer:2")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["k"] == 3 and rep["result"]["verified"] is True
    assert rep["schema"] == 1 and rep["status"] == "ok"
    w = rep["result"]["witness"]
    assert set(w) >= {"group_spec", "base_generators", "conjugators", "k", "provenance",
                      "verified", "timing_ms"}


def test_bn_verify_lengths(capsys):
    code, out = run(capsys, "bn-verify", "--group", "sl:2,7")
    res = json.loads(out)["result"]
    assert code == 0 and res["lengths"] == {"four": True, "three": False}


def test_carter_factorize(capsys):
    code, out = run(capsys, "carter", "--group", "sym:4", "--factorize")
    res = json.loads(out)["result"]
    assert code == 0 and res["witness"]["k"] == 3 and res["carter_order"] == 8


def test_parse_error_exit_code(capsys):
    code, out = run(capsys, "socle", "--group", "sym:")
    assert code == 2 and json.loads(out)["status"] == "parse-error"


def test_bound_exit_code(capsys):
    code, _ = run(capsys, "enumerate", "--group", "sym:7")
    assert code == 3


def test_unknown_suite_rejected():
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["suite", "bogus"])
    assert info.value.code == 2


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])


def test_csv_columns(capsys):
    code, out = run(capsys, "socle", "--group", "sym:5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["command", "key", "value"]
    kv = {r[1]: r[2] for r in rows[1:]}
    assert kv["result.m"] == "1" and kv["result.nab_order"] == "60"


def test_text_trace(capsys):
    code, out = run(capsys, "sn-sylow2", "--n", "6", "--format", "text")
    assert code == 0 and "trace:" in out and "result.k: 5" in out


def test_deterministic_output(capsys):
    args = ("affine-factorize", "--group", "affine:3,2,[0,1,2,0;1,1,1,2]")
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    strip = lambda s: {k: v for k, v in json.loads(s)["result"]["witness"].items()
                       if k != "timing_ms"}
    assert strip(a) == strip(b)


def test_oracle_and_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out = run(capsys, "oracle", "--group", "sym:3", "--base", "perm:(0 1)",
                    "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["k"] == 3


def test_unsupported_is_library_error(capsys):
    code, out = run(capsys, "an-sylow2", "--n", "5")
    assert code == 1 and "UnsupportedParameter" in json.loads(out)["error"]


def test_suite_smoke(capsys):
    code, out = run(capsys, "suite", "smoke")
    rep = json.loads(out)
    assert code == 0 and len(rep["result"]["criteria"]) == 8


def test_suite_smoke_parallel(capsys):
    code, out = run(capsys, "suite", "smoke", "--workers", "2")
    rep = json.loads(out)
    assert code == 0
    assert [c["criterion"] for c in rep["result"]["criteria"]] == list(range(1, 9))
    assert all(c["pass"] for c in rep["result"]["criteria"])
