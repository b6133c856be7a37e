import json
import subprocess
import sys

import pytest

from freymod.cli import EXIT_DATA, EXIT_GATE, EXIT_OK, EXIT_USAGE, OUTPUT_DIR_ENV, build_parser, main
from freymod.ingest import verify_certificate

SUBCOMMANDS = [
    "hypotheses", "classnum", "split", "frey", "ap", "sieve2", "sieve3", "eliminate", "twists", "certify-verify",
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_all_subcommands_have_help(capsys):
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    assert sorted(sub.choices) == sorted(SUBCOMMANDS)
    for name in SUBCOMMANDS:
        with pytest.raises(SystemExit) as exc:
            main([name, "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        assert len(text) > 100
    keywords = {
        "hypotheses": "theorem", "sieve2": "theorem", "sieve3": "theorem", "eliminate": "theorem",
        "twists": "theorem", "frey": "lemma", "classnum": "theorem",
    }
    for name, word in keywords.items():
        assert word in sub.choices[name].description.lower()


def test_usage_errors(capsys):
    assert run(["bogus"], capsys)[0] == EXIT_USAGE
    assert run([], capsys)[0] == EXIT_USAGE
    assert run(["classnum", "--d", "x"], capsys)[0] == EXIT_USAGE
    assert run(["classnum", "--d", "19", "--frobnicate"], capsys)[0] == EXIT_USAGE
    assert run(["sieve3"], capsys)[0] == EXIT_USAGE
    assert run(["sieve3", "--free-d", "--workers", "0"], capsys)[0] == EXIT_USAGE


def test_gate_errors(capsys):
    assert run(["hypotheses", "--d", "7", "--family", "quartic"], capsys)[0] == EXIT_GATE
    assert run(["sieve2", "--d", "3"], capsys)[0] == EXIT_GATE
    assert run(["sieve2", "--d", "35"], capsys)[0] == EXIT_GATE
    assert run(["classnum", "--d", "4"], capsys)[0] == EXIT_GATE
    assert run(["frey", "--family", "quartic", "--a", "0", "--b", "1", "--d", "19"], capsys)[0] == EXIT_GATE
    assert run(["twists", "--M", "6"], capsys)[0] == EXIT_GATE


def test_hypotheses_pass(capsys, tmp_path):
    out = tmp_path / "h.json"
    code, text, _ = run(["hypotheses", "--d", "19", "--family", "quartic", "--out", str(out)], capsys)
    assert code == EXIT_OK
    assert json.loads(out.read_text())["passed"] is True
    assert "congruence_ok" in text


def test_simple_subcommands(capsys):
    code, text, _ = run(["classnum", "--d", "23", "--check-ideals"], capsys)
    assert code == EXIT_OK and " 3" in text
    code, text, _ = run(["split", "--d", "19", "--ell", "2,5,19"], capsys)
    assert code == EXIT_OK and "inert" in text and "split" in text and "ramified" in text
    code, text, _ = run(["frey", "--family", "sextic", "--a", "2", "--b", "1", "--d", "19", "--ell", "2,3,19"], capsys)
    assert code == EXIT_OK and text.count("additive") == 3
    code, text, _ = run(["ap", "--family", "quartic", "--a", "1", "--b", "1", "--d", "19", "--ell", "5,7"], capsys)
    assert code == EXIT_OK and "bad" in text
    code, text, _ = run(["sieve2", "--d", "11"], capsys)
    assert code == EXIT_OK and "0 non-base-change" in text
    code, text, _ = run(["twists", "--M", "4", "--ap-e", "2", "--p", "3"], capsys)
    assert code == EXIT_OK and "eps" in text


def test_sieve3_table(capsys, tmp_path):
    out = tmp_path / "s3.jsonl"
    code, text, _ = run(["sieve3", "--free-d", "--workers", "1", "--out", str(out)], capsys)
    assert code == EXIT_OK
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert {(r["alpha"], r["beta"]) for r in rows} == {(-6, 2), (-12, 16), (6, -2), (12, -16)}
    assert all(r["d"] == 547 for r in rows)
    assert text.count("547") == 4


def test_eliminate_and_verify(capsys, tmp_path, fixtures_nf):
    c1, c2 = tmp_path / "c1.json", tmp_path / "c2.json"
    args = ["eliminate", "--d", "19", "--ells", "3,5", "--forms", str(fixtures_nf)]
    assert run(args + ["--out", str(c1), "--workers", "1"], capsys)[0] == EXIT_OK
    assert run(args + ["--out", str(c2), "--workers", "2", "--twist-order", "4"], capsys)[0] == EXIT_OK
    b1, b2 = verify_certificate(c1)["body"], verify_certificate(c2)["body"]
    b2.pop("twists")
    b1.pop("twists", None)
    assert b1 == b2
    code, text, _ = run(["certify-verify", str(c1)], capsys)
    assert code == EXIT_OK and "digest ok" in text
    doc = json.loads(c1.read_text())
    doc["body"]["ell_set"] = [3]
    c1.write_text(json.dumps(doc))
    assert run(["certify-verify", str(c1)], capsys)[0] == EXIT_DATA


def test_eliminate_bad_data(capsys, tmp_path):
    bad = tmp_path / "bad.nf"
    bad.write_text(json.dumps({"format_version": 1, "newforms": [{"label": "x", "level": 1, "field_poly": [0, 1], "ap": {"3": [4]}}]}))
    assert run(["eliminate", "--d", "19", "--ells", "3", "--forms", str(bad)], capsys)[0] == EXIT_DATA
    assert run(["eliminate", "--d", "19", "--ells", "3", "--forms", str(tmp_path / "missing.nf")], capsys)[0] == EXIT_DATA


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "outdir"))
    assert run(["classnum", "--d", "163", "--out", "h.json"], capsys)[0] == EXIT_OK
    assert json.loads((tmp_path / "outdir" / "h.json").read_text())["class_number"] == 1


def test_byte_identical_outputs(capsys, tmp_path):
    outs = []
    for workers in ("1", "3"):
        path = tmp_path / f"s{workers}.jsonl"
        run(["sieve3", "--free-d", "--workers", workers, "--out", str(path)], capsys)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "freymod.cli", "hypotheses", "--d", "19", "--family", "sextic"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert "passed" in res.stdout
