import json

import pytest

from qrlab import __version__
from qrlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_code_p7(capsys):
    code, out, _ = run(capsys, "code", "7")
    assert code == 0
    assert out.splitlines() == ["[7,4,3]", "g = x^3 + x + 1"]


def test_code_weights_json(capsys):
    code, out, _ = run(capsys, "code", "41", "--extended", "--weights", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["d"] == 10 and doc["weights"]["10"] == 1722


def test_code_weights_text(capsys):
    _, out, _ = run(capsys, "code", "41", "--extended", "--weights")
    assert out.splitlines()[2].startswith("[ <0, 1>, <10, 1722>, <12, 10619>")


def test_min_weight(capsys):
    _, out, _ = run(capsys, "code", "41", "--min-weight")
    assert "minimum weight 9: 410 codewords" in out


def test_unsupported_prime(capsys):
    code, _, err = run(capsys, "code", "5")
    assert code == 2 and "error" in err


@pytest.fixture(scope="module")
def design_path(tmp_path_factory):
    from qrlab.codes import codewords_of_weight, extend, qr_code
    from qrlab.designs import design_from_codewords, write_design
    path = tmp_path_factory.mktemp("cli") / "D.txt"
    c = extend(qr_code(41)[1])
    write_design(design_from_codewords(codewords_of_weight(c, 10), 42), path)
    return str(path)


def test_dump_words_formats(capsys, design_path):
    _, out, _ = run(capsys, "code", "41", "--extended", "--dump-words", "10")
    lines = out.splitlines()
    assert lines[0] == "42 10 1722" and len(lines) == 1723
    with open(design_path) as fh:
        assert out == fh.read()
    _, out, _ = run(capsys, "code", "41", "--extended", "--dump-words", "10", "--format", "support")
    assert len(out.splitlines()) == 1722
    _, out, _ = run(capsys, "code", "7", "--dump-words", "3", "--format", "bits")
    rows = out.split()
    assert len(rows) == 7 and all(len(r) == 7 and r.count("1") == 3 for r in rows)


def test_design_verify(capsys, design_path):
    code, out, _ = run(capsys, "design", design_path, "--verify", "3")
    assert code == 0 and out.strip() == "3-(42,10,18), b=1722, r=410"
    _, out, _ = run(capsys, "design", design_path, "--verify", "4")
    assert out.startswith("not a 4-design")


def test_design_derived_residual(capsys, design_path, tmp_path):
    _, out, _ = run(capsys, "design", design_path, "--derived", "inf", "--verify", "2")
    assert out.strip() == "2-(41,9,18), b=410, r=90"
    _, out, _ = run(capsys, "design", design_path, "--residual", "41", "--verify", "2")
    assert out.strip() == "2-(41,10,72), b=1312, r=320"
    target = tmp_path / "der.txt"
    assert main(["design", design_path, "--derived", "0", "-o", str(target)]) == 0
    assert target.read_text().splitlines()[0] == "41 9 410"


def test_design_span(capsys, design_path):
    _, out, _ = run(capsys, "design", design_path, "--span", "--json")
    assert json.loads(out) == {"dimension": 21, "equals_extended_qr": True}


def test_bad_design_file(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("5 2 1\n0 9\n")
    code, _, err = run(capsys, "design", str(bad), "--verify", "1")
    assert code == 2 and "line 2" in err


def test_group_psl(capsys):
    _, out, _ = run(capsys, "group", "--psl", "3", "--order")
    assert out.strip() == "12"
    _, out, _ = run(capsys, "group", "--psl", "41", "--orbits", "3")
    assert out.strip() == "2 orbits: 5740, 5740"
    _, out, _ = run(capsys, "group", "--psl", "7", "--generators")
    assert len(out.splitlines()) == 2


def test_group_aut(capsys, design_path):
    _, out, _ = run(capsys, "group", "--aut", design_path, "--order", "--orbits", "3")
    assert out.splitlines() == ["34440", "2 orbits: 5740, 5740"]


def test_reproduce_out_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "reproduce", "--skip-aut", "--out", str(tmp_path))
    assert code == 0 and "overall: PASS" in out
    tsv = (tmp_path / "report.tsv").read_text().splitlines()
    assert tsv[0].split("\t") == ["step", "status", "gating", "seconds", "details"]
    assert all(line.split("\t")[1] in ("pass", "fail") for line in tsv[1:])
    assert json.loads((tmp_path / "report.json").read_text())["passed"] is True
    assert (tmp_path / "figures" / "weight_distribution.png").exists()


def test_reproduce_long_reports_progress(capsys):
    code, out, err = run(capsys, "reproduce", "--skip-aut", "--long", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    step = next(s for s in doc["steps"] if s["name"] == "min_weight_design_74")
    assert step["details"]["is_3_design"] is False
    assert "min_weight_design_74 ..." in err and "message weight" in err
    _, _, err = run(capsys, "reproduce", "--skip-aut", "-q")
    assert err == ""
