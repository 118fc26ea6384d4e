import json

import pytest

from gafactor import harness
from gafactor.cli import main
from gafactor.numtheory import generate_semiprime


def test_factor_sieve(capsys):
    assert main(["factor", "--m", "10909343", "--algorithm", "sieve", "--a", "6", "--d", "1",
                 "--seed", "42"]) == 0
    assert capsys.readouterr().out.strip() == "2693 x 4051"


def test_factor_simple(capsys):
    assert main(["factor", "--m", "10909343", "--algorithm", "simple-ga"]) == 0
    assert capsys.readouterr().out.strip() == "2693 x 4051"


def test_factor_prime_is_error(capsys):
    assert main(["factor", "--m", "4051"]) == 1
    assert "prime" in capsys.readouterr().err


def test_factor_invalid_form(capsys):
    assert main(["factor", "--m", "10909343", "--a", "8", "--d", "2"]) == 1
    assert "gcd" in capsys.readouterr().err


def test_factor_unsuccessful(capsys):
    M = str(generate_semiprime(18, 0).M)
    rc = main(["factor", "--m", M, "--algorithm", "sieve", "--max-generations", "1",
               "--population", "50"])
    assert rc == 1
    assert "no factor found" in capsys.readouterr().err


def test_bench_requires_dataset(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bench"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_gen_datasets_and_bench(tmp_path, capsys):
    assert main(["gen-datasets", "--count", "2", "--digits", "8-9", "--seed", "4",
                 "--out-dir", str(tmp_path)]) == 0
    d1 = tmp_path / "d1.csv"
    assert harness.load_dataset(d1).records[0].digits == 8

    report = tmp_path / "r.csv"
    assert main(["bench", "--dataset", str(d1), "--dataset", str(tmp_path / "d2.csv"),
                 "--algorithm", "sieve", "--instances", "3", "--report", str(report)]) == 0
    lines = report.read_text().splitlines()
    assert lines[0].startswith("digits,success_rate_pct")
    assert [l.split(",")[0] for l in lines[1:]] == ["8", "9"]
    runs = harness.runs_from_csv((tmp_path / "r.csv.runs.csv").read_text())
    assert len(runs) == 12

    out = tmp_path / "r.json"
    assert main(["bench", "--dataset", str(d1), "--algorithm", "simple-ga", "--instances", "2",
                 "--format", "json", "--report", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["algorithm"] == "simple-ga" and data["rows"][0]["digits"] == 8


def test_bench_bad_dataset(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("M,p,q\n15,3,6\n")
    assert main(["bench", "--dataset", str(bad)]) == 1
    assert "row 2" in capsys.readouterr().err


def test_sss_command(tmp_path, capsys):
    main(["gen-datasets", "--count", "1", "--digits", "8-11", "--out-dir", str(tmp_path)])
    capsys.readouterr()
    assert main(["sss", "--dataset", str(tmp_path / "d1.csv")]) == 0
    out = capsys.readouterr().out
    assert "median odd" in out and "median even" in out and "median all" in out
    assert len([l for l in out.splitlines() if l.startswith("d1 ")]) == 4


def test_digits_command(tmp_path, capsys):
    path = tmp_path / "digits.csv"
    assert main(["digits", "--n-max", "2", "--out", str(path)]) == 0
    assert path.read_text().splitlines()[0] == "n,digit,probability,deviation"
    assert main(["digits", "--n-max", "1"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 11
    assert main(["digits", "--n-max", "12"]) == 1
