import json
import math

import pytest

from main import main

EXAMPLE_ONE = {"mx": 2, "my": 2, "counts": [[44950, 5058], [4868, 45124]]}


def _write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_interval_from_counts(tmp_path, capsys):
    counts = _write_json(tmp_path / "table.json", EXAMPLE_ONE)
    report = _run_json(capsys, ["interval", "--counts", counts, "--alpha", "0.05"])

    assert report["schema"] == "miconf/1"
    assert report["command"] == "interval"
    assert report["unit"] == "bits"
    assert report["n"] == 100_000
    assert report["vacuous"] is False
    assert report["metadata"]["tool_version"]
    thm2, thm4 = report["intervals"]
    assert thm2["method"] == "thm2"
    assert thm2["lower"] == pytest.approx(0.38170, abs=5e-5)
    assert thm2["upper"] == pytest.approx(0.68504, abs=5e-5)
    assert thm4["method"] == "thm4"
    assert thm4["lower"] == pytest.approx(0.51645, abs=2e-4)
    assert thm4["upper"] == pytest.approx(0.55091, abs=2e-4)


def test_interval_units_agree(tmp_path, capsys):
    counts = _write_json(tmp_path / "table.json", EXAMPLE_ONE)
    bits = _run_json(capsys, ["interval", "--counts", counts, "--method", "thm2"])
    nats = _run_json(capsys, ["interval", "--counts", counts, "--method", "thm2", "--unit", "nats"])

    assert len(bits["intervals"]) == 1
    for key in ("lower", "upper"):
        expected = bits["intervals"][0][key] * math.log(2)
        assert nats["intervals"][0][key] == pytest.approx(expected, rel=1e-5)


def test_interval_from_samples(tmp_path, capsys):
    samples = tmp_path / "pairs.csv"
    samples.write_text("x,y\n1,1\n2,2\n1,2\n\n2,3\n", encoding="utf-8")
    argv = ["interval", "--samples", str(samples), "--mx", "2", "--my", "3", "--clamp"]
    report = _run_json(capsys, argv)
    assert report["n"] == 4
    assert (report["mx"], report["my"]) == (2, 3)
    assert report["epsilon"] > 1.0
    for row in report["intervals"]:
        assert 0.0 <= row["lower"] <= row["upper"] <= 1.0


def test_interval_input_errors(tmp_path, capsys):
    samples = tmp_path / "pairs.csv"
    samples.write_text("1,1\n3,1\n", encoding="utf-8")

    assert main(["interval", "--samples", str(samples)]) == 2
    assert "--mx" in capsys.readouterr().err

    assert main(["interval", "--samples", str(samples), "--mx", "2", "--my", "2"]) == 2
    assert "miconf: error:" in capsys.readouterr().err

    joint = _write_json(tmp_path / "joint.json", {"mx": 2, "my": 2, "probs": [[0.5, 0], [0, 0.5]]})
    assert main(["interval", "--counts", joint]) == 2
    assert "sample size" in capsys.readouterr().err

    ragged = _write_json(tmp_path / "ragged.json", {"mx": 2, "my": 2, "counts": [[1, 2], [3]]})
    assert main(["interval", "--counts", ragged]) == 2

    assert main(["interval", "--counts", str(tmp_path / "missing.json")]) == 2


def test_interval_rejects_invalid_utf8(tmp_path, capsys):
    samples = tmp_path / "pairs.csv"
    samples.write_bytes(b"x,\xff\n1,1\n")
    assert main(["interval", "--samples", str(samples), "--mx", "2", "--my", "2"]) == 2
    assert "not valid UTF-8" in capsys.readouterr().err

    counts = tmp_path / "table.json"
    counts.write_bytes(b'{"mx": 2, "my": 2, "counts": [[1, 2], [3, 4]], "note": "\xff"}')
    assert main(["interval", "--counts", str(counts)]) == 2
    captured = capsys.readouterr()
    assert "not valid UTF-8" in captured.err
    assert captured.out == ""


def test_precision_must_be_positive(tmp_path, capsys):
    counts = _write_json(tmp_path / "table.json", EXAMPLE_ONE)
    with pytest.raises(SystemExit) as excinfo:
        main(["--precision", "-1", "interval", "--counts", counts])
    assert excinfo.value.code == 2
    assert "--precision" in capsys.readouterr().err

    report = _run_json(capsys, ["--precision", "3", "interval", "--counts", counts])
    assert report["intervals"][0]["lower"] == 0.382


def test_interval_domain_error(tmp_path, capsys):
    counts = _write_json(tmp_path / "table.json", EXAMPLE_ONE)
    assert main(["interval", "--counts", counts, "--alpha", "0"]) == 3
    assert "alpha" in capsys.readouterr().err


def test_samplesize(capsys):
    argv = ["samplesize", "--gamma", "0.151676", "--alpha", "0.05", "--mx", "2", "--my", "2"]
    report = _run_json(capsys, argv)
    assert report["command"] == "samplesize"
    assert abs(report["n_required"] - 100_000) <= 50


def test_samplesize_rejects_trivial_gamma(capsys):
    assert main(["samplesize", "--gamma", "1.0", "--mx", "2", "--my", "2"]) == 3
    assert "log2(mx)=1" in capsys.readouterr().err


def test_simulate_single_replicate(tmp_path, capsys):
    cdf_path = tmp_path / "cdf.txt"
    argv = [
        "simulate", "--ber", "0.1", "--px", "0.5", "--n", "100",
        "--reps", "1", "--seed", "9", "--emit-cdf", str(cdf_path),
    ]
    report = _run_json(capsys, argv)
    assert report["reps"] == 1
    assert report["quantile_lower"] == report["quantile_upper"]
    assert report["width"] == 0.0
    assert report["metadata"]["generator_id"].startswith("numpy-")

    lines = cdf_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "mi_bits cdf"
    assert len(lines) == 2
    assert lines[1].endswith(" 1")


def test_simulate_is_reproducible(capsys):
    argv = ["simulate", "--ber", "0.2", "--px", "0.1", "--n", "500", "--reps", "50"]
    first = _run_json(capsys, argv + ["--workers", "1"])
    second = _run_json(capsys, argv + ["--workers", "3"])
    assert first["quantile_lower"] == second["quantile_lower"]
    assert first["quantile_upper"] == second["quantile_upper"]


def test_bound_table(capsys):
    argv = ["bound", "--epsilon-grid", "0:2:3", "--mx", "2", "--my", "2", "--compare-zhang"]
    assert main(argv) == 0
    rows = [line.split(",") for line in capsys.readouterr().out.splitlines()]
    assert rows[0] == ["epsilon", "delta_I", "delta_I_zhang"]
    assert rows[1] == ["0", "0", "0"]
    assert rows[2] == ["1", "2.62875", "3.72736"]
    assert rows[3][0] == "2"
    assert float(rows[3][1]) == pytest.approx(math.log(2), abs=1e-5)
    assert rows[3][2] == ""


def test_bound_rejects_malformed_grid(capsys):
    assert main(["bound", "--epsilon-grid", "0:3", "--mx", "2", "--my", "2"]) == 2
    assert "start:stop:count" in capsys.readouterr().err


def test_reproduce_small(capsys):
    report = _run_json(capsys, ["reproduce", "--example", "1", "--reps", "200"])
    assert report["command"] == "reproduce"
    assert report["empirical_counts"] == EXAMPLE_ONE["counts"]
    assert [row["method"] for row in report["rows"]] == [
        "approximated best possible",
        "thm2",
        "thm4",
    ]
    assert report["true_mi"] == pytest.approx(0.531004, abs=1e-5)
    best = report["rows"][0]
    assert best["lower"] <= report["true_mi"] <= best["upper"]


def test_missing_subcommand_exits():
    with pytest.raises(SystemExit):
        main([])
