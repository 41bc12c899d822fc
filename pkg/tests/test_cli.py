import json

import pytest

from weightlab import cli


@pytest.fixture()
def weight_file(tmp_path):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"family": "power", "params": {"alpha": 0.5}}))
    return str(p)


@pytest.fixture()
def log_file(tmp_path):
    p = tmp_path / "log.json"
    p.write_text(json.dumps({"family": "log", "params": {}}))
    return str(p)


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def test_analyze_clean_run(weight_file, tmp_path):
    out = tmp_path / "r.json"
    code = cli.run(["analyze", "--weight", weight_file,
                    "--conditions", "om1,om3,om_nq", "--out", str(out)])
    assert code == 0
    doc = _load(out)
    assert doc["schema_version"] == 1
    assert doc["command"] == "analyze"
    conds = doc["results"]["conditions"]
    assert set(conds) == {"om1", "om3", "om_nq"}
    assert all(v["status"] == "holds" for v in conds.values())


def test_expect_holds_exit_code(log_file, tmp_path):
    out = tmp_path / "r.json"
    code = cli.run(["analyze", "--weight", log_file, "--conditions", "om3",
                    "--expect", "holds", "--out", str(out)])
    assert code == 2
    doc = _load(out)
    assert doc["results"]["conditions"]["om3"]["status"] == "fails"


def test_error_exit_code(tmp_path):
    code = cli.run(["analyze", "--weight", str(tmp_path / "missing.json"),
                    "--out", str(tmp_path / "r.json")])
    assert code == 1


def test_classify_and_report(weight_file, tmp_path):
    assert cli.run(["classify", "--weight", weight_file,
                    "--out", str(tmp_path / "c.json")]) == 0
    assert cli.run(["report", "--weight", weight_file,
                    "--out", str(tmp_path / "full.json")]) == 0
    doc = _load(tmp_path / "full.json")
    assert "classification" in doc["results"]


def test_conjugate_csv_emission(weight_file, tmp_path):
    out = tmp_path / "conj.json"
    code = cli.run(["conjugate", "--weight", weight_file, "--xmax", "20",
                    "--out", str(out), "--emit", "csv",
                    "--plot-dir", str(tmp_path)])
    assert code == 0
    csvs = list(tmp_path.glob("*.csv"))
    assert csvs
    header = csvs[0].read_text().splitlines()[0]
    assert header == "t,value"


def test_compare_subcommand(weight_file, log_file, tmp_path):
    out = tmp_path / "cmp.json"
    code = cli.run(["compare", "--sigma", weight_file, "--tau", log_file,
                    "--rel", "preceq,triangle", "--out", str(out)])
    assert code == 0
    doc = _load(out)["results"]["compare"]
    assert doc["preceq"]["verdict"]["status"] == "holds"
    assert doc["triangle"]["verdict"]["status"] == "holds"


def test_matrix_compare(weight_file, log_file, tmp_path):
    out = tmp_path / "mc.json"
    code = cli.run(["matrix-compare", "--s-type", "exp",
                    "--s-weight", weight_file, "--t-type", "exp",
                    "--t-weight", log_file, "--rel", "beurling",
                    "--out", str(out)])
    assert code == 0
    assert _load(out)["results"]["matrix_compare"]["beurling"]["verdict"]["status"] == "holds"


def test_counterexample_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["counterexample", "--J", "25", "--certify", "all",
            "--A-max", "8"]
    assert cli.run(args + ["--out", str(a)]) == 0
    assert cli.run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_counterexample_partial_ladder(tmp_path):
    out = tmp_path / "ce.json"
    code = cli.run(["counterexample", "--J", "60", "--certify", "all",
                    "--A-max", "1024", "--out", str(out)])
    assert code == 0  # partial coverage is reported, not an error
    nc = _load(out)["results"]["nonconvexity"]
    assert nc["complete"] is False
    assert nc["first_unreachable_A"] == 128
    assert [c["A"] for c in nc["certified"]] == [1, 2, 4, 8, 16, 32, 64]


def test_config_file_fills_flags(weight_file, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"conditions": "om1"}))
    out = tmp_path / "r.json"
    code = cli.run(["analyze", "--weight", weight_file,
                    "--config", str(cfg), "--out", str(out)])
    assert code == 0
    assert set(_load(out)["results"]["conditions"]) == {"om1"}


def test_strict_inconclusive_exit(tmp_path):
    # a profile that ends flat leaves asymptotic conditions undecidable
    p = tmp_path / "flat.json"
    p.write_text(json.dumps({"profile": [[0.0, 0.0], [1.0, 1.0], [2.0, 1.0]]}))
    out = tmp_path / "r.json"
    code = cli.run(["analyze", "--weight", str(p), "--conditions",
                    "unbounded_limit", "--strict", "--out", str(out)])
    status = _load(out)["results"]["conditions"]["unbounded_limit"]["status"]
    if status == "inconclusive":
        assert code == 3
    else:
        assert status == "fails" and code == 0
