"""Command-line front end: exit codes, artifacts and determinism."""

import json
import os

import pytest

from gardnerlab import cli


def run(argv):
    return cli.main(argv)


def read_json_lines(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def test_verify_pass(tmp_path):
    out = tmp_path / "v.json"
    code = run(["verify", "--alpha", "1", "--beta", "1", "--mu", "0.5",
                "--json", str(out)])
    assert code == 0
    records = read_json_lines(out)
    assert len(records) == 9
    assert all(r["pass"] for r in records)
    assert all("config_hash" in r and "artifact_version" in r for r in records)


def test_usage_error_inadmissible():
    code = run(["verify", "--alpha", "1", "--beta", "1", "--mu", "1.5"])
    assert code == 2


def test_usage_error_bad_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["verify", "--bogus", "1"])
    assert exc.value.code == 2


def test_closed_forms_output(tmp_path):
    out = tmp_path / "cf.json"
    code = run(["closed-forms", "--alpha", "1", "--beta", "1", "--mu", "0.5",
                "--json", str(out)])
    assert code == 0
    records = read_json_lines(out)
    values = {r["quantity"]: r["value"] for r in records}
    assert values["breather-mass"] == pytest.approx(5.069102192960684, rel=1e-12)


def test_sweep_csv_and_determinism(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["sweep", "--sweep-alpha", "0.5,1", "--sweep-beta", "1",
            "--sweep-mu", "0.1,0.5"]
    assert run(args + ["--csv", str(a)]) == 0
    assert run(args + ["--csv", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "alpha,beta,mu,quantity,quadrature,closed_form,rel_err,status"
    assert len(lines) == 1 + 2 * 1 * 2 * 4   # header + points x quantities


def test_config_file_and_flag_override(tmp_path):
    cfgfile = tmp_path / "run.ini"
    cfgfile.write_text("[params]\nalpha = 1.0\nbeta = 1.0\nmu = 0.9\n")
    out = tmp_path / "v.json"
    # flag overrides the file's mu = 0.9
    code = run(["verify", "--config", str(cfgfile), "--mu", "0.5",
                "--json", str(out)])
    assert code == 0
    assert read_json_lines(out)[0]["mu"] == 0.5


def test_default_output_name_embeds_hash(tmp_path):
    code = run(["closed-forms", "--alpha", "1", "--beta", "1", "--mu", "0.5",
                "--output-dir", str(tmp_path)])
    assert code == 0
    files = os.listdir(tmp_path)
    assert len(files) == 1
    assert files[0].startswith("closed-forms_") and files[0].endswith(".json")
    rec = read_json_lines(tmp_path / files[0])[0]
    assert files[0] == f"closed-forms_{rec['config_hash']}.json"


def test_simulate_artifacts(tmp_path):
    code = run(["simulate", "--alpha", "1", "--beta", "1", "--mu", "0.5",
                "--grid-N", "1024", "--dt", "5e-4", "--periods", "0.05",
                "--output-dir", str(tmp_path)])
    assert code == 0
    names = sorted(os.listdir(tmp_path))
    kinds = {n.split("_")[-1] for n in names}
    assert any(n.endswith(".csv") for n in names)
    assert any(n.endswith(".json") for n in names)
    assert any(n.endswith("_distance.dat") for n in names)
    assert any(n.endswith("_profile.dat") for n in names)
    csv_file = next(n for n in names if n.endswith(".csv"))
    header = (tmp_path / csv_file).read_text().splitlines()[0]
    assert header == "t,distance_H2,x1,x2,M,E,F,H"
