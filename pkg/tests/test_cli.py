import json

from kashaev import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_exact_skein(capsys):
    code, rep = run_cli(capsys, "exact", "--a", "1", "--b", "7", "--N", "2",
                        "--method", "skein", "--prec", "96")
    assert code == 0
    assert rep["command"] == "exact"
    labels = {r["label"] for r in rep["results"]}
    assert "J_N" in labels
    val = [r for r in rep["results"] if r["label"] == "J_N"][0]
    assert val["method"] == "skein"
    assert abs(float(val["value"]["re"]) + 15.0) < 1e-6


def test_exact_constraint_error(capsys):
    code = cli.main(["exact", "--a", "1", "--b", "5", "--N", "3"])
    assert code == 1
    err = capsys.readouterr().err
    assert "2b+1" in err


def test_exact_skein_guard(capsys):
    code = cli.main(["exact", "--a", "1", "--b", "7", "--N", "13",
                     "--method", "skein"])
    assert code == 1


def test_cs_torsion_report_and_determinism(capsys):
    code1, rep1 = run_cli(capsys, "cs-torsion", "--a", "1", "--b", "7")
    code2, rep2 = run_cli(capsys, "cs-torsion", "--a", "1", "--b", "7")
    assert code1 == code2 == 0
    rep1.pop("timing")
    rep2.pop("timing")
    assert rep1 == rep2
    assert all(c["status"] == "pass" for c in rep1["checks"])
    assert all("measured" in c and "tolerance" in c for c in rep1["checks"])


def test_reps_report(capsys):
    code, rep = run_cli(capsys, "reps", "--a", "1", "--b", "7",
                        "--u", "0.2,0.1", "--prec", "128")
    assert code == 0
    names = {c["name"] for c in rep["checks"]}
    assert "worst_relator_defect" in names
    assert "longitude_nullhomologous" in names
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_dk_report(capsys, tmp_path):
    csv_path = tmp_path / "dk.csv"
    code = cli.main(["--csv", str(csv_path), "dk", "--c", "2", "--d", "3",
                     "--N-list", "9,15,21"])
    out = capsys.readouterr().out
    rep = json.loads(out)
    # the literal residual check is expected to fail (growth ~ sqrt(N)); the
    # exit code reflects it
    assert code == 2
    names = {c["name"]: c["status"] for c in rep["checks"]}
    assert names["action_mod_pi2_integrality"] == "pass"
    assert names["literal_residual_bounded"] == "fail"
    assert csv_path.exists()
    assert "residual_9" in csv_path.read_text()


def test_plot_data(capsys):
    code, rep = run_cli(capsys, "plot-data", "--a", "1", "--b", "7",
                        "--N-list", "25,51")
    assert code == 0
    rows = [r for r in rep["results"] if r["label"] == "rows"][0]["value"]
    assert len(rows) == 2 and len(rows[0]) == 2


def test_env_precision_override(capsys, monkeypatch):
    monkeypatch.setenv("KASHAEV_PREC_BITS", "96")
    code, rep = run_cli(capsys, "cs-torsion", "--a", "1", "--b", "7")
    assert code == 0
    assert rep["params"]["prec_bits"] == 96
