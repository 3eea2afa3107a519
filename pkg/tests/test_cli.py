"""End-to-end CLI runs: file IO, exit codes, determinism."""

import json
from pathlib import Path

import pytest

from symshadow.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return {
        "golden": write("golden.json", {"rows": [[1, 1], [1, 0]]}),
        "parity": write("parity.json", {"rows": [[0, 1], [1, 0]]}),
        "bad": write("bad.json", {"rows": [[1, 0], [0, 0]]}),
        "cat": write("cat.json", {"kind": "toral", "matrix": [[2, 1], [1, 1]]}),
        "full2": write("full2.json", {"kind": "sft",
                                      "matrix": {"rows": [[1, 1], [1, 1]]}}),
        "horseshoe": write("horseshoe.json",
                           {"kind": "horseshoe", "rates": [1 / 3, 3.0]}),
        "mix": write("mix.json", {"kind": "periodic_mix", "components": [
            {"cycle": "0", "weight": 0.5}, {"cycle": "1", "weight": 0.5}]}),
        "lebesgue": write("lebesgue.json", {"kind": "lebesgue"}),
        "out": str(tmp_path / "out"),
        "tmp": tmp_path,
    }


def read_report(files, name):
    return json.loads((Path(files["out"]) / name).read_text())


def test_analyze_golden_mean(files, capsys):
    code = main(["analyze", files["golden"], "--out", files["out"]])
    assert code == 0
    report = read_report(files, "analyze.json")
    assert report["primitive"] is True
    assert report["class_period"] == 1
    assert abs(report["entropy"] - 0.4812118250596) < 1e-10
    assert report["periodic_counts"]["4"] == 7
    assert report["config"]["command"] == "analyze"


def test_analyze_parity_decomposition(files):
    assert main(["analyze", files["parity"], "--out", files["out"]]) == 0
    report = read_report(files, "analyze.json")
    assert report["primitive"] is False
    assert report["class_period"] == 2
    assert report["classes"] == [[0], [1]]


def test_analyze_invalid_input_exit_2(files, capsys):
    assert main(["analyze", files["bad"], "--out", files["out"]]) == 2
    assert main(["analyze", str(files["tmp"] / "missing.json"),
                 "--out", files["out"]]) == 2


def test_lpp_certificate_and_refutation(files):
    assert main(["lpp", files["golden"], "--epsilon", "0.25", "--n-max", "30",
                 "--out", files["out"]]) == 0
    cert = read_report(files, "lpp.json")
    assert cert["verdict"] == "certificate" and cert["N0"] == 3

    assert main(["lpp", files["parity"], "--epsilon", "0.5", "--n-max", "20",
                 "--out", files["out"]]) == 0
    ref = read_report(files, "lpp.json")
    assert ref["verdict"] == "refutation"
    assert ref["blocking_n"] == 3 and ref["exhaustive"] is True


def test_lpp_horizon_too_small_exit_3(files, tmp_path):
    wheel4 = tmp_path / "wheel4.json"
    wheel4.write_text(json.dumps({"rows": [[1, 1, 0, 0], [0, 0, 1, 0],
                                           [0, 0, 0, 1], [1, 0, 0, 0]]}))
    assert main(["lpp", str(wheel4), "--epsilon", "0.25", "--n-max", "3",
                 "--out", files["out"]]) == 3


def test_pseudo_shadow_cat_table(files):
    code = main(["pseudo-shadow", files["cat"], "1/5,2/5", "--delta", "0.01",
                 "--n-to", "50", "--out", files["out"]])
    assert code == 0
    report = read_report(files, "pseudo_shadow.json")
    assert report["all_pass"] is True
    assert report["rows"][0]["n"] == report["excursion"]["N0"]
    assert (Path(files["out"]) / "pseudo_shadow.csv").exists()


def test_pseudo_shadow_below_threshold_exit_3(files):
    assert main(["pseudo-shadow", files["cat"], "1/5,2/5", "--delta", "0.01",
                 "--n-from", "3", "--out", files["out"]]) == 3


def test_pseudo_shadow_symbolic(files):
    code = main(["pseudo-shadow", files["full2"], "01", "--delta", "0.125",
                 "--out", files["out"]])
    assert code == 0
    report = read_report(files, "pseudo_shadow.json")
    assert report["all_pass"] is True
    assert all(row["defect"] <= 0.125 for row in report["rows"])


def test_approx_measure_periodic_mode(files):
    code = main(["approx-measure", files["lebesgue"], files["cat"],
                 "--epsilon", "0.05", "--mode", "periodic", "--depth", "3",
                 "--max-period", "30", "--out", files["out"]])
    assert code == 0
    report = read_report(files, "approx_measure.json")
    assert report["within_epsilon"] is True
    assert report["distance"] <= 0.05


def test_approx_measure_bernoulli_mode(files):
    code = main(["approx-measure", files["mix"], files["full2"],
                 "--epsilon", "0.1", "--mode", "bernoulli", "--out", files["out"]])
    assert code == 0
    report = read_report(files, "approx_measure.json")
    assert report["within_epsilon"] is True
    scan = report["scan"]
    assert all(b[1] <= a[1] + 1e-12 for a, b in zip(scan, scan[1:]))
    csv_text = (Path(files["out"]) / "approx_measure.csv").read_text()
    assert csv_text.splitlines()[0] == "target,method,parameter,distance"


def test_approx_measure_nonprimitive_bernoulli_exit_2(files, tmp_path):
    parity_system = tmp_path / "paritysys.json"
    parity_system.write_text(json.dumps(
        {"kind": "sft", "matrix": {"rows": [[0, 1], [1, 0]]}}))
    mix01 = tmp_path / "mix01.json"
    mix01.write_text(json.dumps({"kind": "periodic_mix", "components": [
        {"cycle": "01", "weight": 1.0}]}))
    assert main(["approx-measure", str(mix01), str(parity_system),
                 "--epsilon", "0.1", "--mode", "bernoulli",
                 "--out", files["out"]]) == 2


def test_perturb_smoke(files):
    code = main(["perturb-smoke", files["horseshoe"], "--magnitude", "0.033",
                 "--out", files["out"]])
    assert code == 0
    report = read_report(files, "perturb_smoke.json")
    assert report["same_N0"] is True
    assert abs(report["after"]["rates"][0] - (1 / 3) * 1.033) < 1e-12

    assert main(["perturb-smoke", files["horseshoe"], "--magnitude", "0.9",
                 "--out", files["out"]]) == 2

    assert main(["perturb-smoke", files["horseshoe"], "--magnitude", "0",
                 "--out", files["out"]]) == 0
    zero = read_report(files, "perturb_smoke.json")
    assert zero["before"] == zero["after"]


def test_coding_table(files):
    assert main(["coding-table", files["horseshoe"], "--depth", "2",
                 "--out", files["out"]]) == 0
    report = read_report(files, "coding_table.json")
    assert len(report["table"]) == 16


def test_reports_are_byte_identical_across_reruns(files, tmp_path):
    out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
    argv = ["pseudo-shadow", files["cat"], "1/5,2/5", "--delta", "0.01"]
    assert main(argv + ["--out", out_a]) == 0
    assert main(argv + ["--out", out_b]) == 0
    for name in ("pseudo_shadow.json", "pseudo_shadow.csv"):
        assert (Path(out_a) / name).read_bytes() == (Path(out_b) / name).read_bytes()
