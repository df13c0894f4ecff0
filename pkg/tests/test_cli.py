import json
import subprocess
import sys

import pytest

from collatz_slots.cli import main
from collatz_slots.io import load_report, read_checkpoint


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, load_report(out)


def test_levels_stats(capsys):
    code, doc = report(capsys, "levels", "--nu", "20", "--stats")
    st = doc["results"]["stats"]
    assert code == 0
    assert (st["count"], st["min"], st["max"]) == (72, "18", "1048576")
    assert doc["results"]["cardinalities"][:8] == [1, 1, 1, 1, 1, 2, 2, 4]


def test_levels_csv(capsys):
    code, out = run(capsys, "levels", "--nu", "7", "--format", "csv")
    assert code == 0
    assert out == "element\n3\n20\n21\n128\n"


def test_sigma_both_warns(capsys):
    code, doc = report(capsys, "sigma", "--n", "5", "--mode", "both")
    modes = doc["results"]["modes"]
    assert code == 0
    assert modes["literal"]["value"]["exact"] == "45/64"
    assert modes["telescoping"]["value"]["exact"] == "15/16"
    assert modes["telescoping"]["identity"]["holds"] is True
    assert modes["literal"]["identity"]["holds"] is False
    assert any("15/4 != 5" in w for w in doc["warnings"])


def test_sigma_telescoping_only_no_warning(capsys):
    code, doc = report(capsys, "sigma", "--n", "27", "--mode", "telescoping")
    assert code == 0 and doc["warnings"] == []
    assert doc["results"]["nu"] == 111


def test_sigma_cap_exceeded(capsys):
    code, doc = report(capsys, "sigma", "--n", "27", "--cap", "10")
    assert code == 3
    assert doc["results"]["error"] == "orbit-cap-exceeded"
    assert doc["results"]["n"] == "27"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["sigma", "--n", "5", "--bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["slots", "--nu", "4", "--sigma0", "0.5"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["sigma0", "--n", "10", "--nu", "3"])
    assert info.value.code == 2
    capsys.readouterr()


def test_sigma0_out_of_range_sigma0_is_usage_error(capsys):
    code, doc = report(capsys, "slots", "--nu", "4", "--sigma0", "3/2")
    assert code == 2
    assert doc["results"]["error"] == "InvalidInputError"


def test_sigma0_range(capsys):
    code, doc = report(capsys, "sigma0", "--n", "10")
    minima = doc["results"]["minima"]
    assert code == 0
    assert minima["literal"] == {"mode": "literal", "value": {"exact": "177147/327680", "approx": 0.5406097412109375}, "argmin": "9"}
    assert minima["telescoping"]["mode"] == "telescoping"
    assert doc["warnings"]


def test_sigma0_checkpoint_and_resume(capsys, tmp_path):
    path = tmp_path / "cp.json"
    code, first = report(capsys, "sigma0", "--n", "30000", "--checkpoint", str(path))
    assert code == 0 and read_checkpoint(path).complete
    code, again = report(capsys, "sigma0", "--n", "30000", "--checkpoint", str(path), "--resume")
    assert again["results"]["resumed_from"] == "30000"
    assert again["results"]["minima"] == first["results"]["minima"]


def test_sigma0_resume_mismatch(capsys, tmp_path):
    path = tmp_path / "cp.json"
    report(capsys, "sigma0", "--n", "300", "--checkpoint", str(path))
    code, doc = report(capsys, "sigma0", "--n", "400", "--checkpoint", str(path), "--resume")
    assert code == 2 and doc["results"]["error"] == "CheckpointError"


def test_sigma0_workers_match(capsys):
    _, one = report(capsys, "sigma0", "--n", "50000", "--workers", "1")
    _, many = report(capsys, "sigma0", "--n", "50000", "--workers", "3")
    assert one["results"] == many["results"]


def test_slots_default_sigma0(capsys):
    code, doc = report(capsys, "slots", "--nu", "20", "--emit-plot-data")
    res = doc["results"]
    assert code == 0 and res["contained"]
    assert [s["count"] for s in res["slots"]] == [1, 8, 19, 22, 15, 5, 2]
    assert len(res["plot_data"]["slot_bounds"]) == 7


def test_slots_violation_exit_code(capsys):
    code, doc = report(capsys, "slots", "--nu", "20", "--sigma0", "9/10")
    assert code == 1
    assert {"n": "18", "kappa": 6, "ratio": {"exact": "6561/8192", "approx": 6561 / 8192}} in doc["results"]["violations"]


def test_clusters(capsys):
    code, doc = report(capsys, "clusters", "--nu", "20", "--emit-plot-data")
    res = doc["results"]
    assert code == 0 and res["agree"]
    assert res["by_gap"]["sizes"] == [2, 5, 15, 22, 19, 8, 1]
    assert res["plot_data"]["element_cluster"][0] == ["18", 0]


def test_clusters_csv_and_gap_factor(capsys):
    code, out = run(capsys, "clusters", "--nu", "5", "--format", "csv")
    assert out == "element,cluster\n5,0\n32,1\n"
    code, doc = report(capsys, "clusters", "--nu", "20", "--gap-factor", "1000000/1")
    assert not doc["results"]["agree"] and doc["warnings"]


def test_verify(capsys):
    code, doc = report(capsys, "verify", "--nu", "25", "--samples", "500", "--seed", "7")
    assert code == 0
    assert doc["results"]["all_passed"]
    assert doc["results"]["seed"] == 7


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["levels", "--nu", "3", "--out", str(out)]) == 0
    assert load_report(out.read_text())["results"]["elements"] == ["8"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "collatz_slots", "sigma", "--n", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["modes"]["literal"]["value"]["exact"] == "3/4"
