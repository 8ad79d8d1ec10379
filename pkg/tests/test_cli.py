import subprocess
import sys

from vmsched import harness
from vmsched.cli import main
from vmsched.config import default_scenario_text


def write_scenario(tmp_path, extra=""):
    path = tmp_path / "s.toml"
    path.write_text(default_scenario_text().replace("total_hours = 10000.0", "total_hours = 200.0") + extra)
    return path


def test_run_writes_csv_and_trace(tmp_path):
    out = tmp_path / "out"
    assert main(["run", str(write_scenario(tmp_path)), "--seed", "4", "--out", str(out), "--trace"]) == 0
    csv = (out / "default_seed4.csv").read_text().splitlines()
    assert csv[0] == harness.CSV_HEADER and csv[1].startswith("default,4,")
    assert (out / "default_seed4_trace.csv").read_text().startswith("clock,f_measured,theta\n")


def test_run_to_stdout(tmp_path, capsys):
    assert main(["run", str(write_scenario(tmp_path))]) == 0
    assert capsys.readouterr().out.startswith(harness.CSV_HEADER)


def test_sweep_and_steady(tmp_path):
    out = tmp_path / "o"
    assert main(["sweep", "alpha_delta", "--hours", "100", "--replicates", "2", "--out", str(out)]) == 0
    assert len((out / "sweep_alpha_delta.csv").read_text().splitlines()) == 1 + 6 * 2
    assert main(["steady", "--hours", "100", "--out", str(out), "--trace"]) == 0
    assert len((out / "steady.csv").read_text().splitlines()) == 6
    assert (out / "alg_4_seed1_trace.csv").exists()


def test_bad_config_exit_code(tmp_path, capsys):
    assert main(["run", str(write_scenario(tmp_path, "\n[bogus]\n"))]) != 0
    assert "bogus" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.toml")]) != 0


def test_unwritable_out_exit_code(tmp_path):
    blocker = tmp_path / "f"
    blocker.write_text("")
    assert main(["run", str(write_scenario(tmp_path)), "--out", str(blocker / "x")]) != 0


def test_module_entry_point(tmp_path):
    done = subprocess.run([sys.executable, "-m", "vmsched", "default-config"], capture_output=True, text=True)
    assert done.returncode == 0 and "[policy]" in done.stdout
