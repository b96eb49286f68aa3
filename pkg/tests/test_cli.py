import csv
import json
import math

import pytest

from fluxcomm.cli import main
from fluxcomm.scenes import bundled_scene_path


def scene(name):
    return str(bundled_scene_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_crossings_totals(capsys):
    assert run(capsys, "crossings", scene("hopf"))[1].splitlines()[-1] == "total = +1"
    assert run(capsys, "crossings", scene("unlinked"))[1].strip() == "total = 0"
    code, out, _ = run(capsys, "crossings", scene("dome3"))
    assert code == 0 and out.count("crossing ") == 3 and out.endswith("total = +1\n")
    assert run(capsys, "crossings", scene("linked2"))[1].splitlines()[-1] == "total = +2"


def test_degenerate_scene_and_perturbation(capsys):
    code, _, err = run(capsys, "crossings", scene("degenerate"))
    assert code == 2 and "degenerate" in err
    code, out, _ = run(capsys, "crossings", scene("degenerate"), "--perturb", "3")
    assert code == 0 and out.splitlines()[-1] == "total = +1"


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "crossings", str(tmp_path / "none.json"))[0] == 1
    assert run(capsys, "crossings", scene("hopf"), "--loop", "X")[0] == 1
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "commutator", scene("hopf"), "--eps", "a,b")[0] == 1
    assert run(capsys, "commutator", scene("hopf"), "--eps", "5")[0] == 1


def test_commutator_report(capsys, tmp_path):
    out_csv = tmp_path / "conv.csv"
    code, out, _ = run(capsys, "commutator", scene("hopf"), "--eps", "0.2,0.1,0.05,0.025",
                       "--csv", str(out_csv))
    assert code == 0
    report = json.loads(out)
    assert report["delta_kernel"] == 1
    assert report["superconductor_units_ihc"] == 4 * math.pi
    assert report["vacuum_units_ihc"] == pytest.approx(8 * math.pi, abs=0.025)
    assert report["charge_flux_units_ihc"] == -1.0
    assert "i hbar c" in report["symbolic"]["vacuum"]
    rows = list(csv.reader(out_csv.open()))
    assert rows[0] == ["eps", "transverse_value", "arc_count"]
    assert [float(r[0]) for r in rows[1:]] == [0.2, 0.1, 0.05, 0.025]
    assert all(r[2] == "1" for r in rows[1:])


def test_commutator_unlinked(capsys):
    code, out, _ = run(capsys, "commutator", scene("unlinked"))
    report = json.loads(out)
    assert code == 0
    for key in ("delta_kernel", "transverse", "superconductor_units_ihc",
                "vacuum_units_ihc", "charge_flux_units_ihc"):
        assert report[key] == 0
    assert report["convergence_order"] is None


def test_commutator_deterministic(capsys):
    first = run(capsys, "commutator", scene("dome3"))
    second = run(capsys, "commutator", scene("dome3"))
    assert first == second and first[0] == 0


def test_commutator_tolerance_exit(capsys):
    code, out, err = run(capsys, "commutator", scene("hopf"), "--tol", "1e-12")
    assert code == 3 and json.loads(out)["delta_kernel"] == 1 and "exceeds" in err


@pytest.mark.parametrize("name,total", [("hopf", "+1"), ("unlinked", "0")])
def test_sweep(capsys, name, total):
    code, out, _ = run(capsys, "sweep", scene(name))
    assert code == 0
    assert f"100/100 totals = {total}" in out


def test_sweep_zero_amplitude(capsys, monkeypatch):
    monkeypatch.setenv("FLUXCOMM_THREADS", "1")
    code, out, _ = run(capsys, "sweep", scene("dome3"), "--seeds", "5", "--amplitude", "0")
    assert code == 0 and "5/5 totals = +1" in out


@pytest.mark.parametrize("q", [1.0, 2.0])
def test_fluxjump_disk(capsys, q, tmp_path):
    out_csv = tmp_path / "jump.csv"
    code, out, _ = run(capsys, "fluxjump", scene("hopf"), "--q", str(q), "--csv", str(out_csv))
    assert code == 0
    value = float(out.split("extrapolated = ")[1].split()[0])
    assert value == pytest.approx(-4 * math.pi * q, rel=1e-3)
    assert len(list(csv.reader(out_csv.open()))) == 5


def test_fluxjump_dome_and_errors(capsys):
    code, out, _ = run(capsys, "fluxjump", scene("dome3"), "--crossing", "1")
    assert code == 0
    assert float(out.split("extrapolated = ")[1].split()[0]) == pytest.approx(-4 * math.pi, rel=1e-3)
    assert run(capsys, "fluxjump", scene("dome3"), "--crossing", "7")[0] == 1
    assert run(capsys, "fluxjump", scene("unlinked"))[0] == 1
    assert run(capsys, "fluxjump", scene("hopf"), "--h", "1e-12")[0] == 1


@pytest.mark.parametrize("name,total", [("hopf", 1), ("unlinked", 0), ("linked2", 2)])
def test_linking(capsys, name, total):
    code, out, _ = run(capsys, "linking", scene(name))
    assert code == 0 and out.strip().endswith("agree")
    assert round(float(out.split("linking = ")[1].split()[0])) == total
