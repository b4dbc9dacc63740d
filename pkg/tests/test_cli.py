import filecmp
import json
import os

import numpy as np
import pytest

from vlasovwave.cli import main

SMALL_RUN = """
mode = evolve

[grid]
x_min = -6
x_max = 6
v_min = -4
v_max = 4
nx = 48
nv = 48
t_final = 1

[output]
directory = {out}
snapshot_cadence = 2
"""

ZERO_RUN = SMALL_RUN + """
[initial_data]
f0 = zero
"""


def write_cfg(tmp_path, text, name="run.cfg", out="out"):
    p = tmp_path / name
    p.write_text(text.format(out=tmp_path / out))
    return str(p)


def test_run_zero_preset(tmp_path, capsys):
    cfg = write_cfg(tmp_path, ZERO_RUN)
    assert main(["run", cfg]) == 0
    diag = (tmp_path / "out" / "diagnostics.csv").read_text().splitlines()
    assert diag[0].startswith("t,mass,mass_flow,kinetic,field,total")
    for line in diag[1:]:
        cells = line.split(",")[1:10]
        assert all(float(c) == 0.0 for c in cells)


def test_run_outputs_and_audit(tmp_path):
    cfg = write_cfg(tmp_path, SMALL_RUN)
    assert main(["run", cfg]) == 0
    out = tmp_path / "out"
    for name in ("diagnostics.csv", "fields.csv", "moments.csv",
                 "audit.json", "f_0.csv"):
        assert (out / name).exists(), name
    audit = json.loads((out / "audit.json").read_text())
    assert audit["gronwall"]["passed_i"]
    assert audit["gronwall"]["passed_ii"]
    assert audit["gronwall"]["passed_iii"]
    assert audit["prop32_bound"]["holds"]
    rep = audit["representation"]
    assert rep["max_evolution_vs_paA"] < 1e-12
    grid_dx = 12.0 / 48
    assert rep["max_evolution_vs_dalembert_diff"] < 10 * grid_dx ** 2
    # snapshots on the configured cadence (dt = 0.25 here, 4 steps)
    assert (out / "f_2.csv").exists()
    assert (out / "f_4.csv").exists()
    with open(out / "f_0.csv") as fh:
        assert fh.readline().strip() == "x,v,f"


def test_byte_identical_reruns(tmp_path):
    cfg_a = write_cfg(tmp_path, SMALL_RUN, "a.cfg", out="out_a")
    cfg_b = write_cfg(tmp_path, SMALL_RUN, "b.cfg", out="out_b")
    assert main(["run", cfg_a]) == 0
    assert main(["run", cfg_b]) == 0
    out_a = tmp_path / "out_a"
    out_b = tmp_path / "out_b"
    names = sorted(os.listdir(out_a))
    assert names == sorted(os.listdir(out_b))
    for name in names:
        assert filecmp.cmp(out_a / name, out_b / name, shallow=False), name


def test_validation_failure_exit_code(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mode = evolve\n[grid]\nnx = -3\n")
    assert main(["run", str(bad)]) == 1
    assert main(["run", str(tmp_path / "missing.cfg")]) == 1


def test_light_cone_violation_exit_code(tmp_path):
    text = SMALL_RUN.replace("t_final = 1", "t_final = 9")
    cfg = write_cfg(tmp_path, text)
    assert main(["run", cfg]) == 1        # refused up front by the margin


def test_division_lemma_subcommand(tmp_path, capsys):
    assert main(["division-lemma", "--output-dir", str(tmp_path)]) == 0
    table = capsys.readouterr().out
    assert "max abs err" in table
    report = json.loads((tmp_path / "division_report.json").read_text())
    assert report["max_abs_err"] <= 1e-8
    assert len(report["rows"]) == 15


def test_division_lemma_custom_sweep(tmp_path):
    assert main(["division-lemma", "--a-sweep", "0.0,0.5",
                 "--output-dir", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "division_report.json").read_text())
    assert sorted({row["a"] for row in report["rows"]}) == [0.0, 0.5]
    assert main(["division-lemma", "--a-sweep", "nope",
                 "--output-dir", str(tmp_path)]) == 1


def test_picard_subcommand(tmp_path):
    cfg = write_cfg(tmp_path, SMALL_RUN + "\n[picard]\nt_horizon = 0.25\n")
    assert main(["picard", cfg]) == 0
    report = json.loads((tmp_path / "out" / "picard_report.json").read_text())
    assert report["converged"]
    d = [it["distance"] for it in report["iterations"]]
    assert all(b < a for a, b in zip(d, d[1:]))
    assert all(it["audit"]["passed"] for it in report["iterations"])


def test_convergence_subcommand(tmp_path, capsys):
    text = SMALL_RUN.replace("nx = 48", "nx = 96").replace("nv = 48", "nv = 96")
    text += "\n[transport]\ncoupling = false\nmode = depth_one\n"
    cfg = write_cfg(tmp_path, text)
    assert main(["convergence", cfg]) == 0
    report = json.loads((tmp_path / "out" /
                         "convergence_report.json").read_text())
    assert len(report["resolutions"]) == 3
    # depth-one interpolation leaves a measurable, refining transport error
    assert "transport_orders" in report
    assert min(report["transport_orders"]) > 0.5
    errs = [r["transport_error"] for r in report["resolutions"]]
    assert errs[0] > errs[-1] > 1e-12
