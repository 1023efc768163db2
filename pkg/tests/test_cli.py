import json
import subprocess
import sys

import numpy as np

from teichlab.cli import main

CONVERGE = {"differential": {"kind": "constant", "c": 1.0}, "theta": 0.0,
            "box": [-0.5235987755982988, 0.5235987755982988, 2.6179938779914944,
                    3.6651914291880923],
            "path": {"kind": "radial", "schedule": [4, 8]}, "grid": 65, "n_boundary": 512,
            "n_samples": 256}


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_liouville_example(capsys):
    assert main(["liouville", "--box", "0,1.5708,3.1416,4.7124"]) == 0
    # the rounded angles give log 2 + 4e-6
    assert abs(float(capsys.readouterr().out) - np.log(2)) < 1e-5
    exact = ",".join(repr(k * np.pi / 2) for k in range(4))
    assert main(["liouville", "--box", exact, "--integral"]) == 0
    assert capsys.readouterr().out.strip() == "0.693147"


def test_liouville_bad_box(capsys):
    assert main(["liouville", "--box", "0,1,2"]) == 1
    assert main(["liouville", "--box", "0,2,1,3"]) == 1
    assert "error" in capsys.readouterr().err


def test_modulus_rect(tmp_path, capsys):
    assert main(["--output-dir", str(tmp_path), "modulus", "--rect", "2,1", "--grid", "257"]) == 0
    assert abs(float(capsys.readouterr().out.split()[0]) - 0.5) <= 1e-3
    assert json.loads((tmp_path / "modulus.json").read_text())["grid"] == 257


def test_modulus_needs_one_source(capsys):
    assert main(["modulus"]) == 1
    assert main(["modulus", "--rect", "2,1", "--box", "0,1,2,3"]) == 1


def test_modulus_config(tmp_path, capsys):
    cfg = _write(tmp_path, "q.json", {"boundary": [[1, 0], [1, 1], [0, 1], [0, 0]],
                                      "marks": [0, 1, 2, 3]})
    assert main(["--output-dir", str(tmp_path), "modulus", "--config", cfg, "--grid", "65"]) == 0
    assert abs(float(capsys.readouterr().out.split()[0]) - 1.0) <= 1e-3


def test_unknown_key_names_json_path(tmp_path, capsys):
    bad = dict(CONVERGE, path={"kind": "radial", "schedule": [4, 8], "speed": 2})
    assert main(["converge", "--config", _write(tmp_path, "bad.json", bad)]) == 1
    assert "$.path" in capsys.readouterr().err


def test_wrong_type_names_json_path(tmp_path, capsys):
    bad = dict(CONVERGE, differential={"kind": "constant", "c": "one"})
    assert main(["converge", "--config", _write(tmp_path, "bad.json", bad)]) == 1
    assert "$.differential" in capsys.readouterr().err


def test_unreadable_config(tmp_path, capsys):
    assert main(["lamination", "--config", str(tmp_path / "missing.json")]) == 1


def test_converge_csv_is_byte_identical(tmp_path, capsys):
    cfg = _write(tmp_path, "main.json", CONVERGE)
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        assert main(["--output-dir", str(d), "converge", "--config", cfg]) == 0
        outs.append((d / "converge.csv").read_bytes())
    assert outs[0] == outs[1]
    rows = outs[0].decode().splitlines()
    assert len(rows) == 3
    res = [float(r.split(",")[7]) for r in rows[1:]]
    assert res[1] < res[0]


def test_asymptotics_env_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("TEICHLAB_OUTPUT_DIR", str(tmp_path / "env"))
    cfg = dict(CONVERGE, theta=float(np.pi), output="a.csv")
    assert main(["asymptotics", "--config", _write(tmp_path, "a.json", cfg)]) == 0
    header = (tmp_path / "env" / "a.csv").read_text().splitlines()[0]
    assert header.endswith("liouville_scaled,liouville_residual")


def test_numerical_failure_exits_2(tmp_path, capsys):
    coeffs = np.polynomial.polynomial.polyfromroots([1.05] * 5)
    cfg = dict(CONVERGE, differential={"kind": "psi_squared",
                                       "coeffs": [[c, 0.0] for c in coeffs]},
               path={"kind": "radial", "schedule": [4]})
    assert main(["--output-dir", str(tmp_path), "converge", "--config",
                 _write(tmp_path, "c.json", cfg)]) == 2
    assert "FAILED" in capsys.readouterr().out


def test_lamination_and_trace(tmp_path, capsys):
    lam = {"differential": {"kind": "constant", "c": 1.0}, "theta": 0.0,
           "box": [1.0471975511965979, 1.5707963267948966, 4.71238898038469, 5.235987755982989],
           "n_samples": 4096}
    assert main(["--output-dir", str(tmp_path), "lamination", "--config",
                 _write(tmp_path, "l.json", lam)]) == 0
    mass = json.loads((tmp_path / "lamination.json").read_text())["value"]
    assert abs(mass - np.pi / 12) <= 1e-3
    tr = {"differential": {"kind": "constant", "c": 1.0}, "theta": 0.0, "seed": [0.5, 0.0]}
    assert main(["--output-dir", str(tmp_path), "trace", "--config",
                 _write(tmp_path, "t.json", tr)]) == 0
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "index,re,im,arclength"


def test_validate(capsys):
    assert main(["validate", "--seed", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 6 and all(line.startswith("PASS") for line in out)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "teichlab", "modulus", "--rect", "1,1", "--grid",
                        "65"], capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.startswith("1.0000")


def test_bad_subcommand():
    assert main(["frobnicate"]) == 1
