import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from conformal_curves import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- invariants --------------------------------------------------------------------


def test_invariants_helix_csv(capsys):
    code, out, _ = run(capsys, "invariants", "--curve", "helix:a=1,b=2", "--samples", "11")
    assert code == cli.EXIT_OK
    assert out.splitlines()[0] == ",".join(cli.INVARIANT_HEADER)
    rows = rows_of(out)
    assert len(rows) == 11
    for r in rows:
        assert float(r["Q_mink"]) == pytest.approx(-0.25, rel=1e-7)
        assert float(r["T_eucl"]) == pytest.approx(np.sqrt(2), rel=1e-7)
        assert float(r["max_route_disagreement"]) <= 1e-6
    # rho = sqrt(nu) s with nu = kappa tau = 2/25 for this helix
    last = rows[-1]
    assert float(last["rho"]) == pytest.approx(np.sqrt(0.08) * float(last["s"]), rel=1e-9)


def test_invariants_plane_curve_has_zero_T(capsys):
    code, out, _ = run(capsys, "invariants", "--curve", "log_spiral:a=1,b=0.2", "--samples", "5")
    assert code == cli.EXIT_OK
    for r in rows_of(out):
        assert float(r["T_mink"]) == 0.0 and float(r["tau"]) == 0.0
        assert float(r["Q_mink"]) == pytest.approx(float(r["Q_eucl"]), rel=1e-6)


def test_invariants_circle_is_degenerate(capsys):
    code, out, err = run(capsys, "invariants", "--curve", "circle:r=2", "--samples", "3")
    assert code == cli.EXIT_DEGENERATE
    assert "degenerate input at t = " in err and "VertexPoint" in err
    assert out == ""


def test_invariants_tolerance_failure(capsys):
    code, _, err = run(capsys, "invariants", "--curve", "trefoil", "--samples", "5", "--tol", "1e-30")
    assert code == cli.EXIT_FAILED
    assert "exceeds" in err


def test_invariants_files(tmp_path, capsys):
    out = tmp_path / "sub" / "tref"
    code, stdout, err = run(capsys, "invariants", "--curve", "trefoil", "--samples", "7", "--format", "both", "--out", str(out))
    assert code == cli.EXIT_OK and stdout == ""
    assert (tmp_path / "sub" / "tref.csv").exists()
    svg = (tmp_path / "sub" / "tref.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg
    assert err.count("wrote ") == 2


def test_invariants_from_sampled_file(tmp_path, capsys):
    t = np.linspace(0, 2, 201)
    path = tmp_path / "pts.csv"
    with open(path, "w") as fh:
        fh.write("t,x,y,z\n")
        for ti in t:
            fh.write(f"{ti:.17g},{np.cos(ti):.17g},{np.sin(ti):.17g},{2 * ti:.17g}\n")
    code, out, _ = run(
        capsys, "invariants", "--curve", f"samples:file={path}", "--span", "0.5,1.5", "--samples", "3", "--tol", "1e-2"
    )
    assert code == cli.EXIT_OK
    for r in rows_of(out):
        assert float(r["Q_eucl"]) == pytest.approx(-0.25, rel=1e-2)


# -- verify -----------------------------------------------------------------------


def test_verify_is_deterministic(tmp_path, capsys):
    ini = tmp_path / "run.ini"
    ini.write_text("[curve]\nfamily = helix\na = 1\nb = 2\ninterval = 0, 3\n\n[run]\nseed = 4\ntrials = 3\n")
    reports = []
    for k in range(2):
        out = tmp_path / f"r{k}.txt"
        code, _, _ = run(capsys, "verify", "--config", str(ini), "--out", str(out))
        assert code == cli.EXIT_OK
        reports.append(out.read_bytes())
    assert reports[0] == reports[1]
    text = reports[0].decode().splitlines()
    assert text[0] == "curve helix:a=1,b=2"
    assert text[1] == "seed 4, trials 3"
    assert text[-1].endswith("passed") and "failed" not in text[-1]


def test_verify_failure_exit(capsys):
    code, out, _ = run(capsys, "verify", "--curve", "helix", "--tol", "1e-30", "--samples", "3")
    assert code == cli.EXIT_FAILED
    assert "failed:" in out.splitlines()[-1]


# -- reconstruct ------------------------------------------------------------------


def test_reconstruct_constants(capsys):
    code, out, err = run(capsys, "reconstruct", "--span", "0,2", "--samples", "21")
    assert code == cli.EXIT_OK
    assert "gram drift" in err
    rows = rows_of(out)
    assert len(rows) == 21 and set(rows[0]) == {"rho", "x", "y", "z"}


def test_reconstruct_zero_torsion_is_flat(tmp_path, capsys):
    ini = tmp_path / "flat.ini"
    ini.write_text("[profile]\nQ = -0.7\nT = 0\nspan = 0, 3\n")
    code, out, _ = run(capsys, "reconstruct", "--config", str(ini))
    assert code == cli.EXIT_OK
    assert max(abs(float(r["z"])) for r in rows_of(out)) <= 1e-9


def test_reconstruct_plane(tmp_path, capsys):
    ini = tmp_path / "plane.ini"
    ini.write_text("[profile]\nQ = -0.7\nplane = yes\n")
    code, out, _ = run(capsys, "reconstruct", "--config", str(ini), "--samples", "5")
    assert code == cli.EXIT_OK
    assert set(rows_of(out)[0]) == {"rho", "x", "y"}


def test_reconstruct_from_table(tmp_path, capsys):
    table = tmp_path / "inv.csv"
    code, _, _ = run(capsys, "invariants", "--curve", "trefoil", "--samples", "41", "--out", str(table))
    assert code == cli.EXIT_OK
    ini = tmp_path / "r.ini"
    ini.write_text(f"[profile]\ntable = {table}\nspan = 0, 2\n")
    code, out, _ = run(capsys, "reconstruct", "--config", str(ini), "--samples", "11")
    assert code == cli.EXIT_OK
    # spans beyond the table are degenerate input, not a hang
    code, _, err = run(capsys, "reconstruct", "--config", str(ini), "--span", "0,1000")
    assert code == cli.EXIT_DEGENERATE and "OutOfDomain" in err


def test_malformed_table(tmp_path, capsys):
    table = tmp_path / "bad.csv"
    table.write_text("rho,Q,T\n0,-0.5,oops\n")
    ini = tmp_path / "r.ini"
    ini.write_text(f"[profile]\ntable = {table}\n")
    code, _, err = run(capsys, "reconstruct", "--config", str(ini))
    assert code == cli.EXIT_USAGE
    assert "line 2, column 3" in err


# -- canal -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "curve,expected",
    [
        ("tube:c=1", "classification: regular"),
        ("pencil", "classification: degenerate"),
        ("trefoil", "classification: light-like"),
        ("split_rotation", "verdict: not a canal"),
    ],
)
def test_canal_reports(capsys, curve, expected):
    code, out, _ = run(capsys, "canal", "--curve", curve, "--samples", "9")
    assert code == cli.EXIT_OK
    assert expected in out.splitlines()


def test_canal_files(tmp_path, capsys):
    code, _, _ = run(capsys, "canal", "--curve", "tube:c=2", "--samples", "5", "--out", str(tmp_path / "c"))
    assert code == cli.EXIT_OK
    assert "regular" in (tmp_path / "c.txt").read_text()
    assert len(rows_of((tmp_path / "c.csv").read_text())) == 5


# -- configuration errors ---------------------------------------------------------


def test_unknown_key_reports_position(tmp_path, capsys):
    ini = tmp_path / "bad.ini"
    ini.write_text("[curve]\nfamily = helix\nradius = 3\n")
    code, _, err = run(capsys, "invariants", "--config", str(ini))
    assert code == cli.EXIT_USAGE
    assert "line 3, column 1" in err


def test_continuation_line_rejected(tmp_path, capsys):
    ini = tmp_path / "bad.ini"
    ini.write_text("[curve]\nfamily = helix\n  oops\n")
    code, _, err = run(capsys, "invariants", "--config", str(ini))
    assert code == cli.EXIT_USAGE and "line" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["invariants", "--curve", "spline"],
        ["invariants"],
        ["invariants", "--curve", "helix:c=1"],
        ["invariants", "--curve", "helix", "--samples", "1"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == cli.EXIT_USAGE
    assert "configuration error" in err


def test_bad_subcommand_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == cli.EXIT_USAGE


def test_parse_curve_flag_matrices():
    family, raw = cli.parse_curve_flag("trig_polynomial:cos=0 1 0;0 0 1;0 0 0,sin=0 0 0;0 1 0;0 0 1")
    assert family == "trig_polynomial"
    assert raw["cos"] == "0 1 0;0 0 1;0 0 0"
    assert raw["sin"] == "0 0 0;0 1 0;0 0 1"


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "conformal_curves", "invariants", "--curve", "helix", "--samples", "2"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert res.stdout.startswith("t,s,rho")
