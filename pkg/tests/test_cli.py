import csv
import json
import math
import textwrap

import pytest

from udwsignal import acceptance, cli, config
from udwsignal import closedform as cf
from udwsignal.config import SchemaError
from udwsignal.errors import AccuracyError

SWEEP = """
[scenario]
case = rest_3p1
method = both

[case]
omega_a = 1.0
L = 1.0
T = 2.0

[sweep]
case.omega_b = linspace(0.5, 1.5, 3)
"""

EXPLICIT = """
[scenario]
dimension = 3
output = capacities

[alice]
coupling = 0.1
gap = 1.0
switching = sudden
duration = 2.0

[bob]
coupling = 0.1
gap = 1.0
position = 1.0

[channel]
p2 = 0.01

[sweep]
bob.gap = 0.8, 1.2
"""


def write(tmp_path, text, name="s.ini"):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return str(p)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_run_both_methods(tmp_path):
    out = tmp_path / "o.csv"
    assert cli.main(["run", write(tmp_path, SWEEP), "--out", str(out)]) == cli.EXIT_OK
    rows = read_csv(out)
    assert [float(r["case.omega_b"]) for r in rows] == [0.5, 1.0, 1.5]
    for r in rows:
        assert r["status"] == "ok"
        assert float(r["discrepancy"]) <= float(r["discrepancy_tol"])
    mid = rows[1]
    assert float(mid["strength"]) == pytest.approx(cf.closed_form(cf.ClosedFormCase.REST_3P1, cf.CaseParams(1.0, 1.0, 1.0, 2.0)).strength, rel=1e-8)


def test_values_round_trip_with_17_digits(tmp_path):
    out = tmp_path / "o.csv"
    cli.main(["run", write(tmp_path, SWEEP), "--out", str(out), "--method", "closed_form"])
    row = read_csv(out)[0]
    exact = cf.closed_form(cf.ClosedFormCase.REST_3P1, cf.CaseParams(1.0, 0.5, 1.0, 2.0))
    assert float(row["cf_c2_re"]) == exact.c2.real
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert cli.fmt(True) == "1"


def test_explicit_detectors_with_capacities(tmp_path):
    out = tmp_path / "o.csv"
    assert cli.main(["run", write(tmp_path, EXPLICIT), "--out", str(out)]) == cli.EXIT_OK
    rows = read_csv(out)
    assert len(rows) == 2
    for r in rows:
        D = float(r["trace_distance"])
        assert D == pytest.approx(float(r["strength"]), rel=1e-14)
        assert float(r["holevo"]) == pytest.approx(-math.log(0.01) * D * D / (4 * math.log(2)))
        assert r["valid"] == "1"


def test_output_identical_across_thread_counts(tmp_path, monkeypatch):
    path = write(tmp_path, SWEEP)
    outs = []
    for flag in ("1", "3"):
        out = tmp_path / f"o{flag}.csv"
        cli.main(["run", path, "--out", str(out), "--threads", flag])
        outs.append(out.read_bytes())
    monkeypatch.setenv("UDW_THREADS", "2")
    out = tmp_path / "env.csv"
    cli.main(["run", path, "--out", str(out)])
    outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_thread_count_precedence(monkeypatch):
    monkeypatch.setenv("UDW_THREADS", "4")
    assert cli.thread_count(None) == 4
    assert cli.thread_count(2) == 2
    monkeypatch.setenv("UDW_THREADS", "many")
    with pytest.raises(Exception):
        cli.thread_count(None)
    monkeypatch.delenv("UDW_THREADS")
    assert cli.thread_count(None) == 1


@pytest.mark.parametrize(
    "text,line,key",
    [
        ("[scenario]\ncase = rest_3p1\n[case]\nomega_a = fast\n", 4, "omega_a"),
        ("[scenario]\ncase = nowhere\n", 2, "case"),
        ("[scenario]\ncase = rest_3p1\n\n[case]\nwarp = 9\n", 5, "warp"),
        ("[scenario]\ncase = rest_3p1\n[sweep]\ncase.omega_b = linspace(1, 2, 0)\n", 4, "case.omega_b"),
        ("[scenario]\ndimension = 3\n[alice]\nswitching = gaussian\n[bob]\n", 3, "width"),
    ],
)
def test_schema_errors_point_at_the_line(tmp_path, capsys, text, line, key):
    path = write(tmp_path, text)
    with pytest.raises(SchemaError) as info:
        config.load(path)
    assert info.value.line == line
    assert key in str(info.value)
    assert cli.main(["run", path]) == cli.EXIT_SCHEMA
    assert f"{path}:{line}" in capsys.readouterr().err


def test_missing_file_is_a_schema_error(tmp_path):
    assert cli.main(["run", str(tmp_path / "absent.ini")]) == cli.EXIT_SCHEMA


def test_method_flag_needs_a_case(tmp_path):
    assert cli.main(["run", write(tmp_path, EXPLICIT), "--method", "both"]) == cli.EXIT_SCHEMA


def test_numeric_failure_exit_code(tmp_path, capsys, monkeypatch):
    calls = []

    def flaky(scenario, q):
        calls.append(scenario)
        if len(calls) == 2:
            raise AccuracyError("tolerance not reached", best=0j, error=1.0)
        return real(scenario, q)

    real = cli.compute_c2_d2
    monkeypatch.setattr(cli, "compute_c2_d2", flaky)
    out = tmp_path / "o.csv"
    assert cli.main(["run", write(tmp_path, SWEEP), "--out", str(out), "--method", "quadrature"]) == cli.EXIT_NUMERIC
    assert [r["status"] for r in read_csv(out)] == ["ok", "AccuracyError", "ok"]
    assert "1 of 3 points failed numerically" in capsys.readouterr().err


def test_parse_grid():
    assert list(config.parse_grid("geomspace(1, 100, 3)")) == pytest.approx([1, 10, 100])
    assert list(config.parse_grid("1, 2.5")) == [1.0, 2.5]
    with pytest.raises(ValueError):
        config.parse_grid("linspace(0, 1, 200000)")


def test_presets_parse():
    from importlib import resources

    for name in ("fig2.ini", "fig4.ini", "fig5.ini"):
        sf = config.loads(resources.files("udwsignal.presets").joinpath(name).read_text(), name)
        assert len(sf.points()) > 1


def test_fit_command(tmp_path, capsys):
    path = tmp_path / "d.csv"
    with open(path, "w") as fh:
        fh.write("case.L,strength,status\n")
        for L in (1, 2, 4, 8, 16):
            fh.write(f"{L},{0.3 / L},ok\n")
        fh.write("32,nan,AccuracyError\n")
    assert cli.main(["fit", str(path), "--column", "strength"]) == cli.EXIT_OK
    res = json.loads(capsys.readouterr().out)
    assert res["x"] == "case.L" and res["n"] == 5
    assert res["exponent"] == pytest.approx(-1.0, abs=1e-12)
    assert cli.main(["fit", str(path), "--column", "nothing"]) == cli.EXIT_SCHEMA


def test_verify_subset(capsys):
    assert cli.main(["verify", "--only", "7"]) == cli.EXIT_OK
    line = json.loads(capsys.readouterr().out.strip())
    assert line["criterion"] == 7 and line["passed"] is True


def test_fault_injection_is_caught():
    # a closed form off by a tiny relative amount must fail the oracle comparison
    def perturbed(case, params):
        good = cf.closed_form(case, params)
        return cf.SignalCoefficients(good.c2 * (1 + 1e-3), good.d2)

    points = [p for p in acceptance.PINNED_POINTS if p[0] is cf.ClosedFormCase.REST_3P1][:1]
    assert acceptance.criterion_1(closed=perturbed, points=points).passed is False
    assert acceptance.criterion_1(points=points).passed is True
