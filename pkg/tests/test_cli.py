import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from isobessel import bessel_core, isospectral, wavefield
from isobessel.cli import figure2_table, fmt, run

from oracles import bisect_zero, series_j


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, -2.5e-300, 12345.678901234567, 0.0):
        assert float(fmt(x)) == x
    assert fmt(float("inf")) == "inf"


def test_eval_csv_round_trip_is_bit_identical():
    status, text, _ = invoke("eval", "--n", "3", "--r-max", "20", "--step", "0.37")
    assert status == 0 and "\r" not in text
    header, rows = read_csv(text)
    assert header == ["r", "j_3"]
    r = np.array([float(row[0]) for row in rows])
    values = np.array([float(row[1]) for row in rows])
    assert np.array_equal(values, bessel_core.bessel_j(3, r))


def test_partner_csv_round_trip_is_bit_identical():
    status, text, _ = invoke("partner", "--n", "2", "--gamma", "1.5", "--r", "0.5", "1", "7.25")
    assert status == 0
    header, rows = read_csv(text)
    assert header == ["r", "partner3"]
    expected = isospectral.partner_j(isospectral.PartnerSpec(2, 1.5), np.array([0.5, 1.0, 7.25]))
    assert np.array_equal([float(row[1]) for row in rows], expected)


def test_partner_at_zero_of_j0():
    z = bisect_zero(lambda x: series_j(0, x), 2.0, 3.0)
    assert z == pytest.approx(2.4048255576957730, abs=1e-13)
    status, text, _ = invoke("partner", "--n", "1", "--gamma", "0", "--r", "2.4048255576957730")
    assert status == 0
    assert abs(float(read_csv(text)[1][0][1])) <= 1e-10


@pytest.mark.parametrize("quantity", ["d1", "d2"])
def test_partner_derivative_columns(quantity):
    status, text, _ = invoke("partner", "--n", "1", "--gamma", "inf", "--quantity", quantity, "--r", "1")
    assert status == 0
    assert read_csv(text)[0] == ["r", f"partner2_{quantity}"]


@pytest.mark.parametrize("quantity", ["dj", "raise", "lower"])
def test_eval_quantities(quantity):
    status, text, _ = invoke("eval", "--n", "2", "--quantity", quantity, "--r", "1", "2", "--format", "json")
    assert status == 0
    data = json.loads(text)
    assert data["r"] == [1.0, 2.0] and len(data[f"{quantity}_2"]) == 2


def test_g_command_gamma0():
    status, text, _ = invoke("g", "--n", "2", "--gamma", "0", "--u", "0.5", "3")
    assert status == 0
    assert [float(row[1]) for row in read_csv(text)[1]] == [-8.0, -8.0]


def test_zeros_command():
    status, text, _ = invoke("zeros", "--n", "0", "--gamma", "1", "--r-max", "8", "--format", "json")
    assert status == 0
    zeros = json.loads(text)["zeros"]
    assert zeros[0] == pytest.approx(3.831705970207512, abs=1e-11)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--n", "-1", "--r", "1"],
        ["eval", "--n", "21", "--r", "1"],
        ["eval", "--n", "1", "--r", "60"],
        ["eval", "--n", "1", "--quantity", "dj", "--r", "0"],
        ["partner", "--n", "1", "--gamma", "-2", "--r", "1"],
        ["partner", "--n", "1", "--gamma", "nan", "--r", "1"],
        ["figure2", "--which", "4"],
        ["figure2", "--which", "2", "--r-max", "80"],
        ["field", "--n", "1", "--gamma", "1", "--r-min", "0.01"],
        ["evolve", "--n", "1", "--gamma", "1", "--nr", "64", "--ntheta", "16", "--steps-per-period", "5"],
        ["eval", "--n", "1"],
        ["bogus"],
    ],
)
def test_invalid_input_exits_2(argv):
    status, out, err = invoke(*argv)
    assert status == 2
    assert out == "" and err.startswith("isobessel: error:")


def test_residuals_gate():
    status, text, _ = invoke("residuals", "--matrix", "default")
    assert status == 0
    report = json.loads(text)
    assert report["passed"] and all(c["passed"] for c in report["cases"])
    assert {c["identity_id"] for c in report["cases"]} >= {"BESSEL_ODE", "PARTNER_ODE", "LIMIT_GINF"}


def test_residuals_fault_injection_exits_3():
    status, text, _ = invoke("residuals", "--flip-damping-sign", "--format", "csv")
    assert status == 3
    header, rows = read_csv(text)
    failed = {row[0] for row in rows if row[-1] == "false"}
    assert failed == {"PARTNER_ODE", "SCALED_ODE"}


class TestFigure2:
    def test_default_layout(self):
        status, text, _ = invoke("figure2", "--which", "2")
        assert status == 0
        header, rows = read_csv(text)
        assert header == ["r", "gamma=0.0", "gamma=0.2", "gamma=1.0", "gamma=5.0", "gamma=inf"]
        assert len(rows) == 1501
        assert float(rows[0][0]) == 0.0 and float(rows[-1][0]) == 15.0

    @pytest.mark.parametrize("which, low, high", [(2, 0, 2), (3, 1, 3)])
    def test_endpoints(self, which, low, high):
        header, r, cols = figure2_table(which)
        assert np.max(np.abs(cols[0] - bessel_core.bessel_j(low, r))) <= 1e-12
        assert np.max(np.abs(cols[-1] + bessel_core.bessel_j(high, r))) <= 1e-12

    def test_intermediate_value(self):
        _, r, cols = figure2_table(2, gammas=("1",), r_max=2.0, step=0.5)
        assert cols[0][2] == pytest.approx(0.3251471008130331, abs=1e-15)

    def test_custom_sweep(self):
        status, text, _ = invoke("figure2", "--which", "3", "--gammas", "0.5,inf", "--r-max", "1", "--step", "0.5")
        assert status == 0
        assert read_csv(text)[0] == ["r", "gamma=0.5", "gamma=inf"]


def test_field_csv_columns():
    status, text, _ = invoke("field", "--n", "1", "--gamma", "0", "--r-max", "5", "--nr", "8", "--ntheta", "16")
    assert status == 0
    header, rows = read_csv(text)
    assert header == ["r", "theta", "value"] and len(rows) == 8 * 16
    r, theta, value = map(float, rows[17])
    assert value == pytest.approx(series_j(0, r) * np.cos(2 * theta), abs=1e-15)


def test_evolve_report():
    status, text, _ = invoke("evolve", "--n", "1", "--gamma", "1", "--nr", "64", "--ntheta", "16", "--periods", "1")
    assert status == 0
    report = json.loads(text)
    assert report["grid"] == [64, 16] and report["steps"] > 0
    params = wavefield.WaveParams(1, 1.0)
    direct = wavefield.time_evolve(params, wavefield.annulus_grid(params, 0.2, 64, 16), periods=1)
    assert report["drift"] == direct.drift


def test_out_file(tmp_path):
    path = tmp_path / "j.csv"
    status, text, _ = invoke("eval", "--n", "0", "--r", "1", "--out", str(path))
    assert status == 0 and text == ""
    assert path.read_bytes() == b"r,j_0\n1,0.76519768655796661\n"


@pytest.mark.parametrize(
    "argv",
    [
        ["figure2", "--which", "3"],
        ["residuals"],
        ["field", "--n", "2", "--gamma", "inf", "--nr", "16", "--ntheta", "8"],
        ["evolve", "--n", "0", "--gamma", "0", "--nr", "48", "--ntheta", "16", "--periods", "1"],
    ],
)
def test_repeated_runs_are_byte_identical(argv):
    assert invoke(*argv) == invoke(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "isobessel", "eval", "--n", "1", "--r", "2"],
        capture_output=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == b"r,j_1\n2,0.57672480775687363\n"
