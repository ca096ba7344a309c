import csv
import io
import json
import math

import pytest

from belyidet.cli import parse_grid, run
from belyidet.errors import DomainError

import oracles


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_analyze_json():
    code, text = call("analyze", "--catalog", "octahedral", "--json")
    assert code == 0
    data = json.loads(text)
    assert data["degree"] == 24
    assert data["A_f"] == pytest.approx(12 * 2 ** (2 / 3), rel=1e-10)
    assert abs(data["C_f_routes"]["pairwise"]["deviation"]) < 1e-8


def test_analyze_user_map(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"name": "square", "numerator": ["0", "0", "1"], "denominator": ["1"]}))
    code, text = call("analyze", "--map", str(path))
    assert code == 0 and "degree: 2" in text


def test_det_flat_with_quadrature():
    cfg = json.dumps({"points": [{"re": 0}, {"re": 1}, {"re": 0.3, "im": 0.8}, "inf"],
                      "orders": [-0.5, -0.5, -0.5, -0.5], "area": 1.0})
    code, text = call("det-flat", cfg, "--quadrature", "--json")
    assert code == 0
    routes = json.loads(text)["routes"]
    assert abs(routes["quadrature-area"]["deviation"]) < 1e-8


def test_det_platonic_matches_printed_form():
    code, text = call("det-platonic", "octahedron", "--beta", "-0.3333333333333333", "--json")
    assert code == 0
    data = json.loads(text)
    assert data["log_det"] == pytest.approx(float(oracles.flat_octahedron()), abs=1e-9)
    assert data["max_deviation"] < 1e-7


def test_det_belyi_and_family():
    code, text = call("det-belyi", "--catalog", "dihedral(3)", "--triangle", "-0.6,-0.7,-0.7", "--liouville", "--json")
    assert code == 0
    data = json.loads(text)
    assert abs(data["routes"]["flat-cones"]["deviation"]) < 1e-8
    code, _ = call("det-family", "tetrahedral", "--triangle", "-0.5,-0.6,-0.9")
    assert code == 0


def test_curved_base_without_table_is_input_error():
    code, _ = call("det-platonic", "tetrahedron", "--beta", "-0.4")
    assert code == 2


def test_curved_base_from_table(tmp_path):
    path = tmp_path / "base.csv"
    path.write_text("beta0,beta1,betainf,phi0,phi1,phiinf,logdet_unit\n"
                    "-0.5,-0.6,-0.7,0.1,0.2,0.3,-1.25\n")
    code, text = call("det-belyi", "--catalog", "cyclic(2)", "--triangle", "-0.5,-0.6,-0.7", "--base-table", str(path))
    assert code == 0 and "log_det" in text


def test_accessory_contour():
    code, text = call("accessory", "--catalog", "dihedral(3)", "--triangle", "-0.6,-0.7,-0.7", "--json")
    assert code == 0
    data = json.loads(text)
    assert data["max_contour_deviation"] <= 1e-6
    assert max(abs(r) for r in data["sum_rule_residuals"]) <= 1e-8


def test_elliptic_modes():
    code, text = call("elliptic", "--tau", "0,2", "--flat", "--json")
    assert code == 0
    data = json.loads(text)
    assert data["lambda"] == pytest.approx([2.0, 0.0], abs=1e-12)
    assert abs(data["routes"]["flat-cones"]["deviation"]) < 1e-8
    code, text = call("elliptic", "--stationary", "0.1,1.9", "--json")
    data = json.loads(text)
    assert code == 0 and data["classification"] == "saddle"
    assert data["tau"] == pytest.approx([0.0, 2.0], abs=1e-8)
    code, text = call("elliptic", "--lambda", "2,0")
    assert code == 0 and "log_det" in text


def test_elliptic_grid_csv():
    code, text = call("elliptic", "--grid", "-0.5:0.5:0.5,1:2:0.5")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["tau_re", "tau_im", "logdet"]
    assert len(rows) == 1 + 9
    assert [float(v) for v in rows[1][:2]] == [-0.5, 1.0]


def test_sweep_csv_with_negative_grid():
    code, text = call("sweep", "platonic", "tetrahedron", "--grid", "-0.9:0:0.1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["beta", "logdet_area4pi"]
    # only the flat point and the round sphere have built-in base data
    got = {float(b): float(v) for b, v in rows[1:]}
    assert sorted(got) == [-0.5, 0.0]
    assert got[-0.5] == pytest.approx(oracles.flat_tetrahedron(), abs=1e-9)
    assert got[0.0] == pytest.approx(oracles.round_sphere(), abs=1e-9)


def test_stationarity_command():
    code, text = call("stationarity", "dihedron", "--ell", "3")
    assert code == 0
    assert json.loads(text)["passed"] is True
    code, _ = call("stationarity", "octahedron", "--tol", "1e-14")
    assert code == 3


@pytest.mark.parametrize("argv", [
    ("analyze",),
    ("nonsense",),
    ("det-platonic", "octahedron"),
    ("det-belyi", "--catalog", "octahedral", "--triangle", "-0.5,-0.5"),
    ("det-belyi", "--catalog", "octahedral", "--triangle", "-1.5,-0.5,-0.5"),
    ("elliptic", "--tau", "0,-1"),
    ("analyze", "--catalog", "heptagonal"),
    ("det-flat", "{not json"),
    ("sweep", "platonic", "cube", "--grid", "0:1:-0.1"),
])
def test_input_errors(argv):
    assert call(*argv)[0] == 2


def test_route_disagreement_exit():
    cfg = json.dumps({"points": [{"re": 0}, {"re": 1}, {"re": 0.3, "im": 0.8}, "inf"],
                      "orders": [-0.5, -0.5, -0.5, -0.5], "area": 1.0})
    assert call("--tol", "1e-300", "det-flat", cfg, "--quadrature")[0] == 3


def test_parse_grid():
    assert parse_grid("-0.95:0:0.05")[-1] == 0.0
    assert len(parse_grid("-0.95:0:0.05")) == 20
    assert parse_grid("1:0:-0.5") == [1.0, 0.5, 0.0]
    with pytest.raises(DomainError):
        parse_grid("0:1")
