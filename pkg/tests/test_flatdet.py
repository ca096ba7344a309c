import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from belyidet.errors import DomainError
from belyidet.flatdet import (
    FlatConfiguration,
    LogDetResult,
    config_from_json,
    flat_liouville_action,
    flat_log_det,
    metric_area,
    metric_area_quadrature,
    rescale_log_det,
)
from belyidet.specfun import Divisor, zeta0
from belyidet.stationarity import platonic_configuration

FOUR_PI = 4 * math.pi


@pytest.mark.parametrize("solid", ["tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron"])
def test_flat_solids_closed_forms(solid):
    cfg = platonic_configuration(solid)
    assert flat_log_det(cfg).log_det == pytest.approx(oracles.FLAT_SOLIDS[solid](), abs=1e-7)


def test_flat_tetrahedron_equilateral_coordinates():
    # the same surface with its vertices at 0, 1, e^{i pi/3}... and infinity
    w = cmath.exp(1j * math.pi / 3)
    cfg = FlatConfiguration((0j, 1 + 0j, w), (-0.5,) * 3, -0.5, FOUR_PI)
    # the cross-ratio of a regular tetrahedron is equi-anharmonic
    assert flat_log_det(cfg).log_det == pytest.approx(oracles.flat_tetrahedron(), abs=1e-9)


def random_config(rng, n):
    while True:
        ords = rng.uniform(-0.8, -0.05, n)
        binf = -2 - ords.sum()
        if -0.9 < binf < 0.5 and abs(binf) > 0.05:
            break
    pts = rng.normal(size=n) + 1j * rng.normal(size=n)
    return FlatConfiguration(tuple(pts), tuple(ords), binf)


@pytest.mark.parametrize("seed", range(4))
def test_similarity_invariance(seed):
    rng = np.random.default_rng(seed)
    cfg = random_config(rng, 3 + seed % 2)
    ref = flat_log_det(cfg).log_det
    a = complex(*rng.normal(size=2))
    b = complex(*rng.normal(size=2))
    moved = FlatConfiguration(tuple(a * z + b for z in cfg.finite_points), cfg.orders, cfg.order_at_infinity)
    assert flat_log_det(moved).log_det == pytest.approx(ref, abs=1e-9)


def test_inversion_invariance():
    # x -> 1/x sends the point at 0 to infinity and infinity to 0
    orders = (-0.5, -0.3, -0.4)
    binf = -2 - sum(orders)
    pts = (0j, 1 + 0j, 2 + 1j)
    cfg = FlatConfiguration(pts, orders, binf)
    inv_pts = (0j,) + tuple(1 / z for z in pts[1:])
    inv = FlatConfiguration(inv_pts, (binf,) + orders[1:], orders[0])
    assert flat_log_det(inv).log_det == pytest.approx(flat_log_det(cfg).log_det, abs=1e-9)


@given(st.floats(0.1, 50.0))
def test_area_scaling_law(area):
    cfg = platonic_configuration("octahedron", target_area=1.0)
    res = flat_log_det(cfg)
    moved = flat_log_det(FlatConfiguration(cfg.finite_points, cfg.orders, cfg.order_at_infinity, area))
    assert moved.log_det == pytest.approx(res.log_det - zeta0(cfg.divisor) * math.log(area), abs=1e-10)


def test_rescale_examples():
    d = Divisor((), (), 0.0)
    r = LogDetResult(1.0, 2.0, d, "x")
    # smooth sphere: zeta(0) = -2/3, so doubling the area adds (2/3) ln 2
    assert rescale_log_det(r, 4.0).log_det == pytest.approx(1.0 + 2 / 3 * math.log(2))
    with pytest.raises(DomainError):
        rescale_log_det(r, 0.0)


def test_rescale_round_trip():
    cfg = platonic_configuration("cube")
    res = flat_log_det(cfg)
    there = rescale_log_det(res, 3.0)
    back = rescale_log_det(there, res.area)
    assert back.log_det == pytest.approx(res.log_det, abs=1e-13)


@pytest.mark.parametrize(
    "pts,orders,binf",
    [((0j, 1 + 0j, 1j), (-0.5, -0.5, -0.5), -0.5), ((0j, 1 + 0j), (-0.3, -0.9), -0.8), ((0j, 2 + 0j, 1 + 1j), (-0.2, -0.7, -0.4), -0.7)],
)
def test_period_area_vs_quadrature(pts, orders, binf):
    cfg = FlatConfiguration(pts, orders, binf)
    assert metric_area(cfg) == pytest.approx(metric_area_quadrature(cfg), rel=1e-9)


@pytest.mark.parametrize("seed", range(3))
def test_period_area_vs_quadrature_random(seed):
    cfg = random_config(np.random.default_rng(100 + seed), 4)
    assert metric_area(cfg) == pytest.approx(metric_area_quadrature(cfg), rel=1e-9)


def test_area_homogeneity():
    cfg = FlatConfiguration((0j, 1 + 0j, 1j), (-0.5, -0.5, -0.5), -0.5)
    scaled = FlatConfiguration((0j, 3 + 0j, 3j), (-0.5, -0.5, -0.5), -0.5)
    # x = 3u: |dx|^2 prod |x - x_k|^{2 b_k} = 3^{2 + 2 sum b_k} ... = 3^{2 - 3} times the area in u
    assert metric_area(scaled) == pytest.approx(metric_area(cfg) * 3 ** (2 + 2 * -1.5), rel=1e-11)


def test_configuration_validation():
    with pytest.raises(DomainError):
        FlatConfiguration((0j, 1 + 0j), (-0.5, -0.5), -0.5)  # not flat
    with pytest.raises(DomainError):
        FlatConfiguration((0j, 0j), (-0.5, -0.5), -1.0 + 0.0)
    with pytest.raises(DomainError):
        FlatConfiguration((0j, 1 + 0j), (-1.0, -0.5), -0.5)
    with pytest.raises(DomainError):
        FlatConfiguration((0j, 1 + 0j), (-0.5, -0.5), -1.0, target_area=-1)


def test_config_from_json():
    cfg = config_from_json({"points": [{"re": 0}, {"re": 1, "im": 0}, "inf"], "orders": [-0.5, -0.6, -0.9], "area": 2})
    assert cfg.order_at_infinity == -0.9 and cfg.target_area == 2.0
    cfg = config_from_json({"points": [{"re": 0}, {"re": 1}, {"re": 0, "im": 1}, "inf"], "orders": [-0.5] * 4})
    assert cfg.target_area == 1.0 and len(cfg.finite_points) == 3
    with pytest.raises(DomainError):
        config_from_json({"points": ["inf", "inf"], "orders": [-1, -1]})
    with pytest.raises(DomainError):
        config_from_json({"points": [{"x": 1}], "orders": [-2]})
    with pytest.raises(DomainError):
        config_from_json({"orders": [-2]})


def test_liouville_action_independent_of_area():
    cfg = platonic_configuration("octahedron", target_area=1.0)
    big = FlatConfiguration(cfg.finite_points, cfg.orders, cfg.order_at_infinity, 7.0)
    # the potential shifts by a constant and the orders sum to -2, so the action changes by
    # 2 pi (-2 + 2) times the shift
    assert flat_liouville_action(big) == pytest.approx(flat_liouville_action(cfg), abs=1e-10)
