import math

import pytest
from hypothesis import given, strategies as st

import oracles
from belyidet.basedet import CurvedBaseUnavailable, default_provider, load_base_table, make_external, make_flat3, make_spindle
from belyidet.belyi import analyze, catalog
from belyidet.errors import DomainError, RouteDisagreement
from belyidet.flatdet import FlatConfiguration, flat_liouville_action, flat_log_det, rescale_log_det
from belyidet.maindet import (
    catalog_ramification,
    family_log_det,
    flat_pullback_log_det,
    liouville_action,
    platonic_log_det,
    pullback_potential_coeffs,
    theorem_main,
)
from belyidet.specfun import TriangleDivisor
from belyidet.stationarity import platonic_configuration

FOUR_PI = 4 * math.pi
CATALOG = ["cyclic(2)", "cyclic(3)", "dihedral(2)", "dihedral(4)", "tetrahedral", "octahedral", "icosahedral"]
FLAT_TRIANGLES = [TriangleDivisor(-0.5, -2 / 3, -5 / 6), TriangleDivisor(-0.6, -0.7, -0.7), TriangleDivisor(-0.25, -0.9, -0.85)]


@pytest.mark.parametrize("name", CATALOG)
@pytest.mark.parametrize("t", FLAT_TRIANGLES, ids=["a", "b", "c"])
def test_theorem_main_vs_flat_pullback(name, t):
    ram = catalog_ramification(name)
    base = make_flat3(t)
    rep = theorem_main(ram, base)
    assert rep.log_det == pytest.approx(flat_pullback_log_det(ram, base, "period").log_det, abs=1e-9)
    assert rep.log_det == pytest.approx(flat_pullback_log_det(ram, base, "coeff").log_det, abs=1e-9)
    assert abs(rep.meta["gauss_bonnet_gap"]) < 1e-12
    assert math.fsum(rep.terms.values()) + math.log(ram.degree) == pytest.approx(rep.log_det, abs=1e-13)


def test_degree_one_returns_base():
    base = make_external(TriangleDivisor(-0.3, -0.2, -0.1), [0.4, -0.3, 1.1], 0.77)
    rep = theorem_main(catalog_ramification("cyclic(1)"), base)
    assert rep.log_det == pytest.approx(0.77, abs=1e-14)


phi = st.floats(-3, 3)


@given(
    st.floats(-0.6, 0.8), st.floats(-0.6, 0.8), st.floats(-0.6, 0.8),
    phi, phi, phi, st.floats(-5, 5),
    st.sampled_from([("cyclic", 2), ("cyclic", 5), ("dihedral", 2), ("dihedral", 3), ("tetrahedral", None), ("octahedral", None), ("icosahedral", None)]),
)
def test_family_closed_forms_match_theorem_main(b0, b1, bi, p0, p1, pi_, L, fam):
    """Both sides are affine in the base data, so arbitrary numbers make a
    stringent check of the transcriptions, curved bases included."""
    family, ell = fam
    t = TriangleDivisor(b0, b1, bi)
    base = make_external(t, [p0, p1, pi_], L)
    name = f"{family}({ell})" if ell else family
    fam_val = family_log_det(family, t, base, ell).log_det
    main = theorem_main(catalog_ramification(name), base).log_det
    assert fam_val == pytest.approx(main, abs=1e-8 * (1 + abs(main)))


@pytest.mark.parametrize("ell", [2, 3, 4])
@pytest.mark.parametrize("beta", [-0.7, -0.4, -0.1])
def test_spindle_pullback_is_spindle(ell, beta):
    ram = catalog_ramification(f"cyclic({ell})")
    rep = theorem_main(ram, make_spindle(beta))
    gamma = ell * (beta + 1) - 1
    assert rep.log_det == pytest.approx(oracles.spindle_log_det(gamma, float(ell)), abs=1e-9)


@pytest.mark.parametrize("ell", [2, 3, 4, 5, 6])
def test_round_sphere_from_spindle(ell):
    ram = catalog_ramification(f"cyclic({ell})")
    rep = theorem_main(ram, make_spindle(1 / ell - 1))
    assert rescale_log_det(rep.as_result(), FOUR_PI).log_det == pytest.approx(oracles.round_sphere(), abs=1e-9)


@pytest.mark.parametrize("solid", ["tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron"])
def test_platonic_flat_all_routes(solid):
    beta = {"tetrahedron": -0.5, "octahedron": -1 / 3, "cube": -0.25, "icosahedron": -1 / 6, "dodecahedron": -0.1}[solid]
    res = platonic_log_det(solid, beta)
    assert res.log_det == pytest.approx(oracles.FLAT_SOLIDS[solid](), abs=1e-7)
    assert res.extras["max_deviation"] <= 1e-7
    assert "flat/cones" in res.extras["routes"]
    direct = flat_log_det(platonic_configuration(solid)).log_det
    assert direct == pytest.approx(res.log_det, abs=1e-7)


def test_octahedron_three_families():
    res = platonic_log_det("octahedron", -1 / 3)
    routes = res.extras["routes"]
    fams = [routes[f"theorem-main/{t}"] for t in ("cyclic(4)", "dihedral(2)", "octahedral")]
    for a in fams:
        for b in fams:
            assert abs(a - b) <= 1e-7
    assert fams[0] == pytest.approx(oracles.flat_octahedron(), abs=1e-7)


@pytest.mark.parametrize("ell", [3, 4, 6])
def test_flat_dihedron(ell):
    res = platonic_log_det("dihedron", -2 / ell, ell=ell)
    direct = flat_log_det(platonic_configuration("dihedron", ell)).log_det
    assert res.log_det == pytest.approx(direct, abs=1e-9)


def test_octahedron_smooth_is_round_sphere():
    res = platonic_log_det("octahedron", 0.0)
    assert res.log_det == pytest.approx(oracles.round_sphere(), abs=1e-9)
    assert res.extras["unavailable"]  # dihedral and octahedral need curved bases


def test_curved_solid_needs_table():
    with pytest.raises(CurvedBaseUnavailable):
        platonic_log_det("cube", -0.4)


@pytest.mark.parametrize(
    "solid,t",
    [("cube", TriangleDivisor(-0.75, -0.5, (-0.4 - 2) / 3)),
     ("icosahedron", TriangleDivisor((-0.4 - 4) / 5, -0.5, -2 / 3)),
     ("dodecahedron", TriangleDivisor(-0.8, -0.5, (-0.4 - 2) / 3)),
     ("tetrahedron", TriangleDivisor(-2 / 3, -0.5, (-0.4 - 2) / 3))],
)
def test_printed_forms_with_external_base(solid, t):
    """Made-up base data through the table: the printed specialization, the
    family theorem and theorem_main must still agree."""
    line = ",".join(str(v) for v in (*t.orders, 0.3, -0.2, 0.5, 1.7))
    table = load_base_table(["beta0,beta1,betainf,phi0,phi1,phiinf,logdet_unit", line])
    res = platonic_log_det(solid, -0.4, default_provider(table))
    assert res.extras["max_deviation"] < 1e-9
    assert len(res.extras["routes"]) == 3


def test_route_disagreement_detected():
    # two families produce the tetrahedron; inconsistent made-up bases must be caught
    rows = ["beta0,beta1,betainf,phi0,phi1,phiinf,logdet_unit"]
    rows.append(",".join(str(v) for v in ((-0.4 - 2) / 3, -0.4, -2 / 3, 0.1, 0.1, 0.1, 0.0)))
    rows.append(",".join(str(v) for v in (-2 / 3, -0.5, (-0.4 - 2) / 3, 0.1, 0.1, 0.1, 0.0)))
    with pytest.raises(RouteDisagreement):
        platonic_log_det("tetrahedron", -0.4, default_provider(load_base_table(rows)))


def test_cusp_rejected():
    with pytest.raises(DomainError):
        platonic_log_det("tetrahedron", -1.0)
    with pytest.raises(DomainError):
        platonic_log_det("heptahedron", -0.5)


@pytest.mark.parametrize("name", ["cyclic(3)", "dihedral(3)", "tetrahedral", "octahedral"])
def test_liouville_action_matches_flat_potential(name):
    ram = catalog_ramification(name)
    base = make_flat3(TriangleDivisor(-0.5, -2 / 3, -5 / 6))
    rep = theorem_main(ram, base)
    S = liouville_action(ram, base, rep.log_det)
    div = rep.pullback
    cfg = FlatConfiguration(div.points, div.orders, div.inf_order, float(ram.degree))
    assert S == pytest.approx(flat_liouville_action(cfg), abs=1e-8 * (1 + abs(S)))


def test_pullback_coefficients_match_flat_potential():
    from belyidet.flatdet import flat_potential_coeffs

    ram = catalog_ramification("tetrahedral")
    base = make_flat3(TriangleDivisor(-0.5, -2 / 3, -5 / 6))
    coeffs = pullback_potential_coeffs(ram, base)
    div = theorem_main(ram, base).pullback
    cfg = FlatConfiguration(div.points, div.orders, div.inf_order, float(ram.degree))
    fin, inf = flat_potential_coeffs(cfg)
    k_inf = ram.index_of_infinity()
    assert coeffs[k_inf] == pytest.approx(inf, abs=1e-10)
    finite = [c for k, c in enumerate(coeffs) if k != k_inf]
    assert finite == pytest.approx(fin, abs=1e-10)


def test_family_requires_matching_base():
    base = make_flat3(TriangleDivisor(-0.5, -0.75, -0.75))
    with pytest.raises(DomainError):
        family_log_det("tetrahedral", TriangleDivisor(-0.6, -0.7, -0.7), base)
    with pytest.raises(DomainError):
        family_log_det("cyclic", base.triangle, base)
