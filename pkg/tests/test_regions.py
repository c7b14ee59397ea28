import itertools
import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iccr.channel import AntennaConfig, FeedbackMode
from iccr.regions import (
    RationalPolytope2D,
    achievable_region_no_cr_feedback,
    cognitive_ic_bounds,
    from_vertices,
    polytope_contains,
    polytope_equal,
    region_csi,
    region_for_mode,
    region_no,
    region_outer_delayed,
    region_output,
    region_perfect_siso,
    region_shannon,
    sum_dof_comparison,
    sum_dof_regime,
)
from iccr.schemes import build_scheme

GRID = [AntennaConfig(*c) for c in itertools.product(range(1, 7), repeat=3)]
configs = st.builds(AntennaConfig, st.integers(1, 8), st.integers(1, 8), st.integers(1, 8))


def halfspaces(*rows):
    return RationalPolytope2D(tuple(rows)).halfspaces


def test_siso_region():
    r = region_csi(AntennaConfig(1, 1, 1))
    assert set(r.vertices) == {(0, 0), (1, 0), (F(2, 3), F(2, 3)), (0, 1)}
    assert r.irredundant() == halfspaces((1, F(1, 2), 1), (F(1, 2), 1, 1))
    assert r.sum_dof == F(4, 3)


def test_two_one_two_region():
    r = region_csi(AntennaConfig(2, 1, 2))
    assert r.halfspaces == halfspaces((1, 0, 2), (0, 1, 2), (F(1, 2), F(1, 3), 1), (F(1, 3), F(1, 2), 1))
    assert r.sum_dof == F(12, 5)


def test_two_three_two_region():
    r = region_csi(AntennaConfig(2, 3, 2))
    assert r.irredundant() == halfspaces((F(1, 2), F(1, 4), 1), (F(1, 4), F(1, 2), 1))
    assert r.sum_dof == F(8, 3)


@pytest.mark.parametrize("cfg, rows", [
    ((1, 1, 1), [(1, 1, 1)]),
    ((1, 1, 3), [(1, 0, 2), (0, 1, 2), (1, 1, 3)]),
    ((1, 4, 2), [(1, 0, 2), (0, 1, 2), (1, 1, 2)]),
])
def test_no_feedback_region(cfg, rows):
    r = region_no(AntennaConfig(*cfg))
    assert polytope_equal(r, RationalPolytope2D(tuple(rows)))


def test_outer_bound_examples():
    for cfg in ((1, 1, 1), (1, 2, 2)):
        c = AntennaConfig(*cfg)
        assert polytope_equal(region_outer_delayed(c), region_csi(c))
    c = AntennaConfig(3, 1, 8)
    assert polytope_equal(region_outer_delayed(c), region_no(c))
    assert polytope_equal(region_csi(c), region_no(c))


def test_perfect_csi_siso():
    sq = region_perfect_siso()
    assert sq.sum_dof == 2
    assert sq.contains_point((F(2, 3), F(2, 3)))
    assert region_csi(AntennaConfig(1, 1, 1)) < sq


def test_max_weighted():
    r = region_csi(AntennaConfig(1, 1, 1))
    assert r.max_weighted(0, 0) == 0
    assert r.max_weighted(1, 0) == 1
    assert r.max_weighted(2, 1) == 2
    with pytest.raises(ValueError):
        r.max_weighted(-1, 1)


def test_polytope_validation():
    with pytest.raises(ValueError):
        RationalPolytope2D(((1, 0, 1),))
    with pytest.raises(ValueError):
        RationalPolytope2D(((1, 1, -1),))


def test_hull_construction():
    p = from_vertices([(0, 0), (2, 0), (0, 2), (F(3, 2), F(3, 2))])
    assert set(p.vertices) == {(0, 0), (2, 0), (0, 2), (F(3, 2), F(3, 2))}
    assert p.sum_dof == 3


@pytest.mark.parametrize("cfg", [(2, 1, 2), (1, 1, 1), (2, 3, 1), (1, 1, 3)])
def test_no_cr_feedback_matches_full_region_outside_middle_band(cfg):
    c = AntennaConfig(*cfg)
    assert polytope_equal(achievable_region_no_cr_feedback(c), region_csi(c))


def test_no_cr_feedback_condition_two_and_four():
    c = AntennaConfig(1, 2, 2)
    r = achievable_region_no_cr_feedback(c)
    assert r.symmetric_point() == (1, 1)
    assert r.sum_dof == 2
    assert region_outer_delayed(c).sum_dof == F(12, 5)
    assert r < region_outer_delayed(c)
    c = AntennaConfig(1, 4, 2)
    r = achievable_region_no_cr_feedback(c)
    assert r.symmetric_point() == (1, 1)
    assert r.sum_dof == 2 < region_outer_delayed(c).sum_dof == F(8, 3)


def test_no_cr_feedback_tdm_fallback():
    c = AntennaConfig(1, 3, 3)  # 2*m_t < m_r
    r = achievable_region_no_cr_feedback(c)
    assert polytope_equal(r, RationalPolytope2D(((1, 0, 3), (0, 1, 3), (1, 1, 3))))


@pytest.mark.parametrize("cfg, row", [
    ((1, 4, 2), (F(8, 3), F(8, 3), F(8, 3))),
    ((1, 2, 4), (4, 4, 4)),
    ((1, 4, 3), (4, F(15, 4), 3)),
])
def test_sum_dof_comparison_examples(cfg, row):
    r = sum_dof_comparison(AntennaConfig(*cfg))
    assert (r.bc, r.iccr, r.ic) == row


def test_sum_dof_regime_boundaries_are_left_closed():
    assert sum_dof_regime(AntennaConfig(1, 2, 4)) == 0  # 2mt+mc == mr
    assert sum_dof_regime(AntennaConfig(1, 2, 3)) == 1  # mt+mc == mr
    assert sum_dof_regime(AntennaConfig(1, 2, 2)) == 2  # mt+mc/2 == mr
    assert sum_dof_regime(AntennaConfig(2, 2, 2)) == 3  # (mt+mc)/2 == mr
    assert sum_dof_regime(AntennaConfig(1, 4, 2)) == 4


def test_interference_column_absent_for_odd_relay():
    assert sum_dof_comparison(AntennaConfig(1, 3, 2)).ic is None


def test_cognitive_bounds():
    lo, hi = cognitive_ic_bounds(2, 3, 2)
    assert (lo.sum_dof, hi.sum_dof) == (F(12, 5), F(8, 3))
    lo, _ = cognitive_ic_bounds(1, 2, 1)
    assert polytope_equal(lo, region_csi(AntennaConfig(1, 1, 1)))
    assert lo.sum_dof == F(4, 3)
    with pytest.raises(ValueError):
        cognitive_ic_bounds(2, 2, 1)


def test_region_json():
    doc = json.loads(region_csi(AntennaConfig(1, 1, 1)).to_json())
    assert ["2/3", "2/3"] in doc["vertices"]
    assert doc["sum_dof"] == "4/3"


# properties over the grid


def test_feedback_flavours_share_one_region():
    for c in GRID:
        assert polytope_equal(region_csi(c), region_output(c))
        assert polytope_equal(region_csi(c), region_shannon(c))


def test_outer_bound_is_achieved():
    for c in GRID:
        assert polytope_equal(region_csi(c), region_outer_delayed(c))


def test_feedback_helps_exactly_when_relay_and_tx_exceed_receive():
    for c in GRID:
        assert polytope_contains(region_csi(c), region_no(c))
        assert polytope_equal(region_no(c), region_csi(c)) == (c.m_t + c.m_c <= c.m_r)


def test_no_cr_feedback_strict_exactly_in_middle_band():
    for c in GRID:
        inner = achievable_region_no_cr_feedback(c)
        assert polytope_contains(region_outer_delayed(c), inner)
        assert (inner < region_outer_delayed(c)) == (c.m_t < c.m_r < c.m_t + c.m_c)


def test_cooperation_ordering():
    for c in GRID:
        r = sum_dof_comparison(c)
        assert r.bc >= r.iccr
        if c.m_c % 2 == 0:
            assert r.iccr >= r.ic


def test_cognitive_lower_inside_upper():
    for mt, mcog, mr in itertools.product(range(1, 6), range(2, 8), range(1, 6)):
        if mcog > mt:
            lo, hi = cognitive_ic_bounds(mt, mcog, mr)
            assert polytope_contains(hi, lo)


@given(configs)
def test_schemes_land_on_the_symmetric_vertex(cfg):
    for mode in ("csit", "output", "shannon", "none"):
        for rf in (True, False):
            m = FeedbackMode.parse(mode, rf)
            plan = build_scheme(cfg, m)
            assert plan.per_user_dof == region_for_mode(cfg, m).symmetric_point()[0]


@given(configs)
def test_vertices_are_feasible_and_ordered(cfg):
    r = region_csi(cfg)
    vs = r.vertices
    assert vs[0] == (0, 0)
    assert all(r.contains_point(v) for v in vs)
    n = len(vs)
    for i in range(n):
        (x0, y0), (x1, y1), (x2, y2) = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
        assert (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0) > 0


@given(configs)
def test_symmetric_point_is_on_boundary(cfg):
    r = region_csi(cfg)
    d, _ = r.symmetric_point()
    assert r.contains_point((d, d))
    assert not r.contains_point((d + F(1, 1000), d + F(1, 1000)))
    assert 2 * d == r.sum_dof
