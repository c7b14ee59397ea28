"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with the measured values.
"""

import itertools
import time
from fractions import Fraction as F

import pytest

from iccr.channel import AntennaConfig, FeedbackMode
from iccr.cli import TABLE2_GRID
from iccr.decoder import decode_frame, streams_per_frame
from iccr.montecarlo import TrialBatchSpec, estimate_dof_sweep, run_batch, run_trial
from iccr.regions import (
    achievable_region_no_cr_feedback,
    cognitive_ic_bounds,
    polytope_contains,
    polytope_equal,
    region_csi,
    region_for_mode,
    region_no,
    region_outer_delayed,
    region_output,
    region_shannon,
    sum_dof_comparison,
)
from iccr.schemes import build_scheme

GRID = [AntennaConfig(*c) for c in itertools.product(range(1, 7), repeat=3)]

DECODE_CASES = [
    ((1, 1, 1), "csit", True),
    ((1, 1, 1), "output", True),
    ((1, 1, 1), "shannon", True),
    ((1, 2, 2), "csit", True),
    ((2, 1, 2), "csit", True),
    ((1, 4, 2), "csit", True),
    ((2, 3, 1), "csit", True),
    ((1, 2, 2), "csit", False),
    ((1, 4, 2), "csit", False),
]


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return emit


def test_ac01_region_exactness(report):
    t0 = time.perf_counter()
    siso = region_csi(AntennaConfig(1, 1, 1))
    verts = set(siso.vertices)
    sums = (siso.sum_dof, region_csi(AntennaConfig(2, 1, 2)).sum_dof,
            region_csi(AntennaConfig(2, 3, 2)).sum_dof)
    dt = time.perf_counter() - t0
    ok = (verts == {(0, 0), (1, 0), (F(2, 3), F(2, 3)), (0, 1)}
          and sums == (F(4, 3), F(12, 5), F(8, 3)) and dt < 1.0)
    assert report("AC1 region exactness", ok, f"sums {[str(s) for s in sums]}, {dt:.3f}s")


def test_ac02_feedback_equivalence(report):
    t0 = time.perf_counter()
    bad = [c for c in GRID
           if not (polytope_equal(region_csi(c), region_output(c))
                   and polytope_equal(region_csi(c), region_shannon(c)))]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10.0
    assert report("AC2 feedback equivalence", ok, f"{len(GRID)} configs, {len(bad)} mismatches, {dt:.2f}s")


def test_ac03_achievability_meets_outer_bound(report):
    bad = [c for c in GRID if not polytope_equal(region_csi(c), region_outer_delayed(c))]
    assert report("AC3 achievability meets outer bound", not bad,
                  f"{len(GRID)} configs, {len(bad)} mismatches")


def test_ac04_no_feedback_collapse(report):
    bad = []
    for c in GRID:
        no, csi = region_no(c), region_csi(c)
        equal = polytope_equal(no, csi)
        if not polytope_contains(csi, no) or equal != (c.m_t + c.m_c <= c.m_r):
            bad.append(c)
    assert report("AC4 no-feedback collapse", not bad, f"{len(GRID)} configs, {len(bad)} violations")


def test_ac05_scheme_decodability(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for cfg, mode, rf in DECODE_CASES:
        s = run_batch(TrialBatchSpec(AntennaConfig(*cfg), FeedbackMode.parse(mode, rf), 10_000, 20_000))
        good = (s.decodable_fraction == 1.0 and s.filtered_fraction < 0.005
                and s.max_symbol_error_p99 < 1e-6
                and s.decodable_count + s.filtered_count + s.degenerate_count == s.trials)
        ok &= good
        lines.append(f"{s.config} {s.mode}: dec {s.decodable_fraction:.4f} "
                     f"filt {s.filtered_fraction:.4f} p99 {s.max_symbol_error_p99:.1e}")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    assert report("AC5 scheme decodability", ok, f"{dt:.0f}s; " + "; ".join(lines))


def test_ac06_corner_point_consistency(report):
    lines, ok = [], True
    for cfg, mode, rf in DECODE_CASES:
        c, m = AntennaConfig(*cfg), FeedbackMode.parse(mode, rf)
        plan = build_scheme(c, m)
        d = streams_per_frame(decode_frame(run_trial(plan, 1)), plan)
        target = region_for_mode(c, m).symmetric_point()
        ok &= d == target
        lines.append(f"{c} {m}: {plan.symbols_per_user}/{plan.frame_length} = {d[0] if d else None}")
    expected = {((1, 2, 2), True): F(6, 5), ((1, 4, 2), True): F(4, 3), ((1, 2, 2), False): F(1)}
    for (cfg, rf), v in expected.items():
        ok &= build_scheme(AntennaConfig(*cfg), FeedbackMode.parse("csit", rf)).per_user_dof == v
    assert report("AC6 corner-point consistency", ok, "; ".join(lines))


def test_ac07_no_relay_feedback_strictness(report):
    bad = []
    for c in GRID:
        strict = achievable_region_no_cr_feedback(c) < region_outer_delayed(c)
        if strict != (c.m_t < c.m_r < c.m_t + c.m_c):
            bad.append(c)
    c = AntennaConfig(1, 2, 2)
    sums = (achievable_region_no_cr_feedback(c).sum_dof, region_outer_delayed(c).sum_dof)
    ok = not bad and sums == (2, F(12, 5))
    assert report("AC7 no-relay-feedback strictness", ok,
                  f"{len(bad)} violations; (1,2,2) sums {sums[0]} vs {sums[1]}")


def test_ac08_table2(report):
    ok = len(TABLE2_GRID) == 20 and all(c.m_c % 2 == 0 for c in TABLE2_GRID)
    rows = [sum_dof_comparison(c) for c in TABLE2_GRID]
    for r in rows:
        ok &= r.iccr == region_csi(r.config).max_weighted(1, 1)
        ok &= r.bc >= r.iccr >= r.ic
    regimes = {r.regime for r in rows}
    ok &= len(regimes) == 5
    assert report("AC8 sum-DoF comparison table", ok, f"{len(rows)} rows across {len(regimes)} regimes")


def test_ac09_cognitive_ic(report):
    lo, hi = cognitive_ic_bounds(2, 3, 2)
    ok = (lo.sum_dof, hi.sum_dof) == (F(12, 5), F(8, 3))
    assert report("AC9 cognitive IC bounds", ok, f"lower {lo.sum_dof}, upper {hi.sum_dof}")


def test_ac10_rate_slope(report):
    t0 = time.perf_counter()
    ok, lines = True, []
    for cfg, exact in (((1, 1, 1), F(4, 3)), ((1, 2, 2), F(12, 5))):
        res = estimate_dof_sweep(TrialBatchSpec(AntennaConfig(*cfg), FeedbackMode.parse("csit"),
                                                500, 0, (50.0, 60.0)))
        err = abs(res.sum_dof_estimate - float(exact)) / float(exact)
        ok &= err < 0.10
        lines.append(f"{cfg} slope {res.sum_dof_estimate:.3f} vs {exact} ({err:.1%})")
    dt = time.perf_counter() - t0
    ok &= dt < 180
    assert report("AC10 rate slope", ok, f"{dt:.0f}s; " + "; ".join(lines))
