"""Exact DoF regions as 2-D rational polytopes over ``(d_a, d_b)``.

All arithmetic uses :class:`fractions.Fraction`; no floating point enters
region construction or comparison.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .channel import AntennaConfig, Condition, FeedbackKind, classify_condition

Point = tuple  # (Fraction, Fraction)


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _normalize(alpha, beta, gamma) -> tuple:
    """Clear denominators and divide by the gcd so equal constraints compare equal."""
    a, b, g = _frac(alpha), _frac(beta), _frac(gamma)
    den = math.lcm(a.denominator, b.denominator, g.denominator)
    ia, ib, ig = int(a * den), int(b * den), int(g * den)
    d = math.gcd(ia, ib, ig) or 1
    return (Fraction(ia // d), Fraction(ib // d), Fraction(ig // d))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RationalPolytope2D:
    """``{d : alpha*d_a + beta*d_b <= gamma for each halfspace, d >= 0}``.

    Halfspaces are stored with integer coefficients reduced by their gcd.
    Construction checks that the set is bounded and contains the origin.
    """

    halfspaces: tuple

    def __post_init__(self):
        hs = tuple(sorted(set(_normalize(*h) for h in self.halfspaces)))
        for a, b, g in hs:
            if g < 0:
                raise ValueError("polytope must contain the origin")
        object.__setattr__(self, "halfspaces", hs)
        if not any(a > 0 for a, _, _ in hs) or not any(b > 0 for _, b, _ in hs):
            raise ValueError("polytope is unbounded")

    def _all_constraints(self):
        return self.halfspaces + ((Fraction(-1), Fraction(0), Fraction(0)),
                                  (Fraction(0), Fraction(-1), Fraction(0)))

    def contains_point(self, p: Point) -> bool:
        return all(a * p[0] + b * p[1] <= g for a, b, g in self._all_constraints())

    @property
    def vertices(self) -> tuple:
        """Vertices in counter-clockwise order starting from the origin."""
        pts = set()
        for (a1, b1, g1), (a2, b2, g2) in combinations(self._all_constraints(), 2):
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            p = ((g1 * b2 - g2 * b1) / det, (a1 * g2 - a2 * g1) / det)
            if self.contains_point(p):
                pts.add(p)
        return _ccw_order(pts)

    def irredundant(self) -> tuple:
        """Halfspaces that touch the polytope along an edge."""
        verts = self.vertices
        keep = []
        for a, b, g in self.halfspaces:
            on = [v for v in verts if a * v[0] + b * v[1] == g]
            if len(on) >= 2:
                keep.append((a, b, g))
        return tuple(keep)

    def max_weighted(self, w_a, w_b) -> Fraction:
        """Exact maximum of ``w_a*d_a + w_b*d_b``."""
        w_a, w_b = _frac(w_a), _frac(w_b)
        if w_a < 0 or w_b < 0:
            raise ValueError("weights must be nonnegative")
        return max(w_a * x + w_b * y for x, y in self.vertices)

    @property
    def sum_dof(self) -> Fraction:
        return self.max_weighted(1, 1)

    def symmetric_point(self) -> Point:
        """Largest ``(d, d)`` in the polytope."""
        d = min(g / (a + b) for a, b, g in self.halfspaces if a + b > 0)
        return (d, d)

    def __le__(self, other: "RationalPolytope2D") -> bool:
        return polytope_contains(other, self)

    def __lt__(self, other: "RationalPolytope2D") -> bool:
        return self <= other and not polytope_equal(self, other)

    def to_dict(self) -> dict:
        return {
            "halfspaces": [[_fmt(a), _fmt(b), _fmt(g)] for a, b, g in self.irredundant()],
            "vertices": [[_fmt(x), _fmt(y)] for x, y in self.vertices],
            "vertices_float": [[float(x), float(y)] for x, y in self.vertices],
            "sum_dof": _fmt(self.sum_dof),
            "sum_dof_float": float(self.sum_dof),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _ccw_order(pts) -> tuple:
    pts = list(pts)
    if len(pts) <= 2:
        return tuple(sorted(pts))
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)

    def upper_half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return dy > 0 or (dy == 0 and dx > 0)

    def cmp(p, q):
        hp, hq = upper_half(p), upper_half(q)
        if hp != hq:
            return -1 if hp else 1
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    ordered = sorted(pts, key=functools.cmp_to_key(cmp))
    i = ordered.index(min(ordered))
    return tuple(ordered[i:] + ordered[:i])


def polytope_contains(outer: RationalPolytope2D, inner: RationalPolytope2D) -> bool:
    """True when ``inner`` lies inside ``outer`` (checked on inner's vertices)."""
    return all(outer.contains_point(v) for v in inner.vertices)


def polytope_equal(p: RationalPolytope2D, q: RationalPolytope2D) -> bool:
    return polytope_contains(p, q) and polytope_contains(q, p)


def from_vertices(points) -> RationalPolytope2D:
    """Convex hull of points in the nonnegative quadrant that include the origin."""
    pts = {(_frac(x), _frac(y)) for x, y in points}
    hull = _ccw_order(_hull(pts))
    hs = []
    n = len(hull)
    for i in range(n):
        (x1, y1), (x2, y2) = hull[i], hull[(i + 1) % n]
        # outward normal of a ccw edge is (dy, -dx)
        a, b = y2 - y1, -(x2 - x1)
        if a <= 0 and b <= 0:
            continue  # an edge on an axis, already implied by d >= 0
        if a < 0 or b < 0:
            raise ValueError("hull is not closed under decreasing either coordinate")
        hs.append((a, b, a * x1 + b * y1))
    return RationalPolytope2D(tuple(hs))


def _hull(pts) -> list:
    # Andrew's monotone chain on exact rationals
    pts = sorted(pts)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _csi_constants(config: AntennaConfig):
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    return min(mr, mt + mc), min(2 * mr, mt + mc), min(mr, 2 * mt + mc)


def region_csi(config: AntennaConfig) -> RationalPolytope2D:
    """Region under delayed channel-state feedback."""
    c1, c2, c3 = _csi_constants(config)
    one = Fraction(1)
    return RationalPolytope2D((
        (one, 0, c1),
        (0, one, c1),
        (Fraction(1, c1), Fraction(1, c2), Fraction(c3, c1)),
        (Fraction(1, c2), Fraction(1, c1), Fraction(c3, c1)),
    ))


def region_output(config: AntennaConfig) -> RationalPolytope2D:
    """Region under delayed output feedback (same polytope as channel-state feedback)."""
    return region_csi(config)


def region_shannon(config: AntennaConfig) -> RationalPolytope2D:
    """Region under combined channel-state and output feedback."""
    return region_csi(config)


def region_outer_delayed(config: AntennaConfig) -> RationalPolytope2D:
    """Converse bound for any delayed feedback, written out independently of :func:`region_csi`."""
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    single = min(mr, mt + mc)
    pair = min(2 * mr, mt + mc)
    total = min(mr, 2 * mt + mc)
    # d_a/single + d_b/pair <= total/single, scaled by single*pair
    return RationalPolytope2D((
        (1, 0, single),
        (0, 1, single),
        (pair, single, total * pair),
        (single, pair, total * pair),
    ))


def region_no(config: AntennaConfig) -> RationalPolytope2D:
    """Region without any feedback."""
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    single = min(mt + mc, mr)
    return RationalPolytope2D((
        (1, 0, single),
        (0, 1, single),
        (1, 1, min(2 * mt + mc, mr)),
    ))


def region_perfect_siso() -> RationalPolytope2D:
    """Single-antenna region with instantaneous channel knowledge: the unit square."""
    return RationalPolytope2D(((1, 0, 1), (0, 1, 1)))


def _tdm_triangle(config: AntennaConfig) -> RationalPolytope2D:
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    single = min(mr, mt + mc)
    return RationalPolytope2D(((1, 0, single), (0, 1, single), (1, 1, mr)))


def no_cr_feedback_symmetric_point(config: AntennaConfig) -> Optional[Fraction]:
    """Per-user DoF of the symmetric scheme when the relay gets no feedback, or None if TDM is used."""
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    cond = classify_condition(config)
    if cond not in (Condition.II, Condition.IV) or 2 * mt < mr:
        return None
    if cond is Condition.II:
        return Fraction((mt + mc) * mt, 3 * mt + mc - mr)
    return Fraction(mt + mr, 3)


def achievable_region_no_cr_feedback(config: AntennaConfig) -> RationalPolytope2D:
    """Achievable region when the relay receives no feedback."""
    cond = classify_condition(config)
    if cond in (Condition.I, Condition.III, Condition.V):
        return region_csi(config)
    d = no_cr_feedback_symmetric_point(config)
    if d is None:
        return _tdm_triangle(config)
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    a = Fraction(min(mr, mt + mc))
    return from_vertices([(0, 0), (a, 0), (0, a), (d, d)])


def cognitive_ic_bounds(m_t: int, m_cog: int, m_r: int) -> tuple:
    """Lower and upper DoF regions for a cognitive interference channel.

    The primary transmitter has ``m_t`` antennas and the cognitive one
    ``m_cog > m_t``. The lower bound is the relay channel with ``m_cog - m_t``
    relay antennas, the upper bound the one with ``m_cog``.
    """
    if m_cog <= m_t:
        raise ValueError(f"cognitive transmitter needs more than {m_t} antennas, got {m_cog}")
    lower = region_csi(AntennaConfig(m_t, m_cog - m_t, m_r))
    upper = region_csi(AntennaConfig(m_t, m_cog, m_r))
    return lower, upper


REGIMES = (
    "2mt+mc<=mr",
    "mt+mc<=mr<2mt+mc",
    "mt+mc/2<=mr<mt+mc",
    "(mt+mc)/2<=mr<mt+mc/2",
    "mr<(mt+mc)/2",
)


@dataclass(frozen=True)
class SumDofRow:
    config: AntennaConfig
    regime: str
    bc: Fraction
    iccr: Fraction
    ic: Optional[Fraction]

    def to_dict(self) -> dict:
        out = {"m_t": self.config.m_t, "m_c": self.config.m_c, "m_r": self.config.m_r,
               "regime": self.regime}
        for k in ("bc", "iccr", "ic"):
            v = getattr(self, k)
            out[k] = None if v is None else _fmt(v)
            out[k + "_float"] = None if v is None else float(v)
        return out


def sum_dof_regime(config: AntennaConfig) -> int:
    """Row index (0..4) of the sum-DoF comparison table, boundaries left-closed."""
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    r = Fraction(mr)
    if 2 * mt + mc <= r:
        return 0
    if mt + mc <= r:
        return 1
    if mt + Fraction(mc, 2) <= r:
        return 2
    if Fraction(mt + mc, 2) <= r:
        return 3
    return 4


def sum_dof_comparison(config: AntennaConfig) -> SumDofRow:
    """Sum DoF of the broadcast channel, the relay channel and the plain interference channel.

    The broadcast channel pools all ``2*m_t + m_c`` transmit antennas. The
    interference channel column splits the relay's antennas evenly, so it is
    left as None when ``m_c`` is odd. The relay column is checked against the
    region's weighted maximum.
    """
    mt, mc, mr = config.m_t, config.m_c, config.m_r
    row = sum_dof_regime(config)
    n = 2 * mt + mc
    m_ic = mt + Fraction(mc, 2)  # transmit antennas per user once the relay is split

    def paired(m):
        return Fraction(2 * m * mr) / (m + mr)

    top, low = Fraction(n), Fraction(4 * mr, 3)
    bc = [top, paired(n), paired(n), low, low][row]
    iccr = [top, Fraction(mr), paired(mt + mc), paired(mt + mc), low][row]
    ic = [top, Fraction(mr), Fraction(mr), paired(m_ic), low][row]
    if mc % 2:
        ic = None
    check = region_csi(config).sum_dof
    if check != iccr:
        raise ArithmeticError(f"closed form {iccr} disagrees with region maximum {check} for {config}")
    return SumDofRow(config, REGIMES[row], bc, iccr, ic)



def region_for_mode(config: AntennaConfig, mode) -> RationalPolytope2D:
    """The region a scheme run under ``mode`` is meant to reach."""
    if mode.kind is FeedbackKind.NO_FEEDBACK:
        return region_no(config)
    if not mode.relay_has_feedback:
        return achievable_region_no_cr_feedback(config)
    return region_csi(config)
