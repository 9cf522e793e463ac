"""The immersed addition graph: chart maps F1/F2, the six charts E1..E6, and the tubular model.

A chart point is (a, b, c) in C^3; the fiber value of its image is abc.  F1
parametrizes addition measured from sigma_1, F2 from sigma_2:

    F1(a, b, c) = (conj a, -bc,  conj b, -ac,  e^{-S1-iS2} conj(a) conj(b), -e^{S1-iS2} c)
    F2(a, b, c) = (-conj(b c), a,  -conj(a c), b,  -conj c, ab)

with S evaluated at abc.  Each chart composes one of them with a choice of
slot chart (D^0 or U) per factor, and its domain is the pullback of those
slot conditions together with |abc| < epsilon.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .core import InvariantPolynomial, ModelParams, PointC2, partials
from .errors import (
    DivisionAtSingularBranch,
    NotInOverlap,
    NotOnGraph,
    OutsideChartDomain,
    UndefinedAtDoublePoint,
    ZeroThirdCoordinate,
)
from .group import add
from .neighborhood import (
    CanonicalPoint,
    Direction,
    coord_distance,
    deck,
    in_d0,
    in_u,
    normalize,
    quotient_distance,
)

Coords = tuple[complex, complex, complex]

GRAPH_TOL = 1e-9


class GraphMap(Enum):
    F1 = "F1"
    F2 = "F2"


class SlotChart(Enum):
    D0 = "D0"
    U = "U"


class ChartRecipe(NamedTuple):
    graph_map: GraphMap
    slots: tuple[SlotChart, SlotChart, SlotChart]


class ChartId(Enum):
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    E5 = "E5"
    E6 = "E6"

    @property
    def recipe(self) -> ChartRecipe:
        return RECIPES[self]


_D, _U = SlotChart.D0, SlotChart.U
RECIPES = {
    ChartId.E1: ChartRecipe(GraphMap.F1, (_D, _D, _D)),
    ChartId.E2: ChartRecipe(GraphMap.F2, (_D, _D, _D)),
    ChartId.E3: ChartRecipe(GraphMap.F1, (_U, _U, _U)),
    ChartId.E4: ChartRecipe(GraphMap.F1, (_D, _U, _D)),
    ChartId.E5: ChartRecipe(GraphMap.F1, (_U, _D, _D)),
    ChartId.E6: ChartRecipe(GraphMap.F2, (_D, _D, _U)),
}


@dataclass(frozen=True)
class GraphPoint:
    x: CanonicalPoint
    y: CanonicalPoint
    z: CanonicalPoint

    @property
    def is_closure_point(self) -> bool:
        """True over (s, s), where z ranges over the whole singular fiber."""
        return self.x.is_singular_point and self.y.is_singular_point


def graph_map(which: GraphMap, coords: Coords, S: InvariantPolynomial) -> tuple[complex, ...]:
    a, b, c = (complex(v) for v in coords)
    if which is GraphMap.F2:
        return (
            -(b * c).conjugate(), a,
            -(a * c).conjugate(), b,
            -c.conjugate(), a * b,
        )
    s1, s2 = partials(S, a * b * c)
    return (
        a.conjugate(), -b * c,
        b.conjugate(), -a * c,
        cmath.exp(complex(-s1, -s2)) * (a * b).conjugate(), -cmath.exp(complex(s1, -s2)) * c,
    )


def graph_map_real(which: GraphMap, x: np.ndarray, S: InvariantPolynomial) -> np.ndarray:
    """graph_map on R^6 -> R^12, real coordinates (p1, p2, q1, q2) per slot."""
    coords = (complex(x[0], x[1]), complex(x[2], x[3]), complex(x[4], x[5]))
    out = graph_map(which, coords, S)
    return np.array([v for z in out for v in (z.real, z.imag)])


def coords_to_real(coords: Coords) -> np.ndarray:
    return np.array([v for z in coords for v in (complex(z).real, complex(z).imag)])


def _slots(values: tuple[complex, ...]) -> tuple[PointC2, PointC2, PointC2]:
    return tuple(PointC2(values[2 * k], values[2 * k + 1]) for k in range(3))


def _in_slot(pt: PointC2, kind: SlotChart, params: ModelParams, margin: float) -> bool:
    return in_d0(pt, params, margin) if kind is SlotChart.D0 else in_u(pt, params, margin)


def chart_contains(chart: ChartId, coords: Coords, params: ModelParams, margin: float = 0.0) -> bool:
    """Pullback domain: every slot in its designated chart and |abc| < epsilon."""
    a, b, c = (complex(v) for v in coords)
    if not abs(a * b * c) < params.epsilon * (1.0 - margin):
        return False
    recipe = chart.recipe
    pts = _slots(graph_map(recipe.graph_map, (a, b, c), params.invariant))
    return all(_in_slot(pt, kind, params, margin) for pt, kind in zip(pts, recipe.slots))


def chart_embed(chart: ChartId, coords: Coords, params: ModelParams) -> GraphPoint:
    if not chart_contains(chart, coords, params):
        raise OutsideChartDomain(f"{coords} is outside {chart.value}")
    pts = _slots(graph_map(chart.recipe.graph_map, coords, params.invariant))
    return GraphPoint(*(normalize(pt, params) for pt in pts))


def slot_representative(w: PointC2, kind: SlotChart, params: ModelParams) -> Optional[PointC2]:
    """The representative of w in D^0 or U (each embeds in X_S), or None."""
    candidates = [w]
    for d in Direction:
        try:
            candidates.append(deck(w, d, params))
        except DivisionAtSingularBranch:
            pass
    for cand in candidates:
        if _in_slot(cand, kind, params, 0.0):
            return cand
    return None


def _invert_map(which: GraphMap, reps: tuple[PointC2, PointC2, PointC2], S: InvariantPolynomial) -> Coords:
    x, y, z = reps
    if which is GraphMap.F2:
        return x.q, y.q, -z.p.conjugate()
    s1, s2 = partials(S, z.fiber)
    return x.p.conjugate(), y.p.conjugate(), -cmath.exp(complex(-s1, s2)) * z.q


def invert_embedding(chart: ChartId, gp: GraphPoint, params: ModelParams, tol: float = GRAPH_TOL) -> Optional[Coords]:
    """Closed-form preimage of gp in chart, or None if gp is not in the chart's image."""
    recipe = chart.recipe
    reps = []
    for w, kind in zip((gp.x, gp.y, gp.z), recipe.slots):
        rep = slot_representative(w, kind, params)
        if rep is None:
            return None
        reps.append(rep)
    coords = _invert_map(recipe.graph_map, tuple(reps), params.invariant)
    if not chart_contains(chart, coords, params):
        return None
    image = _slots(graph_map(recipe.graph_map, coords, params.invariant))
    if max(coord_distance(u, v) for u, v in zip(image, reps)) > tol:
        return None
    return coords


def check_on_graph(gp: GraphPoint, params: ModelParams, tol: float = GRAPH_TOL) -> None:
    fibers = [gp.x.fiber, gp.y.fiber, gp.z.fiber]
    if max(abs(f - fibers[0]) for f in fibers) > tol:
        raise NotOnGraph("the three points do not share a fiber")
    if gp.is_closure_point:
        if abs(fibers[2]) > tol:
            raise NotOnGraph("closure points over (s, s) need z on the singular fiber")
        return
    err = quotient_distance(add(gp.x, gp.y, params), gp.z, params)
    if err > tol:
        raise NotOnGraph(f"z differs from x + y by {err:.3g}")


def locate(gp: GraphPoint, params: ModelParams, tol: float = GRAPH_TOL) -> list[tuple[ChartId, Coords]]:
    """All chart preimages of a point of the closed graph."""
    check_on_graph(gp, params, tol)
    hits = []
    for chart in ChartId:
        coords = invert_embedding(chart, gp, params, tol)
        if coords is not None:
            hits.append((chart, coords))
    return hits


def graph_point(x: PointC2, y: PointC2, params: ModelParams, z: Optional[PointC2] = None) -> GraphPoint:
    """(x, y, x + y), or the closure point (s, s, z) when x = y = s."""
    x, y = normalize(x, params), normalize(y, params)
    if z is None:
        if x.is_singular_point and y.is_singular_point:
            raise UndefinedAtDoublePoint("pass z explicitly for closure points over (s, s)")
        z = add(x, y, params)
    return GraphPoint(x, y, normalize(z, params))


def project_pr(gp: GraphPoint) -> tuple[CanonicalPoint, CanonicalPoint]:
    return gp.x, gp.y


def tubular_phi(coords: Coords) -> Coords:
    """(a, b, c) -> (-bc, -ac, 1/c), the E1 -> E6 coordinate change; an involution."""
    a, b, c = (complex(v) for v in coords)
    if c == 0:
        raise ZeroThirdCoordinate("phi needs c != 0")
    return -b * c, -a * c, 1.0 / c


_CLOSED_FORM = {
    (ChartId.E1, ChartId.E6): tubular_phi,
    (ChartId.E6, ChartId.E1): tubular_phi,
    (ChartId.E2, ChartId.E6): lambda coords: tuple(complex(v) for v in coords),
    (ChartId.E6, ChartId.E2): lambda coords: tuple(complex(v) for v in coords),
}


def has_closed_form(src: ChartId, dst: ChartId) -> bool:
    return (src, dst) in _CLOSED_FORM


def transition_by_inversion(src: ChartId, dst: ChartId, coords: Coords, params: ModelParams) -> Coords:
    out = invert_embedding(dst, chart_embed(src, coords, params), params)
    if out is None:
        raise NotInOverlap(f"{coords} of {src.value} is not in {dst.value}")
    return out


def chart_transition(src: ChartId, dst: ChartId, coords: Coords, params: ModelParams) -> Coords:
    if src is dst:
        if not chart_contains(src, coords, params):
            raise NotInOverlap(f"{coords} is outside {src.value}")
        return tuple(complex(v) for v in coords)
    if has_closed_form(src, dst):
        if not chart_contains(src, coords, params):
            raise NotInOverlap(f"{coords} is outside {src.value}")
        try:
            out = _CLOSED_FORM[src, dst](coords)
        except ZeroThirdCoordinate as exc:
            raise NotInOverlap(str(exc)) from exc
        if not chart_contains(dst, out, params):
            raise NotInOverlap(f"{coords} of {src.value} is not in {dst.value}")
        return out
    return transition_by_inversion(src, dst, coords, params)


@dataclass(frozen=True)
class BundlePoint:
    """Point of O(-1)+O(-1) over P^1: homogeneous [l0 : l1] and v = (v1, v2, v3, v4).

    Both (v1, v2) and (v3, v4) lie on the line spanned by (l0, l1).
    """

    lam: tuple[complex, complex]
    v: tuple[complex, complex, complex, complex]

    def is_tautological(self) -> bool:
        l0, l1 = self.lam
        v1, v2, v3, v4 = self.v
        return v1 * l1 == v2 * l0 and v3 * l1 == v4 * l0

    @property
    def on_zero_section(self) -> bool:
        return all(x == 0 for x in self.v)

    def normalized_lambda(self) -> tuple[complex, complex]:
        """Representative with the larger-modulus entry scaled to 1."""
        l0, l1 = self.lam
        if abs(l0) >= abs(l1):
            return 1.0 + 0j, l1 / l0
        return l0 / l1, 1.0 + 0j

    def distance(self, other: BundlePoint) -> float:
        la, lb = self.normalized_lambda(), other.normalized_lambda()
        d_lam = max(abs(u - w) for u, w in zip(la, lb))
        d_v = max(abs(u - w) for u, w in zip(self.v, other.v))
        return max(d_lam, d_v)


TUBULAR_CHARTS = (ChartId.E1, ChartId.E2, ChartId.E6)


def tubular_G(chart: ChartId, coords: Coords, params: Optional[ModelParams] = None) -> BundlePoint:
    """G1 on E1, G2 on E2 and E6.  Domain is checked when params is given."""
    if chart not in TUBULAR_CHARTS:
        raise OutsideChartDomain(f"{chart.value} does not meet the exceptional sphere")
    if params is not None and not chart_contains(chart, coords, params):
        raise OutsideChartDomain(f"{coords} is outside {chart.value}")
    a, b, c = (complex(v) for v in coords)
    if chart is ChartId.E1:
        return BundlePoint((1.0 + 0j, -c), (b, -b * c, a, -a * c))
    return BundlePoint((-c, 1.0 + 0j), (-a * c, a, -b * c, b))
