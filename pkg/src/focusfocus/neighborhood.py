"""Region membership, the gluing (deck) maps and the canonical form in the formal domain.

The quotient X_S is represented by its formal domain

    D = {|q| < 1, |p| <= e^{S1(b)}},      b = -conj(p) q,

one representative per point.  The two gluing circles |q| = 1 and
|p| = e^{S1} are resolved with a relative band ``RHO = 1 + 1e-12``: the
domain actually used is {|q| < 1/RHO, |p| <= RHO e^{S1}}.  The Up map sends
|q| = 1/RHO exactly onto |p| = RHO e^{S1}, so this is still a strict
fundamental domain (the printed one flowed by t1 = ln RHO), and points
computed on a gluing circle up to rounding are never split across it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .core import ModelParams, PointC2
from .errors import DivisionAtSingularBranch, NotInModel

RHO = 1.0 + 1e-12
MAX_DECK_STEPS = 64
SAME_POINT_TOL = 1e-9


class Region(Enum):
    X = "X"
    XPRIME = "XPrime"
    D0 = "D0"
    U = "U"
    D = "D"
    D_PLUS = "DPlus"
    D_MINUS = "DMinus"
    U_PLUS = "UPlus"
    U_MINUS = "UMinus"
    SIGMA1_CIRCLE = "Sigma1Circle"
    SIGMA2_CIRCLE = "Sigma2Circle"
    SINGULAR_FIBER = "SingularFiber"
    SINGULAR_POINT = "SingularPoint"


class Direction(Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class CanonicalPoint(PointC2):
    """A PointC2 known to lie in the formal domain. Produced by :func:`normalize`."""


def _radius(pt: PointC2, params: ModelParams) -> float:
    """e^{S1(b)}, the modulus of |p| on the sigma_2 gluing circle of pt's fiber."""
    s1, _ = params.s_partials(pt.fiber)
    return math.exp(s1)


def in_x(pt: PointC2, params: ModelParams) -> bool:
    return abs(pt.p * pt.q) < params.epsilon


def in_d0(pt: PointC2, params: ModelParams, margin: float = 0.0) -> bool:
    """Open chart D^0.  ``margin`` shrinks every strict bound by that relative amount."""
    k = 1.0 - margin
    r = _radius(pt, params)
    return (
        abs(pt.p * pt.q) < params.epsilon * k
        and abs(pt.q) < k / RHO
        and abs(pt.p) < k * r / RHO
    )


def in_u(pt: PointC2, params: ModelParams, margin: float = 0.0) -> bool:
    """Open chart U, the strip e^{S1-delta} < |p| < e^{S1+delta}."""
    k = 1.0 - margin
    r = _radius(pt, params)
    d = params.delta * k
    return abs(pt.p * pt.q) < params.epsilon * k and r * math.exp(-d) < abs(pt.p) < r * math.exp(d)


def in_formal_domain(pt: PointC2, params: ModelParams) -> bool:
    return in_x(pt, params) and abs(pt.q) < 1.0 / RHO and abs(pt.p) <= RHO * _radius(pt, params)


def classify(pt: PointC2, params: ModelParams) -> frozenset[Region]:
    """All region tags containing pt; empty when pt is outside X."""
    if not in_x(pt, params):
        return frozenset()
    tags = {Region.X}
    r = _radius(pt, params)
    ap, aq = abs(pt.p), abs(pt.q)
    e_d = math.exp(params.delta)
    if aq <= RHO and ap < r * e_d:
        tags.add(Region.XPRIME)
    if in_d0(pt, params):
        tags.add(Region.D0)
    if in_u(pt, params):
        tags.add(Region.U)
    if in_formal_domain(pt, params):
        tags.add(Region.D)
    if 1.0 / e_d < aq < 1.0 / RHO:
        tags.add(Region.D_PLUS)
    if r / e_d < ap < r / RHO:
        tags.add(Region.D_MINUS)
        tags.add(Region.U_MINUS)
    if r * RHO < ap < r * e_d:
        tags.add(Region.U_PLUS)
    if 1.0 / RHO <= aq <= RHO:
        tags.add(Region.SIGMA1_CIRCLE)
    if r / RHO <= ap <= r * RHO:
        tags.add(Region.SIGMA2_CIRCLE)
    if pt.fiber == 0:
        tags.add(Region.SINGULAR_FIBER)
        if pt.is_singular_point:
            tags.add(Region.SINGULAR_POINT)
    return frozenset(tags)


def deck(pt: PointC2, direction: Direction, params: ModelParams) -> PointC2:
    """One t1-period of the gluing: Up = flow by +t(b), Down = flow by -t(b).

    The closed forms stay finite on the singular fiber, where the flow time diverges.
    """
    b = pt.fiber
    s1, s2 = params.s_partials(b)
    p, q = pt.p, pt.q
    if direction is Direction.UP:
        if q == 0:
            raise DivisionAtSingularBranch("Up needs q != 0")
        return PointC2(
            cmath.exp(complex(s1, s2)) / q.conjugate(),
            p.conjugate() * q * q * cmath.exp(complex(-s1, s2)),
        )
    if p == 0:
        raise DivisionAtSingularBranch("Down needs p != 0")
    return PointC2(
        p * p * q.conjugate() * cmath.exp(complex(-s1, -s2)),
        cmath.exp(complex(s1, -s2)) / p.conjugate(),
    )


def normalize(pt: PointC2, params: ModelParams) -> CanonicalPoint:
    """The unique representative of pt in the formal domain."""
    if not in_x(pt, params):
        raise NotInModel(f"|pq| = {abs(pt.p * pt.q):.6g} is not below epsilon")
    cur = pt
    for _ in range(MAX_DECK_STEPS):
        if abs(cur.q) >= 1.0 / RHO:
            cur = deck(cur, Direction.UP, params)
        elif abs(cur.p) > RHO * _radius(cur, params):
            cur = deck(cur, Direction.DOWN, params)
        else:
            return CanonicalPoint(cur.p, cur.q)
    raise NotInModel(f"no formal-domain representative within {MAX_DECK_STEPS} deck steps")


def coord_distance(a: PointC2, b: PointC2) -> float:
    """Max absolute difference over the four real coordinates."""
    dp, dq = a.p - b.p, a.q - b.q
    return max(abs(dp.real), abs(dp.imag), abs(dq.real), abs(dq.imag))


def quotient_distance(a: PointC2, b: PointC2, params: ModelParams) -> float:
    """Coordinate distance of canonical forms, also comparing against b's deck images.

    Two canonical forms of nearby points of X_S can sit on opposite sides of
    the gluing circle; comparing against the Up/Down images measures their
    distance across it.
    """
    ca, cb = normalize(a, params), normalize(b, params)
    best = coord_distance(ca, cb)
    for d in Direction:
        try:
            best = min(best, coord_distance(ca, deck(cb, d, params)))
        except DivisionAtSingularBranch:
            pass
    return best


def same_point(a: PointC2, b: PointC2, params: ModelParams, tol: float = SAME_POINT_TOL) -> bool:
    return quotient_distance(a, b, params) <= tol
