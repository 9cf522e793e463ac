"""Fiberwise addition on X_S with sigma_S as identity.

On a regular fiber two closed formulas describe the sum of canonical points,
one measured from sigma_1 and one from sigma_2; they differ by one t1-period
and exactly one of them lands in the formal domain.  On the singular fiber
the law degenerates to (C^*, x) with the singular point absorbing.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum
from typing import Callable, Union

import numpy as np
from scipy.optimize import least_squares

from .core import (
    TWO_PI,
    ModelParams,
    PointC2,
    SectionKind,
    TimePair,
    flow,
    principal_arg,
    section,
)
from .errors import (
    FiberMismatch,
    NoInverseAtSingularPoint,
    SingularFiber,
    SingularFiberInput,
    SingularMatrix,
    SingularPointInput,
    UndefinedAtDoublePoint,
    ZeroInput,
)
from .neighborhood import RHO, CanonicalPoint, normalize

FIBER_RTOL = 1e-12


class Branch(Enum):
    SIGMA_ONE = "sigma1"
    SIGMA_TWO = "sigma2"


def common_fiber(x: PointC2, y: PointC2) -> complex:
    bx, by = x.fiber, y.fiber
    if abs(bx - by) > FIBER_RTOL * max(abs(bx), abs(by)):
        raise FiberMismatch(f"points lie on different fibers: {bx} vs {by}")
    return bx


def onto_fiber(y: PointC2, b: complex) -> PointC2:
    """Move y onto fiber b, keeping its larger coordinate fixed (for noisy inputs)."""
    if abs(y.q) >= abs(y.p):
        return PointC2(-complex(b).conjugate() / y.q.conjugate(), y.q)
    if y.p == 0:
        raise SingularPointInput("cannot move the singular point off the singular fiber")
    return PointC2(y.p, -complex(b) / y.p.conjugate())


def _add1_factors(s1: float, s2: float) -> tuple[complex, complex]:
    """Prefactors (e^{-S1-iS2}, e^{S1-iS2}) of the sigma_1-origin addition formula."""
    return cmath.exp(complex(-s1, -s2)), cmath.exp(complex(s1, -s2))


def add_formal(x: PointC2, y: PointC2, branch: Branch, params: ModelParams) -> PointC2:
    """Raw addition formula for one choice of origin; the output is not normalized."""
    b = common_fiber(x, y)
    if b == 0:
        raise SingularFiberInput("the formal formulas need a regular fiber")
    if branch is Branch.SIGMA_ONE:
        f_p, f_q = _add1_factors(*params.s_partials(b))
        return PointC2(f_p * x.p * y.p, f_q * x.q / y.p.conjugate())
    return PointC2(x.p / y.q.conjugate(), x.q * y.q)


def select_branch(x: PointC2, y: PointC2, params: ModelParams) -> Branch:
    """SIGMA_TWO iff |q1 q2| >= e^{-S1(b)} |b| (ties to SIGMA_TWO).

    The bound carries the RHO band of the canonical domain so that the chosen
    formula lands in exactly the domain :func:`normalize` produces.
    """
    b = common_fiber(x, y)
    if b == 0:
        raise SingularFiberInput("branch selection needs a regular fiber")
    s1, _ = params.s_partials(b)
    if abs(x.q * y.q) >= math.exp(-s1) * abs(b) / RHO:
        return Branch.SIGMA_TWO
    return Branch.SIGMA_ONE


def _add_singular(x: PointC2, y: PointC2, params: ModelParams) -> PointC2:
    xs, ys = x.is_singular_point, y.is_singular_point
    if xs and ys:
        raise UndefinedAtDoublePoint("s + s is not defined")
    if xs or ys:
        return PointC2(0.0, 0.0)
    s1, s2 = params.s_partials(0j)
    if x.q == 0 and y.q == 0:
        f_p, _ = _add1_factors(s1, s2)
        return PointC2(x.p * y.p * f_p, 0.0)
    if x.p == 0 and y.p == 0:
        return PointC2(0.0, x.q * y.q)
    pt_p, pt_q = (x, y) if x.q == 0 else (y, x)
    p, q = pt_p.p, pt_q.q
    if abs(p) <= math.exp(s1) * abs(q):
        return PointC2(p / q.conjugate(), 0.0)
    return PointC2(0.0, cmath.exp(complex(s1, -s2)) * q / p.conjugate())


def add(x: PointC2, y: PointC2, params: ModelParams) -> CanonicalPoint:
    x, y = normalize(x, params), normalize(y, params)
    if common_fiber(x, y) == 0:
        return normalize(_add_singular(x, y, params), params)
    return normalize(add_formal(x, y, select_branch(x, y, params), params), params)


def identity(b: complex, params: ModelParams) -> CanonicalPoint:
    return normalize(section(SectionKind.SIGMA_S, b, params), params)


def cstar_to_fiber(z: complex, params: ModelParams) -> CanonicalPoint:
    """C^* -> regular part of the singular fiber, a group isomorphism."""
    z = complex(z)
    if z == 0:
        raise ZeroInput("0 is not in C^*")
    if abs(z) <= 1.0:
        s1, s2 = params.s_partials(0j)
        pt = PointC2(z * cmath.exp(complex(s1, s2)), 0.0)
    else:
        pt = PointC2(0.0, 1.0 / z.conjugate())
    return normalize(pt, params)


def cstar_from_fiber(pt: PointC2, params: ModelParams) -> complex:
    if pt.fiber != 0:
        raise FiberMismatch("point is not on the singular fiber")
    pt = normalize(pt, params)
    if pt.is_singular_point:
        raise SingularPointInput("the singular point has no C^* coordinate")
    if pt.q == 0:
        s1, s2 = params.s_partials(0j)
        return pt.p * cmath.exp(complex(-s1, -s2))
    return 1.0 / pt.q.conjugate()


class CStarDirection(Enum):
    TO_FIBER = "to_fiber"
    FROM_FIBER = "from_fiber"


def cstar_iso(value, direction: CStarDirection, params: ModelParams):
    if direction is CStarDirection.TO_FIBER:
        return cstar_to_fiber(value, params)
    return cstar_from_fiber(value, params)


def inverse(x: PointC2, params: ModelParams) -> CanonicalPoint:
    x = normalize(x, params)
    b = x.fiber
    if b == 0:
        if x.is_singular_point:
            raise NoInverseAtSingularPoint("the singular point is absorbing")
        return cstar_to_fiber(1.0 / cstar_from_fiber(x, params), params)
    # sigma_2-origin candidate: x + (-conj(b) conj(q), 1/q) = sigma_2(b)
    return normalize(PointC2(-b.conjugate() * x.q.conjugate(), 1.0 / x.q), params)


def liouville_times(x: PointC2, origin: PointC2) -> TimePair:
    """t with flow(origin, t) = x on a regular fiber; t2 in (-pi, pi]."""
    ratio = x.p / origin.p
    return TimePair(math.log(abs(ratio)), principal_arg(ratio))


def add_via_liouville(
    x: PointC2, y: PointC2, params: ModelParams, A=None
) -> CanonicalPoint:
    """Addition by summing Liouville times in the trivialization A @ (H1, H2).

    The flow of (A H)_i is the H-flow for time A[i, :], so s-times relate to
    t-times by t = A^T s.  Independent of :func:`add`'s closed formulas.
    """
    A = np.eye(2) if A is None else np.asarray(A, dtype=float)
    if A.shape != (2, 2) or abs(np.linalg.det(A)) < 1e-12:
        raise SingularMatrix("trivialization matrix must be 2x2 and invertible")
    x, y = normalize(x, params), normalize(y, params)
    b = common_fiber(x, y)
    if b == 0:
        raise SingularFiberInput("Liouville coordinates need a regular fiber")
    origin = section(SectionKind.SIGMA_S, b, params)
    sx = np.linalg.solve(A.T, liouville_times(x, origin))
    sy = np.linalg.solve(A.T, liouville_times(y, origin))
    t = A.T @ (sx + sy)
    return normalize(flow(origin, (float(t[0]), float(t[1]))), params)


ShiftLike = Union[TimePair, tuple, Callable[[complex], tuple]]


def _shift_at(shift: ShiftLike, b: complex) -> TimePair:
    return TimePair(*(shift(b) if callable(shift) else shift))


def change_section(triple, shift: ShiftLike, params: ModelParams):
    """Re-express an addition triple for the section sigma' = flow(sigma_S, t(b)).

    (x + y)_{sigma'} = flow((x + y)_{sigma_S}, -t(b)); (s, s, s) is fixed.
    """
    x, y, z = triple
    t = _shift_at(shift, z.fiber)
    return x, y, normalize(flow(z, (-t.t1, -t.t2)), params)


def add_with_section(x: PointC2, y: PointC2, shift: ShiftLike, params: ModelParams) -> CanonicalPoint:
    """Liouville-time addition with origin sigma' = flow(sigma_S, t(b)); regular fibers only."""
    x, y = normalize(x, params), normalize(y, params)
    b = common_fiber(x, y)
    if b == 0:
        raise SingularFiberInput("Liouville coordinates need a regular fiber")
    origin = flow(section(SectionKind.SIGMA_S, b, params), _shift_at(shift, b))
    tx, ty = liouville_times(x, origin), liouville_times(y, origin)
    return normalize(flow(origin, tx + ty), params)


def measure_period(b: complex, params: ModelParams) -> TimePair:
    """Numerically solve flow(sigma_2(b), t) = sigma_1(b) for the two real unknowns t."""
    b = complex(b)
    if b == 0:
        raise SingularFiber("no finite period on the singular fiber")
    start = section(SectionKind.SIGMA2, b, params)
    target = section(SectionKind.SIGMA1, b, params)
    sp, sq = abs(target.p), abs(target.q)

    def residual(t):
        cur = flow(start, (t[0], t[1]))
        dp = (cur.p - target.p) / sp
        dq = (cur.q - target.q) / sq
        return [dp.real, dp.imag, dq.real, dq.imag]

    best = None
    for t2_start in (0.0, TWO_PI / 3, 2 * TWO_PI / 3):
        sol = least_squares(residual, x0=[0.0, t2_start], method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if best is None or sol.cost < best.cost:
            best = sol
    return TimePair(float(best.x[0]), float(best.x[1]))


def _wrap(angle: float) -> float:
    w = math.remainder(angle, TWO_PI)
    return math.pi if w == -math.pi else w


def recover_partials(b: complex, params: ModelParams) -> tuple[float, float]:
    """Recover (S1, S2)(b) from the measured period: t(b) = (S1 - ln|b|, S2 + arg b - pi)."""
    t = measure_period(b, params)
    return t.t1 + math.log(abs(b)), _wrap(t.t2 - principal_arg(b) + math.pi)
