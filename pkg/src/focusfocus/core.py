"""Complex-coordinate primitives of the standard focus-focus system.

Points of C^2 are pairs (p, q) of Python complex numbers, the moment map is
b = -conj(p) q = H1 + i H2, and the symplectic form is

    omega_0 = dp1 ^ dq1 + dp2 ^ dq2,    p = p1 + i p2,  q = q1 + i q2,

with Hamiltonian vector fields fixed by omega(X_H, .) = -dH.  Under this
convention the H1 flow is (e^t p, e^-t q) and the H2 flow is (e^it p, e^it q).

Real coordinates are always ordered (p1, p2, q1, q2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import DimensionMismatch, FiberOutOfRange, InvalidParams, SingularFiber

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InvariantPolynomial:
    """Real bivariate polynomial S(b1, b2) = sum c_ij b1^i b2^j with S(0) = 0.

    Coefficients are stored as a sorted tuple of ((i, j), c) pairs so the
    object is hashable and its evaluation order is fixed.
    """

    terms: tuple[tuple[tuple[int, int], float], ...] = ()

    def __post_init__(self):
        merged: dict[tuple[int, int], float] = {}
        for (i, j), c in self.terms:
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise InvalidParams(f"negative exponent ({i}, {j})")
            merged[(i, j)] = merged.get((i, j), 0.0) + float(c)
        if merged.get((0, 0), 0.0) != 0.0:
            raise InvalidParams("S must vanish at the critical value (c_00 = 0)")
        merged.pop((0, 0), None)
        cleaned = tuple(sorted((k, v) for k, v in merged.items() if v != 0.0))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls) -> InvariantPolynomial:
        return cls(())

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[tuple[int, int], float]) -> InvariantPolynomial:
        return cls(tuple(coeffs.items()))

    @classmethod
    def from_triples(cls, triples: Iterable[Iterable[float]]) -> InvariantPolynomial:
        """Build from [[i, j, value], ...] rows as used in config files."""
        terms = []
        for row in triples:
            i, j, c = row
            if int(i) != i or int(j) != j:
                raise InvalidParams(f"non-integer exponent in {row!r}")
            terms.append(((int(i), int(j)), float(c)))
        return cls(tuple(terms))

    @property
    def coeffs(self) -> dict[tuple[int, int], float]:
        return dict(self.terms)

    def to_triples(self) -> list[list[float]]:
        return [[i, j, c] for (i, j), c in self.terms]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, b: complex) -> tuple[float, float, float]:
        return eval_invariant(self, b)

    def s1_on_grid(self, b1: np.ndarray, b2: np.ndarray) -> np.ndarray:
        out = np.zeros(np.broadcast(b1, b2).shape)
        for (i, j), c in self.terms:
            if i:
                out = out + c * i * b1 ** (i - 1) * b2**j
        return out


def eval_invariant(S: InvariantPolynomial, b: complex) -> tuple[float, float, float]:
    """Return (S, dS/db1, dS/db2) at (b1, b2) = (Re b, Im b)."""
    b1, b2 = b.real, b.imag
    value = s1 = s2 = 0.0
    for (i, j), c in S.terms:
        value += c * b1**i * b2**j
        if i:
            s1 += c * i * b1 ** (i - 1) * b2**j
        if j:
            s2 += c * j * b1**i * b2 ** (j - 1)
    return value, s1, s2


def partials(S: InvariantPolynomial, b: complex) -> tuple[float, float]:
    _, s1, s2 = eval_invariant(S, b)
    return s1, s2


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the model neighborhood X_S.

    ``strict`` additionally enforces epsilon <= 0.25 and delta <= 0.5.  The
    chart-consistency bound max|S1| <= ln(1/epsilon) - delta on the closed
    epsilon-disc is always enforced; it keeps the gluing strips inside X and
    the strip U inside {|q| < 1}.
    """

    epsilon: float = 0.1
    delta: float = 0.3
    invariant: InvariantPolynomial = field(default_factory=InvariantPolynomial.zero)
    strict: bool = True
    _max_abs_s1: float = field(default=0.0, init=False, repr=False, compare=False)

    def __post_init__(self):
        eps, dlt = float(self.epsilon), float(self.delta)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "delta", dlt)
        if not 0.0 < eps < 1.0:
            raise InvalidParams(f"epsilon must lie in (0, 1), got {eps}")
        if not 0.0 < dlt <= 1.0:
            raise InvalidParams(f"delta must lie in (0, 1], got {dlt}")
        if self.strict and (eps > 0.25 or dlt > 0.5):
            raise InvalidParams("strict parameters require epsilon <= 0.25 and delta <= 0.5")
        bound = math.log(1.0 / eps) - dlt
        worst = self._grid_max_abs_s1()
        object.__setattr__(self, "_max_abs_s1", worst)
        if worst > bound:
            raise InvalidParams(
                f"max|S1| = {worst:.6g} on the epsilon-disc exceeds ln(1/epsilon) - delta = {bound:.6g}"
            )

    def max_abs_s1(self) -> float:
        """max |S1| over a polar grid of the closed epsilon-disc (cached at construction)."""
        return self._max_abs_s1

    def _grid_max_abs_s1(self) -> float:
        if self.invariant.is_zero:
            return 0.0
        r = np.linspace(0.0, self.epsilon, 65)[:, None]
        th = np.linspace(0.0, TWO_PI, 361)[None, :]
        vals = self.invariant.s1_on_grid(r * np.cos(th), r * np.sin(th))
        return float(np.max(np.abs(vals)))

    def s_partials(self, b: complex) -> tuple[float, float]:
        return partials(self.invariant, b)


@dataclass(frozen=True)
class PointC2:
    p: complex
    q: complex

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "q", complex(self.q))

    @property
    def fiber(self) -> complex:
        return -self.p.conjugate() * self.q

    @property
    def is_singular_point(self) -> bool:
        return self.p == 0 and self.q == 0

    def as_real(self) -> np.ndarray:
        return np.array([self.p.real, self.p.imag, self.q.real, self.q.imag])

    @classmethod
    def from_real(cls, v) -> PointC2:
        return cls(complex(v[0], v[1]), complex(v[2], v[3]))

    def __iter__(self):
        yield self.p
        yield self.q


class TimePair(NamedTuple):
    t1: float
    t2: float

    def __add__(self, other):
        return TimePair(self.t1 + other[0], self.t2 + other[1])

    def __neg__(self):
        return TimePair(-self.t1, -self.t2)

    def __sub__(self, other):
        return TimePair(self.t1 - other[0], self.t2 - other[1])


class PeriodLattice(NamedTuple):
    gen_rotation: TimePair
    gen_monodromy: TimePair


class SectionKind(Enum):
    SIGMA0 = "sigma0"
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"
    SIGMA_S = "sigmaS"


def principal_arg(z: complex) -> float:
    """Argument in (-pi, pi]; cmath.phase returns -pi for a negative real with -0.0 imaginary part."""
    a = cmath.phase(z)
    return math.pi if a == -math.pi else a


def hamiltonian(pt: PointC2) -> complex:
    return -pt.p.conjugate() * pt.q


def flow(pt: PointC2, t) -> PointC2:
    t1, t2 = t
    return PointC2(cmath.exp(complex(t1, t2)) * pt.p, cmath.exp(complex(-t1, t2)) * pt.q)


def _check_fiber(b: complex, params: ModelParams) -> None:
    if abs(b) >= params.epsilon:
        raise FiberOutOfRange(f"|b| = {abs(b):.6g} is not below epsilon = {params.epsilon}")


def section(kind: SectionKind, b: complex, params: ModelParams) -> PointC2:
    b = complex(b)
    _check_fiber(b, params)
    if kind is SectionKind.SIGMA0:
        return PointC2(1.0, -b)
    if kind is SectionKind.SIGMA2:
        return PointC2(-b.conjugate(), 1.0)
    # sigma_S is represented by the sigma_1 formula, which lies in the formal domain
    s1, s2 = params.s_partials(b)
    return PointC2(cmath.exp(complex(s1, s2)), -cmath.exp(complex(-s1, s2)) * b)


def travel_time(b: complex, params: ModelParams) -> TimePair:
    """Flow time carrying sigma_2(b) to sigma_1(b); t2 is meaningful modulo 2 pi."""
    b = complex(b)
    if b == 0:
        raise SingularFiber("travel time diverges on the singular fiber")
    _check_fiber(b, params)
    s1, s2 = params.s_partials(b)
    return TimePair(s1 - math.log(abs(b)), s2 + principal_arg(b) - math.pi)


def period_lattice(b: complex, params: ModelParams) -> PeriodLattice:
    return PeriodLattice(TimePair(0.0, TWO_PI), travel_time(b, params))


def liouville(kind: SectionKind, b: complex, t, params: ModelParams) -> PointC2:
    return flow(section(kind, b, params), t)


# omega(v, w) = v @ OMEGA @ w in (p1, p2, q1, q2) coordinates
OMEGA = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]
)

PRODUCT_SIGNS = (-1.0, -1.0, 1.0)


class FormKind(Enum):
    OMEGA = "omega"
    OMEGA_TILDE = "omega_tilde"


def omega_tilde_matrix(signs=PRODUCT_SIGNS) -> np.ndarray:
    """Block matrix of (s0 omega) + (s1 omega) + (s2 omega) on (C^2)^3."""
    out = np.zeros((12, 12))
    for k, s in enumerate(signs):
        out[4 * k : 4 * k + 4, 4 * k : 4 * k + 4] = s * OMEGA
    return out


def symplectic_form(kind: FormKind, v, w, signs=PRODUCT_SIGNS) -> float:
    """Evaluate omega_0 (4 components) or (-omega)+(-omega)+omega (12 components).

    Both forms are constant, so no base point is needed.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    n = 4 if kind is FormKind.OMEGA else 12
    if v.shape != (n,) or w.shape != (n,):
        raise DimensionMismatch(f"{kind.value} expects {n}-component tangent vectors")
    mat = OMEGA if kind is FormKind.OMEGA else omega_tilde_matrix(signs)
    return float(v @ mat @ w)
