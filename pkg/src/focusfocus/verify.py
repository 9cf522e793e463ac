"""Named numerical checks of the model's geometric properties.

Every check samples its own inputs from a generator seeded by (seed, check
name), so reports do not depend on which other checks ran or in what order.
A check tracks one or more metrics (an error and its threshold); the report
shows the metric closest to, or furthest past, its threshold, and passes
only when every metric is within its threshold.  Count-type metrics (branch
exceptions, uncovered points, rank deficits) have threshold 0.
"""

from __future__ import annotations

import logging
import math
import zlib
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Callable, Optional

import numpy as np

from . import sampling
from .core import (
    OMEGA,
    PRODUCT_SIGNS,
    TWO_PI,
    ModelParams,
    PointC2,
    SectionKind,
    flow,
    hamiltonian,
    liouville,
    omega_tilde_matrix,
    section,
    travel_time,
)
from .errors import EvaluationFailed, UnknownCheckId
from .graph import (
    ChartId,
    GraphMap,
    GraphPoint,
    chart_contains,
    chart_embed,
    graph_map,
    graph_map_real,
    coords_to_real,
    has_closed_form,
    chart_transition,
    invert_embedding,
    locate,
    TUBULAR_CHARTS,
    tubular_G,
    tubular_phi,
)
from .group import (
    Branch,
    add,
    add_formal,
    add_via_liouville,
    identity,
    inverse,
    recover_partials,
    select_branch,
)
from .neighborhood import (
    CanonicalPoint,
    Direction,
    coord_distance,
    deck,
    in_formal_domain,
    normalize,
    quotient_distance,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ToleranceConfig:
    fd_step: float = 1e-6
    form_tol: float = 1e-4
    alg_tol: float = 1e-11
    rank_tol: float = 1e-8
    samples: int = 1000
    seed: int = 42
    flow_tol: float = 1e-6
    section_tol: float = 1e-6
    pullback_tol: float = 1e-5
    oracle_tol: float = 1e-9
    coherence_tol: float = 1e-10
    closure_tol: float = 1e-9
    recover_tol: float = 1e-6
    continuity_tol: float = 1e-3
    fiber_tol: float = 1e-12
    unit_sv_tol: float = 1e-12
    bundle_tol: float = 1e-12
    separation_tol: float = 1e-9

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "seed":
                continue
            if f.name == "samples":
                if int(value) != value or value < 0:
                    raise ValueError("samples must be a non-negative integer")
            elif not value > 0:
                raise ValueError(f"{f.name} must be positive")

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in fields(cls)}


@dataclass
class CheckReport:
    check_id: str
    samples: int
    max_error: float
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)
    worst_input: list = field(default_factory=list)

    def to_dict(self) -> dict:
        def finite(v):
            return v if isinstance(v, (int, float)) and math.isfinite(v) else None

        return {
            "check": self.check_id,
            "samples": self.samples,
            "max_error": finite(self.max_error),
            "threshold": self.threshold,
            "pass": self.passed,
            "worst_input": [finite(v) for v in self.worst_input],
            "details": self.details,
        }


def jacobian(f: Callable[[np.ndarray], np.ndarray], x, step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of a map between real coordinate spaces.

    The divisor is the representable difference between the two evaluation
    points, so affine maps are differentiated exactly.
    """
    x = np.asarray(x, dtype=float)
    try:
        f0 = np.asarray(f(x), dtype=float)
        jac = np.empty((f0.size, x.size))
        for j in range(x.size):
            xp, xm = x.copy(), x.copy()
            xp[j] += step
            xm[j] -= step
            jac[:, j] = (np.asarray(f(xp)) - np.asarray(f(xm))).ravel() / (xp[j] - xm[j])
    except (ValueError, ArithmeticError) as exc:
        raise EvaluationFailed(f"map not evaluable near {x}: {exc}") from exc
    return jac


def numerical_rank(matrix: np.ndarray, rank_tol: float) -> tuple[int, np.ndarray]:
    """Rank r iff exactly r singular values exceed rank_tol times the largest."""
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0, sv
    return int(np.sum(sv > rank_tol * sv[0])), sv


def _point_vec(*pts: PointC2) -> list[float]:
    return [float(v) for pt in pts for v in pt.as_real()]


def _coords_vec(coords) -> list[float]:
    return [float(v) for v in coords_to_real(coords)]


class _Metric:
    def __init__(self, name: str, threshold: float):
        self.name = name
        self.threshold = threshold
        self.value = 0.0
        self.worst: list = []

    def update(self, err: float, inp) -> None:
        err = float(err)
        if math.isnan(err):
            err = math.inf
        if err > self.value or (not self.worst and err == self.value):
            self.value = err
            self.worst = list(inp)

    @property
    def ok(self) -> bool:
        return self.value <= self.threshold

    def ratio(self) -> float:
        if self.threshold == 0:
            return math.inf if self.value > 0 else 0.0
        return self.value / self.threshold


class _Tracker:
    def __init__(self):
        self.metrics: dict[str, _Metric] = {}
        self.samples = 0
        self.extra: dict = {}

    def metric(self, name: str, threshold: float) -> _Metric:
        if name not in self.metrics:
            self.metrics[name] = _Metric(name, threshold)
        return self.metrics[name]

    def report(self, check_id: str) -> CheckReport:
        ms = list(self.metrics.values())
        worst = max(ms, key=lambda m: m.ratio())
        details = {
            "metrics": {m.name: {"max_error": m.value, "threshold": m.threshold, "pass": m.ok} for m in ms},
            "reported_metric": worst.name,
        }
        details.update(self.extra)
        return CheckReport(
            check_id=check_id,
            samples=self.samples,
            max_error=worst.value,
            threshold=worst.threshold,
            passed=all(m.ok for m in ms),
            details=details,
            worst_input=worst.worst,
        )


def _guarded(metric: _Metric, inp, fn: Callable[[], float]) -> None:
    """Evaluate one sample; an unexpected exception counts as an infinite error."""
    try:
        metric.update(fn(), inp)
    except Exception as exc:  # noqa: BLE001 - any failure is a failed sample
        log.debug("sample failed in %s: %s", metric.name, exc)
        metric.update(math.inf, inp)


def _ham_parts(v: np.ndarray) -> np.ndarray:
    b = hamiltonian(PointC2.from_real(v))
    return np.array([b.real, b.imag])


def check_flow_field(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m = tr.metric("flow_vs_omega_dual", tol.flow_tol)
    for _ in range(tol.samples):
        pt = sampling.sample_x_point(rng, params)
        v = pt.as_real()

        def err():
            grad = jacobian(_ham_parts, v, tol.fd_step)
            worst = 0.0
            for k in range(2):
                # omega(X, .) = -dH_k  <=>  OMEGA^T X = -grad H_k
                field_k = np.linalg.solve(OMEGA.T, -grad[k])

                def along(s, k=k):
                    t = (s[0], 0.0) if k == 0 else (0.0, s[0])
                    return flow(pt, t).as_real()

                deriv = jacobian(along, [0.0], tol.fd_step)[:, 0]
                worst = max(worst, float(np.max(np.abs(deriv - field_k))))
            return worst

        _guarded(m, _point_vec(pt), err)
        tr.samples += 1


_STD_FORM = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
_LIOUVILLE_KINDS = (SectionKind.SIGMA0, SectionKind.SIGMA_S, SectionKind.SIGMA2)


def check_liouville_pullback(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m = tr.metric("pullback_minus_dbdt", tol.pullback_tol)
    for i in range(tol.samples):
        kind = _LIOUVILLE_KINDS[i % 3]
        b = sampling.sample_fiber(rng, params, r_min=0.0)
        t = (rng.uniform(0.0, params.delta), rng.uniform(0.0, TWO_PI))
        x0 = np.array([b.real, b.imag, t[0], t[1]])

        def psi(v, kind=kind):
            return liouville(kind, complex(v[0], v[1]), (v[2], v[3]), params).as_real()

        def err(x0=x0, psi=psi):
            jac = jacobian(psi, x0, tol.fd_step)
            return float(np.max(np.abs(jac.T @ OMEGA @ jac - _STD_FORM)))

        _guarded(m, list(x0), err)
        tr.samples += 1


def check_section_lagrangian(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m = tr.metric("omega_on_section", tol.section_tol)
    for _ in range(tol.samples):
        b = sampling.sample_fiber(rng, params, r_min=0.0)
        x0 = np.array([b.real, b.imag])

        def err(x0=x0):
            jac = jacobian(lambda v: section(SectionKind.SIGMA1, complex(v[0], v[1]), params).as_real(), x0, tol.fd_step)
            return abs(float(jac[:, 0] @ OMEGA @ jac[:, 1]))

        _guarded(m, list(x0), err)
        tr.samples += 1


def _strip_point(rng, params: ModelParams, upper: bool) -> PointC2:
    """A regular point in D+ (upper=False) or U+ (upper=True)."""
    b = sampling.sample_fiber(rng, params, r_min=0.01, r_max=0.85)
    s1, _ = params.s_partials(b)
    phase = complex(math.cos(a := rng.uniform(-math.pi, math.pi)), math.sin(a))
    if upper:
        p = math.exp(s1 + rng.uniform(0.1, 0.9) * params.delta) * phase
        return PointC2(p, -b / p.conjugate())
    q = math.exp(-rng.uniform(0.1, 0.9) * params.delta) * phase
    return PointC2(-b.conjugate() / q.conjugate(), q)


def check_deck_symplectic(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m_form = tr.metric("deck_pullback_minus_omega", tol.pullback_tol)
    m_fiber = tr.metric("deck_fiber_shift", tol.fiber_tol)
    m_inv = tr.metric("deck_up_down_identity", tol.alg_tol)
    for i in range(tol.samples):
        direction = Direction.UP if i % 2 == 0 else Direction.DOWN
        pt = _strip_point(rng, params, upper=direction is Direction.DOWN)
        other = Direction.DOWN if direction is Direction.UP else Direction.UP
        inp = _point_vec(pt)

        def form_err(pt=pt, direction=direction):
            jac = jacobian(lambda v: deck(PointC2.from_real(v), direction, params).as_real(), pt.as_real(), tol.fd_step)
            return float(np.max(np.abs(jac.T @ OMEGA @ jac - OMEGA)))

        _guarded(m_form, inp, form_err)
        _guarded(m_fiber, inp, lambda: abs(hamiltonian(deck(pt, direction, params)) - pt.fiber) / (1 + abs(pt.fiber)))
        _guarded(m_inv, inp, lambda: coord_distance(deck(deck(pt, direction, params), other, params), pt))
        tr.samples += 1


def check_group_laws(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m_comm = tr.metric("commutativity", tol.alg_tol)
    m_assoc = tr.metric("associativity", tol.alg_tol)
    m_id = tr.metric("identity", tol.alg_tol)
    m_inv = tr.metric("inverse", tol.alg_tol)
    m_oracle = tr.metric("oracle_agreement", tol.oracle_tol)
    n = 10 * tol.samples
    for i in range(n):
        singular = i % 10 == 9
        x, y, z = sampling.sample_tuple(rng, params, 3, singular=singular)
        b = x.fiber
        inp = _point_vec(x, y, z)
        _guarded(m_comm, inp, lambda: quotient_distance(add(x, y, params), add(y, x, params), params))
        _guarded(
            m_assoc,
            inp,
            lambda: quotient_distance(add(add(x, y, params), z, params), add(x, add(y, z, params), params), params),
        )
        _guarded(m_id, inp, lambda: quotient_distance(add(x, identity(b, params), params), x, params))
        _guarded(m_inv, inp, lambda: quotient_distance(add(x, inverse(x, params), params), identity(b, params), params))
        if not singular:
            _guarded(m_oracle, inp, lambda: quotient_distance(add(x, y, params), add_via_liouville(x, y, params), params))
        tr.samples += 1


def check_selection_exclusive(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m = tr.metric("pairs_without_exactly_one_branch", 0.0)
    bad = 0
    for _ in range(10 * tol.samples):
        x, y = sampling.sample_tuple(rng, params, 2)
        try:
            in1 = in_formal_domain(add_formal(x, y, Branch.SIGMA_ONE, params), params)
            in2 = in_formal_domain(add_formal(x, y, Branch.SIGMA_TWO, params), params)
            chosen = select_branch(x, y, params)
            ok = (in1 != in2) and ((chosen is Branch.SIGMA_TWO) == in2)
        except Exception:  # noqa: BLE001
            ok = False
        if not ok:
            bad += 1
            m.update(bad, _point_vec(x, y))
        tr.samples += 1


def _near_singular(pt: CanonicalPoint, b: complex) -> PointC2:
    """Move a regular point of the singular fiber onto the nearby fiber b."""
    if pt.q == 0:
        return PointC2(pt.p, -b / pt.p.conjugate())
    return PointC2(-b.conjugate() / pt.q.conjugate(), pt.q)


def check_singular_continuity(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m = tr.metric("limit_deviation_at_1e-6", tol.continuity_tol)
    s1_0, _ = params.s_partials(0j)
    count = 0
    while count < tol.samples:
        x0, y0 = sampling.sample_tuple(rng, params, 2, singular=True)
        if (x0.q == 0) != (y0.q == 0):
            p = x0.p if x0.q == 0 else y0.p
            q = y0.q if x0.q == 0 else x0.q
            # stay 0.1 away from the mixed-branch boundary |p/q| = e^{S1(0)}
            if abs(math.log(abs(p) / abs(q)) - s1_0) < 0.1:
                continue
        b = 1e-6 * complex(math.cos(a := rng.uniform(-math.pi, math.pi)), math.sin(a))
        xb, yb = _near_singular(x0, b), _near_singular(y0, b)
        _guarded(m, _point_vec(x0, y0), lambda: quotient_distance(add(xb, yb, params), add(x0, y0, params), params))
        count += 1
        tr.samples += 1


def check_period_closure(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m_close = tr.metric("closure_vs_sigma_S", tol.closure_tol)
    m_rec = tr.metric("recovered_partials", tol.recover_tol)
    for _ in range(tol.samples):
        b = sampling.sample_fiber(rng, params)

        def err(b=b):
            closed = normalize(flow(section(SectionKind.SIGMA2, b, params), travel_time(b, params)), params)
            return coord_distance(closed, identity(b, params))

        _guarded(m_close, [b.real, b.imag], err)
        tr.samples += 1
    grid = np.linspace(-0.6 * params.epsilon, 0.6 * params.epsilon, 10)
    for b1 in grid:
        for b2 in grid:
            b = complex(b1, b2)

            def rec_err(b=b):
                got = recover_partials(b, params)
                want = params.s_partials(b)
                return max(abs(got[0] - want[0]), abs(got[1] - want[1]))

            _guarded(m_rec, [b.real, b.imag], rec_err)


def _chart_samples(rng, params: ModelParams, tol: ToleranceConfig, per_chart: int):
    for chart in ChartId:
        for coords in sampling.sample_chart_batch(rng, chart, params, per_chart) if per_chart else ():
            yield chart, coords


def check_graph_lagrangian(
    params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker, signs=PRODUCT_SIGNS
) -> None:
    m = tr.metric("omega_tilde_on_tangents", tol.form_tol)
    form = omega_tilde_matrix(signs)
    for chart, coords in _chart_samples(rng, params, tol, tol.samples // 5):
        which = chart.recipe.graph_map

        def err(coords=coords, which=which):
            jac = jacobian(lambda v: graph_map_real(which, v, params.invariant), coords_to_real(coords), tol.fd_step)
            return float(np.max(np.abs(jac.T @ form @ jac)))

        _guarded(m, _coords_vec(coords), err)
        tr.samples += 1
    tr.extra["omega_tilde_signs"] = list(signs)


def check_graph_immersion(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m = tr.metric("jacobians_below_rank_tol", 0.0)
    smallest = math.inf
    bad = 0
    for chart, coords in _chart_samples(rng, params, tol, tol.samples // 5):
        which = chart.recipe.graph_map
        try:
            jac = jacobian(lambda v: graph_map_real(which, v, params.invariant), coords_to_real(coords), tol.fd_step)
            sv = np.linalg.svd(jac, compute_uv=False)
            low = float(sv[-1])
        except Exception:  # noqa: BLE001
            low = 0.0
        smallest = min(smallest, low)
        if not low >= tol.rank_tol:
            bad += 1
            m.update(bad, _coords_vec(coords))
        tr.samples += 1
    tr.extra["smallest_singular_value"] = smallest if math.isfinite(smallest) else None


def origin_jacobian_pair(params: ModelParams, step: float) -> np.ndarray:
    """[dF1 | dF2] at (0, 0, 0) as a 12 x 12 real matrix."""
    zero = np.zeros(6)
    j1 = jacobian(lambda v: graph_map_real(GraphMap.F1, v, params.invariant), zero, step)
    j2 = jacobian(lambda v: graph_map_real(GraphMap.F2, v, params.invariant), zero, step)
    return np.hstack([j1, j2])


def check_double_point(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    mat = origin_jacobian_pair(params, tol.fd_step)
    rank, sv = numerical_rank(mat, tol.rank_tol)
    tr.metric("rank_deficit", 0.0).update(12 - rank, [])
    if params.invariant.is_zero:
        tr.metric("singular_values_minus_one", tol.unit_sv_tol).update(float(np.max(np.abs(sv - 1.0))), [])
    s = CanonicalPoint(0j, 0j)
    hits = locate(GraphPoint(s, s, s), params)
    expected = {ChartId.E1, ChartId.E2}
    got = {chart for chart, _ in hits}
    origins = all(max(abs(v) for v in coords) == 0 for _, coords in hits)
    mismatch = len(got ^ expected) + (len(hits) != 2) + (not origins)
    tr.metric("double_point_preimage_mismatch", 0.0).update(mismatch, [])
    tr.samples = 1
    tr.extra.update(
        rank=rank,
        smallest_singular_value=float(sv[-1]),
        largest_singular_value=float(sv[0]),
        double_point_charts=sorted(c.value for c in got),
    )


def _triple_distance(g1: GraphPoint, g2: GraphPoint, params: ModelParams) -> float:
    return max(quotient_distance(u, v, params) for u, v in zip((g1.x, g1.y, g1.z), (g2.x, g2.y, g2.z)))


def check_chart_compatibility(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m_trans = tr.metric("embedding_after_transition", tol.alg_tol)
    m_closed = tr.metric("closed_form_vs_inversion", tol.alg_tol)
    m_round = tr.metric("own_chart_round_trip", tol.alg_tol)
    m_add = tr.metric("addition_coherence", tol.coherence_tol)
    m_fiber = tr.metric("fiber_coherence", tol.fiber_tol)
    overlaps = 0
    for chart, coords in _chart_samples(rng, params, tol, max(1, tol.samples // 6)):
        inp = _coords_vec(coords)
        gp = chart_embed(chart, coords, params)
        a, b, c = coords
        fiber = a * b * c
        raw = graph_map(chart.recipe.graph_map, coords, params.invariant)
        _guarded(
            m_fiber,
            inp,
            lambda: max(abs(-raw[2 * k].conjugate() * raw[2 * k + 1] - fiber) for k in range(3)) / (1 + abs(fiber)),
        )
        if not gp.is_closure_point:
            _guarded(m_add, inp, lambda: quotient_distance(add(gp.x, gp.y, params), gp.z, params))

        def round_trip():
            back = invert_embedding(chart, gp, params)
            return math.inf if back is None else float(np.max(np.abs(coords_to_real(back) - coords_to_real(coords))))

        _guarded(m_round, inp, round_trip)
        for other in ChartId:
            if other is chart:
                continue
            target = invert_embedding(other, gp, params)
            if target is None:
                continue
            overlaps += 1
            _guarded(m_trans, inp, lambda: _triple_distance(chart_embed(other, target, params), gp, params))
            if has_closed_form(chart, other):

                def closed_err():
                    closed = chart_transition(chart, other, coords, params)
                    return float(np.max(np.abs(coords_to_real(closed) - coords_to_real(target))))

                _guarded(m_closed, inp, closed_err)
        tr.samples += 1
    tr.extra["overlap_pairs_checked"] = overlaps


def check_covering(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m_rand = tr.metric("uncovered_random_triples", 0.0)
    m_fam = tr.metric("special_family_misses", 0.0)
    s = CanonicalPoint(0j, 0j)
    miss = 0
    for i in range(tol.samples):
        kind = i % 20
        if kind == 0:
            z = sampling.sample_on_fiber(rng, 0j, params)
            gp = GraphPoint(s, s, z)
        elif kind == 1:
            x = sampling.sample_on_fiber(rng, 0j, params)
            gp = GraphPoint(x, s, s) if rng.uniform() < 0.5 else GraphPoint(s, x, s)
        else:
            x, y = sampling.sample_tuple(rng, params, 2, singular=kind in (2, 3))
            gp = GraphPoint(x, y, add(x, y, params))
        try:
            covered = bool(locate(gp, params))
        except Exception:  # noqa: BLE001
            covered = False
        if not covered:
            miss += 1
            m_rand.update(miss, _point_vec(gp.x, gp.y, gp.z))
        tr.samples += 1
    fam_miss = 0
    for _ in range(max(1, tol.samples // 10)):
        x = sampling.sample_tuple(rng, params, 1)[0]
        b = x.fiber
        sig = identity(b, params)
        families = (
            (ChartId.E4, GraphPoint(x, sig, x)),
            (ChartId.E5, GraphPoint(sig, x, x)),
            (ChartId.E3, GraphPoint(sig, sig, sig)),
            (ChartId.E6, GraphPoint(x, inverse(x, params), sig)),
        )
        for chart, gp in families:
            try:
                ok = chart in {c for c, _ in locate(gp, params)}
            except Exception:  # noqa: BLE001
                ok = False
            if not ok:
                fam_miss += 1
                m_fam.update(fam_miss, [float(chart.value[1])] + _point_vec(gp.x, gp.y, gp.z))


def _sample_e16(rng, params: ModelParams, max_tries: int = 100_000):
    """E1 coordinates inside the overlap with E6, where |c| is near e^{-S1}."""
    s1_0, _ = params.s_partials(0j)
    lo, hi = math.exp(-s1_0 - 0.9 * params.delta), math.exp(-s1_0)
    for _ in range(max_tries):
        a, b = (math.sqrt(rng.uniform()) * sampling._phase(rng) for _ in range(2))
        coords = (a, b, rng.uniform(lo, hi) * sampling._phase(rng))
        if chart_contains(ChartId.E1, coords, params, 0.1) and chart_contains(ChartId.E6, tubular_phi(coords), params, 0.1):
            return coords
    raise RuntimeError("could not sample the E1/E6 overlap")


def check_tubular(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m_glue = tr.metric("G2_phi_minus_G1", tol.bundle_tol)
    m_taut = tr.metric("tautological_violations", 0.0)
    m_zero = tr.metric("zero_section_mismatches", 0.0)
    m_inj = tr.metric("injectivity_violations", 0.0)
    taut_bad = zero_bad = inj_bad = 0
    for i in range(tol.samples):
        coords = _sample_e16(rng, params)
        g1 = tubular_G(ChartId.E1, coords)
        _guarded(m_glue, _coords_vec(coords), lambda: g1.distance(tubular_G(ChartId.E6, tubular_phi(coords))))

        chart = TUBULAR_CHARTS[i % 3]
        pt, other = sampling.sample_chart_batch(rng, chart, params, 2)
        if i % 4 == 0:
            pt = (0j, 0j, pt[2])
        g = tubular_G(chart, pt)
        if not g.is_tautological():
            taut_bad += 1
            m_taut.update(taut_bad, _coords_vec(pt))
        if g.on_zero_section != (pt[0] == 0 and pt[1] == 0):
            zero_bad += 1
            m_zero.update(zero_bad, _coords_vec(pt))
        # injectivity: distinct coordinates of one chart have distinct images
        if pt != other and g.distance(tubular_G(chart, other)) < tol.separation_tol:
            inj_bad += 1
            m_inj.update(inj_bad, _coords_vec(pt) + _coords_vec(other))
        tr.samples += 1
    tr.extra["injectivity_pairs"] = tol.samples


def check_trivialization_invariance(params: ModelParams, tol: ToleranceConfig, rng, tr: _Tracker) -> None:
    m = tr.metric("dependence_on_trivialization", tol.oracle_tol)
    mats = []
    while len(mats) < 10:
        A = rng.normal(size=(2, 2))
        if np.linalg.cond(A) < 50:
            mats.append(A)
    for _ in range(tol.samples):
        x, y = sampling.sample_tuple(rng, params, 2)

        def err(x=x, y=y):
            ref = add_via_liouville(x, y, params)
            return max(quotient_distance(add_via_liouville(x, y, params, A), ref, params) for A in mats)

        _guarded(m, _point_vec(x, y), err)
        tr.samples += 1


CHECKS: dict[str, Callable] = {
    "flow_field": check_flow_field,
    "liouville_pullback": check_liouville_pullback,
    "section_lagrangian": check_section_lagrangian,
    "deck_symplectic": check_deck_symplectic,
    "group_laws": check_group_laws,
    "selection_exclusive": check_selection_exclusive,
    "singular_continuity": check_singular_continuity,
    "period_closure": check_period_closure,
    "graph_lagrangian": check_graph_lagrangian,
    "graph_immersion": check_graph_immersion,
    "double_point": check_double_point,
    "chart_compatibility": check_chart_compatibility,
    "covering": check_covering,
    "tubular": check_tubular,
    "trivialization_invariance": check_trivialization_invariance,
}
CHECK_IDS = tuple(CHECKS)


def check_rng(check_id: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(check_id.encode())])


def run_check(
    check_id: str,
    params: ModelParams,
    tol: Optional[ToleranceConfig] = None,
    *,
    omega_signs=PRODUCT_SIGNS,
) -> CheckReport:
    """Run one named check; ``omega_signs`` only affects graph_lagrangian (negative controls)."""
    if check_id not in CHECKS:
        raise UnknownCheckId(f"unknown check {check_id!r}; known: {', '.join(CHECK_IDS)}")
    tol = tol or ToleranceConfig()
    if tol.samples == 0:
        return CheckReport(check_id, 0, 0.0, 0.0, True, {"warning": "no samples requested; vacuous pass"})
    tr = _Tracker()
    rng = check_rng(check_id, tol.seed)
    try:
        if check_id == "graph_lagrangian":
            check_graph_lagrangian(params, tol, rng, tr, signs=omega_signs)
        else:
            CHECKS[check_id](params, tol, rng, tr)
    except Exception as exc:  # noqa: BLE001 - a crashing check is a failed check
        log.exception("check %s aborted", check_id)
        return CheckReport(check_id, tr.samples, math.inf, 0.0, False, {"error": f"{type(exc).__name__}: {exc}"})
    return tr.report(check_id)


def run_suite(
    params: ModelParams,
    tol: Optional[ToleranceConfig] = None,
    checks=None,
    **kwargs,
) -> list[CheckReport]:
    tol = tol or ToleranceConfig()
    return [run_check(cid, params, tol, **kwargs) for cid in (checks or CHECK_IDS)]


def suite_passed(reports: list[CheckReport]) -> bool:
    return all(r.passed for r in reports)


def with_samples(tol: ToleranceConfig, samples: int) -> ToleranceConfig:
    return replace(tol, samples=samples)


def tolerance_dict(tol: ToleranceConfig) -> dict:
    return asdict(tol)
