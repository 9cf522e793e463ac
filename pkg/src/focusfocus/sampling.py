"""Random points of X_S, same-fiber tuples and chart coordinates.

All samplers take a numpy Generator so every caller controls reproducibility.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .core import ModelParams, PointC2
from .graph import ChartId, Coords, chart_contains
from .neighborhood import CanonicalPoint, normalize


def _phase(rng: np.random.Generator) -> complex:
    return cmath.exp(1j * rng.uniform(-math.pi, math.pi))


def sample_fiber(rng: np.random.Generator, params: ModelParams, r_min: float = 1e-3, r_max: float = 0.9) -> complex:
    """Uniform (by area) in the annulus r_min*eps <= |b| <= r_max*eps."""
    lo, hi = (r_min * params.epsilon) ** 2, (r_max * params.epsilon) ** 2
    return math.sqrt(rng.uniform(lo, hi)) * _phase(rng)


def sample_on_fiber(rng: np.random.Generator, b: complex, params: ModelParams) -> CanonicalPoint:
    """A canonical point on fiber b; on b = 0 a regular point of the singular fiber."""
    s1, _ = params.s_partials(b)
    if b == 0:
        if rng.uniform() < 0.5:
            return normalize(PointC2(rng.uniform(0.05, 1.0) * math.exp(s1) * _phase(rng), 0.0), params)
        return normalize(PointC2(0.0, rng.uniform(0.05, 0.95) * _phase(rng)), params)
    # log|q| uniform between the two gluing circles |p| = e^{S1} and |q| = 1
    lo = math.log(abs(b)) - s1
    q = math.exp(rng.uniform(lo, 0.0)) * _phase(rng)
    return normalize(PointC2(-b.conjugate() / q.conjugate(), q), params)


def sample_tuple(rng: np.random.Generator, params: ModelParams, n: int, singular: bool = False) -> list[CanonicalPoint]:
    b = 0j if singular else sample_fiber(rng, params)
    return [sample_on_fiber(rng, b, params) for _ in range(n)]


def sample_x_point(rng: np.random.Generator, params: ModelParams) -> PointC2:
    """A point of X = {|pq| < eps} with moduli of order one."""
    p = rng.uniform(0.1, 2.0) * _phase(rng)
    q = rng.uniform(0.0, 0.9) * params.epsilon / abs(p) * _phase(rng)
    return PointC2(p, q)


def chart_radii(chart: ChartId, params: ModelParams) -> tuple[float, float, float]:
    """Coordinate moduli bounding each chart domain, for rejection sampling."""
    ed = math.exp(params.delta + params.max_abs_s1())
    if chart is ChartId.E3:
        return ed, ed, params.epsilon * ed * ed
    return ed, ed, ed


def _disc(rng: np.random.Generator, radius, n: int) -> np.ndarray:
    """n points uniform in the disc(s) of the given radius (scalar or array)."""
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(1j * rng.uniform(-math.pi, math.pi, size=n))


def sample_chart_batch(
    rng: np.random.Generator,
    chart: ChartId,
    params: ModelParams,
    n: int,
    margin: float = 0.1,
    max_rounds: int = 1000,
) -> list[Coords]:
    """n coordinate triples in the chart's domain shrunk by ``margin``, by rejection.

    Two coordinates are uniform in their bounding discs; the third, picked at
    random per candidate, is drawn from the disc that the fiber bound
    |abc| < epsilon leaves open.  This keeps acceptance high in every chart.
    """
    radii = np.array(chart_radii(chart, params))
    out: list[Coords] = []
    batch = 256
    cols = np.arange(batch)
    for _ in range(max_rounds):
        z = np.stack([_disc(rng, r, batch) for r in radii])
        k = rng.integers(3, size=batch)
        others = np.abs(z).prod(axis=0) / np.where(np.abs(z[k, cols]) > 0, np.abs(z[k, cols]), 1.0)
        cap = np.minimum(radii[k], params.epsilon / np.maximum(others, 1e-300))
        z[k, cols] = _disc(rng, cap, batch)
        a, b, c = z
        for coords in zip(a.tolist(), b.tolist(), c.tolist()):
            if chart_contains(chart, coords, params, margin):
                out.append(coords)
                if len(out) == n:
                    return out
    raise RuntimeError(f"could not sample {n} points of {chart.value}")


def sample_chart_coords(rng: np.random.Generator, chart: ChartId, params: ModelParams, margin: float = 0.1) -> Coords:
    return sample_chart_batch(rng, chart, params, 1, margin)[0]


def sample_rows(rng: np.random.Generator, params: ModelParams, count: int, per_fiber: int = 2) -> list[CanonicalPoint]:
    """count canonical points, consecutive groups of ``per_fiber`` sharing a regular fiber."""
    out: list[CanonicalPoint] = []
    while len(out) < count:
        b = sample_fiber(rng, params)
        out.extend(sample_on_fiber(rng, b, params) for _ in range(per_fiber))
    return out[:count]
