"""Figure data for the (|p|, |q|) projection of the model neighborhood.

Figures are emitted as polylines (curve_id, abs_p, abs_q); an SVG rendering
of the same polylines is optional.  Shaded regions are drawn by their
boundary curves only.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .core import ModelParams


class FigureKind(Enum):
    H1_FLOW = "h1-flow"
    PQ_PROJECTION = "pq-projection"
    CHARTS = "charts"


@dataclass(frozen=True)
class Polyline:
    curve_id: str
    abs_p: np.ndarray
    abs_q: np.ndarray


CSV_HEADER = ("curve_id", "abs_p", "abs_q")
DEFAULT_FIBERS = (0.02, 0.05, 0.08)


def _s1(params: ModelParams, b: complex) -> float:
    return params.s_partials(b)[0]


def level_curve(curve_id: str, modulus: float, p_lo: float, p_hi: float, n: int) -> Polyline:
    """|p| |q| = modulus for |p| in [p_lo, p_hi], log-spaced."""
    p = np.geomspace(p_lo, p_hi, n)
    return Polyline(curve_id, p, modulus / p)


def sigma2_arc(params: ModelParams, n: int, phase: float = 0.0) -> Polyline:
    """Image of {|p| = e^{S1(b)}} over fibers b = r e^{i phase}, 0 <= r < epsilon."""
    r = np.linspace(0.0, params.epsilon, n, endpoint=False)
    rad = np.array([math.exp(_s1(params, complex(x * math.cos(phase), x * math.sin(phase)))) for x in r])
    return Polyline("sigma2_arc", rad, r / rad)


def h1_flow(params: ModelParams, fibers: Iterable[float], n: int = 200) -> list[Polyline]:
    """Flow lines of H1 (e^t p, e^{-t} q): the hyperbolas |p||q| = |b| and the two axes."""
    out = [
        Polyline("singular_p_axis", np.linspace(0.0, 2.0, n), np.zeros(n)),
        Polyline("singular_q_axis", np.zeros(n), np.linspace(0.0, 2.0, n)),
    ]
    for m in fibers:
        out.append(level_curve(f"flow_{m:g}", m, m / 2.0, 2.0, n))
    return out


def pq_projection(params: ModelParams, fibers: Iterable[float], n: int = 200) -> list[Polyline]:
    """Level curves inside the model neighborhood and its two gluing boundaries."""
    eps = params.epsilon
    s1_0 = _s1(params, 0j)
    out = [
        # the sigma_1 boundary |q| = 1, where |p| = |b| < epsilon
        Polyline("sigma1_segment", np.linspace(0.0, eps, n), np.ones(n)),
        sigma2_arc(params, n),
        level_curve("x_boundary", eps, eps, math.exp(s1_0), n),
    ]
    for m in fibers:
        p_hi = math.exp(_s1(params, complex(m)))
        out.append(level_curve(f"fiber_{m:g}", m, min(m, p_hi), p_hi, n))
    return out


def charts(params: ModelParams, n: int = 200) -> list[Polyline]:
    """Boundaries of D^0 and of the strip U in the (|p|, |q|) plane (at arg b = 0)."""
    eps, dlt = params.epsilon, params.delta
    r = np.linspace(0.0, eps, n, endpoint=False)
    s1 = np.array([_s1(params, complex(x)) for x in r])
    out = [Polyline("d0_q_boundary", np.linspace(0.0, eps, n), np.ones(n))]
    for cid, shift in (("d0_p_boundary", 0.0), ("u_lower", -dlt), ("u_upper", dlt)):
        rad = np.exp(s1 + shift)
        out.append(Polyline(cid, rad, r / rad))
    out.append(level_curve("x_boundary", eps, eps, math.exp(_s1(params, 0j) + dlt), n))
    return out


def make_figure(kind: FigureKind, params: ModelParams, fibers: Optional[Iterable[float]] = None, n: int = 200):
    fibers = tuple(DEFAULT_FIBERS if fibers is None else fibers)
    if kind is FigureKind.H1_FLOW:
        return h1_flow(params, fibers, n)
    if kind is FigureKind.PQ_PROJECTION:
        return pq_projection(params, fibers, n)
    return charts(params, n)


def write_csv(lines: list[Polyline], path) -> int:
    rows = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for line in lines:
            for p, q in zip(line.abs_p, line.abs_q):
                w.writerow((line.curve_id, repr(float(p)), repr(float(q))))
                rows += 1
    return rows


def write_svg(lines: list[Polyline], path, title: str = "") -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    for line in lines:
        ax.plot(line.abs_p, line.abs_q, lw=1, label=line.curve_id)
    ax.set_xlabel("|p|")
    ax.set_ylabel("|q|")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0, top=1.2)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=6, loc="upper right")
    fig.tight_layout()
    fig.savefig(Path(path), format="svg")
    plt.close(fig)
