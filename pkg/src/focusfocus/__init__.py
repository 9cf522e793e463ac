"""Semi-global model of a focus-focus singularity with its fiberwise group law."""

from .core import (
    FormKind,
    InvariantPolynomial,
    ModelParams,
    PointC2,
    SectionKind,
    TimePair,
    eval_invariant,
    flow,
    hamiltonian,
    liouville,
    period_lattice,
    section,
    symplectic_form,
    travel_time,
)
from .graph import (
    BundlePoint,
    ChartId,
    GraphMap,
    GraphPoint,
    chart_contains,
    chart_embed,
    chart_transition,
    graph_map,
    graph_point,
    locate,
    project_pr,
    tubular_G,
    tubular_phi,
)
from .group import (
    Branch,
    CStarDirection,
    add,
    add_formal,
    add_via_liouville,
    change_section,
    cstar_iso,
    identity,
    inverse,
    recover_partials,
    select_branch,
)
from .neighborhood import CanonicalPoint, Direction, Region, classify, deck, normalize, same_point
from .verify import CheckReport, ToleranceConfig, jacobian, run_check, run_suite

__version__ = "0.1.0"
