"""Acceptance criteria, one test each, with every tolerance pinned here."""

import cmath

import pytest

from focusfocus import group
from focusfocus.core import InvariantPolynomial, ModelParams
from focusfocus.graph import GraphPoint, locate
from focusfocus.neighborhood import CanonicalPoint
from focusfocus.verify import ToleranceConfig, run_check

from conftest import GENERIC_S, record_criterion

ZERO = ModelParams(epsilon=0.1, delta=0.3, invariant=InvariantPolynomial.zero())
CUBIC = ModelParams(epsilon=0.1, delta=0.3, invariant=GENERIC_S)

# pinned acceptance tolerances and sample sizes
TOL = ToleranceConfig(
    fd_step=1e-6,
    form_tol=1e-4,
    alg_tol=1e-11,
    rank_tol=1e-8,
    samples=1000,
    seed=42,
    flow_tol=1e-6,
    pullback_tol=1e-5,
    oracle_tol=1e-9,
    recover_tol=1e-6,
    closure_tol=1e-9,
    continuity_tol=1e-3,
    bundle_tol=1e-12,
    unit_sv_tol=1e-12,
    separation_tol=1e-9,
    coherence_tol=1e-10,
)


def _summary(reports):
    return "; ".join(f"{r.check_id}[{'S=0' if p is ZERO else 'cubic'}] {r.max_error:.2e}<={r.threshold:.0e}" for p, r in reports)


def _run(criterion, name, checks, params_list=(ZERO, CUBIC), tol=TOL):
    reports = [(p, run_check(c, p, tol)) for c in checks for p in params_list]
    ok = all(r.passed for _, r in reports)
    record_criterion(criterion, name, ok, _summary(reports))
    return reports, ok


def test_c01_flow_field():
    reports, ok = _run(1, "flow_field", ["flow_field"], (ZERO,))
    assert ok and reports[0][1].samples == 1000 and reports[0][1].threshold == 1e-6


def test_c02_liouville_pullback():
    reports, ok = _run(2, "liouville_pullback", ["liouville_pullback"])
    assert ok and all(r.samples == 1000 and r.threshold == 1e-5 for _, r in reports)


def test_c03_group_laws():
    reports, ok = _run(3, "group_laws", ["group_laws"], (CUBIC,))
    r = reports[0][1]
    metrics = r.details["metrics"]
    assert r.samples == 10_000
    for law in ("commutativity", "associativity", "identity", "inverse"):
        assert metrics[law]["threshold"] == 1e-11 and metrics[law]["pass"]
    assert metrics["oracle_agreement"]["threshold"] == 1e-9
    assert ok


def test_c04_selection_exclusive():
    reports, ok = _run(4, "selection_exclusive", ["selection_exclusive"], (CUBIC,))
    assert ok and reports[0][1].samples == 10_000 and reports[0][1].max_error == 0


def test_c05_graph_lagrangian():
    reports, ok = _run(5, "graph_lagrangian", ["graph_lagrangian"])
    assert ok and all(r.samples == 6 * 200 and r.threshold == 1e-4 for _, r in reports)


def test_c06_graph_immersion():
    reports, ok = _run(6, "graph_immersion", ["graph_immersion"])
    assert ok and all(r.details["smallest_singular_value"] >= 1e-8 for _, r in reports)


def test_c07_double_point():
    reports, ok = _run(7, "double_point", ["double_point"])
    for p, r in reports:
        assert r.details["rank"] == 12
        assert r.details["double_point_charts"] == ["E1", "E2"]
    zero = reports[0][1]
    assert abs(zero.details["smallest_singular_value"] - 1.0) <= 1e-12
    s = CanonicalPoint(0, 0)
    hits = locate(GraphPoint(s, s, s), ZERO)
    assert [(c.value, coords) for c, coords in hits] == [("E1", (0, 0, 0)), ("E2", (0, 0, 0))]
    assert ok


def test_c08_chart_compatibility_and_deck():
    reports, ok = _run(8, "chart_compatibility+deck_symplectic", ["chart_compatibility", "deck_symplectic"])
    for _, r in reports:
        m = r.details["metrics"]
        if r.check_id == "chart_compatibility":
            assert m["embedding_after_transition"]["threshold"] == 1e-11
            assert r.details["overlap_pairs_checked"] > 0
        else:
            assert m["deck_pullback_minus_omega"]["threshold"] == 1e-5
    assert ok


def test_c09_covering():
    reports, ok = _run(9, "covering", ["covering"])
    assert ok and all(r.samples == 1000 for _, r in reports)


def test_c10_tubular():
    reports, ok = _run(10, "tubular", ["tubular"])
    for _, r in reports:
        m = r.details["metrics"]
        assert m["G2_phi_minus_G1"]["threshold"] == 1e-12
        assert m["tautological_violations"]["max_error"] == 0
        assert m["zero_section_mismatches"]["max_error"] == 0
        assert r.details["injectivity_pairs"] == 1000
    assert ok


def test_c11_period_closure_and_recover():
    reports, ok = _run(11, "period_closure+recover-s", ["period_closure"])
    for _, r in reports:
        assert r.details["metrics"]["recovered_partials"]["threshold"] == 1e-6
    assert ok


def test_c12_singular_continuity():
    reports, ok = _run(12, "singular_continuity", ["singular_continuity"])
    assert ok and all(r.threshold == 1e-3 for _, r in reports)


def test_c13_negative_controls(monkeypatch):
    small = ToleranceConfig(samples=100, seed=42)
    flipped = [run_check("graph_lagrangian", ZERO, small, omega_signs=signs) for signs in ((1, 1, 1), (1, -1, 1))]

    def perturbed(s1, s2):
        f_p, f_q = cmath.exp(complex(-s1, -s2)), cmath.exp(complex(s1, -s2))
        return f_p, f_q * (1 + 1e-2)

    monkeypatch.setattr(group, "_add1_factors", perturbed)
    broken = {c: run_check(c, CUBIC, small) for c in ("group_laws", "chart_compatibility", "covering")}
    monkeypatch.undo()
    restored = run_check("group_laws", CUBIC, small)

    flip_caught = all(not r.passed for r in flipped)
    perturb_caught = any(not r.passed for r in broken.values())
    ok = flip_caught and perturb_caught and restored.passed
    detail = (
        f"flipped signs fail graph_lagrangian: {flip_caught}; "
        f"perturbed Add1 fails {sorted(c for c, r in broken.items() if not r.passed)}"
    )
    record_criterion(13, "negative_controls", ok, detail)
    assert ok
