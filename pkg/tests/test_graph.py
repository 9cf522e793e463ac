import math

import numpy as np
import pytest

from focusfocus.core import ModelParams, PointC2
from focusfocus.errors import NotInOverlap, NotOnGraph, OutsideChartDomain, ZeroThirdCoordinate
from focusfocus.graph import (
    ChartId,
    GraphMap,
    GraphPoint,
    chart_contains,
    chart_embed,
    chart_transition,
    check_on_graph,
    graph_map,
    graph_point,
    invert_embedding,
    locate,
    project_pr,
    transition_by_inversion,
    tubular_G,
    tubular_phi,
)
from focusfocus.group import add, identity
from focusfocus.neighborhood import CanonicalPoint, normalize, quotient_distance
from focusfocus.verify import origin_jacobian_pair
from focusfocus import sampling

from conftest import pt_close

S0 = ModelParams().invariant
E02 = ModelParams(epsilon=0.2, delta=0.3)


def close(u, v, tol=1e-12):
    return max(abs(complex(a) - complex(b)) for a, b in zip(u, v)) <= tol


class TestGraphMaps:
    def test_origin(self):
        assert graph_map(GraphMap.F1, (0, 0, 0), S0) == (0,) * 6

    def test_f1(self):
        assert close(graph_map(GraphMap.F1, (0.5, 0.5, 0.5), S0), (0.5, -0.25, 0.5, -0.25, 0.25, -0.5))

    def test_f2(self):
        assert close(graph_map(GraphMap.F2, (0.5, 0.5, 0.5), S0), (-0.25, 0.5, -0.25, 0.5, -0.5, 0.25))

    def test_third_pair_is_formal_sum(self):
        from focusfocus.group import Branch, add_formal

        coords = (0.3 + 0.1j, -0.2 + 0.4j, 0.5 - 0.3j)
        params = ModelParams(0.2, 0.3)
        for which, branch in ((GraphMap.F1, Branch.SIGMA_ONE), (GraphMap.F2, Branch.SIGMA_TWO)):
            v = graph_map(which, coords, S0)
            x, y, z = PointC2(v[0], v[1]), PointC2(v[2], v[3]), PointC2(v[4], v[5])
            assert pt_close(add_formal(x, y, branch, params), z.p, z.q, 1e-15)


class TestChartDomains:
    def test_e1_inside(self):
        assert chart_contains(ChartId.E1, (0.5, 0.5, 0.5), E02)

    def test_e3(self):
        assert chart_contains(ChartId.E3, (1, 1, 0.05j), E02)

    def test_e1_boundary(self):
        assert not chart_contains(ChartId.E1, (1, 0.5, 0.5), E02)

    def test_embed_outside(self, zero_params):
        with pytest.raises(OutsideChartDomain):
            chart_embed(ChartId.E1, (1, 0.5, 0.5), zero_params)


class TestEmbeddings:
    def test_f1(self):
        gp = chart_embed(ChartId.E1, (0.5, 0.5, 0.5), E02)
        assert pt_close(gp.x, 0.5, -0.25) and pt_close(gp.y, 0.5, -0.25) and pt_close(gp.z, 0.25, -0.5)

    def test_f3_is_identity_section(self, zero_params):
        c = 0.03 - 0.04j
        gp = chart_embed(ChartId.E3, (1, 1, c), zero_params)
        for pt in (gp.x, gp.y, gp.z):
            assert pt_close(pt, 1, -c, 1e-15)

    def test_closure_fiber(self, zero_params):
        gp = chart_embed(ChartId.E1, (0, 0, 0.4), zero_params)
        assert tuple(gp.x) == (0, 0) and tuple(gp.y) == (0, 0)
        assert pt_close(gp.z, 0, -0.4)
        assert gp.is_closure_point

    def test_check_on_graph(self, zero_params):
        x = PointC2(0.9, 0.1)
        check_on_graph(GraphPoint(x, x, add(x, x, zero_params)), zero_params)
        with pytest.raises(NotOnGraph):
            check_on_graph(GraphPoint(x, x, x), zero_params)


class TestLocate:
    def test_double_point(self, any_params):
        s = CanonicalPoint(0, 0)
        hits = locate(GraphPoint(s, s, s), any_params)
        assert sorted(c.value for c, _ in hits) == ["E1", "E2"]
        assert all(coords == (0, 0, 0) for _, coords in hits)

    def test_identity_triple(self, any_params):
        b = 0.03 + 0.02j
        e = identity(b, any_params)
        hits = locate(GraphPoint(e, e, e), any_params)
        assert [c for c, _ in hits] == [ChartId.E3]
        assert close(hits[0][1], (1, 1, b), 1e-12) or any_params.invariant != S0

    def test_generic_interior(self, any_params, rng):
        for _ in range(50):
            coords = sampling.sample_chart_coords(rng, ChartId.E1, any_params)
            hits = dict(locate(chart_embed(ChartId.E1, coords, any_params), any_params))
            assert close(hits[ChartId.E1], coords, 1e-11)

    def test_graph_point_builder(self, zero_params):
        x = PointC2(0.9, 0.1)
        gp = graph_point(x, x, zero_params)
        assert pt_close(gp.z, 0.81, 0.1 / 0.9)


class TestProjection:
    def test_projection(self):
        x, y = PointC2(0.5, -0.25), PointC2(0.5, -0.25)
        assert project_pr(GraphPoint(x, y, PointC2(0.25, -0.5))) == (x, y)

    def test_closure_fiber_projects_to_ss(self, zero_params):
        gp = chart_embed(ChartId.E1, (0, 0, 0.2j), zero_params)
        assert [tuple(p) for p in project_pr(gp)] == [(0, 0), (0, 0)]

    def test_injective_on_samples(self, any_params, rng):
        images = []
        for _ in range(1000):
            x, y = sampling.sample_tuple(rng, any_params, 2)
            gp = graph_point(x, y, any_params)
            images.append(np.r_[gp.x.as_real(), gp.y.as_real()])
        arr = np.array(images)
        d = np.abs(arr[:, None, :] - arr[None, :, :]).max(axis=2)
        np.fill_diagonal(d, np.inf)
        assert d.min() > 1e-9


class TestTransitions:
    def test_phi_example(self):
        assert close(tubular_phi((0.1, 0.2, 1)), (-0.2, -0.1, 1))

    def test_phi_involution(self):
        c = (0.1 + 0.2j, -0.3j, 0.8 - 0.1j)
        assert close(tubular_phi(tubular_phi(c)), c, 1e-15)

    def test_phi_zero_section(self):
        assert close(tubular_phi((0, 0, 0.5)), (0, 0, 2))

    def test_phi_zero_c(self):
        with pytest.raises(ZeroThirdCoordinate):
            tubular_phi((0.1, 0.1, 0))

    def test_e1_to_e6_matches_inversion(self, any_params):
        # the overlap sits at |c| just below e^{-S1}
        coords = (0.1, 0.2, 0.9 * math.exp(-any_params.s_partials(0j)[0]))
        closed = chart_transition(ChartId.E1, ChartId.E6, coords, any_params)
        assert close(closed, transition_by_inversion(ChartId.E1, ChartId.E6, coords, any_params), 1e-12)
        assert close(chart_transition(ChartId.E6, ChartId.E1, closed, any_params), coords, 1e-15)

    def test_e2_to_e6_identity(self, zero_params):
        coords = (0.1, 0.2, 0.95)
        assert close(chart_transition(ChartId.E2, ChartId.E6, coords, zero_params), coords, 0)

    def test_not_in_overlap(self, zero_params):
        with pytest.raises(NotInOverlap):
            chart_transition(ChartId.E1, ChartId.E6, (0.1, 0.2, 0.1), zero_params)
        # the printed example point c = 1 lies on E1's open boundary
        with pytest.raises(NotInOverlap):
            chart_transition(ChartId.E1, ChartId.E6, (0.1, 0.2, 1), zero_params)


class TestTubular:
    def test_zero_section(self):
        g = tubular_G(ChartId.E1, (0, 0, 0.3))
        assert g.lam == (1, -0.3) and g.on_zero_section

    def test_example(self):
        g = tubular_G(ChartId.E1, (0.1, 0.2, 0.5))
        assert g.lam == (1, -0.5)
        assert close(g.v, (0.2, -0.1, 0.1, -0.05), 1e-15)
        assert g.is_tautological()

    def test_gluing(self):
        c = (0.1 + 0.2j, -0.3j, 0.8 - 0.1j)
        assert tubular_G(ChartId.E1, c).distance(tubular_G(ChartId.E6, tubular_phi(c))) < 1e-15

    def test_outside(self, zero_params):
        with pytest.raises(OutsideChartDomain):
            tubular_G(ChartId.E3, (1, 1, 0.01))


class TestDoublePoint:
    def test_f1_linear_part(self, zero_params):
        from focusfocus.verify import jacobian
        from focusfocus.graph import graph_map_real

        J = jacobian(lambda v: graph_map_real(GraphMap.F1, v, S0), np.zeros(6))
        # a -> conj onto slot 1 (p of x), b -> conj onto slot 3 (p of y), c -> negation onto slot 6 (q of z)
        want = np.zeros((12, 6))
        want[0, 0], want[1, 1] = 1, -1
        want[4, 2], want[5, 3] = 1, -1
        want[10, 4], want[11, 5] = -1, -1
        assert np.abs(J - want).max() <= 1e-12

    def test_unit_singular_values(self, zero_params):
        sv = np.linalg.svd(origin_jacobian_pair(zero_params, 1e-6), compute_uv=False)
        assert np.abs(sv - 1).max() <= 1e-12
