import math

import numpy as np
import pytest

from beztopo import selfx
from beztopo.fixtures import (EQUILATERAL_ANGLES, EQUILATERAL_WITNESS_ST,
                              equilateral_polygon)
from beztopo.geometry import BezierCurve, ControlPolygon
from beztopo.selfx import (EdgeVectors, GeneratorConfig, SphericalEdgeParams,
                           closure_defect_F, eval_S, eval_S_quotient, eval_SF,
                           generate_counterexample, witness_grid_oracle)


def random_interior_pair(rng):
    s = rng.uniform(0.02, 0.6)
    t = rng.uniform(0.02, min(0.6, 0.95 - s))
    if abs((1 - s) - t) < 1e-3:
        t *= 0.5
    return float(s), float(t)


class TestFunctionalOracle:
    def test_triple_sum_matches_difference_quotient(self, rng):
        # the principal correctness oracle for the polynomial form
        for _ in range(200):
            ctrl = rng.normal(size=(5, 3)) * rng.uniform(0.5, 3)
            curve = BezierCurve(np.clip(ctrl, -10, 10))
            q = np.diff(curve.control_points, axis=0)
            s, t = random_interior_pair(rng)
            direct = eval_S_quotient(curve, s, t)
            poly = eval_S(q, s, t)
            scale = max(1.0, float(np.abs(direct).max()))
            assert np.abs(direct - poly).max() / scale < 1e-9

    def test_higher_degrees_also_agree(self, rng):
        for degree in (6, 10):
            ctrl = rng.normal(size=(degree + 1, 3))
            curve = BezierCurve(ctrl)
            q = np.diff(ctrl, axis=0)
            s, t = random_interior_pair(rng)
            direct = eval_S_quotient(curve, s, t)
            poly = eval_S(q, s, t)
            assert np.abs(direct - poly).max() / max(1.0, np.abs(direct).max()) < 1e-9

    def test_straight_line_curve_has_no_root(self):
        # an injective curve: ||S|| stays positive over the whole domain
        ctrl = np.array([[float(i), 0.0, 0.0] for i in range(5)])
        q = np.diff(ctrl, axis=0)
        for s in np.linspace(0, 0.95, 20):
            for t in np.linspace(0, 0.95 - s, 15):
                if (s, t) == (0.0, 0.0):
                    continue
                assert float(np.linalg.norm(eval_S(q, s, t))) > 1e-3

    def test_scale_equivariance(self, rng):
        q = rng.normal(size=(6, 3))
        s, t = random_interior_pair(rng)
        lam = 3.7
        assert np.allclose(eval_S(lam * q, s, t), lam * eval_S(q, s, t), atol=1e-12)

    def test_translation_invariance(self, rng):
        poly = ControlPolygon.from_open_vertices(rng.normal(size=(6, 3)))
        shifted = ControlPolygon.from_open_vertices(poly.as_array()[:-1] + np.array([5, -3, 2]))
        s, t = random_interior_pair(rng)
        a = eval_S(EdgeVectors.from_polygon(poly), s, t)
        b = eval_S(EdgeVectors.from_polygon(shifted), s, t)
        assert np.allclose(a, b, atol=1e-12)


class TestEquilateralFixture:
    def test_recorded_parameters_are_not_a_clean_root(self, equilateral_polygon):
        # Regression pin: at the recorded (s, t) the cleanly-evaluated
        # functional is ~0.096, far from zero.  The recorded residual of
        # ~4.2e-4 is reproducible only by a summation whose accumulators
        # carry over between passes, so it documents the recorded data,
        # not this functional.  See reproduce-equilateral for the honest
        # reporting of that mismatch.
        q = equilateral_polygon.edge_vectors()
        v = eval_S(q, *EQUILATERAL_WITNESS_ST)
        assert np.abs(v - np.array([0.0029944, 0.0030313, -0.0959422])).max() < 1e-6

    def test_true_near_intersection_of_fixture(self, equilateral_polygon):
        # where the clean functional actually bottoms out for this polygon
        gs, gt, val = witness_grid_oracle(equilateral_polygon)
        assert abs(gs - 0.3161) < 0.02 and abs(gt - 0.0106) < 0.02
        q = equilateral_polygon.edge_vectors()
        assert float(np.linalg.norm(eval_S(q, 0.31614, 0.01060))) < 5e-4

    def test_closure_defect_at_recorded_angles(self):
        params = SphericalEdgeParams.from_vector(np.array(EQUILATERAL_ANGLES), 6)
        assert closure_defect_F(params) == pytest.approx(2.2328657539594232e-05, rel=1e-9)

    def test_angle_reconstruction_matches_fixture_points(self, equilateral_polygon):
        # the angle vector regenerates the published points to 4 decimals,
        # except the known inconsistent coordinate (vertex 3, x)
        params = SphericalEdgeParams.from_vector(np.array(EQUILATERAL_ANGLES), 6)
        rebuilt = params.polygon().as_array()
        published = equilateral_polygon.as_array()
        diff = np.abs(rebuilt - published)
        diff[3, 0] = 0.0
        assert diff.max() < 5.1e-5
        assert abs(rebuilt[3, 0] - (-0.1729)) < 5e-5
        assert abs(published[3, 0] - (-0.1792)) < 1e-12


class TestClosureDefect:
    def test_antipodal_pair_is_exact_zero(self, rng):
        phi, theta = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        params = SphericalEdgeParams(phi=np.array([phi]), theta=np.array([theta]),
                                     s=0.3, t=0.2)
        assert closure_defect_F(params) == pytest.approx(0.0, abs=1e-12)

    def test_sixty_degree_pair_by_hand(self):
        # q0, q1 unit vectors 60 degrees apart: ||q0 + q1||^2 = 2 + 2 cos 60 = 3
        params = SphericalEdgeParams(phi=np.array([math.pi / 2, math.pi / 2]),
                                     theta=np.array([0.0, math.pi / 3]),
                                     s=0.3, t=0.2)
        assert closure_defect_F(params) == pytest.approx(2.0, abs=1e-12)


class TestSphericalParams:
    def test_edges_unit_and_closing(self, rng):
        x = rng.uniform(0, 3, 12)
        params = SphericalEdgeParams.from_vector(x, 6)
        q = params.edges()
        assert np.abs(np.linalg.norm(q[:5], axis=1) - 1.0).max() < 1e-12
        assert np.abs(q.sum(axis=0)).max() < 1e-12

    def test_angles_wrap(self, rng):
        x = rng.uniform(0, 3, 12)
        params = SphericalEdgeParams.from_vector(x, 6)
        wrapped = SphericalEdgeParams(phi=params.phi + 2 * math.pi,
                                      theta=params.theta - 2 * math.pi,
                                      s=params.s, t=params.t)
        assert np.abs(params.edges() - wrapped.edges()).max() < 1e-9

    def test_polygon_closure_exact(self, rng):
        params = SphericalEdgeParams.from_vector(rng.uniform(0, 3, 12), 6)
        poly = params.polygon()
        assert poly.vertices[0] == poly.vertices[-1]

    def test_vector_round_trip(self, rng):
        x = rng.uniform(0, 3, 12)
        assert np.array_equal(SphericalEdgeParams.from_vector(x, 6).to_vector(), x)


class TestSF:
    def test_sum_of_parts(self, rng):
        for _ in range(30):
            params = SphericalEdgeParams.from_vector(rng.uniform(-4, 4, 12), 6)
            sf = eval_SF(params)
            s_norm = float(np.linalg.norm(eval_S(params.edges(), params.s, params.t)))
            f = closure_defect_F(params)
            assert sf == pytest.approx(s_norm + f, rel=1e-12, abs=1e-12)
            assert sf >= s_norm - 1e-15
            assert sf >= f - 1e-15


class TestGenerator:
    def test_finds_counterexample(self):
        result = generate_counterexample(degree=6, restarts=4, seed=0)
        assert result.found
        report = result.report
        assert report.sf <= 5e-4
        poly = report.polygon
        assert poly.vertices[0] == poly.vertices[-1]          # exact closure
        assert report.edge_length_spread <= 1e-3
        w = report.witness
        assert w.s >= 0 and w.t >= 0 and w.s + w.t < 1
        assert w.s + w.t >= GeneratorConfig().min_seam_separation
        # witness residual is recomputable from the stored polygon
        recomputed = float(np.linalg.norm(eval_S(poly.edge_vectors(), w.s, w.t)))
        assert recomputed == pytest.approx(w.residual, abs=1e-9)
        # geometric meaning: gap ~= n |(1-s) - t| * residual
        bound = poly.degree * abs((1 - w.s) - w.t) * w.residual + 1e-9
        assert w.gap <= bound + 1e-9

    def test_deterministic(self):
        a = generate_counterexample(degree=6, restarts=3, seed=5)
        b = generate_counterexample(degree=6, restarts=3, seed=5)
        assert a.found == b.found
        assert a.best_sf == b.best_sf
        assert [r.sf for r in a.records] == [r.sf for r in b.records]
        if a.found:
            assert a.report.to_dict() == b.report.to_dict()

    def test_not_found_carries_best_sf(self):
        result = generate_counterexample(degree=4, restarts=1, seed=0)
        assert not result.found
        assert result.report is None
        assert math.isfinite(result.best_sf)
        assert result.records[0].reason != "accepted"

    def test_rejection_rule_records_unit_objective(self):
        result = generate_counterexample(degree=4, restarts=1, seed=0)
        rec = result.records[0]
        assert rec.s + rec.t >= 1.0
        assert rec.effective_sf == 1.0

    def test_grid_oracle_confirms_generated_witness(self):
        result = generate_counterexample(degree=6, restarts=4, seed=0)
        assert result.found
        w = result.report.witness
        gs, gt, val = witness_grid_oracle(result.report.polygon)
        assert max(abs(gs - w.s), abs(gt - w.t)) <= 0.02
        assert val <= 6 * 5e-4 + 0.05  # ratio is n * ||S|| up to grid quantization

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            generate_counterexample(degree=3)
        with pytest.raises(ValueError):
            generate_counterexample(degree=6, restarts=0)
