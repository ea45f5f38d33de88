"""Self-intersection functional for Bezier curves and the equilateral
counterexample generator.

``eval_S`` is the Andersson-style criterion: over the domain
D = {(s, t): s + t < 1, s, t >= 0, (s, t) != (0, 0)} the curve
self-intersects iff S(s, t) = 0, where S is the normalized difference
quotient (C(1-s) - C(t)) / (n ((1-s) - t)) extended to a total polynomial.
The generator searches edge directions on the unit sphere so the polygon is
equilateral and closed while S vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from . import _kernels, optimize
from .geometry import BezierCurve, ControlPolygon, Point3


@dataclass(frozen=True)
class EdgeVectors:
    """Edge vectors q_i = P_{i+1} - P_i of a polygon; r is the target edge
    length for equilateral work (1 without loss of generality: scaling the
    polygon scales S linearly and preserves its root set)."""
    q: np.ndarray
    r: float = 1.0

    @classmethod
    def from_polygon(cls, polygon: ControlPolygon, r: float = 1.0) -> "EdgeVectors":
        return cls(q=polygon.edge_vectors(), r=r)

    @property
    def count(self) -> int:
        return self.q.shape[0]

    def closure_residual(self) -> float:
        """||sum q_i||; zero when the polygon is closed."""
        return float(np.linalg.norm(self.q.sum(axis=0)))


@dataclass
class SphericalEdgeParams:
    """Search-space coordinates: n-1 unit edges via polar/azimuthal angles,
    a dependent closing edge, and the candidate parameter pair (s, t).

    Angles act through sin/cos only, so values outside the sampling box
    reconstruct the same edges (period wrap is implicit).
    """
    phi: np.ndarray
    theta: np.ndarray
    s: float
    t: float

    @property
    def edge_count(self) -> int:
        return len(self.phi) + 1

    @classmethod
    def from_vector(cls, x, n: int) -> "SphericalEdgeParams":
        x = np.asarray(x, dtype=float)
        if x.size != 2 * n:
            raise ValueError(f"expected parameter vector of length {2 * n}")
        m = n - 1
        return cls(phi=x[:m].copy(), theta=x[m:2 * m].copy(),
                   s=float(x[2 * n - 2]), t=float(x[2 * n - 1]))

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.phi, self.theta, [self.s, self.t]])

    def edges(self) -> np.ndarray:
        """All n edge vectors; the first n-1 are unit by construction and the
        last closes the polygon exactly."""
        return _kernels.edges_from_angles(self.to_vector(), self.edge_count)

    def polygon(self) -> ControlPolygon:
        """Reconstruct P0 = 0, P_{i+1} = P_i + q_i; the final vertex is
        snapped onto P0 (the dependent edge closes up to float roundoff)."""
        pts = np.vstack([np.zeros(3), np.cumsum(self.edges(), axis=0)])
        pts[-1] = pts[0]
        return ControlPolygon(pts)


@dataclass
class SelfIntersectionWitness:
    """A parameter pair evidencing a (near-)self-intersection."""
    s: float
    t: float
    residual: float            # ||S(s, t)||
    point_a: Point3            # C(1-s)
    point_b: Point3            # C(t)
    gap: float                 # ||point_a - point_b||

    def to_dict(self) -> dict:
        d = asdict(self)
        d["point_a"] = list(self.point_a.as_tuple())
        d["point_b"] = list(self.point_b.as_tuple())
        return d


def eval_S(q, s: float, t: float) -> np.ndarray:
    """The self-intersection functional as a 3-vector (total polynomial form;
    no singularity at (1-s) == t)."""
    arr = q.q if isinstance(q, EdgeVectors) else np.asarray(q, dtype=float)
    return _kernels.selfx_value(arr, float(s), float(t))


def eval_S_quotient(curve: BezierCurve, s: float, t: float) -> np.ndarray:
    """Difference-quotient form (C(1-s) - C(t)) / (n ((1-s) - t)).

    Undefined where (1-s) == t; used as the independent cross-check of
    ``eval_S``, never as its implementation.
    """
    u = 1.0 - s
    if u == t:
        raise ZeroDivisionError("difference quotient undefined at (1-s) == t")
    pts = curve.evaluate_many(np.array([u, t]))
    return (pts[0] - pts[1]) / (curve.degree * (u - t))


def closure_defect_F(params: SphericalEdgeParams) -> float:
    """| ||q_last||^2 - 1 |: zero iff the dependent closing edge is also unit."""
    q = params.edges()
    last = q[-1]
    return abs(float(last @ last) - 1.0)


def eval_SF(params: SphericalEdgeParams) -> float:
    """Combined objective ||S(s, t)|| + closure defect; zero iff the polygon
    is closed, equilateral and its curve self-intersects at (s, t)."""
    return float(_kernels.sf_value(params.to_vector(), params.edge_count))


def sf_objective(n: int):
    """Raw vectorized objective for the optimizer (packed [phi, theta, s, t])."""
    def fn(x):
        return _kernels.sf_value(x, n)
    return fn


# ---------------------------------------------------------------------------
# generator

@dataclass
class GeneratorConfig:
    epsilon_root: float = 5e-4       # acceptance residual on SF
    epsilon_edge: float = 1e-3       # equilaterality tolerance on reconstructed edges
    min_seam_separation: float = 0.05   # reject witnesses within this of the trivial corner (s+t small)
    oracle_grid: int = 500
    oracle_match: float = 0.02
    penalty_mode: bool = False       # optional smooth s+t<1 penalty instead of post-hoc rejection
    penalty_weight: float = 10.0
    simplex: optimize.SimplexConfig = field(
        default_factory=lambda: optimize.SimplexConfig(max_evals=200_000))


@dataclass
class RestartRecord:
    """One multistart column: where the search landed and why it was or was
    not accepted."""
    index: int
    sf: float                 # objective value at the minimizer
    effective_sf: float       # 1.0 when the s+t >= 1 rejection fires
    s: float
    t: float
    evals_used: int
    converged: bool
    accepted: bool
    reason: str = ""


@dataclass
class GeneratorReport:
    polygon: ControlPolygon
    witness: SelfIntersectionWitness
    sf: float
    closure_defect: float         # | ||q_last|| - 1 | on the reconstructed edges
    edge_length_spread: float     # max | ||q_i|| - 1 |
    seed: int
    restart_index: int

    def to_dict(self) -> dict:
        return {
            "polygon": {"degree": self.polygon.degree,
                        "points": [list(v.as_tuple()) for v in self.polygon.vertices]},
            "witness": self.witness.to_dict(),
            "sf": self.sf,
            "closure_defect": self.closure_defect,
            "edge_length_spread": self.edge_length_spread,
            "seed": self.seed,
            "restart_index": self.restart_index,
        }


@dataclass
class GenerationResult:
    """Best accepted report (None when no restart qualified) plus the full
    multistart record."""
    report: Optional[GeneratorReport]
    best_sf: float
    records: list[RestartRecord]
    degree: int
    restarts: int
    seed: int

    @property
    def found(self) -> bool:
        return self.report is not None


def sample_start(rng: np.random.Generator, n: int) -> np.ndarray:
    """One random start: phi ~ U(0, pi), theta ~ U(0, 2 pi), s ~ U(0, 1),
    t ~ U(0, 1 - s)."""
    phi = rng.uniform(0.0, math.pi, n - 1)
    theta = rng.uniform(0.0, 2.0 * math.pi, n - 1)
    s0 = rng.uniform(0.0, 1.0)
    t0 = rng.uniform(0.0, 1.0 - s0)
    return np.concatenate([phi, theta, [s0, t0]])


def witness_grid_oracle(polygon: ControlPolygon, grid: int = 500,
                        min_seam_separation: float = 0.05):
    """Brute-force witness locator: minimize ||C(1-s) - C(t)|| / |(1-s) - t|
    over a grid on the open (s, t) triangle.

    Grid points with |(1-s) - t| < 1e-6 are skipped (removable singularity)
    as are points with s + t below the seam floor, where the closed curve's
    start/end identification would always win.  Returns (s, t, value).
    """
    curve = BezierCurve.from_polygon(polygon)
    h = np.arange(1, grid + 1) / (grid + 1)
    cs = curve.evaluate_many(1.0 - h)    # C(1-s) over the s grid
    ct = curve.evaluate_many(h)          # C(t) over the t grid
    diff = cs[:, None, :] - ct[None, :, :]
    gaps = np.linalg.norm(diff, axis=2)
    denom = np.abs((1.0 - h)[:, None] - h[None, :])
    ss = h[:, None] + h[None, :]
    invalid = (ss >= 1.0) | (ss < min_seam_separation) | (denom < 1e-6)
    ratio = np.where(invalid, np.inf, gaps / np.maximum(denom, 1e-300))
    k = int(np.argmin(ratio))
    i, j = divmod(k, grid)
    return float(h[i]), float(h[j]), float(ratio[i, j])


def _witness_for(params: SphericalEdgeParams, polygon: ControlPolygon) -> SelfIntersectionWitness:
    curve = BezierCurve.from_polygon(polygon)
    residual = float(np.linalg.norm(eval_S(params.edges(), params.s, params.t)))
    pa = curve.evaluate(1.0 - params.s)
    pb = curve.evaluate(params.t)
    return SelfIntersectionWitness(s=params.s, t=params.t, residual=residual,
                                   point_a=pa, point_b=pb, gap=(pa - pb).norm())


def generate_counterexample(degree: int = 6, restarts: int = 10, seed: int = 0,
                            config: GeneratorConfig | None = None) -> GenerationResult:
    """Multistart search for a closed equilateral polygon whose Bezier curve
    self-intersects.

    Starts are drawn from independent per-restart streams derived from
    (seed, restart index), so runs are reproducible and restarts could be
    evaluated concurrently without changing results.  A restart is accepted
    only if its objective value is at or below ``epsilon_root``, its (s, t)
    lies inside the domain (away from the trivial closure corner), the
    reconstructed polygon is simple and equilateral within ``epsilon_edge``,
    and the grid oracle relocates the witness within ``oracle_match``.
    """
    from .knot import polygon_is_simple  # local import: knot builds on geometry only

    if degree < 4:
        raise ValueError("generator needs degree >= 4")
    if restarts < 1:
        raise ValueError("need at least one restart")
    cfg = config or GeneratorConfig()
    n = degree

    base = sf_objective(n)
    if cfg.penalty_mode:
        w = cfg.penalty_weight

        def objective(x):
            return base(x) + w * max(0.0, x[2 * n - 2] + x[2 * n - 1] - 1.0) ** 2
    else:
        objective = base

    records: list[RestartRecord] = []
    best: Optional[GeneratorReport] = None
    best_sf_seen = math.inf

    for i in range(restarts):
        rng = np.random.default_rng((seed, i))
        x0 = sample_start(rng, n)
        res = optimize.minimize(objective, x0, cfg.simplex)
        params = SphericalEdgeParams.from_vector(res.argmin, n)
        s, t = params.s, params.t

        rejected = s + t >= 1.0
        effective = 1.0 if rejected else res.fmin
        best_sf_seen = min(best_sf_seen, effective)
        rec = RestartRecord(index=i, sf=res.fmin, effective_sf=effective, s=s, t=t,
                            evals_used=res.evals_used, converged=res.converged,
                            accepted=False)
        records.append(rec)

        if rejected:
            rec.reason = "rejected: s + t >= 1"
            continue
        if res.fmin > cfg.epsilon_root:
            rec.reason = f"objective {res.fmin:.3e} above {cfg.epsilon_root:.1e}"
            continue
        if s < 0.0 or t < 0.0:
            rec.reason = "witness outside domain (negative parameter)"
            continue
        if s + t < cfg.min_seam_separation:
            rec.reason = "witness at the trivial closure corner"
            continue

        polygon = params.polygon()
        q = polygon.edge_vectors()
        lens = np.linalg.norm(q, axis=1)
        spread = float(np.max(np.abs(lens - 1.0)))
        if spread > cfg.epsilon_edge:
            rec.reason = f"edge spread {spread:.3e} above {cfg.epsilon_edge:.1e}"
            continue
        simplicity = polygon_is_simple(polygon)
        if not simplicity.simple:
            rec.reason = f"polygon not simple (segments {simplicity.witness})"
            continue
        gs, gt, _ = witness_grid_oracle(polygon, cfg.oracle_grid, cfg.min_seam_separation)
        if max(abs(gs - s), abs(gt - t)) > cfg.oracle_match:
            rec.reason = (f"grid oracle found ({gs:.4f}, {gt:.4f}), "
                          f"not within {cfg.oracle_match} of ({s:.4f}, {t:.4f})")
            continue

        rec.accepted = True
        rec.reason = "accepted"
        if best is None or effective < best.sf:
            best = GeneratorReport(
                polygon=polygon,
                witness=_witness_for(params, polygon),
                sf=res.fmin,
                closure_defect=abs(float(lens[-1]) - 1.0),
                edge_length_spread=spread,
                seed=seed,
                restart_index=i,
            )

    return GenerationResult(report=best, best_sf=best_sf_seen, records=records,
                            degree=degree, restarts=restarts, seed=seed)
