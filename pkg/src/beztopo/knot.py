"""Knot-diagram extraction for the smooth curve and exact PL verification:
simplicity, segment-triangle certificates and median-push unknotting.

The PL side runs entirely over exact rationals (see ``exact``); a returned
certificate means every geometric predicate involved was decided exactly,
not within a floating-point tolerance.  Diagram extraction for the smooth
curve is numerical and carries its tolerances in the certificate.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import exact, optimize
from .errors import AmbiguousCrossingError, DegenerateInputError
from .geometry import BezierCurve, ControlPolygon, PlanarCurve, polygon_to_json


def polygon_hash(polygon: ControlPolygon) -> str:
    return hashlib.sha256(polygon_to_json(polygon).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# smooth-curve crossings

@dataclass
class CrossingScanConfig:
    samples: int = 2000                  # dense seeding resolution
    parameter_separation: float = 0.05   # cyclic distance; excludes the closure seam
    crossing_tolerance: float = 1e-3     # max refined planar gap
    z_separation_floor: float = 1e-2     # below this a "crossing" may be a true 3D intersection
    refine: optimize.SimplexConfig = field(
        default_factory=lambda: optimize.SimplexConfig(max_evals=20_000))


def _cyclic_separation(t1: float, t2: float) -> float:
    d = abs(t1 - t2)
    return min(d, 1.0 - d)


def find_planar_self_intersections(curve: PlanarCurve,
                                   config: CrossingScanConfig | None = None):
    """Locate parameter pairs where the planar curve meets itself.

    Dense sampling seeds candidate pairs at local minima of the pairwise
    distance (cyclic parameter separation above the configured floor, which
    also suppresses the trivial start-equals-end pair of closed curves);
    each seed is refined by simplex minimization of the planar gap.  Returns
    deduplicated (t1, t2, gap) with t1 < t2 and gap <= crossing_tolerance.
    """
    cfg = config or CrossingScanConfig()
    n = cfg.samples
    ts = np.arange(n) / n
    pts = curve.evaluate_many(ts)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))

    sep = np.abs(ts[:, None] - ts[None, :])
    sep = np.minimum(sep, 1.0 - sep)
    dist[sep <= cfg.parameter_separation] = np.inf

    padded = np.full((n + 2, n + 2), np.inf)
    padded[1:-1, 1:-1] = dist
    is_min = np.ones_like(dist, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= dist <= padded[1 + di:n + 1 + di, 1 + dj:n + 1 + dj]
    is_min &= np.isfinite(dist)
    is_min &= np.triu(np.ones_like(is_min), k=1)  # each pair once

    def gap_objective(x):
        t1, t2 = x
        penalty = 0.0
        for t in (t1, t2):
            if t < 0.0:
                penalty += -t
            elif t > 1.0:
                penalty += t - 1.0
        if penalty:
            return 10.0 + penalty
        p = curve.evaluate_many(np.array([t1, t2]))
        return float(np.hypot(p[0, 0] - p[1, 0], p[0, 1] - p[1, 1]))

    found = []
    for i, j in zip(*np.nonzero(is_min)):
        res = optimize.minimize(gap_objective, np.array([ts[i], ts[j]]), cfg.refine)
        t1, t2 = sorted(float(v) for v in res.argmin)
        gap = res.fmin
        if gap > cfg.crossing_tolerance:
            continue
        if not (0.0 <= t1 <= 1.0 and 0.0 <= t2 <= 1.0):
            continue
        if _cyclic_separation(t1, t2) <= cfg.parameter_separation:
            continue
        found.append((t1, t2, gap))

    found.sort()
    deduped = []
    for cand in found:
        for k, kept in enumerate(deduped):
            if max(abs(cand[0] - kept[0]), abs(cand[1] - kept[1])) < cfg.parameter_separation / 2:
                if cand[2] < kept[2]:
                    deduped[k] = cand
                break
        else:
            deduped.append(cand)
    return deduped


@dataclass(frozen=True)
class CrossingRecord:
    t_first: float
    t_second: float
    planar_point: tuple
    z_first: float
    z_second: float
    sense: str            # 'under' or 'over' for the strand at t_first
    planar_gap: float


@dataclass(frozen=True)
class KnotDiagram:
    """Crossings ordered along the traversal plus the under/over word read
    at each of the 2k parameter visits."""
    crossings: tuple
    sense_sequence: tuple
    tolerances: dict

    def word(self) -> str:
        return ", ".join(self.sense_sequence)


def classify_crossings(curve: BezierCurve, planar_pairs,
                       config: CrossingScanConfig | None = None) -> KnotDiagram:
    """Lift planar intersection pairs to 3D crossings by comparing heights.

    Projection is along -z, so the larger z passes over.  A pair whose
    heights differ by at most ``z_separation_floor`` is rejected: it may be
    a genuine 3D self-intersection rather than a crossing.
    """
    cfg = config or CrossingScanConfig()
    records = []
    for (t1, t2, gap) in planar_pairs:
        p1 = curve.evaluate(t1)
        p2 = curve.evaluate(t2)
        dz = p1.z - p2.z
        if abs(dz) <= cfg.z_separation_floor:
            raise AmbiguousCrossingError(
                f"pair ({t1:.6f}, {t2:.6f}) has |dz| = {abs(dz):.3e} <= "
                f"{cfg.z_separation_floor}; possible true 3D intersection")
        records.append(CrossingRecord(
            t_first=t1, t_second=t2,
            planar_point=((p1.x + p2.x) / 2.0, (p1.y + p2.y) / 2.0),
            z_first=p1.z, z_second=p2.z,
            sense="under" if dz < 0 else "over",
            planar_gap=gap))
    records.sort(key=lambda r: r.t_first)

    visits = []
    for r in records:
        visits.append((r.t_first, r.sense))
        visits.append((r.t_second, "over" if r.sense == "under" else "under"))
    visits.sort()
    return KnotDiagram(crossings=tuple(records),
                       sense_sequence=tuple(sense for _, sense in visits),
                       tolerances={"crossing_tolerance": cfg.crossing_tolerance,
                                   "z_separation_floor": cfg.z_separation_floor,
                                   "parameter_separation": cfg.parameter_separation})


@dataclass(frozen=True)
class TrefoilCertificate:
    """Numerical certificate (not a formal proof): the diagram has exactly
    three crossings and its traversal word alternates."""
    accepted: bool
    reason: str
    crossing_parameters: tuple
    sense_sequence: tuple
    tolerances: dict

    def to_dict(self) -> dict:
        return asdict(self)


def certify_trefoil(diagram: KnotDiagram) -> TrefoilCertificate:
    params = tuple((r.t_first, r.t_second) for r in diagram.crossings)
    word = diagram.sense_sequence
    if len(diagram.crossings) != 3:
        return TrefoilCertificate(False, f"expected 3 crossings, found {len(diagram.crossings)}",
                                  params, word, diagram.tolerances)
    alternating = all(word[i] != word[i + 1] for i in range(len(word) - 1))
    if not alternating:
        return TrefoilCertificate(False, f"traversal word not alternating: {diagram.word()}",
                                  params, word, diagram.tolerances)
    return TrefoilCertificate(True, "three alternating crossings", params, word,
                              diagram.tolerances)


# ---------------------------------------------------------------------------
# exact PL predicates

@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    witness: Optional[tuple] = None   # first intersecting segment pair

    def __bool__(self):
        return self.simple


def _exact_vertices(polygon: ControlPolygon):
    verts = [exact.exact_point(v) for v in polygon.distinct_vertices()]
    n = len(verts)
    for i in range(n):
        if verts[i] == verts[(i + 1) % n]:
            raise DegenerateInputError(f"zero-length edge at vertex {i}")
    return verts


def polygon_is_simple(polygon: ControlPolygon) -> SimplicityReport:
    """Exact pairwise segment test over all non-adjacent pairs; adjacent
    segments are checked only for overlap beyond the shared vertex."""
    verts = _exact_vertices(polygon)
    return _polygon_is_simple_exact(verts)


def _polygon_is_simple_exact(verts) -> SimplicityReport:
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = verts[j], verts[(j + 1) % n]
            if j == i + 1:
                if exact.adjacent_segments_overlap(a, b, d):
                    return SimplicityReport(False, (i, j))
                continue
            if i == 0 and j == n - 1:
                if exact.adjacent_segments_overlap(d, a, b):
                    return SimplicityReport(False, (i, j))
                continue
            if exact.segments_intersect(a, b, c, d):
                return SimplicityReport(False, (i, j))
    return SimplicityReport(True)


def segment_triangle_disjoint(segment, triangle) -> bool:
    """Exact: closed segment against closed triangle (interior included).

    The solved system anchors at the first triangle vertex:
    seg(t) = T1 + a (T2 - T1) + b (T3 - T1), t in [0, 1], a, b >= 0,
    a + b <= 1.
    """
    s0, s1 = segment
    t1, t2, t3 = triangle
    return exact.segment_triangle(s0, s1, t1, t2, t3).disjoint


# ---------------------------------------------------------------------------
# median pushes

@dataclass(frozen=True)
class SegmentCheck:
    segment_index: int
    status: str    # 'disjoint' | 'corner-touch-only' | 'incident-skipped' | 'blocking'
    detail: str = ""


@dataclass(frozen=True)
class PushStep:
    vertex_index: int
    target: tuple                       # float view of the exact target
    target_exact: tuple                 # exact rational coordinates, as strings
    certificates: tuple                 # SegmentCheck per polygon segment
    move_label: Optional[str] = None    # informational Reidemeister annotation
    blocked_by: Optional[int] = None

    @property
    def verified(self) -> bool:
        return self.blocked_by is None


@dataclass
class PushResult:
    ok: bool
    polygon: Optional[ControlPolygon]
    step: PushStep


def _check_push(verts, j):
    """Exact verification that pushing vertex j sweeps a triangle met by no
    other segment.  The two segments incident to the pushed vertex are the
    triangle's own sides; its index neighbors may touch exactly at the
    shared corner and nowhere else; every other segment must be certified
    fully disjoint from the closed triangle."""
    n = len(verts)
    prev_v, push_v, next_v = verts[(j - 1) % n], verts[j], verts[(j + 1) % n]
    if exact.collinear(prev_v, push_v, next_v):
        raise DegenerateInputError(f"vertices around index {j} are collinear")

    checks = []
    blocker = None
    for i in range(n):
        if i == (j - 1) % n or i == j:
            checks.append(SegmentCheck(i, "incident-skipped"))
            continue
        a, b = verts[i], verts[(i + 1) % n]
        if (i + 1) % n == (j - 1) % n:
            # segment arriving at the triangle corner prev_v
            beyond = exact.segment_touches_triangle_beyond_corner(a, prev_v, push_v, next_v)
            checks.append(SegmentCheck(i, "blocking" if beyond else "corner-touch-only"))
            if beyond and blocker is None:
                blocker = i
        elif i == (j + 1) % n:
            # segment leaving the triangle corner next_v
            beyond = exact.segment_touches_triangle_beyond_corner(b, next_v, push_v, prev_v)
            checks.append(SegmentCheck(i, "blocking" if beyond else "corner-touch-only"))
            if beyond and blocker is None:
                blocker = i
        else:
            result = exact.segment_triangle(a, b, prev_v, push_v, next_v)
            if result.disjoint:
                checks.append(SegmentCheck(i, "disjoint"))
            else:
                checks.append(SegmentCheck(i, "blocking", result.describe()))
                if blocker is None:
                    blocker = i
    return checks, blocker, (prev_v, push_v, next_v)


def _merge_degeneracies(verts):
    """Drop repeated points and middle vertices of exactly collinear triples."""
    verts = list(verts)
    changed = True
    while changed and len(verts) > 3:
        changed = False
        n = len(verts)
        for k in range(n):
            a, b, c = verts[(k - 1) % n], verts[k], verts[(k + 1) % n]
            if b == a or b == c or exact.collinear(a, b, c):
                del verts[k]
                changed = True
                break
    return verts


def _float_polygon(verts) -> ControlPolygon:
    pts = [tuple(float(c) for c in v) for v in verts]
    return ControlPolygon(pts + [pts[0]])


def _push_exact(verts, j, target=None, move_label=None):
    """Returns (new_verts_or_None, PushStep)."""
    checks, blocker, (prev_v, push_v, next_v) = _check_push(verts, j)
    if target is None:
        target_vec = exact.midpoint(prev_v, next_v)
    else:
        target_vec = exact.exact_point(target)
        if not exact.point_on_segment(target_vec, prev_v, next_v):
            raise DegenerateInputError(
                f"push target for vertex {j} must lie on the opposite segment")
    step = PushStep(
        vertex_index=j,
        target=tuple(float(c) for c in target_vec),
        target_exact=tuple(str(c) for c in target_vec),
        certificates=tuple(checks),
        move_label=move_label,
        blocked_by=blocker)
    if blocker is not None:
        return None, step
    new_verts = list(verts)
    new_verts[j] = target_vec
    return _merge_degeneracies(new_verts), step


def apply_median_push(polygon: ControlPolygon, j: int, target=None,
                      move_label: Optional[str] = None) -> PushResult:
    """Push vertex j along the median of its vertex triangle to the midpoint
    of the opposite side (or a caller-supplied point on that side), after
    exactly verifying that no other segment meets the swept triangle.

    Collinear triples created by the push are merged, so a successful push
    shrinks the polygon.  A blocked push reports the offending segment in
    the step instead of raising.
    """
    verts = _exact_vertices(polygon)
    new_verts, step = _push_exact(verts, j % len(verts), target, move_label)
    if new_verts is None:
        return PushResult(False, None, step)
    return PushResult(True, _float_polygon(new_verts), step)


@dataclass
class UnknotVerification:
    """Outcome of a push-reduction run.

    status 'certified' means every executed push was exactly verified and
    the reduced polygon has at most five edges (necessarily an unknot).
    'blocked' reports a failed scripted push; 'inconclusive' means the auto
    search exhausted its attempts -- which proves nothing about knottedness.
    """
    status: str
    steps: list
    attempts: int
    final_vertices: list
    input_hash: str
    exact_arithmetic: bool = True
    detail: str = ""

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "detail": self.detail,
            "attempts": self.attempts,
            "input_hash": self.input_hash,
            "exact_arithmetic": self.exact_arithmetic,
            "final_vertices": self.final_vertices,
            "steps": [{
                "vertex_index": s.vertex_index,
                "target": list(s.target),
                "target_exact": list(s.target_exact),
                "move_label": s.move_label,
                "blocked_by": s.blocked_by,
                "certificates": [asdict(c) for c in s.certificates],
            } for s in self.steps],
        }


def _triangle_area_sq(verts, j):
    n = len(verts)
    c = exact.cross(exact.sub(verts[j], verts[(j - 1) % n]),
                    exact.sub(verts[(j + 1) % n], verts[(j - 1) % n]))
    return float(exact.dot(c, c))


def verify_unknot_by_pushes(polygon: ControlPolygon,
                            push_script: Optional[Sequence[int]] = None,
                            move_labels: Optional[Sequence[Optional[str]]] = None,
                            max_attempts: Optional[int] = None) -> UnknotVerification:
    """Reduce a simple polygon by exactly-verified median pushes until at
    most five edges remain.

    Scripted mode applies the given vertex indices (into the current,
    shrinking polygon) in order and fails fast on a blocked push.  Auto mode
    greedily tries vertices by smallest swept-triangle area, bounded by
    ``max_attempts`` (default 10x the initial vertex count); exhaustion is
    reported as inconclusive, never as a knottedness proof.
    """
    report = polygon_is_simple(polygon)
    if not report.simple:
        raise ValueError(f"polygon is not simple (segments {report.witness} intersect); "
                         "push verification needs an embedded curve")
    verts = _exact_vertices(polygon)
    in_hash = polygon_hash(polygon)
    steps: list[PushStep] = []
    attempts = 0

    def finished(verts):
        return len(verts) <= 5

    if push_script is not None:
        labels = list(move_labels) if move_labels is not None else [None] * len(push_script)
        for k, j in enumerate(push_script):
            if finished(verts):
                break
            attempts += 1
            new_verts, step = _push_exact(verts, j % len(verts), None, labels[k])
            steps.append(step)
            if new_verts is None:
                return UnknotVerification(
                    "blocked", steps, attempts, _float_tuples(verts), in_hash,
                    detail=f"scripted push #{k} (vertex {j}) blocked by segment {step.blocked_by}")
            verts = new_verts
        if finished(verts):
            return UnknotVerification("certified", steps, attempts, _float_tuples(verts), in_hash,
                                      detail=f"reduced to {len(verts)} edges")
        return UnknotVerification("blocked", steps, attempts, _float_tuples(verts), in_hash,
                                  detail=f"script exhausted with {len(verts)} edges remaining")

    cap = max_attempts if max_attempts is not None else 10 * len(verts)
    while not finished(verts) and attempts < cap:
        order = sorted(range(len(verts)), key=lambda j: _triangle_area_sq(verts, j))
        progressed = False
        for j in order:
            if attempts >= cap:
                break
            attempts += 1
            try:
                new_verts, step = _push_exact(verts, j)
            except DegenerateInputError:
                continue
            if new_verts is not None:
                steps.append(step)
                verts = new_verts
                progressed = True
                break
        if not progressed:
            return UnknotVerification("inconclusive", steps, attempts, _float_tuples(verts),
                                      in_hash, detail="no verifiable push at "
                                      f"{len(verts)} edges (not a knottedness proof)")
    if finished(verts):
        return UnknotVerification("certified", steps, attempts, _float_tuples(verts), in_hash,
                                  detail=f"reduced to {len(verts)} edges")
    return UnknotVerification("inconclusive", steps, attempts, _float_tuples(verts), in_hash,
                              detail="attempt budget exhausted (not a knottedness proof)")


def _float_tuples(verts):
    return [tuple(float(c) for c in v) for v in verts]


def replay_push_certificate(polygon: ControlPolygon, verification: UnknotVerification) -> bool:
    """Soundness check: re-run the recorded pushes from scratch and confirm
    every segment certificate still decides the same way."""
    if not verification.certified:
        return False
    verts = _exact_vertices(polygon)
    for step in verification.steps:
        target = tuple(Fraction(c) for c in step.target_exact)
        new_verts, redone = _push_exact(verts, step.vertex_index, target, step.move_label)
        if new_verts is None or redone.blocked_by is not None:
            return False
        if [c.status for c in redone.certificates] != [c.status for c in step.certificates]:
            return False
        verts = new_verts
    return len(verts) <= 5
