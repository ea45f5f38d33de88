"""Core geometry: points, closed control polygons, Bezier evaluation,
planar projection, de Casteljau subdivision and total curvature.

All types are immutable values; every operation is pure.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (DegenerateInputError, DomainError, InputFormatError,
                     UnsupportedDegreeError)

MAX_DEGREE = 30  # exact 64-bit binomials guaranteed up to here


@dataclass(frozen=True)
class Point3:
    """A point or vector in R^3."""
    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise DomainError(f"non-finite coordinate in {(self.x, self.y, self.z)}")

    def as_tuple(self):
        return (self.x, self.y, self.z)

    def as_array(self):
        return np.array([self.x, self.y, self.z])

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)


def _as_point(p) -> Point3:
    if isinstance(p, Point3):
        return p
    x, y, z = p
    return Point3(float(x), float(y), float(z))


class ControlPolygon:
    """Closed piecewise-linear curve P0..Pn with Pn == P0 stored explicitly.

    Doubles as the control data of a closed Bezier curve of degree
    n = len(vertices) - 1.
    """

    def __init__(self, vertices: Iterable):
        verts = tuple(_as_point(p) for p in vertices)
        if len(verts) < 3:
            raise DomainError("closed polygon needs degree >= 2 (at least 3 stored vertices)")
        if verts[-1] != verts[0]:
            raise DomainError("polygon must be stored closed: last vertex must equal the first")
        self.vertices = verts

    @property
    def degree(self) -> int:
        return len(self.vertices) - 1

    def distinct_vertices(self):
        """The n vertices without the closing duplicate."""
        return self.vertices[:-1]

    def as_array(self) -> np.ndarray:
        return np.array([v.as_tuple() for v in self.vertices])

    def edge_vectors(self) -> np.ndarray:
        """q_i = P_{i+1} - P_i, i = 0..n-1.  Sums to zero by closure."""
        a = self.as_array()
        return np.diff(a, axis=0)

    def replace_vertex(self, i: int, p) -> "ControlPolygon":
        """New polygon with vertex i moved; index 0 (or n) moves both closure copies."""
        p = _as_point(p)
        n = self.degree
        verts = list(self.vertices)
        i = i % n
        verts[i] = p
        if i == 0:
            verts[n] = p
        return ControlPolygon(verts)

    @classmethod
    def from_open_vertices(cls, vertices: Iterable) -> "ControlPolygon":
        """Close an open vertex list by appending the first vertex."""
        verts = [_as_point(p) for p in vertices]
        return cls(verts + [verts[0]])

    def __eq__(self, other):
        return isinstance(other, ControlPolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"ControlPolygon(degree={self.degree})"


class _Curve:
    """Shared Bezier evaluation over an (n+1, dim) control array.

    Control nets are not required to be closed: subdivision produces open
    halves of closed curves.
    """

    def __init__(self, control_points: np.ndarray):
        control = np.array(control_points, dtype=float)  # always copy; stored read-only
        if control.ndim != 2 or control.shape[0] < 2:
            raise DomainError("need at least two control points")
        if not np.isfinite(control).all():
            raise DomainError("non-finite control point")
        if control.shape[0] - 1 > MAX_DEGREE:
            raise UnsupportedDegreeError(
                f"degree {control.shape[0] - 1} exceeds the exact-binomial cap {MAX_DEGREE}")
        self.control_points = control
        self.control_points.setflags(write=False)

    @property
    def degree(self) -> int:
        return self.control_points.shape[0] - 1

    def evaluate_many(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if ts.min() < 0.0 or ts.max() > 1.0:
            raise DomainError("curve parameter outside [0, 1]")
        return _kernels.bezier_points(self.control_points, ts)

    def _evaluate_decasteljau(self, t: float) -> np.ndarray:
        pts = self.control_points.copy()
        for _ in range(self.degree):
            pts = (1.0 - t) * pts[:-1] + t * pts[1:]
        return pts[0]

    def subdivide(self, u: float):
        """Split at u into the curves over [0, u] and [u, 1]."""
        if not 0.0 < u < 1.0:
            raise DomainError("subdivision parameter must lie strictly inside (0, 1)")
        pts = self.control_points
        left = [pts[0]]
        right = [pts[-1]]
        work = pts
        while len(work) > 1:
            work = (1.0 - u) * work[:-1] + u * work[1:]
            left.append(work[0])
            right.append(work[-1])
        return (type(self)(np.array(left)), type(self)(np.array(right[::-1])))


class BezierCurve(_Curve):
    """Polynomial space curve in Bernstein form over 3D control points."""

    @classmethod
    def from_polygon(cls, polygon: ControlPolygon) -> "BezierCurve":
        return cls(polygon.as_array())

    def evaluate(self, t: float, method: str = "bernstein") -> Point3:
        """Point at parameter t.  The default Bernstein sum is the regression
        reference; "decasteljau" selects corner-cutting instead."""
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"curve parameter {t} outside [0, 1]")
        if method == "decasteljau":
            v = self._evaluate_decasteljau(float(t))
        elif method == "bernstein":
            v = _kernels.bezier_points(self.control_points, np.array([float(t)]))[0]
        else:
            raise ValueError(f"unknown evaluation method {method!r}")
        return Point3(*v)


class PlanarCurve(_Curve):
    """Bezier curve with 2-component control points (projection image)."""

    def evaluate(self, t: float) -> np.ndarray:
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"curve parameter {t} outside [0, 1]")
        return _kernels.bezier_points(self.control_points, np.array([float(t)]))[0]


def evaluate(curve: BezierCurve, t: float, method: str = "bernstein") -> Point3:
    return curve.evaluate(t, method=method)


def project_xy(curve: BezierCurve) -> PlanarCurve:
    """Orthogonal projection along -z onto the x-y plane.

    Commutes with evaluation; knot diagrams downstream depend on this choice
    of direction.
    """
    return PlanarCurve(curve.control_points[:, :2])


def decasteljau_subdivide(curve, u: float):
    """Split a curve at u; left covers [0, u], right covers [u, 1]."""
    return curve.subdivide(u)


def subdivision_polygons(curve, u: float, depth: int):
    """Recursively split ``depth`` times at relative parameter u; returns the
    2^depth control nets in parameter order."""
    pieces = [curve]
    for _ in range(depth):
        nxt = []
        for piece in pieces:
            nxt.extend(piece.subdivide(u))
        pieces = nxt
    return pieces


def total_curvature(polygon: ControlPolygon) -> float:
    """Sum of exterior turning angles (radians) over the closed polygon.

    At least 2*pi for any closed polygon; convex planar polygons attain it.
    """
    verts = np.array([v.as_tuple() for v in polygon.distinct_vertices()])
    n = len(verts)
    edges = np.roll(verts, -1, axis=0) - verts          # edge i: P_i -> P_{i+1}
    lens = np.linalg.norm(edges, axis=1)
    if np.any(lens == 0.0):
        raise DegenerateInputError("zero-length edge in polygon")
    total = 0.0
    for i in range(n):
        a, b = edges[i - 1], edges[i]
        cosang = float(a @ b) / (lens[i - 1] * lens[i])
        total += math.acos(min(1.0, max(-1.0, cosang)))
    return total


def curve_total_curvature(curve: BezierCurve, samples: int = 1024) -> float:
    """Total curvature of a dense PL sampling of the closed curve
    (approximation; the sampling count trades accuracy for time)."""
    ts = np.linspace(0.0, 1.0, samples, endpoint=False)
    pts = curve.evaluate_many(ts)
    return total_curvature(ControlPolygon.from_open_vertices(pts))


# ---------------------------------------------------------------------------
# serialization

def polygon_to_json(polygon: ControlPolygon) -> str:
    return json.dumps({
        "degree": polygon.degree,
        "points": [list(v.as_tuple()) for v in polygon.vertices],
    })


def polygon_from_json(text: str) -> ControlPolygon:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid polygon JSON at line {exc.lineno}: {exc.msg}") from exc
    try:
        points = data["points"]
        degree = data["degree"]
    except (TypeError, KeyError) as exc:
        raise InputFormatError("polygon JSON needs 'degree' and 'points'") from exc
    if len(points) != degree + 1:
        raise InputFormatError(f"expected {degree + 1} points for degree {degree}, got {len(points)}")
    return ControlPolygon(points)


def polygon_from_text(text: str) -> ControlPolygon:
    """Whitespace-separated ``x y z`` per line, one vertex per line.  The
    closing vertex may be omitted; it is appended automatically."""
    points = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise InputFormatError(f"line {lineno}: expected 3 coordinates, got {len(parts)}")
        try:
            points.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise InputFormatError(f"line {lineno}: {exc}") from exc
    if len(points) < 3:
        raise InputFormatError("need at least 3 vertices")
    if points[-1] == points[0]:
        return ControlPolygon(points)
    return ControlPolygon.from_open_vertices(points)


def load_polygon(path) -> ControlPolygon:
    """Read a polygon file; JSON when the content starts with '{', plain
    coordinates otherwise."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return polygon_from_json(text)
    return polygon_from_text(text)
