"""Exact rational geometric predicates over fractions.Fraction.

Coordinates are read as the shortest decimal that round-trips the stored
double (str() of a float), so data published as finite decimals is carried
exactly and every predicate below is a machine-checked certificate rather
than a floating-point judgement call.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import DegenerateInputError

Vec = Tuple[Fraction, Fraction, Fraction]


def exact_coord(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def exact_point(p) -> Vec:
    if hasattr(p, "as_tuple"):
        p = p.as_tuple()
    x, y, z = p
    return (exact_coord(x), exact_coord(y), exact_coord(z))


def sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def scale(a: Vec, k: Fraction) -> Vec:
    return (a[0] * k, a[1] * k, a[2] * k)


def dot(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec, b: Vec) -> Vec:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def is_zero(v: Vec) -> bool:
    return v[0] == 0 and v[1] == 0 and v[2] == 0


def midpoint(a: Vec, b: Vec) -> Vec:
    half = Fraction(1, 2)
    return (half * (a[0] + b[0]), half * (a[1] + b[1]), half * (a[2] + b[2]))


def collinear(a: Vec, b: Vec, c: Vec) -> bool:
    return is_zero(cross(sub(b, a), sub(c, a)))


def point_on_segment(p: Vec, a: Vec, b: Vec) -> bool:
    """Closed segment membership."""
    if not collinear(a, b, p):
        return False
    d = sub(b, a)
    w = sub(p, a)
    dd = dot(d, d)
    if dd == 0:
        return p == a
    lam = dot(w, d)
    return 0 <= lam <= dd


def segments_intersect(a: Vec, b: Vec, c: Vec, d: Vec) -> bool:
    """Do closed segments AB and CD share any point?  Exact in 3D."""
    u, v, w = sub(b, a), sub(d, c), sub(c, a)
    if is_zero(u) or is_zero(v):
        raise DegenerateInputError("zero-length segment")
    n = cross(u, v)
    if not is_zero(n):
        if dot(w, n) != 0:
            return False  # skew lines
        denom = dot(n, n)
        t = dot(cross(w, v), n) / denom
        s = dot(cross(w, u), n) / denom
        return 0 <= t <= 1 and 0 <= s <= 1
    # parallel: intersect only if collinear with overlapping 1D ranges
    if not is_zero(cross(w, u)):
        return False
    uu = dot(u, u)
    t0 = dot(w, u) / uu
    t1 = t0 + dot(v, u) / uu
    lo, hi = min(t0, t1), max(t0, t1)
    return not (hi < 0 or lo > 1)


def adjacent_segments_overlap(a: Vec, shared: Vec, c: Vec) -> bool:
    """Segments (a, shared) and (shared, c): do they share more than the
    common endpoint?  True iff collinear and doubling back."""
    if not collinear(a, shared, c):
        return False
    return dot(sub(a, shared), sub(c, shared)) > 0


@dataclass(frozen=True)
class SegmentTriangleResult:
    """Outcome of the exact segment/closed-triangle test.

    kind: 'disjoint' | 'hit' | 'coplanar-hit'.  For 'hit' the unique
    solution of seg(t) = T1 + a (T2-T1) + b (T3-T1) is recorded.
    """
    kind: str
    t: Optional[Fraction] = None
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    @property
    def disjoint(self) -> bool:
        return self.kind == "disjoint"

    def point(self, seg_start: Vec, seg_end: Vec) -> Optional[Vec]:
        if self.t is None:
            return None
        return add(seg_start, scale(sub(seg_end, seg_start), self.t))

    def describe(self) -> str:
        if self.kind == "hit":
            return f"hit at t={self.t}, a={self.a}, b={self.b}"
        return self.kind


def _solve3(c1: Vec, c2: Vec, c3: Vec, rhs: Vec):
    """Cramer solve of [c1 c2 c3] x = rhs; None when singular."""
    det = dot(c1, cross(c2, c3))
    if det == 0:
        return None
    return (dot(rhs, cross(c2, c3)) / det,
            dot(c1, cross(rhs, c3)) / det,
            dot(c1, cross(c2, rhs)) / det)


def _plane_coords(e1: Vec, e2: Vec, w: Vec):
    """Solve w = a e1 + b e2 exactly (Gram system); None when w leaves the
    span or the span is degenerate."""
    d11, d12, d22 = dot(e1, e1), dot(e1, e2), dot(e2, e2)
    det = d11 * d22 - d12 * d12
    if det == 0:
        return None
    w1, w2 = dot(w, e1), dot(w, e2)
    a = (w1 * d22 - w2 * d12) / det
    b = (d11 * w2 - d12 * w1) / det
    if not is_zero(sub(w, add(scale(e1, a), scale(e2, b)))):
        return None
    return a, b


def _point_in_triangle_coplanar(p: Vec, t1: Vec, e1: Vec, e2: Vec) -> bool:
    coords = _plane_coords(e1, e2, sub(p, t1))
    if coords is None:
        return False
    a, b = coords
    return a >= 0 and b >= 0 and a + b <= 1


def segment_triangle(seg_start, seg_end, t1, t2, t3) -> SegmentTriangleResult:
    """Exact test of a closed segment against a closed triangle (interior
    included), solving seg(t) = T1 + a (T2-T1) + b (T3-T1) with t in [0, 1],
    a, b >= 0, a + b <= 1.  Coplanar configurations fall back to exact 2D
    case analysis."""
    s0, s1 = exact_point(seg_start), exact_point(seg_end)
    v1, v2, v3 = exact_point(t1), exact_point(t2), exact_point(t3)
    e1, e2 = sub(v2, v1), sub(v3, v1)
    normal = cross(e1, e2)
    if is_zero(normal):
        raise DegenerateInputError("degenerate (collinear) triangle")
    d = sub(s1, s0)
    if is_zero(d):
        raise DegenerateInputError("zero-length segment")

    sol = _solve3(d, scale(e1, Fraction(-1)), scale(e2, Fraction(-1)), sub(v1, s0))
    if sol is not None:
        t, a, b = sol
        if 0 <= t <= 1 and a >= 0 and b >= 0 and a + b <= 1:
            return SegmentTriangleResult("hit", t=t, a=a, b=b)
        return SegmentTriangleResult("disjoint")

    # segment parallel to the triangle plane
    if dot(sub(s0, v1), normal) != 0:
        return SegmentTriangleResult("disjoint")
    # coplanar: any endpoint inside, or any edge crossed
    if (_point_in_triangle_coplanar(s0, v1, e1, e2)
            or _point_in_triangle_coplanar(s1, v1, e1, e2)):
        return SegmentTriangleResult("coplanar-hit")
    for ea, eb in ((v1, v2), (v2, v3), (v3, v1)):
        if segments_intersect(s0, s1, ea, eb):
            return SegmentTriangleResult("coplanar-hit")
    return SegmentTriangleResult("disjoint")


def direction_enters_vertex_cone(vertex: Vec, c1: Vec, c2: Vec, toward: Vec) -> bool:
    """At a triangle vertex, does the direction (toward - vertex) point into
    the closed angular cone spanned by the edges to c1 and c2?  Used for
    segments allowed to touch the triangle only at a shared corner; assumes
    coplanarity has been established."""
    e1, e2, w = sub(c1, vertex), sub(c2, vertex), sub(toward, vertex)
    coords = _plane_coords(e1, e2, w)
    if coords is None:
        return False
    a, b = coords
    return a >= 0 and b >= 0


def segment_touches_triangle_beyond_corner(far_end, corner, apex, other) -> bool:
    """Neighbor-segment rule: segment (corner -> far_end) shares ``corner``
    with triangle (corner, apex, other).  True iff the segment meets the
    closed triangle anywhere besides the shared corner itself."""
    f = exact_point(far_end)
    v = exact_point(corner)
    pa, po = exact_point(apex), exact_point(other)
    e1, e2 = sub(pa, v), sub(po, v)
    normal = cross(e1, e2)
    if is_zero(normal):
        raise DegenerateInputError("degenerate (collinear) triangle")
    d = sub(f, v)
    if is_zero(d):
        raise DegenerateInputError("zero-length segment")
    if dot(d, normal) != 0:
        # leaves the plane immediately: only the corner can be shared
        return False
    return direction_enters_vertex_cone(v, pa, po, f)
