"""Bundled example data.

Two configurations ship with the toolkit so the reproduction commands work
offline:

* ``trefoil``: a degree-10 closed curve that is a trefoil knot while its
  control polygon is unknotted.
* ``equilateral``: a degree-6 closed equilateral polygon that is simple
  while its curve comes within visual tolerance of self-intersecting.

Reference values used by the reproduction checks are recomputed baselines;
see the individual notes.
"""
from .geometry import ControlPolygon

# degree-10 example: unknotted control polygon, knotted (trefoil) curve
TREFOIL_POINTS = (
    (-5.9, 4.7, -6.2), (10.3, -1.1, 8.9), (-2.6, -12.4, -6.3), (-10.0, 7.0, -0.3),
    (1.9, -12.0, -0.6), (11.2, 7.5, -7.6), (-15.3, -1.7, -4.1), (-11.7, 20.0, 3.5),
    (17.9, -1.1, 2.9), (2.9, -13.7, 4.8), (-5.9, 4.7, -6.2),
)

# the three crossing parameter pairs of the trefoil's x-y projection,
# rounded to four decimals (regression baseline)
TREFOIL_CROSSING_PAIRS = ((0.0306, 0.5573), (0.1573, 0.9244), (0.3731, 0.9493))

# 3D curve points at the rounded parameters above; recomputed directly from
# the control data (one widely-circulated copy of the fifth point carries a
# flipped sign on x -- the value here is the one the control points produce)
TREFOIL_CROSSING_POINTS = (
    (-2.0539, 2.8001, -2.6929), (-2.0530, 2.7987, -2.0143),
    (0.4376, -2.5212, -0.0576), (0.4364, -2.5206, -0.5547),
    (-1.3613, -1.4239, -2.2944), (-1.3624, -1.4232, -1.9067),
)

TREFOIL_EXPECTED_WORD = ("under", "over", "under", "over", "under", "over")

# unknotting reduction: vertex indices into the current (shrinking) polygon.
# The first push (vertex 3, a type-2b diagram move) is the documented one;
# the remaining four were reconstructed by the auto search and are frozen
# here for regression.  Every step re-verifies exactly on replay.
TREFOIL_PUSH_SCRIPT = (3, 2, 2, 1, 1)
TREFOIL_PUSH_LABELS = ("2b", None, None, None, None)
TREFOIL_PUSH_SCRIPT_RECONSTRUCTED = True

# degree-6 equilateral example, published coordinates (4 decimals).
# Note: its fourth point is inconsistent with the generating angle data
# below -- the x coordinate reads -0.1792 where the angles give -0.1729 --
# which puts one edge 1.24e-3 off unit length.  Kept verbatim; the
# reproduction command reports the discrepancy.
EQUILATERAL_POINTS = (
    (0.0, 0.0, 0.0), (0.0305, 0.0810, 0.9962), (-0.2074, -0.2671, 1.9030),
    (-0.1792, -0.3402, 0.9063), (0.0189, 0.0782, 0.0185), (0.1557, 0.2329, -0.9600),
    (0.0, 0.0, 0.0),
)

# recorded witness parameters for the equilateral example and the full
# angle vector [phi x5, theta x5, s, t] the example was generated from
EQUILATERAL_WITNESS_ST = (0.2969, 0.0633)
EQUILATERAL_ANGLES = (
    0.0867, 0.4353, 3.2225, 2.6633, 2.9336,
    1.2107, 4.1128, 2.0119, 7.4240, 0.8465,
    0.2969, 0.0633,
)
EQUILATERAL_CLOSURE_DEFECT = 2.2329e-05

# 6-stick trefoil (two interleaved triangles, jittered into general
# position).  Verified knotted: the polygon is simple in exact arithmetic,
# its diagram is tricolorable, and six sticks only realize unknots or
# trefoils.  Negative control: no push sequence may ever certify it.
HEX_TREFOIL_POINTS = (
    (1.0354, 0.0009, 1.0381), (-0.5335, 0.8746, 0.9901), (0.5242, -0.8921, -0.9703),
    (0.5035, 0.8982, -1.0018), (-0.5056, -0.8429, 1.0387), (-1.0104, 0.0375, -0.9657),
    (1.0354, 0.0009, 1.0381),
)


def trefoil_polygon() -> ControlPolygon:
    return ControlPolygon(TREFOIL_POINTS)


def equilateral_polygon() -> ControlPolygon:
    return ControlPolygon(EQUILATERAL_POINTS)


def hex_trefoil_polygon() -> ControlPolygon:
    return ControlPolygon(HEX_TREFOIL_POINTS)


FIXTURES = {
    "trefoil": trefoil_polygon,
    "equilateral": equilateral_polygon,
    "hex-trefoil": hex_trefoil_polygon,
}


def load_fixture(name: str) -> ControlPolygon:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {sorted(FIXTURES)}") from None
