"""Rate regions in the nonnegative quadrant.

A region is the set of ``(R1, R2) >= 0`` with ``a R1 + b R2 <= c`` for every
constraint.  Constraints with ``c = inf`` never bind.  Regions carry both the
constraint list and the counterclockwise vertex list starting at the origin.
An empty region is stored as the single vertex ``(0, 0)`` with ``empty=True``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

__all__ = [
    "CANONICAL_DIRECTIONS",
    "Unbounded",
    "RateConstraint",
    "RateRegion2D",
    "region_from_constraints",
    "erode_by_box",
    "dilate_vertices",
    "hull_union",
    "convex_hull",
    "contains",
    "is_subset",
    "max_gap",
    "region_to_dict",
    "region_from_dict",
    "DEDUP_TOL",
]

CANONICAL_DIRECTIONS = ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2))
DEDUP_TOL = 1e-9


class Unbounded(ValueError):
    """The constraints do not bound the region."""


@dataclass(frozen=True)
class RateConstraint:
    """``a R1 + b R2 <= c``."""

    a: float
    b: float
    c: float

    def slack(self, p) -> float:
        return self.c - (self.a * p[0] + self.b * p[1])

    @property
    def canonical(self) -> bool:
        return (self.a, self.b) in CANONICAL_DIRECTIONS


@dataclass(frozen=True)
class RateRegion2D:
    constraints: tuple
    vertices: tuple
    empty: bool = False

    def extent(self) -> tuple[float, float]:
        return (max(v[0] for v in self.vertices), max(v[1] for v in self.vertices))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[float, float]]:
    """Counterclockwise convex hull (Andrew's monotone chain), collinear points dropped.

    The output starts at the lexicographically smallest point.
    """
    pts = sorted(set((float(x), float(y)) for x, y in points))
    pts = _dedup(pts)
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 1e-12 * _scale(p):
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 1e-12 * _scale(p):
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _scale(p) -> float:
    return 1.0 + abs(p[0]) + abs(p[1])


def _dedup(pts):
    out: list = []
    for p in pts:
        if not any(abs(p[0] - q[0]) <= DEDUP_TOL and abs(p[1] - q[1]) <= DEDUP_TOL for q in out):
            out.append(p)
    return out


def _empty(constraints) -> RateRegion2D:
    return RateRegion2D(tuple(constraints), ((0.0, 0.0),), True)


def region_from_constraints(cs) -> RateRegion2D:
    """Intersect the constraints with the nonnegative quadrant.

    Vertices are the feasible pairwise intersections of the constraint lines
    and the two axes.

    Raises
    ------
    Unbounded
        If no finite constraint bounds ``R1`` or none bounds ``R2``.
    """
    cs = tuple(RateConstraint(float(c.a), float(c.b), float(c.c)) for c in cs)
    for c in cs:
        if math.isnan(c.c) or c.c == -math.inf:
            return _empty(cs)
        if c.a < 0 or c.b < 0:
            raise ValueError(f"constraint directions must be nonnegative, got {c}")
    finite = [c for c in cs if math.isfinite(c.c)]
    if not any(c.a > 0 for c in finite) or not any(c.b > 0 for c in finite):
        raise Unbounded("need finite bounds on both rates")
    if any(c.c < 0 for c in finite):
        return _empty(cs)
    scale = max(1.0, max(abs(c.c) for c in finite))
    tol = 1e-9 * scale
    lines = [(c.a, c.b, c.c) for c in finite] + [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)]
    candidates = []
    for (a1, b1, c1), (a2, b2, c2) in combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) <= 1e-14 * (abs(a1) + abs(b1)) * (abs(a2) + abs(b2)):
            continue
        x = (c1 * b2 - c2 * b1) / det
        y = (a1 * c2 - a2 * c1) / det
        if x < -tol or y < -tol:
            continue
        if all(c.a * x + c.b * y <= c.c + tol for c in finite):
            candidates.append((max(x, 0.0) + 0.0, max(y, 0.0) + 0.0))
    return RateRegion2D(cs, _ordered(candidates), False)


def _ordered(points) -> tuple:
    """Hull of ``points`` rotated to start at the origin when present."""
    hull = convex_hull(points)
    if not hull:
        return ((0.0, 0.0),)
    start = min(range(len(hull)), key=lambda k: (hull[k][0] + hull[k][1], hull[k][1]))
    return tuple(hull[start:] + hull[:start])


def erode_by_box(r: RateRegion2D, gx: float, gy: float) -> RateRegion2D:
    """``{R >= 0 : R + (gx, gy) in r}`` via ``c -> c - (a gx + b gy)``."""
    if r.empty:
        return r
    return region_from_constraints(
        [RateConstraint(c.a, c.b, c.c - (c.a * gx + c.b * gy)) for c in r.constraints]
    )


def dilate_vertices(r: RateRegion2D, gx: float, gy: float) -> list[tuple[float, float]]:
    """Vertices of ``r (+) [0, gx] x [0, gy]`` (Minkowski sum with the box)."""
    pts = []
    for x, y in r.vertices:
        pts += [(x, y), (x + gx, y), (x, y + gy), (x + gx, y + gy)]
    return convex_hull(pts)


def _canonicalize(a: float, b: float, c: float) -> RateConstraint:
    for ca, cb in CANONICAL_DIRECTIONS:
        # parallel test, then rescale so (a, b) becomes exactly canonical
        if abs(a * cb - b * ca) <= 1e-9 * (abs(a) + abs(b)) and a * ca + b * cb > 0:
            k = (ca + cb) / (a + b)
            return RateConstraint(float(ca), float(cb), c * k)
    k = 1.0 / max(abs(a), abs(b))
    return RateConstraint(a * k, b * k, c * k)


def hull_union(r1: RateRegion2D, r2: RateRegion2D) -> RateRegion2D:
    """Convex hull of the union of two regions, constraints rebuilt from its edges."""
    if r1.empty and r2.empty:
        return _empty(r1.constraints)
    pts = list(r1.vertices) + list(r2.vertices) + [(0.0, 0.0)]
    hull = list(_ordered(pts))
    xmax = max(p[0] for p in hull)
    ymax = max(p[1] for p in hull)
    cons = []
    if len(hull) >= 3:
        for p, q in zip(hull, hull[1:] + hull[:1]):
            # outward normal of a counterclockwise edge
            a, b = q[1] - p[1], p[0] - q[0]
            if a <= 1e-12 * _scale(p) and b <= 1e-12 * _scale(p):
                continue  # edge on an axis
            if a < 0 or b < 0:
                a, b = max(a, 0.0), max(b, 0.0)
            cons.append(_canonicalize(a, b, a * p[0] + b * p[1]))
    else:
        cons = [RateConstraint(1.0, 0.0, xmax), RateConstraint(0.0, 1.0, ymax)]
    have = {(c.a, c.b) for c in cons}
    if (1.0, 0.0) not in have:
        cons.append(RateConstraint(1.0, 0.0, xmax))
    if (0.0, 1.0) not in have:
        cons.append(RateConstraint(0.0, 1.0, ymax))
    return RateRegion2D(tuple(cons), tuple(hull), False)


def contains(r: RateRegion2D, p, tol: float = 1e-9) -> bool:
    """True iff ``p`` is in ``r`` within ``tol`` bits.

    The tolerance on ``a R1 + b R2 <= c`` is scaled by ``max(1, a + b)`` so it
    measures distance in bits along each rate.
    """
    x, y = float(p[0]), float(p[1])
    if r.empty:
        return abs(x) <= tol and abs(y) <= tol
    if x < -tol or y < -tol:
        return False
    return all(
        c.a * x + c.b * y <= c.c + tol * max(1.0, c.a + c.b) for c in r.constraints
    )


def is_subset(inner: RateRegion2D, outer: RateRegion2D, tol: float = 1e-9) -> bool:
    """Vertex test: every vertex of ``inner`` lies in ``outer``."""
    return all(contains(outer, v, tol) for v in inner.vertices)


def _point_gap(v, inner: RateRegion2D, tol: float) -> float:
    def inside(g):
        return contains(inner, (max(v[0] - g, 0.0), max(v[1] - g, 0.0)), 1e-12)

    if inside(0.0):
        return 0.0
    lo, hi = 0.0, max(v[0], v[1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return hi


def max_gap(outer: RateRegion2D, inner: RateRegion2D, tol: float = 1e-6) -> float:
    """Smallest ``g`` with ``inner (+) [0, g]^2`` covering ``outer``.

    For each outer vertex ``v`` the smallest ``g`` with ``(v - g)^+`` in
    ``inner`` is found by bisection; ``inner`` is down-closed so this is the
    covering distance of ``v``.  The result is accurate to ``tol``.
    """
    return max(_point_gap(v, inner, tol) for v in outer.vertices)


def region_to_dict(r: RateRegion2D) -> dict:
    def enc(x):
        return "inf" if math.isinf(x) else x

    return {
        "constraints": [{"a": c.a, "b": c.b, "c": enc(c.c)} for c in r.constraints],
        "vertices": [[x, y] for x, y in r.vertices],
        "empty": r.empty,
    }


def region_from_dict(d: dict) -> RateRegion2D:
    def dec(x):
        return math.inf if x == "inf" else float(x)

    cons = tuple(RateConstraint(float(c["a"]), float(c["b"]), dec(c["c"])) for c in d["constraints"])
    verts = tuple((float(x), float(y)) for x, y in d["vertices"])
    return RateRegion2D(cons, verts, bool(d["empty"]))
