"""Lattice polytopes of Laurent supports: hulls, Minkowski sums, containment.

Everything here is exact integer arithmetic.  Dimensions 1 and 2 are
supported; 2-polytopes store vertices counterclockwise starting from the
lexicographic minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DomainError, StructureError, UnsupportedDimensionError
from .laurent import LaurentPoly


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d(points):
    """Monotone-chain convex hull, counterclockwise, lex-min first."""
    pts = sorted(set(points))
    if len(pts) == 1:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all collinear: keep the two extreme points
        return [pts[0], pts[-1]]
    return hull


def primitive(v):
    g = 0
    for c in v:
        g = gcd(g, abs(c))
    if g == 0:
        raise DomainError("zero vector has no primitive form")
    return tuple(c // g for c in v)


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of integer points; vertices canonically ordered."""

    dim: int
    vertices: tuple

    @classmethod
    def from_points(cls, points):
        points = [tuple(int(c) for c in p) for p in points]
        if not points:
            raise DomainError("empty point set")
        dims = {len(p) for p in points}
        if len(dims) != 1:
            raise StructureError("points of mixed dimension")
        dim = dims.pop()
        if dim == 1:
            lo = min(p[0] for p in points)
            hi = max(p[0] for p in points)
            verts = ((lo,),) if lo == hi else ((lo,), (hi,))
            return cls(1, verts)
        if dim == 2:
            return cls(2, tuple(_hull2d(points)))
        raise UnsupportedDimensionError(
            f"lattice polytopes support dimension 1 and 2, not {dim}")

    def is_point(self):
        return len(self.vertices) == 1

    def is_segment(self):
        return len(self.vertices) == 2

    def edges(self):
        """Vertex pairs of the boundary walk (2D, counterclockwise)."""
        if self.dim != 2:
            raise UnsupportedDimensionError("edges are a 2D notion here")
        v = self.vertices
        if len(v) == 1:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def outward_normals(self):
        """Primitive outward edge normals (2D full-dimensional polytopes)."""
        out = []
        for (a, b) in self.edges():
            e = (b[0] - a[0], b[1] - a[1])
            n = (e[1], -e[0])  # right of a CCW edge points outward
            out.append(primitive(n))
        if self.is_segment():
            n = out[0]
            out.append((-n[0], -n[1]))
        return out

    def support(self, direction):
        """max over vertices of <v, direction>."""
        return max(sum(c * d for c, d in zip(v, direction))
                   for v in self.vertices)

    def min_support(self, direction):
        return min(sum(c * d for c, d in zip(v, direction))
                   for v in self.vertices)


def newton_polytope(p: LaurentPoly) -> LatticePolytope:
    """Convex hull of the exponent vectors with nonzero coefficients."""
    if p.is_zero():
        raise DomainError("zero polynomial has no Newton polytope")
    return LatticePolytope.from_points(p.support())


def minkowski_sum(a: LatticePolytope, b: LatticePolytope) -> LatticePolytope:
    if a.dim != b.dim:
        raise StructureError(f"dimension mismatch: {a.dim} vs {b.dim}")
    sums = [tuple(x + y for x, y in zip(u, v))
            for u in a.vertices for v in b.vertices]
    return LatticePolytope.from_points(sums)


def strict_containment(inner: LatticePolytope, outer: LatticePolytope):
    """True iff inner lies in the interior of outer; else a witness normal.

    Decided by exact support-function comparison over outer's facet normals.
    Returns ``(bool, witness)`` where witness is the violating normal (or the
    degeneracy direction when outer has empty interior).
    """
    if inner.dim != outer.dim:
        raise StructureError(f"dimension mismatch: {inner.dim} vs {outer.dim}")
    if inner.dim == 1:
        lo, hi = outer.vertices[0][0], outer.vertices[-1][0]
        if lo == hi:
            return False, (1,)
        ilo, ihi = inner.vertices[0][0], inner.vertices[-1][0]
        if ilo <= lo:
            return False, (-1,)
        if ihi >= hi:
            return False, (1,)
        return True, None
    if len(outer.vertices) < 3:
        # a point or segment has empty interior in the plane
        if outer.is_point():
            return False, (1, 0)
        return False, outer.outward_normals()[0]
    for n in outer.outward_normals():
        if inner.support(n) >= outer.support(n):
            return False, n
    return True, None
