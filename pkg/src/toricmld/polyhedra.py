"""Exact rational cones and polyhedra in small dimension.

Both descriptions are kept on every object: generators (points + rays)
and inequalities <a, x> >= c with primitive integer normal a and
rational c.  Conversion runs through a single primitive, the double
description of a cone given by homogeneous inequalities, made
deterministic by sorting and by an exact extremality test (a ray is
extreme iff its active constraints have rank dim-1).

Everything is Fraction-exact; there is no floating point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd

from .lattice import (
    LatticeError,
    content,
    dot,
    is_zero,
    kernel_basis,
    primitive,
    quotient_by_span,
    rational_rank,
    sublattice_from_vectors,
    vec_add,
    vec_scale,
)


class GeometryError(ValueError):
    pass


def _fraction_vec(v):
    return tuple(Fraction(a) for a in v)


def _integer_direction(v):
    """Scale a rational vector to a primitive integer one."""
    if all(a == 0 for a in v):
        raise GeometryError("zero direction")
    lcm = 1
    for a in v:
        a = Fraction(a)
        lcm = lcm * a.denominator // gcd(lcm, a.denominator)
    w = tuple(int(a * lcm) for a in v)
    return primitive(w)


# ---------------------------------------------------------------------------
# cone engine


def _dd_pointed(rows, dim):
    """Extreme rays of the pointed cone {x : rows.x >= 0} (kernel must be 0)."""
    if dim == 0:
        return ()
    # greedy linearly independent subset for the simplicial start
    base = []
    for i, r in enumerate(rows):
        if rational_rank([rows[j] for j in base] + [r], dim) > len(base):
            base.append(i)
        if len(base) == dim:
            break
    if len(base) < dim:
        raise GeometryError("cone is not pointed")
    from .lattice import solve_rational

    rays = []
    bmat = [rows[i] for i in base]
    for j in range(dim):
        e = [Fraction(1) if k == j else Fraction(0) for k in range(dim)]
        sol = solve_rational(bmat, e, dim)
        rays.append(_integer_direction(sol))
    processed = list(base)
    for i in range(len(rows)):
        if i in base:
            continue
        a = rows[i]
        processed.append(i)
        vals = [dot(a, r) for r in rays]
        kept = {r: None for r, v in zip(rays, vals) if v >= 0}
        for (rp, vp), (rm, vm) in itertools.product(
                [(r, v) for r, v in zip(rays, vals) if v > 0],
                [(r, v) for r, v in zip(rays, vals) if v < 0]):
            cand = tuple(vp * x - vm * y for x, y in zip(rm, rp))
            if is_zero(cand):
                continue
            cand = primitive(cand)
            if cand in kept:
                continue
            active = [rows[j] for j in processed if dot(rows[j], cand) == 0]
            if rational_rank(active, dim) == dim - 1:
                kept[cand] = None
        rays = list(kept)
    return tuple(sorted(rays))


def cone_from_inequalities(rows, dim):
    """Generator description of {x in R^dim : <a, x> >= 0 for a in rows}.

    Returns (rays, lines): extreme rays of a pointed complement plus an
    integer basis of the lineality space.
    """
    rows = [tuple(r) for r in rows if not is_zero(r)]
    lines = kernel_basis(tuple(rows), dim)
    if not lines:
        return _dd_pointed(rows, dim), ()
    sub = sublattice_from_vectors(dim, lines)
    q = quotient_by_span(dim, sub)
    d2 = dim - len(lines)
    reduced = [tuple(sum(a[k] * q.section[k][j] for k in range(dim)) for j in range(d2))
               for a in rows]
    lifted = []
    for r in _dd_pointed(reduced, d2):
        v = tuple(sum(q.section[k][j] * r[j] for j in range(d2)) for k in range(dim))
        lifted.append(primitive(v))
    return tuple(sorted(lifted)), tuple(sorted(tuple(l) for l in lines))


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone, generators plus cached dual generators."""

    dim: int
    generators: tuple
    dual_rays: tuple = field(compare=False)
    dual_lines: tuple = field(compare=False)

    def contains(self, v):
        return (all(dot(d, v) >= 0 for d in self.dual_rays)
                and all(dot(d, v) == 0 for d in self.dual_lines))

    def interior_contains(self, v):
        if not self.is_full_dim():
            raise GeometryError("interior test needs a full-dimensional cone")
        return all(dot(d, v) > 0 for d in self.dual_rays)

    def cone_dim(self):
        return rational_rank(self.generators, self.dim)

    def is_full_dim(self):
        return self.cone_dim() == self.dim

    def is_pointed(self):
        sides = list(self.dual_rays) + list(self.dual_lines) + \
            [tuple(-a for a in l) for l in self.dual_lines]
        return not kernel_basis(tuple(sides), self.dim)

    def lineality_dim(self):
        sides = list(self.dual_rays) + list(self.dual_lines)
        return len(kernel_basis(tuple(sides), self.dim))

    def dual(self):
        gens = tuple(self.dual_rays) + tuple(self.dual_lines) + \
            tuple(tuple(-a for a in l) for l in self.dual_lines)
        return make_cone(self.dim, gens)

    def __eq__(self, other):
        return (self.dim == other.dim
                and all(self.contains(g) for g in other.generators)
                and all(other.contains(g) for g in self.generators))


def make_cone(dim, generators):
    """Cone spanned by integer generators (deduped, primitive, sorted)."""
    gens = sorted({primitive(tuple(g)) for g in generators if not is_zero(tuple(g))})
    rays, lines = cone_from_inequalities(tuple(gens), dim)
    return Cone(dim, tuple(gens), rays, lines)


def cone_from_normals(dim, normals):
    """Cone {x : <a, x> >= 0 for a in normals}, as generators."""
    rays, lines = cone_from_inequalities(tuple(normals), dim)
    gens = list(rays) + list(lines) + [tuple(-a for a in l) for l in lines]
    return make_cone(dim, gens)


# ---------------------------------------------------------------------------
# polyhedra


@dataclass(frozen=True)
class Polyhedron:
    """Rational polyhedron conv(points) + cone(rays) = {x : <a,x> >= c}."""

    dim: int
    points: tuple   # tuple of Fraction tuples
    rays: tuple     # tuple of primitive integer tuples (lineality as +/- pairs)
    ineqs: tuple    # tuple of (integer normal, Fraction rhs)

    @property
    def empty(self):
        return not self.points

    def contains(self, x):
        if self.empty:
            return False
        return all(dot(a, x) >= c for a, c in self.ineqs)

    def is_compact(self):
        return not self.rays


def _homogenize_generators(points, rays):
    rows = [tuple(p) + (Fraction(1),) for p in points]
    rows += [tuple(Fraction(r_) for r_ in r) + (Fraction(0),) for r in rays]
    return [_integer_direction(r) for r in rows]


def _ineqs_from_dual(rays, lines, dim):
    ineqs = []
    for gen, both in [(r, False) for r in rays] + [(l, True) for l in lines]:
        a, c = gen[:dim], gen[dim]
        if is_zero(a):
            continue
        g = content(a)
        ineqs.append((tuple(x // g for x in a), Fraction(-c, g)))
        if both:
            ineqs.append((tuple(-x // g for x in a), Fraction(c, g)))
    return tuple(sorted(set(ineqs)))


def _generators_from_ineqs(ineqs, dim):
    rows = [_integer_direction(tuple(a) + (-Fraction(c),)) for a, c in ineqs]
    tpos = [0] * dim + [1]
    rows.append(tuple(tpos))
    rays, lines = cone_from_inequalities(tuple(rows), dim + 1)
    points, rrays = [], []
    for r in rays:
        if r[dim] > 0:
            points.append(tuple(Fraction(x, r[dim]) for x in r[:dim]))
        else:
            rrays.append(primitive(r[:dim]))
    for l in lines:
        rrays.append(primitive(l[:dim]))
        rrays.append(primitive(tuple(-x for x in l[:dim])))
    return tuple(sorted(points)), tuple(sorted(set(rrays)))


_EMPTY_MARK = ((), Fraction(1))  # "0 >= 1"


def from_generators(dim, points, rays=()):
    """Polyhedron conv(points) + cone(rays); empty when points is empty."""
    points = [_fraction_vec(p) for p in points]
    rays = [primitive(tuple(r)) for r in rays if not is_zero(tuple(r))]
    if not points:
        return Polyhedron(dim, (), (), ((tuple([0] * dim), Fraction(1)),))
    drays, dlines = cone_from_inequalities(_homogenize_generators(points, rays), dim + 1)
    ineqs = _ineqs_from_dual(drays, dlines, dim)
    pts, rrays = _generators_from_ineqs(ineqs, dim)
    return Polyhedron(dim, pts, rrays, ineqs)


def from_inequalities(dim, ineqs):
    """Polyhedron {x : <a, x> >= c for (a, c) in ineqs}."""
    ineqs = [(tuple(a), Fraction(c)) for a, c in ineqs if not is_zero(a) or Fraction(c) > 0]
    for a, c in ineqs:
        if is_zero(a) and c > 0:
            return Polyhedron(dim, (), (), ((tuple([0] * dim), Fraction(1)),))
    pts, rrays = _generators_from_ineqs(ineqs, dim)
    if not pts:
        return Polyhedron(dim, (), (), ((tuple([0] * dim), Fraction(1)),))
    drays, dlines = cone_from_inequalities(_homogenize_generators(pts, rrays), dim + 1)
    return Polyhedron(dim, pts, rrays, _ineqs_from_dual(drays, dlines, dim))


def polyhedra_equal(p, q):
    if p.empty or q.empty:
        return p.empty and q.empty
    return (all(q.contains(x) for x in p.points)
            and all(all(dot(a, r) >= 0 for a, _ in q.ineqs) for r in p.rays)
            and all(p.contains(x) for x in q.points)
            and all(all(dot(a, r) >= 0 for a, _ in p.ineqs) for r in q.rays))


def hrep_vrep_roundtrip(p):
    """Rebuild p from its own generators; the fixed point of V->H->V."""
    if p.empty:
        return p
    return from_generators(p.dim, p.points, p.rays)


def affine_dim(p):
    if p.empty:
        return -1
    base = p.points[0]
    dirs = [tuple(x - b for x, b in zip(q, base)) for q in p.points[1:]]
    dirs += [tuple(Fraction(x) for x in r) for r in p.rays]
    return rational_rank(dirs, p.dim)


def minkowski_sum(p, q):
    if p.empty or q.empty:
        raise GeometryError("Minkowski sum with an empty polyhedron")
    pts = [vec_add(a, b) for a in p.points for b in q.points]
    return from_generators(p.dim, pts, tuple(p.rays) + tuple(q.rays))


def scale_polyhedron(p, t):
    t = Fraction(t)
    if t <= 0:
        raise GeometryError("scale factor must be positive")
    if p.empty:
        return p
    return from_generators(p.dim, [vec_scale(t, x) for x in p.points], p.rays)


def translate_polyhedron(p, v):
    if p.empty:
        return p
    return from_generators(p.dim, [vec_add(x, _fraction_vec(v)) for x in p.points], p.rays)


def map_polyhedron(mat, p, dim_out):
    """Image of p under an integer linear map (rows of mat)."""
    if p.empty:
        return from_generators(dim_out, [])
    pts = [tuple(dot(row, x) for row in mat) for x in p.points]
    rays = [r2 for r2 in (tuple(dot(row, r) for row in mat) for r in p.rays)
            if not is_zero(r2)]
    return from_generators(dim_out, pts, rays)


def recession_cone(p):
    """Recession cone computed from the H-representation."""
    if p.empty:
        raise GeometryError("recession cone of the empty polyhedron")
    return cone_from_normals(p.dim, [a for a, _ in p.ineqs])


def cone_over(p):
    """cone(p) = closure of union of t*p, for polyhedra containing 0."""
    if not p.contains((0,) * p.dim):
        raise GeometryError("cone_over needs 0 in the polyhedron")
    return cone_from_normals(p.dim, [a for a, c in p.ineqs if c == 0])


# ---------------------------------------------------------------------------
# support sets and pointwise operations


@dataclass(frozen=True)
class SupportSet:
    """Finite nonempty set of rational points of M, inducing h_A."""

    points: tuple

    def __post_init__(self):
        if not self.points:
            raise GeometryError("support set must be nonempty")

    @property
    def dim(self):
        return len(self.points[0])


def make_support(points):
    pts = sorted({_fraction_vec(p) for p in points})
    return SupportSet(tuple(pts))


def support_value(a_set, e):
    """h_A(e) = min over the finite set A of <a, e>."""
    if len(e) != a_set.dim:
        raise GeometryError("dimension mismatch in support_value")
    return min(dot(p, e) for p in a_set.points)


def support_sum(a_set, b_set):
    return make_support([vec_add(a, b) for a in a_set.points for b in b_set.points])


def support_scale(t, a_set):
    t = Fraction(t)
    if t < 0:
        raise GeometryError("support sets scale by nonnegative rationals")
    if t == 0:
        return make_support([(Fraction(0),) * a_set.dim])
    return make_support([vec_scale(t, p) for p in a_set.points])


def polar_dual(p):
    """{y : <x, y> >= -1 for all x in p}; requires 0 in p."""
    if not p.contains((0,) * p.dim):
        raise GeometryError("polar duality needs 0 in the polyhedron")
    return _polar_raw(p)


def _polar_raw(p):
    ineqs = [(v, Fraction(-1)) for v in p.points] + \
            [(tuple(Fraction(x) for x in r), Fraction(0)) for r in p.rays]
    norm = []
    for a, c in ineqs:
        if all(x == 0 for x in a):
            continue
        w = _integer_direction(a)
        s = next(Fraction(x) / w[i] for i, x in enumerate(a) if w[i] != 0)
        norm.append((w, c / s))
    return from_inequalities(p.dim, norm)


def gauge(p, x):
    """inf{t > 0 : x in t*p} for compact p containing 0; Fraction or None (+inf)."""
    if not p.is_compact():
        raise GeometryError("gauge needs a compact polyhedron")
    if not p.contains((0,) * p.dim):
        raise GeometryError("gauge needs 0 in the polyhedron")
    best = Fraction(0)
    for a, c in p.ineqs:
        v = dot(a, x)
        if c == 0:
            if v < 0:
                return None
        elif v < 0 <= -c:
            best = max(best, Fraction(v) / c)
    return best


def interval_image(phi, p):
    """Exact (min, max) of a functional over p; None encodes an infinite end."""
    if p.empty:
        raise GeometryError("interval over the empty polyhedron")
    vals = [dot(phi, x) for x in p.points]
    lo, hi = min(vals), max(vals)
    for r in p.rays:
        v = dot(phi, r)
        if v > 0:
            hi = None
        elif v < 0:
            lo = None
    return lo, hi


def lattice_points(p):
    """All integer points of a compact polyhedron, in lexicographic order."""
    if p.empty:
        return []
    if not p.is_compact():
        raise GeometryError("lattice enumeration needs a compact polyhedron")
    los = [min(x[i] for x in p.points) for i in range(p.dim)]
    his = [max(x[i] for x in p.points) for i in range(p.dim)]
    ranges = [range(ceil(lo), floor(hi) + 1) for lo, hi in zip(los, his)]
    return [v for v in itertools.product(*ranges) if p.contains(v)]


def strict_interior_contains(p, x):
    """True iff every inequality is strict at x; p must be full-dimensional."""
    if affine_dim(p) != p.dim:
        raise GeometryError("strict interior needs a full-dimensional polyhedron")
    return all(dot(a, x) > c for a, c in p.ineqs)
