"""Toric contraction germs and generalized pair structures.

A germ f: X -> Y over an invariant point is a fan in N = Z^n together
with a lattice projection pi: N -> Nbar and a pointed full-dimensional
cone sigma_bar with |fan| = pi^{-1}(sigma_bar).  Pair data consists of
invariant boundary coefficients on the rays, a finite rational set A
inducing the free b-divisor, and optional general boundaries (b_j, A_j)
that fold into (B, A).

The computational heart: the polyhedron box = Conv(A) + {m : <m,e> >=
-(1 - b_e + h_A(e))}, its polar u, the recession cone sigma0, and the
derived invariants (log discrepancies, the g-lc test, the minimal log
discrepancy over the central fiber, and lct of pulled-back invariant
hyperplanes).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .lattice import (
    apply_hom,
    compose_covector,
    content,
    dot,
    hom_is_surjective,
    is_zero,
    primitive,
    quotient_by_span,
    rational_rank,
    saturated_span,
    solve_rational,
    vec_add,
)
from .polyhedra import (
    Cone,
    Polyhedron,
    SupportSet,
    _polar_raw,
    cone_from_normals,
    cone_over,
    from_generators,
    from_inequalities,
    gauge,
    interval_image,
    lattice_points,
    make_cone,
    make_support,
    minkowski_sum,
    map_polyhedron,
    scale_polyhedron,
    strict_interior_contains,
    support_scale,
    support_sum,
    support_value,
)


class PairError(ValueError):
    """Invalid germ or pair data; the message names the violated condition."""


class NotRCartier(PairError):
    def __init__(self, cone_index):
        super().__init__("not R-Cartier on maximal cone %d" % cone_index)
        self.cone_index = cone_index


# ---------------------------------------------------------------------------
# fans and contractions


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple          # primitive integer vectors
    max_cones: tuple     # tuples of ray indices

    def cone(self, i):
        return self._cones[i]

    @cached_property
    def _cones(self):
        return tuple(make_cone(self.rank, [self.rays[j] for j in c])
                     for c in self.max_cones)

    def ray_index(self, v):
        return self._ray_lookup.get(tuple(v))

    @cached_property
    def _ray_lookup(self):
        return {r: i for i, r in enumerate(self.rays)}


def make_fan(rank, rays, max_cones):
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    for r in rays:
        if is_zero(r) or primitive(r) != r:
            raise PairError("fan rays must be nonzero and primitive: %r" % (r,))
    if len(set(rays)) != len(rays):
        raise PairError("duplicate fan ray")
    cones = tuple(tuple(sorted(set(int(i) for i in c))) for c in max_cones)
    if len(set(cones)) != len(cones):
        raise PairError("duplicate maximal cone")
    for c in cones:
        if not c or any(i < 0 or i >= len(rays) for i in c):
            raise PairError("maximal cone with bad ray index")
    used = {i for c in cones for i in c}
    if used != set(range(len(rays))):
        raise PairError("fan ray not used by any maximal cone")
    return Fan(rank, rays, cones)


def validate_fan(fan):
    """Cones pointed and full-dimensional, pairwise intersections faces."""
    for i, c in enumerate(fan.max_cones):
        cone = fan.cone(i)
        if not cone.is_pointed():
            raise PairError("maximal cone %d is not strongly convex" % i)
        if not cone.is_full_dim():
            raise PairError("maximal cone %d is not full-dimensional" % i)
        for j in c:
            if not _is_extremal_ray(cone, fan.rays[j]):
                raise PairError("ray %d is not extremal in maximal cone %d" % (j, i))
    for i in range(len(fan.max_cones)):
        for j in range(i + 1, len(fan.max_cones)):
            _check_face_intersection(fan, i, j)


def _is_extremal_ray(cone, v):
    active = [d for d in cone.dual_rays if dot(d, v) == 0]
    return rational_rank(active, cone.dim) == cone.dim - 1


def _cone_intersection_gens(a, b):
    normals = list(a.dual_rays) + list(b.dual_rays)
    for l in list(a.dual_lines) + list(b.dual_lines):
        normals.append(l)
        normals.append(tuple(-x for x in l))
    c = cone_from_normals(a.dim, normals)
    return c.generators


def _check_face_intersection(fan, i, j):
    a, b = fan.cone(i), fan.cone(j)
    gens = _cone_intersection_gens(a, b)
    for cone, name in ((a, i), (b, j)):
        sel = [d for d in cone.dual_rays if all(dot(d, g) == 0 for g in gens)]
        u = tuple(sum(d[k] for d in sel) for k in range(fan.rank)) if sel \
            else (0,) * fan.rank
        if sel:
            face = cone_from_normals(fan.rank, list(cone.dual_rays) + [u, tuple(-x for x in u)])
        else:
            face = cone
        inter = make_cone(fan.rank, gens) if gens else make_cone(fan.rank, [])
        if not (all(inter.contains(g) for g in face.generators)
                and all(face.contains(g) for g in inter.generators)):
            raise PairError(
                "cones %d and %d do not intersect in a common face" % (i, j))


@dataclass(frozen=True)
class ToricContraction:
    """Germ f: X -> Y over the invariant point, via pi and sigma_bar."""

    fan: Fan
    pi: tuple          # nbar x n integer matrix (rows may be empty)
    sigma_bar: Cone

    @property
    def rank(self):
        return self.fan.rank

    @property
    def base_rank(self):
        return len(self.pi)

    @cached_property
    def support(self):
        """|fan| = pi^{-1}(sigma_bar) as a cone."""
        normals = [compose_covector(d, self.pi, self.rank)
                   for d in self.sigma_bar.dual_rays]
        for l in self.sigma_bar.dual_lines:
            w = compose_covector(l, self.pi, self.rank)
            normals.append(w)
            normals.append(tuple(-x for x in w))
        return cone_from_normals(self.rank, normals)

    def support_contains(self, v, strict=False):
        if strict:
            return self.support.interior_contains(v)
        return self.support.contains(v)


def make_contraction(fan, pi, sigma_bar_gens=None):
    pi = tuple(tuple(int(x) for x in row) for row in pi)
    nbar = len(pi)
    if sigma_bar_gens is None:
        sigma_bar_gens = [apply_hom(pi, r) for r in fan.rays]
        sigma_bar_gens = [g for g in sigma_bar_gens if not is_zero(g)]
    sigma_bar = make_cone(nbar, sigma_bar_gens)
    return ToricContraction(fan, pi, sigma_bar)


def validate_contraction(tc):
    validate_fan(tc.fan)
    n, nbar = tc.rank, tc.base_rank
    if any(len(row) != n for row in tc.pi):
        raise PairError("pi has the wrong shape")
    if not hom_is_surjective(tc.pi, n):
        raise PairError("pi is not surjective")
    if nbar > 0:
        if not tc.sigma_bar.is_pointed():
            raise PairError("sigma_bar is not strongly convex")
        if not tc.sigma_bar.is_full_dim():
            raise PairError("sigma_bar is not full-dimensional (no invariant point)")
    sup = tc.support
    for i, r in enumerate(tc.fan.rays):
        if not sup.contains(r):
            raise PairError("support condition fails: ray %d leaves pi^-1(sigma_bar)" % i)
    for g in sup.generators:
        if not any(tc.fan.cone(i).contains(g) for i in range(len(tc.fan.max_cones))):
            raise PairError("support condition fails: pi^-1(sigma_bar) is not covered")
    _check_walls(tc)


def _check_walls(tc):
    """Every facet of a maximal cone is shared or lies on the support boundary."""
    fan = tc.fan
    sup = tc.support
    for i in range(len(fan.max_cones)):
        cone = fan.cone(i)
        for d in cone.dual_rays:
            fgens = [g for g in cone.generators if dot(d, g) == 0]
            if not fgens:
                continue
            on_boundary = any(all(dot(s, g) == 0 for g in fgens)
                              for s in sup.dual_rays)
            if on_boundary:
                continue
            shared = any(j != i and all(fan.cone(j).contains(g) for g in fgens)
                         for j in range(len(fan.max_cones)))
            if not shared:
                raise PairError(
                    "support condition fails: unmatched interior wall of cone %d" % i)


# ---------------------------------------------------------------------------
# pairs


@dataclass(frozen=True)
class GPair:
    """Invariant boundary, free b-divisor data, general boundaries."""

    b_inv: tuple       # Fractions aligned with fan.rays, in [0, 1]
    bdiv_a: SupportSet
    general: tuple = ()   # (b_j >= 0, SupportSet with integer points)

    @property
    def folded(self):
        return not self.general


def make_pair(fan, b_inv, bdiv_points, general=()):
    b = tuple(Fraction(x) for x in b_inv)
    if len(b) != len(fan.rays):
        raise PairError("boundary coefficient count does not match the rays")
    for i, x in enumerate(b):
        if not 0 <= x <= 1:
            raise PairError("boundary coefficient %s on ray %d outside [0,1]" % (x, i))
    a_set = make_support(bdiv_points)
    if a_set.dim != fan.rank:
        raise PairError("b-divisor points have the wrong dimension")
    gen = []
    for bj, pts in general:
        bj = Fraction(bj)
        if bj < 0:
            raise PairError("general boundary coefficient must be nonnegative")
        s = make_support(pts)
        if s.dim != fan.rank:
            raise PairError("general boundary points have the wrong dimension")
        if any(x.denominator != 1 for p in s.points for x in p):
            raise PairError("general boundary support sets must be integral")
        gen.append((bj, s))
    return GPair(b, a_set, tuple(gen))


def fix_mov(a_set, l_coeffs, rays):
    """Fixed/mobile decomposition of the system induced by A with twist L.

    The fixed part has coefficient min_{a in A} <a, e> + mult_e L on each
    ray e; the mobile part depends only on A.
    """
    fix = tuple(support_value(a_set, e) + Fraction(l)
                for e, l in zip(rays, l_coeffs))
    return fix, a_set


def fold_general(fan, pair):
    """Replace general boundaries by generalized ones.

    b_inv gains the fixed parts b_j * min_a <a, e>; the b-divisor set
    becomes A + sum_j b_j * A_j; toric g-log discrepancies are unchanged.
    """
    if pair.folded:
        return pair
    b = list(pair.b_inv)
    a_set = pair.bdiv_a
    for bj, aj in pair.general:
        fix, _mov = fix_mov(aj, (0,) * len(fan.rays), fan.rays)
        b = [x + bj * f for x, f in zip(b, fix)]
        a_set = support_sum(a_set, support_scale(bj, aj))
    return make_pair(fan, b, a_set.points, ())


def cartier_psi(tc, pair):
    """Per-cone solutions psi with <psi,e> - h_A(e) = 1 - b_e on the rays."""
    if not pair.folded:
        raise PairError("cartier_psi needs a folded pair")
    fan = tc.fan
    r = _nef_values(fan, pair)
    psis = []
    for ci, cone_rays in enumerate(fan.max_cones):
        rows = [fan.rays[i] for i in cone_rays]
        rhs = [r[i] for i in cone_rays]
        sol = solve_rational(rows, rhs, fan.rank)
        if sol is None:
            raise NotRCartier(ci)
        psis.append(sol)
    return tuple(psis)


def _nef_values(fan, pair):
    """r_e = 1 - b_e + h_A(e): the coefficients of -(K + B + D_X)."""
    return tuple(1 - b + support_value(pair.bdiv_a, e)
                 for e, b in zip(fan.rays, pair.b_inv))


def is_f_nef(tc, pair, psi):
    """Toric relative nef test: each -psi_sigma lies in the section box."""
    r = _nef_values(tc.fan, pair)
    return all(dot(p, e) <= re for p in psi for e, re in zip(tc.fan.rays, r))


@dataclass(frozen=True)
class BoxData:
    box: Polyhedron
    u: Polyhedron
    sigma0: Cone
    l: int
    a_eff: SupportSet = field(compare=False)
    r: tuple = field(compare=False)
    psi: tuple = field(compare=False)
    tc: ToricContraction = field(compare=False)


def box_square(tc, pair, psi=None):
    """Assemble box = Conv(A) + box_{-K-B-D}, its polar u, sigma0 and l."""
    pair = fold_general(tc.fan, pair)
    if psi is None:
        psi = cartier_psi(tc, pair)
    if not is_f_nef(tc, pair, psi):
        raise PairError("-(K+B+D) is not f-nef")
    fan = tc.fan
    n = fan.rank
    r = _nef_values(fan, pair)
    box_d = from_inequalities(n, [(e, -re) for e, re in zip(fan.rays, r)])
    if box_d.empty:
        raise PairError("empty section box")
    conv_a = from_generators(n, pair.bdiv_a.points)
    box = minkowski_sum(conv_a, box_d)
    u = _polar_raw(box)
    sigma0 = make_cone(n, u.rays) if u.rays else make_cone(n, [])
    l = n - sigma0.cone_dim()
    sup = tc.support
    for g in sigma0.generators:
        if not sup.contains(g):
            raise PairError("sigma0 leaves the support")
    ucone = cone_over(u)
    if not (all(sup.contains(g) for g in ucone.generators)
            and all(ucone.contains(g) for g in sup.generators)):
        raise PairError("cone over u does not match the support")
    return BoxData(box, u, sigma0, l, pair.bdiv_a, r, psi, tc)


def analyze(tc, pair):
    """Fold, solve the Cartier data, test nef, build the box.

    Returns (folded pair, psi, BoxData).
    """
    folded = fold_general(tc.fan, pair)
    psi = cartier_psi(tc, folded)
    if not is_f_nef(tc, folded, psi):
        raise PairError("-(K+B+D) is not f-nef")
    return folded, psi, box_square(tc, folded, psi)


def log_discrepancy(bd, e):
    """-h_box(e): the g-log discrepancy in the toric valuation of e."""
    e = tuple(int(x) for x in e)
    if is_zero(e):
        raise PairError("log discrepancy of the zero vector")
    if not bd.tc.support_contains(e):
        raise PairError("vector outside the support of the fan")
    lo, _hi = interval_image(e, bd.box)
    assert lo is not None, "h_box must be finite on the support"
    val = -lo
    # cross-check against the per-cone formula <psi_sigma, e> - h_A(e)
    fan = bd.tc.fan
    for ci in range(len(fan.max_cones)):
        if fan.cone(ci).contains(e):
            alt = dot(bd.psi[ci], e) - support_value(bd.a_eff, e)
            assert alt == val, "box and per-cone log discrepancies disagree"
            break
    return val


def is_glc(bd):
    """Generalized log canonical test: 0 in box."""
    return bd.box.contains((0,) * bd.tc.rank)


def _fiber_witness(fan):
    """A lattice point interior to the support: the ray sum of a top cone."""
    c = fan.max_cones[0]
    v = (0,) * fan.rank
    for i in c:
        v = vec_add(v, fan.rays[i])
    return v


def mld_over_fiber(tc, bd):
    """Minimal log discrepancy over the fiber through the invariant point.

    Returns the exact positive rational, or None when the mld is not
    positive.  Works in the quotient by the span of sigma0, where the
    image of u is compact and lattice points can be enumerated.
    """
    if tc.base_rank == 0:
        raise PairError("dim Y = 0: use a global mld variant (out of scope)")
    if not is_glc(bd):
        raise PairError("mld_over_fiber needs a g-lc pair")
    n = tc.rank
    if bd.l == 0:
        return None
    span = saturated_span(n, bd.sigma0.generators)
    q = quotient_by_span(n, span)
    proj = q.projection
    up = map_polyhedron(proj, bd.u, bd.l)
    if not up.is_compact():
        raise PairError("projected u is not compact")
    if strict_interior_contains(up, (0,) * bd.l):
        return None
    estar = _fiber_witness(tc.fan)
    pstar = apply_hom(proj, estar)
    t_cap = gauge(up, pstar)
    assert t_cap is not None and t_cap > 0
    sup_gens = [g2 for g2 in (apply_hom(proj, g) for g in tc.support.generators)
                if not is_zero(g2)]
    pcone = make_cone(bd.l, sup_gens)
    best = None
    for v in lattice_points(scale_polyhedron(up, t_cap)):
        if is_zero(v) or not pcone.interior_contains(v):
            continue
        g = gauge(up, v)
        assert g is not None and g > 0
        if best is None or g < best[0]:
            best = (g, v)
    assert best is not None, "the witness point must be enumerated"
    val = best[0]
    # recheck: no enumerated candidate sits strictly inside val * up
    for v in lattice_points(scale_polyhedron(up, t_cap)):
        if not is_zero(v) and pcone.interior_contains(v):
            assert gauge(up, v) >= val
    return val


def lct_pullback(tc, bd, phibar):
    """sup{g >= 0 : -g * pi^*(phibar) in box}, exact."""
    phibar = tuple(int(x) for x in phibar)
    if is_zero(phibar):
        raise PairError("lct of the zero functional")
    if not all(dot(phibar, g) >= 0 for g in tc.sigma_bar.generators):
        raise PairError("functional is not in the dual of sigma_bar")
    if not is_glc(bd):
        raise PairError("lct_pullback needs a g-lc pair")
    phi = compose_covector(phibar, tc.pi, tc.rank)
    best = None
    for a, c in bd.box.ineqs:
        s = dot(a, phi)
        if s > 0:
            cand = Fraction(-c) / s
            best = cand if best is None else min(best, cand)
        elif s == 0 and c > 0:
            raise PairError("box is infeasible along the functional")
    if best is None:
        raise PairError("unbounded lct: functional is trivial on the box")
    return best


def oracle_mld(tc, bd, radius):
    """Brute-force scan: min log discrepancy over primitive points in a box.

    Scans [-radius, radius]^n intersected with the strict interior of the
    support.  The result is an upper bound for the mld; it is exact once
    the box contains a minimizer.  Returns (value, witness) or None.
    """
    if radius < 1:
        raise PairError("oracle box radius must be positive")
    n = tc.rank
    best = None
    for v in itertools.product(range(-radius, radius + 1), repeat=n):
        if is_zero(v) or content(v) != 1:
            continue
        if not tc.support_contains(v, strict=True):
            continue
        a = log_discrepancy(bd, v)
        if best is None or a < best[0] or (a == best[0] and v < best[1]):
            best = (a, v)
    return best
