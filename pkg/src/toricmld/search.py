"""Constructive search for invariant hyperplane sections with certificates.

Implements the bound function gamma(d, a), lattice width search over the
compact quotient image of u, fan subdivision along a functional, the
slice germ with rescaled boundary, the extension of non-negative
functionals with length control, hyperplane lifting, and the recursion
tying these together.  Every intermediate lemma is re-validated at run
time and the final (phi_bar, gamma) pair is checked against the box
independently of the search trace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    compose_covector,
    content,
    dot,
    extend_hom,
    is_zero,
    kernel_basis,
    kernel_sublattice,
    primitive,
    quotient_by_span,
    rational_rank,
    saturated_span,
    solve_rational,
    sublattice_from_vectors,
    transpose,
    vec_scale,
)
from .pairs import (
    BoxData,
    GPair,
    PairError,
    ToricContraction,
    analyze,
    box_square,
    is_glc,
    log_discrepancy,
    make_contraction,
    make_fan,
    make_pair,
    mld_over_fiber,
    validate_contraction,
)
from .polyhedra import (
    from_inequalities,
    make_cone,
    interval_image,
    map_polyhedron,
    polyhedra_equal,
    scale_polyhedron,
    strict_interior_contains,
)

WIDTH_NORM_CAP = 16


class SearchError(PairError):
    pass


# ---------------------------------------------------------------------------
# the bound function


def gamma(d, a):
    """gamma(1, a) = a, gamma(d, a) = gamma(d-1, a^2/d^2)."""
    d = int(d)
    a = Fraction(a)
    if d < 1:
        raise ValueError("gamma needs d >= 1")
    if a <= 0:
        raise ValueError("gamma needs a > 0")
    while d > 1:
        a = a * a / (d * d)
        d -= 1
    return a


def gamma_closed(d, a):
    """Closed form a^(2^(d-1)) / prod_i i^(2^(i-1))."""
    d = int(d)
    a = Fraction(a)
    if d < 1 or a <= 0:
        raise ValueError("gamma_closed needs d >= 1 and a > 0")
    num = a ** (2 ** (d - 1))
    den = Fraction(1)
    for i in range(1, d + 1):
        den *= Fraction(i) ** (2 ** (i - 1))
    return num / den


def lc_places_cone(bd):
    """The cone of log discrepancy <= 0 directions (recession cone of u)."""
    if not is_glc(bd):
        raise PairError("lc places need a g-lc pair")
    return bd.sigma0


# ---------------------------------------------------------------------------
# width search


@dataclass(frozen=True)
class WidthResult:
    phi: tuple        # primitive covector on the quotient lattice N'
    lo: Fraction
    hi: Fraction
    w: Fraction
    w_minus: Fraction
    w_plus: Fraction

    @property
    def boundary(self):
        return self.lo == 0


def _covector_level(l, k):
    """Primitive covectors of sup-norm k, one per +/- pair, in colex order."""
    seen = set()
    for v in itertools.product(range(-k, k + 1), repeat=l):
        if max(abs(x) for x in v) != k or content(v) != 1:
            continue
        for x in v:
            if x != 0:
                if x < 0:
                    v = tuple(-y for y in v)
                break
        seen.add(v)
    return sorted(seen, key=lambda v: v[::-1])


def _oriented(phi, lo, hi):
    if hi == 0:
        return tuple(-x for x in phi), -hi, -lo
    return phi, lo, hi


def _width_satisfiers(up, bound, k):
    """Bound-satisfying functionals at sup-norm level k, in colex order."""
    out = []
    for phi in _covector_level(up.dim, k):
        lo, hi = interval_image(phi, up)
        assert lo is not None and hi is not None
        if hi - lo <= bound:
            out.append((phi, lo, hi))
    return out


def width_functional(up, t, l, cap=WIDTH_NORM_CAP):
    """First functional of length <= l^2/t over up, preferring 0 on the boundary.

    Candidates are enumerated by increasing sup-norm and, within a level,
    by colexicographic order on a sign-canonical representative; the
    orientation of a boundary result is normalized to [0, w].
    """
    if up.empty or not up.is_compact():
        raise PairError("width search needs a compact nonempty polyhedron")
    bound = Fraction(l * l) / Fraction(t)
    for k in range(1, cap + 1):
        sats = _width_satisfiers(up, bound, k)
        boundary = [s for s in sats if s[1] == 0 or s[2] == 0]
        pick = boundary[0] if boundary else (sats[0] if sats else None)
        if pick is None:
            continue
        phi, lo, hi = _oriented(*pick)
        return WidthResult(phi, lo, hi, hi - lo, -lo, hi)
    raise SearchError("width bound violated: no functional of length <= %s "
                      "with sup-norm <= %d" % (bound, cap))


# ---------------------------------------------------------------------------
# fan subdivision along a functional


def _two_face_pairs(cone, n):
    pairs = []
    for a, b in itertools.combinations(cone.generators, 2):
        act = [d for d in cone.dual_rays if dot(d, a) == 0 and dot(d, b) == 0]
        if rational_rank(act, n) != n - 2:
            continue
        members = [g for g in cone.generators
                   if all(dot(d, g) == 0 for d in act)]
        if len(members) == 2:
            pairs.append((a, b))
    return pairs


def subdivide_fan(fan, phi):
    """Split every cone along phi; new rays follow the crossing formula.

    Returns (fan', q) where q maps each new primitive ray e' to the
    positive integer with q(e') * e' = phi(e2) e1 - phi(e1) e2.
    """
    if is_zero(phi):
        raise PairError("cannot subdivide along the zero functional")
    n = fan.rank
    newq = {}
    for ci in range(len(fan.max_cones)):
        cone = fan.cone(ci)
        for a, b in _two_face_pairs(cone, n):
            va, vb = dot(phi, a), dot(phi, b)
            if va < 0 < vb:
                e1, e2, v1, v2 = a, b, va, vb
            elif vb < 0 < va:
                e1, e2, v1, v2 = b, a, vb, va
            else:
                continue
            w = tuple(v2 * x - v1 * y for x, y in zip(e1, e2))
            qv = content(w)
            p = tuple(x // qv for x in w)
            if p in newq:
                assert newq[p] == qv
            newq[p] = qv
    rays = list(fan.rays) + sorted(p for p in newq if p not in fan._ray_lookup)
    cones = set()
    for ci, cidx in enumerate(fan.max_cones):
        cone = fan.cone(ci)
        inside = [p for p in newq if cone.contains(p)]
        for sign in (1, -1):
            gens = [fan.rays[i] for i in cidx
                    if sign * dot(phi, fan.rays[i]) >= 0] + inside
            gens = sorted(set(gens))
            if rational_rank(gens, n) == n:
                cones.add(tuple(sorted(rays.index(g) for g in gens)))
    fan2 = make_fan(n, rays, sorted(cones))
    return fan2, newq


# ---------------------------------------------------------------------------
# the slice germ


@dataclass(frozen=True)
class SliceData:
    tc1: ToricContraction
    pair1: GPair
    psi1: tuple
    bd1: BoxData
    lam: Fraction
    kernel: object            # Sublattice N0 = ker phi
    pi0: tuple                # hom N0 -> Nbar0 in the chosen bases
    nbar0: object             # Sublattice pi(N0) inside Nbar
    u0: object                # U cap phi-perp in N0 coordinates
    u_check: object           # u of the slice pair (equals u0 / lam)
    mld1: Fraction
    rays_n: tuple             # slice fan rays in N coordinates
    max_ray_discrepancy: Fraction


def make_slice(tc, pair, bd, phi_n, lam, t, fan2, newq):
    """Build the codimension-one germ cut out by ker(phi) and validate it.

    Validations, each raising with the violated statement named:
    boundary coefficients of the rescaled pair in [0, 1], slice anti-log
    canonical class nef, u of the slice equal to lam^{-1} (u cap
    phi-perp), the base of the slice has an invariant point, and the
    slice mld is at least lam * t.
    """
    if not pair.folded:
        raise PairError("slice construction needs a folded pair")
    n = tc.rank
    lam = Fraction(lam)
    lo, hi = interval_image(phi_n, bd.u)
    if lo is None or hi is None or not lo < 0 < hi:
        raise PairError("slice needs 0 interior to phi(U)")
    if not 0 < lam <= 1 / (hi - lo):
        raise PairError("lambda must be in (0, 1/w]")
    kern = kernel_sublattice(phi_n)

    max_ray_discrepancy = max(log_discrepancy(bd, e) for e in fan2.rays)

    # maximal cones of the phi-perp fan, collected from the original cones
    zero_sets = []
    low_sets = []
    for ci, cidx in enumerate(tc.fan.max_cones):
        cone = tc.fan.cone(ci)
        gens = [tc.fan.rays[i] for i in cidx if dot(phi_n, tc.fan.rays[i]) == 0]
        gens += [p for p in newq if cone.contains(p)]
        gens = sorted(set(gens))
        if not gens:
            continue
        if rational_rank(gens, n) == n - 1:
            if gens not in zero_sets:
                zero_sets.append(gens)
        else:
            low_sets.append(gens)
    if not zero_sets:
        raise PairError("slice fan is empty: phi-perp misses the support")

    rays_n = sorted({g for gens in zero_sets for g in gens})
    rays0 = []
    for g in rays_n:
        c = kern.coordinates(g)
        assert c is not None, "slice ray outside ker(phi)"
        rays0.append(c)
    index = {g: i for i, g in enumerate(rays_n)}
    cones0 = [tuple(sorted(index[g] for g in gens)) for gens in zero_sets]
    fan0 = make_fan(n - 1, rays0, cones0)
    for gens in low_sets:
        cone_hit = any(all(fan0.cone(i).contains(kern.coordinates(g))
                           for g in gens) for i in range(len(cones0)))
        if not cone_hit:
            raise PairError("slice fan does not cover phi-perp")

    # contraction of the slice: pi restricted to ker(phi), onto its image
    images = [tuple(sum(tc.pi[i][j] * b[j] for j in range(n))
                    for i in range(tc.base_rank)) for b in kern.basis]
    nbar0 = sublattice_from_vectors(tc.base_rank, images)
    if nbar0.rank == 0:
        raise PairError("slice base has rank zero")
    cols = []
    for img in images:
        c = nbar0.coordinates(img)
        assert c is not None
        cols.append(c)
    pi0 = tuple(tuple(cols[j][i] for j in range(len(cols)))
                for i in range(nbar0.rank))
    sb_gens = [g2 for g2 in (tuple(dot(pi0[i], r) for i in range(nbar0.rank))
                             for r in rays0) if not is_zero(g2)]
    sigma_bar0 = make_cone(nbar0.rank, sb_gens)
    if sigma_bar0.cone_dim() != nbar0.rank:
        raise PairError("slice base cone is not full-dimensional: no invariant point")
    tc1 = ToricContraction(fan0, pi0, sigma_bar0)
    validate_contraction(tc1)

    # rescaled boundary (1 - lam) Sigma + lam B restricted to the slice
    b1 = []
    for g in rays_n:
        ae = log_discrepancy(bd, g)
        coeff = 1 - lam * ae
        if not 0 <= coeff <= 1:
            raise PairError("rescaled slice coefficient %s on %r is "
                            "outside [0,1]" % (coeff, g))
        b1.append(coeff)
    a0 = [tuple(dot(a, b) for b in kern.basis) for a in pair.bdiv_a.points]
    pair1 = make_pair(fan0, b1, [vec_scale(lam, p) for p in a0])
    try:
        _folded1, psi1, bd1 = analyze(tc1, pair1)
    except PairError as exc:
        raise PairError("slice anti-log-canonical class is not nef: %s" % exc)

    # U(slice) = lam^{-1} (U cap phi-perp), exactly
    restricted = [(tuple(dot(a, b) for b in kern.basis), c)
                  for a, c in bd.u.ineqs]
    u0 = from_inequalities(n - 1, restricted)
    u_check = bd1.u
    if not polyhedra_equal(u_check, scale_polyhedron(u0, Fraction(1) / lam)):
        raise PairError("slice identity fails: U(slice) != lam^-1 (U cap phi-perp)")

    mld1 = mld_over_fiber(tc1, bd1)
    if mld1 is None or mld1 < lam * t:
        raise PairError("slice mld drops below lam * t")
    if bd1.l != bd.l - 1:
        raise PairError("slice lc-place dimension did not drop by one")
    return SliceData(tc1, pair1, psi1, bd1, lam, kern, pi0, nbar0, u0,
                     u_check, mld1, tuple(rays_n), max_ray_discrepancy)


# ---------------------------------------------------------------------------
# extension of non-negative functionals


@dataclass(frozen=True)
class ExtensionTrace:
    phi1: tuple
    phi2: tuple
    phi_prime: tuple
    q: int
    c: Fraction
    gen_index: int
    branch: str
    w_minus: Fraction
    w_plus: Fraction
    interval_prime: tuple


def extend_functional(rank, gens, c_body, phi, phi0_vals, l0):
    """Extend q * phi0 from ker(phi) to a functional nonnegative on the cone.

    Follows the extension argument step by step: extend phi0 arbitrarily
    to phi2, move to the extremal admissible multiple c of phi, and
    combine at a generator attaining it.  Postconditions checked exactly:
    1 <= q < w, restriction q * phi0, and phi'(C) inside [0, w * l0].
    """
    l0 = Fraction(l0)
    gens = [tuple(int(x) for x in g) for g in gens]
    if not c_body.contains((0,) * rank):
        raise PairError("extension hypothesis fails: 0 not in C")
    for g in gens:
        if not c_body.contains(g):
            raise PairError("extension hypothesis fails: generator %r not in C" % (g,))
    sigma = make_cone(rank, gens)
    for p in c_body.points:
        if not sigma.contains(p):
            raise PairError("extension hypothesis fails: C is not inside the cone")
    for r in c_body.rays:
        if not sigma.contains(r):
            raise PairError("extension hypothesis fails: C is not inside the cone")
    lo, hi = interval_image(phi, c_body)
    if lo is None or hi is None or not lo < 0 < hi:
        raise PairError("extension hypothesis fails: phi(C) must be compact "
                        "with 0 interior")
    w_minus, w_plus, w = -lo, hi, hi - lo
    kern = kernel_sublattice(phi)
    if len(phi0_vals) != kern.rank:
        raise PairError("phi0 values do not match ker(phi)")
    restricted = [(tuple(dot(a, b) for b in kern.basis), c) for a, c in c_body.ineqs]
    c0 = from_inequalities(kern.rank, restricted)
    lo0, hi0 = interval_image(tuple(phi0_vals), c0)
    if lo0 != 0 or hi0 != l0 or l0 <= 0:
        raise PairError("extension hypothesis fails: phi0(C0) != [0, l0]")
    phi2 = extend_hom(kern, tuple(phi0_vals))

    if w_minus <= w_plus:
        cands = [(Fraction(dot(phi2, g), -dot(phi, g)), i, g)
                 for i, g in enumerate(gens) if dot(phi, g) < 0]
        if not cands:
            raise PairError("no generator with phi < 0")
        c = min(x[0] for x in cands)
        _, gi, g = next(x for x in cands if x[0] == c)
        q = -dot(phi, g)
        phi_prime = tuple(dot(phi2, g) * x - dot(phi, g) * y
                          for x, y in zip(phi, phi2))
        branch = "w- <= w+"
    else:
        cands = [(Fraction(-dot(phi2, g), dot(phi, g)), i, g)
                 for i, g in enumerate(gens) if dot(phi, g) > 0]
        if not cands:
            raise PairError("no generator with phi > 0")
        c = max(x[0] for x in cands)
        _, gi, g = next(x for x in cands if x[0] == c)
        q = dot(phi, g)
        phi_prime = tuple(-dot(phi2, g) * x + dot(phi, g) * y
                          for x, y in zip(phi, phi2))
        branch = "w+ < w-"

    if not 1 <= q < w:
        raise PairError("extension postcondition fails: q = %s not in [1, w)" % q)
    for b, val in zip(kern.basis, phi0_vals):
        if dot(phi_prime, b) != q * val:
            raise PairError("extension postcondition fails: restriction != q phi0")
    plo, phi_hi = interval_image(phi_prime, c_body)
    if plo is None or phi_hi is None or plo < 0 or phi_hi > w * l0:
        raise PairError("extension postcondition fails: phi'(C) not in [0, w l0]")
    return ExtensionTrace(tuple(phi), phi2, phi_prime, int(q), c, gi, branch,
                          w_minus, w_plus, (plo, phi_hi))


# ---------------------------------------------------------------------------
# lifting and the recursion


def _descend(tc, phi):
    """phi_bar with pi^*(phi_bar) = phi, for phi vanishing on ker(pi)."""
    sol = solve_rational(transpose(tc.pi, tc.rank), phi, tc.base_rank)
    if sol is None:
        raise PairError("descent failed: functional is not pulled back from the base")
    if any(x.denominator != 1 for x in sol):
        raise PairError("descent failed: non-integral solution")
    phibar = tuple(int(x) for x in sol)
    if is_zero(phibar):
        raise PairError("descent failed: zero functional")
    if not all(dot(phibar, g) >= 0 for g in tc.sigma_bar.generators):
        raise PairError("descended functional leaves the dual of sigma_bar")
    return phibar


def lift_hyperplane(tc, bd, sl, phibar0, gamma1, phi_n, w):
    """Lift a slice certificate (phibar0, gamma1) through the width functional.

    Applies the nonnegative-functional extension with C = u and the fan rays as
    generators, descends the result along pi, and returns the primitive
    phi_bar together with gamma = gamma1 / (lam w), the integer q of the
    pullback relation, and the primitivization scale.
    """
    n = tc.rank
    w = Fraction(w)
    lam = sl.lam
    phi0 = compose_covector(phibar0, sl.pi0, n - 1)
    lo0, l0 = interval_image(phi0, sl.u0)
    if lo0 != 0 or l0 is None or l0 <= 0:
        raise PairError("slice functional is not normalized on U0")
    if l0 > lam / gamma1:
        raise PairError("slice certificate too weak: l0 > lam / gamma1")
    tr = extend_functional(n, tc.fan.rays, bd.u, phi_n,
                           tuple(phi0), l0)
    gamma_val = gamma1 / (lam * w)
    phi_prime = tr.phi_prime
    if not bd.box.contains(vec_scale(-gamma_val, phi_prime)):
        raise PairError("lifted functional misses the box at gamma")
    phibar_raw = _descend(tc, phi_prime)
    ustar = tuple(dot(phibar_raw, row) for row in sl.nbar0.basis)
    if ustar != tuple(tr.q * x for x in phibar0):
        raise PairError("pullback relation u^* H = q H1 fails")
    scale = content(phibar_raw)
    phibar = primitive(phibar_raw)
    if not bd.box.contains(vec_scale(-gamma_val,
                                     compose_covector(phibar, tc.pi, n))):
        raise PairError("primitive descent misses the box")
    return phibar, gamma_val, tr, scale


@dataclass(frozen=True)
class HyperplaneCertificate:
    phi_bar: tuple
    gamma: Fraction
    mld: Fraction
    d: int
    transcript: tuple


def _record(transcript, **kw):
    transcript.append(dict(kw))


def _search(tc, pair, bd, t, transcript, depth):
    n = tc.rank
    l = bd.l
    if l < 1:
        raise SearchError("l = 0 contradicts a positive mld over the fiber")
    if l == 1:
        cov = kernel_basis(tuple(bd.sigma0.generators), n)
        if len(cov) != 1:
            raise SearchError("sigma0-perp is not one-dimensional")
        phi1 = primitive(cov[0])
        lo, hi = interval_image(phi1, bd.u)
        assert lo is not None and hi is not None
        if lo != 0 and hi == 0:
            phi1, lo, hi = tuple(-x for x in phi1), -hi, -lo
        if lo != 0:
            raise SearchError("l=1 orientation failed: 0 interior to phi1(U)")
        assert hi > 0
        if t * hi > 1:
            raise SearchError("l=1 interval longer than 1/t contradicts the mld")
        gamma_here = Fraction(1) / hi
        phibar = _descend(tc, phi1)
        _record(transcript, depth=depth, l=l, case="l1", t=t, phi=phi1,
                interval=(lo, hi), gamma=gamma_here, phibar=phibar)
        return phibar, gamma_here

    span = saturated_span(n, bd.sigma0.generators)
    q = quotient_by_span(n, span)
    proj = q.projection
    up = map_polyhedron(proj, bd.u, l)
    if not up.is_compact():
        raise SearchError("projected u is not compact")
    if strict_interior_contains(up, (0,) * l):
        raise SearchError("0 interior to the projected u: mld not positive")
    bound = Fraction(l * l) / t
    need = gamma(l, t)
    for k in range(1, WIDTH_NORM_CAP + 1):
        sats = _width_satisfiers(up, bound, k)
        pick = None
        for phi, lo, hi in sats:
            if (lo == 0 or hi == 0) and Fraction(1, 1) / (hi - lo) >= need:
                pick = ("boundary", phi, lo, hi)
                break
        if pick is None:
            for phi, lo, hi in sats:
                if lo < 0 < hi:
                    pick = ("interior", phi, lo, hi)
                    break
        if pick is None:
            continue
        case, phi, lo, hi = pick
        if case == "boundary":
            phi, lo, hi = _oriented(phi, lo, hi)
            w = hi
            phi_n = compose_covector(phi, proj, n)
            gamma_here = Fraction(1) / w
            if not bd.box.contains(vec_scale(-gamma_here, phi_n)):
                raise SearchError("boundary functional misses the box at 1/w")
            phibar = _descend(tc, phi_n)
            _record(transcript, depth=depth, l=l, case="boundary", t=t,
                    phi=phi_n, interval=(lo, hi), w=w, gamma=gamma_here,
                    phibar=phibar)
            return phibar, gamma_here
        # interior: slice and recurse
        w = hi - lo
        phi_n = compose_covector(phi, proj, n)
        assert content(phi_n) == 1
        if not w > 1:
            raise SearchError("interior width must exceed 1")
        lam = Fraction(1) / w
        fan2, newq = subdivide_fan(tc.fan, phi_n)
        sl = make_slice(tc, pair, bd, phi_n, lam, t, fan2, newq)
        if sl.max_ray_discrepancy > w:
            raise SearchError("a subdivided-fan ray has discrepancy above the width")
        rec = dict(depth=depth, l=l, case="interior", t=t, phi=phi_n,
                   interval=(lo, hi), w=w, w_minus=-lo,
                   w_plus=hi, lam=lam, new_rays=len(newq),
                   max_ray_discrepancy=sl.max_ray_discrepancy,
                   slice_mld=sl.mld1, width_gt_one=bool(w > 1),
                   slice_u_ok=True, invariant_point_ok=True)
        transcript.append(rec)
        phibar0, gamma1 = _search(sl.tc1, sl.pair1, sl.bd1, t * lam,
                                  transcript, depth + 1)
        phibar, gamma_here, tr, scale = lift_hyperplane(
            tc, bd, sl, phibar0, gamma1, phi_n, w)
        rec.update(q=tr.q, branch=tr.branch, descent_scale=scale,
                   gamma=gamma_here, phibar=phibar)
        return phibar, gamma_here
    raise SearchError("width bound violated: no usable functional within "
                      "sup-norm %d" % WIDTH_NORM_CAP)


def find_hyperplane(tc, pair):
    """Produce a certified invariant hyperplane section for the germ.

    Requires dim Y > 0, -(K+B+D) f-nef and a positive mld over the
    fiber; returns a HyperplaneCertificate whose (phi_bar, gamma) pass
    verify_certificate and satisfy gamma >= gamma(d, mld).
    """
    if tc.base_rank == 0:
        raise PairError("dim Y = 0 is out of scope for the hyperplane search")
    folded, _psi, bd = analyze(tc, pair)
    if not is_glc(bd):
        raise PairError("pair is not g-lc")
    a = mld_over_fiber(tc, bd)
    if a is None:
        raise PairError("mld over the fiber is not positive")
    transcript = []
    phibar, gamma_val = _search(tc, folded, bd, a, transcript, 0)
    cert = HyperplaneCertificate(phibar, gamma_val, a, tc.rank,
                                 tuple(transcript))
    ok, reasons = verify_certificate(tc, pair, cert)
    if not ok:
        raise SearchError("internal: produced certificate fails verification: %s"
                          % "; ".join(reasons))
    return cert


def verify_certificate(tc, pair, cert):
    """Re-check a certificate from scratch, ignoring its transcript.

    Returns (ok, reasons).  Checks: phi_bar is primitive, nonzero and in
    the dual of sigma_bar; the pair is g-lc; -gamma pi^*(phi_bar) lies in
    the box; gamma >= gamma(d, mld) for the recomputed mld; the stored
    mld and dimension match.
    """
    reasons = []
    try:
        phibar = tuple(int(x) for x in cert.phi_bar)
    except (TypeError, ValueError):
        return False, ["phi_bar is not an integer vector"]
    if len(phibar) != tc.base_rank:
        return False, ["phi_bar has the wrong dimension"]
    if is_zero(phibar):
        reasons.append("phi_bar is zero")
    elif content(phibar) != 1:
        reasons.append("phi_bar is not primitive")
    if not all(dot(phibar, g) >= 0 for g in tc.sigma_bar.generators):
        reasons.append("phi_bar is not in the dual of sigma_bar")
    gamma_val = Fraction(cert.gamma)
    if gamma_val <= 0:
        reasons.append("gamma is not positive")
    if reasons:
        return False, reasons
    try:
        _folded, _psi, bd = analyze(tc, pair)
    except PairError as exc:
        return False, ["pair data invalid: %s" % exc]
    if not is_glc(bd):
        return False, ["pair is not g-lc"]
    phi = compose_covector(phibar, tc.pi, tc.rank)
    if not bd.box.contains(vec_scale(-gamma_val, phi)):
        reasons.append("-gamma pi^*(phi_bar) is outside the box")
    mld = mld_over_fiber(tc, bd)
    if mld is None:
        reasons.append("mld over the fiber is not positive")
    else:
        if Fraction(cert.mld) != mld:
            reasons.append("stored mld %s differs from recomputed %s"
                           % (cert.mld, mld))
        if int(cert.d) != tc.rank:
            reasons.append("stored dimension differs from rank N")
        if gamma_val < gamma(tc.rank, mld):
            reasons.append("gamma below the bound gamma(d, mld)")
    return not reasons, reasons
