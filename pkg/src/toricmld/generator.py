"""Seeded random germs satisfying the hyperplane-search hypotheses.

Instances are built backwards from valid data: a random lattice
projection, a random pointed full-dimensional base cone, a fan obtained
by cutting the pulled-back support along hyperplanes (plus optional
stellar subdivisions), and pair data sampled with rejection until the
pair is R-Cartier, f-nef, g-lc and has positive mld over the fiber.
Everything is drawn from a single random.Random(seed), so a seed pins
the instance exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .lattice import dot, identity, is_zero, kernel_basis, primitive, vec_add
from .pairs import (
    PairError,
    analyze,
    is_glc,
    make_contraction,
    make_fan,
    make_pair,
    mld_over_fiber,
    validate_contraction,
)
from .polyhedra import (
    GeometryError,
    cone_from_normals,
    make_cone,
    make_support,
    support_scale,
    support_sum,
    support_value,
)
from .lattice import LatticeError

MAX_ATTEMPTS = 400


def _rand_unimodular(rng, n, steps=8):
    m = [list(r) for r in identity(n)]
    for _ in range(steps):
        op = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if op == 0 and i != j:
            c = rng.choice((-2, -1, 1, 2))
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
            if max(abs(x) for x in m[i]) > 9:
                m[i] = [a - c * b for a, b in zip(m[i], m[j])]
        elif op == 1 and i != j:
            m[i], m[j] = m[j], m[i]
        elif op == 2:
            m[i] = [-a for a in m[i]]
    return tuple(tuple(r) for r in m)


def _rand_sigma_bar(rng, nbar):
    while True:
        k = nbar + rng.randint(0, 2)
        gens = []
        for _ in range(k):
            v = tuple(rng.randint(-3, 3) for _ in range(nbar))
            if not is_zero(v):
                gens.append(primitive(v))
        if not gens:
            continue
        c = make_cone(nbar, gens)
        if c.is_pointed() and c.is_full_dim():
            return c


def _split(cone, cov, n):
    pieces = []
    for sign in (1, -1):
        rows = list(cone.dual_rays)
        for l in cone.dual_lines:
            rows.append(l)
            rows.append(tuple(-x for x in l))
        rows.append(tuple(sign * x for x in cov))
        piece = cone_from_normals(n, rows)
        if piece.cone_dim() == n:
            pieces.append(piece)
    return pieces


def _stellar(cone, n):
    gens = cone.generators
    v = (0,) * n
    for g in gens:
        v = vec_add(v, g)
    v = primitive(v)
    out = []
    for d in cone.dual_rays:
        fgens = [g for g in gens if dot(d, g) == 0]
        if not fgens:
            continue
        piece = make_cone(n, list(fgens) + [v])
        if piece.cone_dim() == n:
            out.append(piece)
    return out if len(out) >= 2 else [cone]


def _rand_covector(rng, n):
    while True:
        v = tuple(rng.randint(-2, 2) for _ in range(n))
        if not is_zero(v):
            return primitive(v)


def _build_fan(rng, support, n):
    pieces = [support]
    guard = 0
    while True:
        bad = next((p for p in pieces if not p.is_pointed()), None)
        if bad is None:
            break
        guard += 1
        if guard > 60:
            raise PairError("fan generation stalled on a lineality split")
        lines = list(bad.dual_lines)
        lin = kernel_basis(tuple(list(bad.dual_rays) + lines), n)
        cov = _rand_covector(rng, n)
        if all(dot(cov, l) == 0 for l in lin):
            continue
        pieces = [q for p in pieces for q in _split(p, cov, n)]
    for _ in range(rng.randint(0, 2)):
        cov = _rand_covector(rng, n)
        pieces = [q for p in pieces for q in _split(p, cov, n)]
    for _ in range(rng.randint(0, 1)):
        if not pieces:
            break
        i = rng.randrange(len(pieces))
        pieces = pieces[:i] + _stellar(pieces[i], n) + pieces[i + 1:]
    rays = sorted({g for p in pieces for g in p.generators})
    index = {g: i for i, g in enumerate(rays)}
    cones = sorted({tuple(sorted(index[g] for g in p.generators)) for p in pieces})
    return make_fan(n, rays, cones)


def _rand_a_points(rng, n):
    mode = rng.randrange(4)
    if mode == 0:
        return [(0,) * n]
    if mode == 1:
        return [(0,) * n, tuple(rng.randint(-1, 1) for _ in range(n))]
    if mode == 2:
        den = rng.choice((2, 3, 5))
        return [tuple(Fraction(rng.randint(-2, 2), den) for _ in range(n))
                for _ in range(2)]
    den = rng.choice((4, 5, 25))
    return [(0,) * n,
            tuple(Fraction(rng.randint(-den, den), den) for _ in range(n))]


def _rand_general(rng, n):
    if rng.random() < 0.7:
        return []
    bj = rng.choice((Fraction(1, 2), Fraction(1), Fraction(3, 2)))
    pts = [(0,) * n, tuple(rng.randint(-1, 1) for _ in range(n))]
    return [(bj, pts)]


def _rand_psi(rng, support, n):
    duals = list(support.dual_rays) + [(0,) * n]
    psi = (Fraction(0),) * n
    for d in duals:
        c = rng.choice((0, 0, Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), 1))
        psi = tuple(p + c * x for p, x in zip(psi, d))
    if rng.random() < 0.3:
        den = rng.choice((2, 3))
        psi = tuple(p + Fraction(rng.randint(-1, 1), den) for p in psi)
    return psi


_B_POOL = (Fraction(0), Fraction(0), Fraction(1, 4), Fraction(1, 3),
           Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1))


def _candidate_pair(rng, tc):
    """One sampled pair; raises PairError when the sample is invalid."""
    fan = tc.fan
    n = fan.rank
    a_pts = _rand_a_points(rng, n)
    general = _rand_general(rng, n)
    a_eff = make_support(a_pts)
    fixes = [Fraction(0)] * len(fan.rays)
    for bj, pts in general:
        s = make_support(pts)
        a_eff = support_sum(a_eff, support_scale(bj, s))
        fixes = [f + bj * min(dot(p, e) for p in s.points)
                 for f, e in zip(fixes, fan.rays)]
    if rng.random() < 0.55:
        # log Calabi-Yau mode: boundary determined by a single global psi
        psi = _rand_psi(rng, tc.support, n)
        b = [1 - (dot(psi, e) - support_value(a_eff, e)) - fx
             for e, fx in zip(fan.rays, fixes)]
    else:
        # free mode: random coefficients, relies on the nef rejection test
        b = [rng.choice(_B_POOL) - fx for e, fx in zip(fan.rays, fixes)]
    return make_pair(fan, b, a_pts, general)


def random_instance(seed):
    """Deterministic valid instance for the given seed.

    Returns (tc, pair, meta); the pair is R-Cartier, f-nef, g-lc, and has
    positive mld over the fiber (the search hypotheses, checked exactly).
    """
    rng = random.Random(seed)
    for attempt in range(MAX_ATTEMPTS):
        try:
            n = rng.choice((1, 2, 2, 3, 3, 3))
            nbar = rng.randint(1, n)
            uni = _rand_unimodular(rng, n)
            pi = tuple(uni[i] for i in range(nbar))
            sigma_bar = _rand_sigma_bar(rng, nbar)
            normals = [tuple(sum(d[i] * pi[i][j] for i in range(nbar))
                             for j in range(n)) for d in sigma_bar.dual_rays]
            support = cone_from_normals(n, normals)
            fan = _build_fan(rng, support, n)
            tc = make_contraction(fan, pi, sigma_bar.generators)
            validate_contraction(tc)
            pair = _candidate_pair(rng, tc)
            _folded, _psi, bd = analyze(tc, pair)
            if not is_glc(bd):
                raise PairError("sampled pair not g-lc")
            if mld_over_fiber(tc, bd) is None:
                raise PairError("sampled pair has non-positive mld")
            return tc, pair, {"seed": seed, "attempts": attempt + 1,
                              "rank": n, "base_rank": nbar}
        except (PairError, GeometryError, LatticeError):
            continue
    raise PairError("no valid instance found for seed %r" % seed)


def random_instances(count, base_seed=0):
    return [random_instance(base_seed + i) for i in range(count)]
