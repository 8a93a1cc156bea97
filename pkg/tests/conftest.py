from fractions import Fraction as F

import pytest

from toricmld.lattice import (
    content,
    dot,
    identity,
    is_zero,
    kernel_sublattice,
    primitive,
)
from toricmld.pairs import (
    make_contraction,
    make_fan,
    make_pair,
    validate_contraction,
)
from toricmld.polyhedra import (
    from_generators,
    from_inequalities,
    interval_image,
    make_cone,
)


def germ(rank, rays, cones, pi, sigma_bar=None):
    fan = make_fan(rank, rays, cones)
    tc = make_contraction(fan, pi, sigma_bar)
    validate_contraction(tc)
    return tc


@pytest.fixture(scope="session")
def a1_germ():
    return germ(1, [(1,)], [(0,)], identity(1))


def a1_pair(tc, a):
    return make_pair(tc.fan, (1 - F(a),), [(0,)])


@pytest.fixture(scope="session")
def a2_germ():
    return germ(2, [(1, 0), (0, 1)], [(0, 1)], identity(2))


@pytest.fixture(scope="session")
def a3_germ():
    return germ(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)], identity(3))


@pytest.fixture(scope="session")
def halfplane_germ():
    return germ(2, [(1, -1), (0, 1), (-1, 1)], [(0, 1), (1, 2)], ((1, 1),))


@pytest.fixture(scope="session")
def cax4_germ():
    # octant in the index-2 lattice {v : sum v_i even}, basis
    # (1,1,0), (0,1,1), (0,0,2); edge generators in that basis:
    return germ(3, [(2, -2, 1), (0, 2, -1), (0, 0, 1)], [(0, 1, 2)], identity(3))


@pytest.fixture(scope="session")
def wedge25_germ():
    return germ(2, [(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)], ((0, 1),))


def wedge25_pair(tc):
    return make_pair(tc.fan, (0, F(17, 25), 0),
                     [(1, F(-8, 25)), (-1, F(6, 25))])


def zero_pair(tc):
    n = tc.rank
    return make_pair(tc.fan, (0,) * len(tc.fan.rays), [(0,) * n])


# ---------------------------------------------------------------------------
# shared helpers for the extension property suites


def random_extension_input(rng, n):
    """A valid (gens, C, phi, phi0, l0, kernel) tuple, built by rejection."""
    while True:
        gens = []
        for _ in range(rng.randint(n, n + 2)):
            v = tuple(rng.randint(-3, 3) for _ in range(n))
            if not is_zero(v):
                gens.append(primitive(v))
        if not gens:
            continue
        sigma = make_cone(n, gens)
        if not sigma.is_pointed():
            continue
        phi = tuple(rng.randint(-2, 2) for _ in range(n))
        if is_zero(phi) or content(phi) != 1:
            continue
        vals = [dot(phi, g) for g in gens]
        if not (any(v > 0 for v in vals) and any(v < 0 for v in vals)):
            continue
        # extra points stay inside the cone: ray rescalings and midpoints
        extra = []
        for g in gens:
            den = rng.choice((1, 2))
            extra.append(tuple(F(x, den) for x in g))
        extra += [tuple((F(a) + F(b)) / 2 for a, b in zip(g1, g2))
                  for g1, g2 in zip(gens, gens[1:])]
        c_body = from_generators(n, [(F(0),) * n] + [tuple(map(F, g)) for g in gens]
                                 + extra[:rng.randint(0, len(extra))])
        lo, hi = interval_image(phi, c_body)
        if lo is None or hi is None or not lo < 0 < hi:
            continue
        kern = kernel_sublattice(phi)
        phi0 = tuple(rng.randint(-2, 2) for _ in range(kern.rank))
        restricted = [(tuple(dot(a, b) for b in kern.basis), c)
                      for a, c in c_body.ineqs]
        c0 = from_inequalities(kern.rank, restricted)
        lo0, hi0 = interval_image(phi0, c0)
        if lo0 != 0 or hi0 is None or hi0 <= 0:
            continue
        return gens, c_body, phi, phi0, hi0, kern


def extension_posts_hold(phi_prime, q, kern, phi0, c_body, w, l0):
    if not 1 <= q < w:
        return False
    if any(dot(phi_prime, b) != q * v for b, v in zip(kern.basis, phi0)):
        return False
    lo, hi = interval_image(phi_prime, c_body)
    return lo is not None and hi is not None and lo >= 0 and hi <= w * l0
