import random
from fractions import Fraction as F

import pytest

from conftest import a1_pair, germ, wedge25_pair, zero_pair
from toricmld.lattice import dot, identity
from toricmld.pairs import (
    NotRCartier,
    PairError,
    analyze,
    box_square,
    cartier_psi,
    fix_mov,
    fold_general,
    is_f_nef,
    is_glc,
    lct_pullback,
    log_discrepancy,
    make_contraction,
    make_fan,
    make_pair,
    mld_over_fiber,
    oracle_mld,
    validate_contraction,
)
from toricmld.polyhedra import (
    from_generators,
    make_support,
    polyhedra_equal,
    support_value,
)
from toricmld.search import subdivide_fan


# ---------------------------------------------------------------------------
# validation


def test_fan_rejects_bad_rays():
    with pytest.raises(PairError):
        make_fan(2, [(2, 4), (0, 1)], [(0, 1)])
    with pytest.raises(PairError):
        make_fan(2, [(1, 0), (0, 1)], [(0,)])  # ray 1 unused


def test_contraction_support_mismatch():
    # quadrant fan but pi = (1,1): the pullback of sigma_bar is a halfplane
    fan = make_fan(2, [(1, 0), (0, 1)], [(0, 1)])
    tc = make_contraction(fan, ((1, 1),), [(1,)])
    with pytest.raises(PairError, match="support"):
        validate_contraction(tc)


def test_contraction_needs_full_dim_base_cone():
    fan = make_fan(2, [(1, 0), (0, 1), (-1, 0), (0, -1)],
                   [(0, 1), (1, 2), (2, 3), (3, 0)])
    tc = make_contraction(fan, identity(2), [(1, 0), (-1, 0), (0, 1), (0, -1)])
    with pytest.raises(PairError, match="strongly convex"):
        validate_contraction(tc)


def test_overlapping_cones_rejected():
    fan = make_fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    with pytest.raises(PairError, match="face"):
        from toricmld.pairs import validate_fan
        validate_fan(fan)


def test_pair_coefficient_range():
    fan = make_fan(1, [(1,)], [(0,)])
    with pytest.raises(PairError, match="outside"):
        make_pair(fan, (F(3, 2),), [(0,)])
    with pytest.raises(PairError, match="nonnegative"):
        make_pair(fan, (0,), [(0,)], [(-1, [(0,)])])


# ---------------------------------------------------------------------------
# fix / mov and folding


def test_fix_mov_fixed_system():
    rays = ((1, 0), (0, 1))
    a = make_support([(0, 0)])
    fix, mov = fix_mov(a, (F(2), F(3)), rays)
    assert fix == (2, 3)  # Fix = L for the system of the zero character
    assert mov is a


def test_fix_mov_basepoint_free():
    rays = ((1, 0), (0, 1))
    a = make_support([(0, 0), (1, 1)])
    fix, _ = fix_mov(a, (0, 0), rays)
    assert fix == (0, 0)


def test_fix_additivity_random():
    rng = random.Random(3)
    rays = ((1, 0), (0, 1), (-1, 2))
    for _ in range(30):
        a1 = make_support([tuple(rng.randint(-3, 3) for _ in range(2))
                           for _ in range(rng.randint(1, 3))])
        a2 = make_support([tuple(rng.randint(-3, 3) for _ in range(2))
                           for _ in range(rng.randint(1, 3))])
        f1, _ = fix_mov(a1, (0, 0, 0), rays)
        f2, _ = fix_mov(a2, (0, 0, 0), rays)
        from toricmld.polyhedra import support_sum
        fs, _ = fix_mov(support_sum(a1, a2), (0, 0, 0), rays)
        assert fs == tuple(x + y for x, y in zip(f1, f2))


def test_fold_mobile_example(a2_germ):
    pair = make_pair(a2_germ.fan, (0, 0), [(0, 0)], [(1, [(0, 0), (1, 1)])])
    folded = fold_general(a2_germ.fan, pair)
    assert folded.bdiv_a.points == ((0, 0), (1, 1))
    assert folded.b_inv == (0, 0)  # no fixed part
    assert folded.general == ()


def test_fold_identity_when_folded(a2_germ):
    pair = zero_pair(a2_germ)
    assert fold_general(a2_germ.fan, pair) is pair


def test_fold_singleton_is_pure_fixed_part(a2_germ):
    # a singleton system is a single principal divisor: all fixed part
    pair = make_pair(a2_germ.fan, (F(1, 4), F(1, 4)), [(0, 0)],
                     [(F(1, 2), [(1, 1)])])
    folded = fold_general(a2_germ.fan, pair)
    assert folded.b_inv == (F(3, 4), F(3, 4))  # gains b_j * <(1,1), e_i>
    assert folded.bdiv_a.points == ((F(1, 2), F(1, 2)),)


def test_fold_preserves_log_discrepancies(a2_germ):
    pair = make_pair(a2_germ.fan, (F(1, 3), 0), [(0, 0)],
                     [(F(1, 2), [(0, 0), (1, 0), (0, 1)])])
    folded = fold_general(a2_germ.fan, pair)
    _, _, bd = analyze(a2_germ, folded)
    # independent route: the per-cone value psi with the combined support
    a_eff = folded.bdiv_a
    psi = cartier_psi(a2_germ, folded)[0]
    for e in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 3)]:
        assert log_discrepancy(bd, e) == dot(psi, e) - support_value(a_eff, e)


# ---------------------------------------------------------------------------
# Cartier data and nef


def test_cartier_a2(a2_germ):
    psi = cartier_psi(a2_germ, zero_pair(a2_germ))
    assert psi == (((1), (1)),) or psi == ((F(1), F(1)),)


def test_cartier_halfplane(halfplane_germ):
    psi = cartier_psi(halfplane_germ, zero_pair(halfplane_germ))
    assert psi[0] == (2, 1) and psi[1] == (0, 1)


def test_not_r_cartier():
    # cone over a quadrilateral with incompatible heights
    fan = make_fan(3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 2)],
                   [(0, 1, 2, 3)])
    tc = make_contraction(fan, identity(3))
    validate_contraction(tc)
    pair = zero_pair(tc)
    with pytest.raises(NotRCartier) as err:
        cartier_psi(tc, pair)
    assert err.value.cone_index == 0


def test_nef_failure_deterministic():
    # blown-up plane germ; heavy boundary off the exceptional ray breaks nef
    tc = germ(2, [(1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2)], identity(2),
              [(1, 0), (0, 1)])
    good = make_pair(tc.fan, (0, F(1, 2), 0), [(0, 0)])
    psi = cartier_psi(tc, good)
    assert is_f_nef(tc, good, psi)
    bad = make_pair(tc.fan, (1, F(1, 2), 1), [(0, 0)])
    psib = cartier_psi(tc, bad)
    assert not is_f_nef(tc, bad, psib)


def test_nef_failure_randomized_search():
    tc = germ(2, [(1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2)], identity(2),
              [(1, 0), (0, 1)])
    rng = random.Random(29)
    pool = (0, F(1, 4), F(1, 2), F(3, 4), 1)
    hits = 0
    for _ in range(200):
        pair = make_pair(tc.fan, tuple(rng.choice(pool) for _ in range(3)),
                         [(0, 0)])
        if not is_f_nef(tc, pair, cartier_psi(tc, pair)):
            hits += 1
    assert hits > 0


def test_single_cone_always_nef(a3_germ):
    rng = random.Random(31)
    pool = (0, F(1, 3), F(1, 2), 1)
    for _ in range(20):
        pair = make_pair(a3_germ.fan, tuple(rng.choice(pool) for _ in range(3)),
                         [(0, 0, 0)])
        assert is_f_nef(a3_germ, pair, cartier_psi(a3_germ, pair))


# ---------------------------------------------------------------------------
# box, u, discrepancies


def test_box_a1_half(a1_germ):
    _, _, bd = analyze(a1_germ, a1_pair(a1_germ, F(1, 2)))
    assert polyhedra_equal(bd.box, from_generators(1, [(F(-1, 2),)], [(1,)]))
    assert polyhedra_equal(bd.u, from_generators(1, [(0,), (2,)]))


def test_box_a2(a2_germ):
    _, _, bd = analyze(a2_germ, zero_pair(a2_germ))
    assert polyhedra_equal(bd.box, from_generators(2, [(-1, -1)], [(1, 0), (0, 1)]))
    assert polyhedra_equal(bd.u, from_generators(2, [(0, 0), (1, 0), (0, 1)]))
    assert bd.sigma0.generators == ()
    assert bd.l == 2


def test_box_full_boundary(halfplane_germ):
    pair = make_pair(halfplane_germ.fan, (1, 1, 1), [(0, 0)])
    _, _, bd = analyze(halfplane_germ, pair)
    sup = halfplane_germ.support
    assert all(bd.u.contains(g) for g in sup.generators)
    assert all(sup.contains(g) for g in bd.sigma0.generators)
    assert bd.sigma0.cone_dim() == 2 and bd.l == 0
    for e in halfplane_germ.fan.rays:
        assert log_discrepancy(bd, e) == 0
    assert mld_over_fiber(halfplane_germ, bd) is None


def test_log_discrepancy_examples(a2_germ, cax4_germ):
    _, _, bd = analyze(a2_germ, zero_pair(a2_germ))
    assert log_discrepancy(bd, (1, 1)) == 2
    _, _, bdc = analyze(cax4_germ, zero_pair(cax4_germ))
    # (2,-1,1) is the basis image of the ambient point (2,1,1)
    assert log_discrepancy(bdc, (2, -1, 1)) == 2
    with pytest.raises(PairError):
        log_discrepancy(bd, (-1, 0))


def test_is_glc_examples(a2_germ):
    _, _, bd = analyze(a2_germ, zero_pair(a2_germ))
    assert is_glc(bd)
    shifted = make_pair(a2_germ.fan, (0, 0), [(3, 0), (0, 3)])
    _, _, bds = analyze(a2_germ, shifted)
    assert not is_glc(bds)
    sig = make_pair(a2_germ.fan, (1, 1), [(0, 0)])
    _, _, bdsig = analyze(a2_germ, sig)
    assert is_glc(bdsig)


def test_mld_examples(a1_germ, a2_germ, a3_germ, halfplane_germ, cax4_germ):
    cases = [
        (a2_germ, zero_pair(a2_germ), F(2)),
        (a3_germ, zero_pair(a3_germ), F(3)),
        (a1_germ, a1_pair(a1_germ, F(2, 3)), F(2, 3)),
        (halfplane_germ, zero_pair(halfplane_germ), F(1)),
        (cax4_germ, zero_pair(cax4_germ), F(2)),
    ]
    for tc, pair, expected in cases:
        _, _, bd = analyze(tc, pair)
        assert mld_over_fiber(tc, bd) == expected


def test_mld_rejects_dim_y_zero():
    fan = make_fan(1, [(1,), (-1,)], [(0,), (1,)])
    tc = make_contraction(fan, ())
    validate_contraction(tc)
    _, _, bd = analyze(tc, make_pair(fan, (0, 0), [(0,)]))
    with pytest.raises(PairError, match="dim Y = 0"):
        mld_over_fiber(tc, bd)


def test_mld_against_oracle_corpus(a1_germ, a2_germ, a3_germ, halfplane_germ,
                                   cax4_germ, wedge25_germ):
    # box radii documented per instance: large enough to hold a minimizer
    cases = [
        (a1_germ, a1_pair(a1_germ, F(1, 3)), 2),
        (a2_germ, zero_pair(a2_germ), 3),
        (a3_germ, zero_pair(a3_germ), 2),
        (halfplane_germ, zero_pair(halfplane_germ), 3),
        (cax4_germ, zero_pair(cax4_germ), 4),
        (wedge25_germ, wedge25_pair(wedge25_germ), 5),
    ]
    for tc, pair, radius in cases:
        _, _, bd = analyze(tc, pair)
        value, witness = oracle_mld(tc, bd, radius)
        assert mld_over_fiber(tc, bd) == value
        assert log_discrepancy(bd, witness) == value


def test_lct_examples(a1_germ, a2_germ, halfplane_germ):
    _, _, bd = analyze(a2_germ, zero_pair(a2_germ))
    assert lct_pullback(a2_germ, bd, (1, 0)) == 1
    for a in (F(1, 3), F(1, 2), F(2, 3)):
        _, _, bda = analyze(a1_germ, a1_pair(a1_germ, a))
        assert lct_pullback(a1_germ, bda, (1,)) == a
    _, _, bdh = analyze(halfplane_germ, zero_pair(halfplane_germ))
    assert lct_pullback(halfplane_germ, bdh, (1,)) == 1
    with pytest.raises(PairError):
        lct_pullback(a2_germ, bd, (0, 0))


def test_mld_dominates_lct(a1_germ, a2_germ, a3_germ, halfplane_germ,
                           cax4_germ, wedge25_germ):
    rng = random.Random(53)
    cases = [
        (a1_germ, a1_pair(a1_germ, F(2, 3))),
        (a2_germ, zero_pair(a2_germ)),
        (a3_germ, zero_pair(a3_germ)),
        (halfplane_germ, zero_pair(halfplane_germ)),
        (cax4_germ, zero_pair(cax4_germ)),
        (wedge25_germ, wedge25_pair(wedge25_germ)),
    ]
    for tc, pair in cases:
        _, _, bd = analyze(tc, pair)
        a = mld_over_fiber(tc, bd)
        duals = tc.sigma_bar.dual_rays
        for _ in range(8):
            coeffs = [rng.randint(0, 2) for _ in duals]
            phibar = tuple(sum(c * g[i] for c, g in zip(coeffs, duals))
                           for i in range(tc.base_rank))
            if all(x == 0 for x in phibar):
                continue
            assert a >= lct_pullback(tc, bd, phibar)


def test_translation_invariance(a2_germ, wedge25_germ):
    rng = random.Random(59)
    for tc, pair in [(a2_germ, make_pair(a2_germ.fan, (0, F(1, 3)),
                                         [(0, 0), (1, 1)])),
                     (wedge25_germ, wedge25_pair(wedge25_germ))]:
        _, _, bd = analyze(tc, pair)
        for _ in range(5):
            m = tuple(rng.randint(-2, 2) for _ in range(tc.rank))
            moved = make_pair(
                tc.fan, pair.b_inv,
                [tuple(x + y for x, y in zip(p, m)) for p in pair.bdiv_a.points])
            _, _, bd2 = analyze(tc, moved)
            assert polyhedra_equal(bd.box, bd2.box)
            for e in [(1, 1), (1, 2), (2, 1)]:
                if tc.support_contains(e):
                    assert log_discrepancy(bd, e) == log_discrepancy(bd2, e)


def _pulled_back_pair(tc, bd, fan2):
    coeffs = [1 - log_discrepancy(bd, e) for e in fan2.rays]
    return make_pair(fan2, coeffs, bd.a_eff.points)


def test_log_pullback_box_equality_sigma(halfplane_germ):
    # B = Sigma_X: every refinement carries the pair with coefficients 1
    pair = make_pair(halfplane_germ.fan, (1, 1, 1), [(0, 0)])
    _, _, bd = analyze(halfplane_germ, pair)
    fan2, _ = subdivide_fan(halfplane_germ.fan, (1, 0))
    tc2 = make_contraction(fan2, halfplane_germ.pi,
                           halfplane_germ.sigma_bar.generators)
    validate_contraction(tc2)
    _, _, bd2 = analyze(tc2, _pulled_back_pair(tc2, bd, fan2))
    assert polyhedra_equal(bd.box, bd2.box)


def test_log_pullback_box_equality_wedge(wedge25_germ):
    # refine along the kink of h_A so the b-divisor descends
    pair = wedge25_pair(wedge25_germ)
    _, _, bd = analyze(wedge25_germ, pair)
    fan2, q = subdivide_fan(wedge25_germ.fan, (25, -7))
    assert (7, 25) in q
    tc2 = make_contraction(fan2, wedge25_germ.pi,
                           wedge25_germ.sigma_bar.generators)
    validate_contraction(tc2)
    _, _, bd2 = analyze(tc2, _pulled_back_pair(tc2, bd, fan2))
    assert polyhedra_equal(bd.box, bd2.box)
    assert mld_over_fiber(tc2, bd2) == mld_over_fiber(wedge25_germ, bd)


def test_box_independent_of_bdiv_translation_only_through_difference(a1_germ):
    # replacing A by a singleton translate is a principal shift: box moves
    # with psi but discrepancies are unchanged
    base = make_pair(a1_germ.fan, (F(1, 4),), [(0,)])
    shifted = make_pair(a1_germ.fan, (F(1, 4),), [(F(5, 2),)])
    _, _, b1 = analyze(a1_germ, base)
    _, _, b2 = analyze(a1_germ, shifted)
    for e in [(1,), (2,), (3,)]:
        assert log_discrepancy(b1, e) == log_discrepancy(b2, e)
