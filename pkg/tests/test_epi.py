"""Piecewise epi construction against hand values and the finite oracle."""

import random

import pytest

from linorder.coded import (
    eta_order, fin_order, omega_order, pair, realize, rev_order, zeta_line_code,
    zeta_pow)
from linorder.epi import (
    ConvexPart, EpiWitness, Piece, PointLadder, chain_order,
    check_epi_on_prefix, clamp_ops, cof_collapse, compose_witness,
    def_pieces, family_mash, identity_witness, lk_onto_l, onesided_sum_epi,
    prod_epi, prod_quotient, staircase_witness, sub_final, sub_initial,
    sub_interval)
from linorder.oracle import chain, fin_product, is_epi_map
from linorder.terms import ETA, Fin, OMEGA, Prod, Rev, Sum, ZetaPow


def wz():
    """omega reversed followed by omega: unbounded on both sides."""
    return realize(Sum((Rev(OMEGA), OMEGA)))


# -- witnesses and reports

def test_compose_and_identity():
    idw = identity_witness(omega_order())
    w = compose_witness(idw, idw)
    assert w(5) == 5
    assert idw.fiber_sample(3, 10) == [3]


def test_staircase():
    src = chain_order([10, 20, 30, 40])
    tgt = chain_order([5, 6])
    w = staircase_witness([10, 20, 30, 40], [5, 6], src, tgt)
    assert [w(x) for x in [10, 20, 30, 40]] == [5, 6, 6, 6]
    assert check_epi_on_prefix(w, 4, 2, 4).verdict == "pass"
    with pytest.raises(ValueError):
        staircase_witness([10], [5, 6], src, tgt)


def test_check_report_verdicts():
    src = chain_order([0, 1, 2])
    tgt = fin_order(3)
    const = EpiWitness(src, tgt, lambda x: 0, "const")
    rep = check_epi_on_prefix(const, 3, 3, 100)
    assert rep.verdict == "fail" and rep.targets_missed == [1, 2]

    bad = EpiWitness(src, tgt, lambda x: {0: 1, 1: 0, 2: 2}[x], "swap")
    rep2 = check_epi_on_prefix(bad, 3, 3, 100)
    assert rep2.verdict == "fail" and rep2.monotone_violations

    w = lk_onto_l(omega_order(), omega_order())
    rep3 = check_epi_on_prefix(w, 30, 25, 3)
    assert rep3.verdict == "inconclusive" and rep3.targets_missed


# -- suborders

def test_sub_orders():
    om = omega_order()
    assert sub_final(om, 5).first(3) == [5, 6, 7]
    # the filtered enumeration cannot detect exhaustion of a finite
    # suborder of an infinite parent, so ask only for what is there
    assert sub_initial(om, 4).first(5) == [0, 1, 2, 3, 4]
    assert sub_interval(eta_order(), 1, 2).first(5) == [0, 1, 2, 4, 5]


# -- definition by pieces

def test_def_pieces_with_gap_filler():
    K, L = fin_order(6), fin_order(4)
    pieces = [
        Piece(ConvexPart(0, 2), ConvexPart(0, 1), lambda x: 0 if x == 0 else 1),
        Piece(ConvexPart(4, 5), ConvexPart(2, 3), lambda x: x - 2),
    ]
    w = def_pieces(K, L, pieces)
    assert w is not None
    assert [w(x) for x in range(6)] == [0, 1, 1, 1, 2, 3]
    assert check_epi_on_prefix(w, 6, 4, 10).verdict == "pass"


def test_def_pieces_refuses_open_gap():
    K, L = fin_order(6), omega_order()
    pieces = [
        Piece(ConvexPart(0, 2), ConvexPart(0, None), lambda x: x),
        Piece(ConvexPart(4, 5), ConvexPart(None, None), lambda x: x),
    ]
    assert def_pieces(K, L, pieces) is None


def test_def_pieces_connected_boundary():
    K, L = fin_order(6), fin_order(4)
    good = [
        Piece(ConvexPart(0, 2), ConvexPart(0, 1), lambda x: 0 if x == 0 else 1),
        Piece(ConvexPart(2, 5), ConvexPart(1, 3),
              lambda x: {2: 1, 3: 1, 4: 2, 5: 3}[x]),
    ]
    w = def_pieces(K, L, good)
    assert w is not None
    assert [w(x) for x in range(6)] == [0, 1, 1, 1, 2, 3]

    bad = [
        good[0],
        Piece(ConvexPart(2, 5), ConvexPart(1, 3),
              lambda x: {2: 2, 3: 2, 4: 2, 5: 3}[x]),
    ]
    assert def_pieces(K, L, bad) is None


# -- ladders

def test_ladder_kinds_and_locate():
    nat = PointLadder(omega_order())
    assert nat.kind == "nat"
    assert nat.point(0) == 0 and nat.point(3) == 3
    assert nat.locate(5) == ("at", 5)

    b = PointLadder(fin_order(5))
    assert b.kind == "bounded" and b.top_index() == 1
    assert b.locate(0) == ("at", 0)
    assert b.locate(2) == ("between", 0)
    assert b.locate(4) == ("at", 1)

    e = PointLadder(eta_order())
    assert e.kind == "int"
    assert e.locate(6) == ("at", 1)
    assert e.locate(0) == ("between", -1)
    where, i = e.locate(31)
    assert where == "at" and i < -1

    t = PointLadder(rev_order(omega_order()))
    assert t.kind == "int_top"
    assert t.locate(0) == ("at", 0)
    assert t.locate(5) == ("at", -5)


# -- mashing copies onto the copied order

MASH_CASES = [
    # L, K, n_src, n_tgt, budget
    (lambda: fin_order(3), lambda: omega_order(), 150, 3, 500),
    (lambda: omega_order(), lambda: fin_order(3), 100, 20, 400),
    (lambda: omega_order(), lambda: omega_order(), 150, 25, 3000),
    (lambda: eta_order(), lambda: omega_order(), 150, 30, 2500),
    (lambda: rev_order(omega_order()), lambda: omega_order(), 150, 15, 600),
    (lambda: omega_order(), lambda: rev_order(omega_order()), 150, 20, 800),
    (lambda: eta_order(), lambda: rev_order(omega_order()), 150, 20, 4000),
    (lambda: omega_order(), wz, 120, 10, 6000),
    (lambda: rev_order(omega_order()), wz, 120, 10, 4000),
    (lambda: fin_order(2), wz, 120, 2, 2000),
    (lambda: eta_order(), lambda: eta_order(), 150, 25, 5000),
    (wz, lambda: omega_order(), 150, 15, 4000),
    (wz, wz, 120, 12, 8000),
    (lambda: omega_order(),
     lambda: realize(Sum((Fin(1), ETA, Fin(1)))), 120, 20, 3000),
]


@pytest.mark.parametrize("case", range(len(MASH_CASES)))
def test_mash_prefixes(case):
    mk_l, mk_k, n_src, n_tgt, budget = MASH_CASES[case]
    L, K = mk_l(), mk_k()
    w = lk_onto_l(L, K)
    rep = check_epi_on_prefix(w, n_src, n_tgt, budget)
    assert rep.verdict == "pass", (L.name, K.name, rep)


def test_mash_matches_oracle_on_finite_products():
    rng = random.Random(5)
    for _ in range(120):
        ls, ks = rng.randint(1, 4), rng.randint(1, 4)
        w = lk_onto_l(fin_order(ls), fin_order(ks))
        Lf, Kf = chain(ls), chain(ks)
        prod = fin_product(Lf, Kf)
        m = {x: w(x) for x in prod.labels}
        assert is_epi_map(Lf, prod, m)


# -- collapses onto omega

def test_cof_collapse_on_double_omega():
    K = realize(Sum((OMEGA, OMEGA)))
    w = cof_collapse(K)
    assert w(pair(0, 0)) == 0
    assert w(pair(0, 99)) == 0
    assert w(pair(1, 0)) == 0
    assert w(pair(1, 5)) == 5
    assert check_epi_on_prefix(w, 100, 15, 800).verdict == "pass"


def test_cof_collapse_eta_values():
    w = cof_collapse(eta_order())
    assert [w(n) for n in [0, 1, 5, 2]] == [0, 0, 0, 0]
    assert w(6) == 1 and w(13) == 1
    for n in range(6):
        assert w(2 ** (n + 2) - 2) == n
    rep = check_epi_on_prefix(w, 200, 0, 0)
    assert not rep.monotone_violations


def test_cof_collapse_needs_unbounded():
    with pytest.raises(ValueError):
        cof_collapse(fin_order(3))


# -- product quotients

def test_prod_quotient_omega_is_identity():
    w = prod_quotient(fin_order(2), omega_order())
    for m in range(6):
        for lo in range(2):
            assert w(pair(m, lo)) == pair(m, lo)
    assert check_epi_on_prefix(w, 80, 30, 500).verdict == "pass"


def test_prod_quotient_int_line_spot_values():
    w = prod_quotient(fin_order(2), zeta_pow(fin_order(1)))
    c = zeta_line_code
    assert w(pair(c(1), 0)) == pair(0, 0)
    assert w(pair(c(1), 1)) == pair(0, 1)
    assert w(pair(c(-1), 1)) == pair(0, 0)
    assert w(pair(c(0), 1)) == pair(0, 0)
    assert w(pair(c(-2), 1)) == pair(0, 0)
    assert w(pair(c(2), 0)) == pair(1, 0)
    assert w(pair(c(2), 1)) == pair(1, 1)


def test_prod_quotient_open_line_spot_values():
    w = prod_quotient(eta_order(), zeta_pow(fin_order(1)))
    c = zeta_line_code
    assert w(pair(c(1), 0)) == pair(0, 0)
    assert w(pair(c(1), 3)) == pair(0, 1)
    assert w(pair(c(-1), 0)) == pair(0, 1)
    assert w(pair(c(-1), 3)) == pair(0, 3)
    assert w(pair(c(-1), 2)) == pair(0, 1)
    assert w(pair(c(0), 5)) == pair(0, 1)
    assert w(pair(c(-2), 0)) == pair(0, 3)
    assert w(pair(c(-2), 15)) == pair(0, 7)
    rep = check_epi_on_prefix(w, 60, 0, 0)
    assert not rep.monotone_violations


def test_prod_quotient_needs_unbounded_index():
    with pytest.raises(ValueError):
        prod_quotient(fin_order(2), fin_order(3))


# -- sums with an absorbed part

def test_onesided_sum_keep_upper():
    src = wz()
    w = onesided_sum_epi(src, omega_order(), keep=1)
    assert w(pair(0, 7)) == 0
    assert w(pair(1, 7)) == 7
    assert check_epi_on_prefix(w, 100, 20, 600).verdict == "pass"


def test_onesided_sum_keep_lower():
    src = wz()
    w = onesided_sum_epi(src, rev_order(omega_order()), keep=0)
    assert w(pair(0, 7)) == 7
    assert w(pair(1, 3)) == 0
    assert check_epi_on_prefix(w, 100, 20, 600).verdict == "pass"


def test_onesided_sum_needs_an_end():
    src = realize(Sum((OMEGA, OMEGA)))
    with pytest.raises(ValueError):
        onesided_sum_epi(src, omega_order(), keep=0)


# -- clamped witnesses

def test_clamp_ops_window():
    w = clamp_ops(identity_witness(fin_order(5)), lo=1, hi=3)
    assert [w(x) for x in range(5)] == [1, 1, 2, 3, 3]
    assert w.target.min_code == 1 and w.target.max_code == 3
    assert check_epi_on_prefix(w, 5, 3, 10).verdict == "pass"


def test_clamp_ops_at_extremum_is_identity():
    w = clamp_ops(identity_witness(fin_order(5)), lo=0)
    assert [w(x) for x in range(5)] == list(range(5))
    assert w.target.size_hint == 5


def test_clamp_ops_truncates_omega():
    w = clamp_ops(identity_witness(omega_order()), hi=3)
    assert w(0) == 0 and w(2) == 2 and w(50) == 3
    assert w.target.size_hint == 4
    assert check_epi_on_prefix(w, 30, 4, 60).verdict == "pass"


def test_clamp_ops_on_int_line():
    Z = zeta_pow(fin_order(1))
    lo, hi = zeta_line_code(-1), zeta_line_code(2)
    w = clamp_ops(identity_witness(Z), lo=lo, hi=hi)
    assert w(zeta_line_code(-7)) == lo
    assert w(zeta_line_code(5)) == hi
    assert w(0) == 0
    assert w.target.size_hint == 4
    assert check_epi_on_prefix(w, 40, 4, 300).verdict == "pass"


def test_clamp_ops_validation():
    idw = identity_witness(fin_order(3))
    with pytest.raises(ValueError):
        clamp_ops(idw)
    with pytest.raises(ValueError):
        clamp_ops(idw, lo=2, hi=1)
    with pytest.raises(ValueError):
        clamp_ops(idw, lo=9)


# -- explicit family gluing

def test_family_mash_two_parts_with_hole():
    K, L = fin_order(7), fin_order(3)
    w = family_mash(K, [(0, 2), (4, 6)], L,
                    sigmas=[lambda x: x, lambda x: x - 4])
    m = {x: w(x) for x in range(7)}
    assert is_epi_map(chain(3), chain(7), m)
    assert m[3] == 0


def test_family_mash_single_part():
    K, L = fin_order(4), fin_order(4)
    w = family_mash(K, [(0, 3)], L, sigmas=[lambda x: x])
    assert [w(x) for x in range(4)] == [0, 1, 2, 3]


def test_family_mash_onto_singleton():
    K = fin_order(5)
    w = family_mash(K, [(0, 2), (2, 4)], fin_order(1),
                    sigmas=[lambda x: 0, lambda x: 0])
    assert [w(x) for x in range(5)] == [0] * 5


def test_family_mash_disagreeing_shared_point_is_bot():
    K, L = fin_order(5), fin_order(5)
    w = family_mash(K, [(0, 1), (1, 4)], L,
                    sigmas=[lambda x: x, lambda x: x])
    assert w is None


def test_family_mash_copy_family():
    L = zeta_pow(fin_order(1))
    K = realize(Prod(ZetaPow(Fin(1)), OMEGA))
    w = family_mash(K, omega_order(), L)
    # deeper targets sit astronomically far into the code enumeration
    rep = check_epi_on_prefix(w, 60, 5, 4000)
    assert rep.verdict == "pass"


def test_family_mash_validation():
    with pytest.raises(ValueError):
        family_mash(fin_order(2), [], fin_order(1), sigmas=[])
    with pytest.raises(ValueError):
        family_mash(fin_order(2), [(0, 1)], fin_order(1))
    with pytest.raises(ValueError):
        family_mash(fin_order(2), omega_order(), fin_order(1),
                    sigmas=[lambda x: 0])


# -- products along an epi of the index

def test_prod_epi_finite_matches_oracle():
    M, Kc = chain_order([0, 1, 2]), chain_order([0, 1])
    phi = staircase_witness([0, 1, 2], [0, 1], M, Kc)
    w = prod_epi(Fin(2), phi)
    src = fin_product(chain(2), chain(3))
    tgt = fin_product(chain(2), chain(2))
    m = {x: w(x) for x in src.labels}
    assert is_epi_map(tgt, src, m)
    assert m[pair(1, 1)] == pair(1, 0)
    assert m[pair(2, 1)] == pair(1, 1)


def test_prod_epi_identity_is_blockwise_identity():
    phi = identity_witness(realize(Sum((OMEGA, OMEGA))))
    w = prod_epi(Fin(3), phi)
    for x in w.source.first(40):
        assert w(x) == x


def test_prod_epi_collapse_on_omega_square():
    om = omega_order()
    phi = EpiWitness(om, om, lambda n: max(n - 1, 0), "collapse1",
                     fiber_fn=lambda k: iter([0, 1] if k == 0 else [k + 1]))
    w = prod_epi(OMEGA, phi)
    assert w(pair(0, 5)) == pair(0, 0)
    assert w(pair(1, 5)) == pair(0, 5)
    assert w(pair(3, 5)) == pair(2, 5)
    rep = check_epi_on_prefix(w, 120, 12, 4000)
    assert rep.verdict == "pass"


def test_prod_epi_needs_fiber_members():
    om = omega_order()
    phi = EpiWitness(om, om, lambda n: n, "id", fiber_fn=lambda k: iter([]))
    w = prod_epi(Fin(1), phi, fiber_budget=10)
    with pytest.raises(ValueError):
        w(pair(0, 0))


def test_lk_onto_l_accepts_terms():
    w = lk_onto_l(Fin(2), Fin(3))
    src = fin_product(chain(2), chain(3))
    m = {x: w(x) for x in src.labels}
    assert is_epi_map(chain(2), src, m)
