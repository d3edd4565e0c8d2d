import itertools

import pytest
from hypothesis import given, settings, strategies as st

from linorder.cnf import (
    CNF_OMEGA, CNF_ONE, CNF_ZERO, cnf_add, cnf_cmp, cnf_mul, cnf_sub_left,
    from_nat, omega_power,
)
from linorder.coded import (
    INFINITE, OK, CodedOrder, ascending_chain, code_at_position, dense_witness,
    descending_chain, eta_order, fin_order, greedy_monotone, merge_tagged,
    omega_order, ordinal_position, pair, prod_orders, realize, realize_cnf,
    rev_order, seq_decode, seq_encode, streams, sum_orders, truncate, unpair,
    zeta_pow, zz_decode, zz_encode,
)
from linorder.terms import ETA, OMEGA, Eta, Fin, Prod, Rev, Sum, ZetaPow


# ---------------------------------------------------------------------------
# codecs

def test_pair_frozen_values():
    assert pair(0, 0) == 0
    assert pair(1, 0) == 1
    assert pair(0, 1) == 2
    assert pair(2, 0) == 3
    assert pair(1, 3) == 13
    assert pair(1, 4) == 19
    assert pair(3, 5) == 41


def test_pair_roundtrip():
    for z in range(2000):
        a, b = unpair(z)
        assert pair(a, b) == z
    for a in range(40):
        for b in range(40):
            assert unpair(pair(a, b)) == (a, b)


def test_seq_codec():
    assert seq_encode(()) == 0
    assert seq_decode(0) == ()
    assert seq_encode((5,)) == pair(1, pair(5, 0))
    for xs in [(0,), (1, 2, 3), (7, 0, 7), tuple(range(6))]:
        assert seq_decode(seq_encode(xs)) == xs


def test_seq_decode_rejects_trailing_data():
    # a length-1 header over a two-step chain
    bad = pair(1, pair(3, pair(4, 0)))
    with pytest.raises(ValueError):
        seq_decode(bad)


def test_zigzag():
    assert [zz_decode(c) for c in range(7)] == [0, -1, 1, -2, 2, -3, 3]
    for z in range(-30, 31):
        assert zz_decode(zz_encode(z)) == z


# ---------------------------------------------------------------------------
# base realizations

def collect_upto(o: CodedOrder, bound: int):
    got = []
    for c in o.stream():
        if c > bound:
            break
        got.append(c)
    return got


def test_fin_order():
    o = fin_order(3)
    assert o.first(10) == [0, 1, 2]
    assert o.size_hint == 3
    assert (o.min_code, o.max_code) == (0, 2)
    assert o.leq(1, 2) and not o.leq(2, 1)
    assert o.isf and o.fsf and o.fin_int


def test_omega_order():
    o = omega_order()
    assert o.first(4) == [0, 1, 2, 3]
    assert o.min_code == 0 and o.max_code is None
    assert o.isf and o.fin_int and not o.fsf
    assert o.cofinal() is not None and o.coinitial() is None
    assert o.try_interval(3, 7, 100) == (OK, [3, 4, 5, 6, 7])
    assert o.try_final(2, 100)[0] == INFINITE


def test_eta_order_frozen_comparisons():
    o = eta_order()
    # codes 0,1,2 present the strings "", "0", "1"
    assert o.leq(1, 0) and o.leq(0, 2)
    assert not o.leq(0, 1) and not o.leq(2, 0)
    assert o.min_code is None and o.max_code is None
    cof = list(itertools.islice(o.cofinal(), 3))
    coi = list(itertools.islice(o.coinitial(), 3))
    assert cof == [2, 6, 14]
    assert coi == [1, 3, 7]
    for xs in (cof, coi):
        assert o.lt(xs[0], xs[1]) == (xs is cof)
        assert o.lt(xs[1], xs[0]) == (xs is coi)


def test_truncate_eta_frozen():
    f = truncate(ETA, 3)
    assert f.labels == (1, 0, 2)


def test_rev_order():
    o = rev_order(omega_order())
    assert o.leq(5, 2) and not o.leq(2, 5)
    assert o.min_code is None and o.max_code == 0
    assert o.isf is False and o.fsf is True
    st_, lst = o.try_final(5, 100)
    assert st_ == OK and lst == [5, 4, 3, 2, 1, 0]


def test_sum_coding_and_extrema():
    o = realize(Sum((OMEGA, Fin(1))))
    assert o.min_code == pair(0, 0)
    assert o.max_code == pair(1, 0)
    assert o.lt(pair(0, 99), pair(1, 0))
    assert not o.fin_int and not o.isf
    st_, _ = o.try_interval(pair(0, 0), pair(1, 0), 1000)
    assert st_ == INFINITE


def test_one_plus_revomega_materialization():
    o = realize(Sum((Fin(1), Rev(OMEGA))))
    st_, lst = o.try_final(pair(1, 5), 100)
    assert st_ == OK
    assert lst == [pair(1, x) for x in [5, 4, 3, 2, 1, 0]]
    st_, _ = o.try_interval(pair(0, 0), pair(1, 0), 1000)
    assert st_ == INFINITE


def test_prod_coding():
    o = realize(Prod(OMEGA, Fin(2)))
    assert o.lt(pair(0, 5), pair(1, 0))
    assert o.min_code == pair(0, 0) and o.max_code is None
    o2 = realize(Prod(Fin(2), OMEGA))
    st_, lst = o2.try_interval(pair(0, 1), pair(3, 0), 100)
    assert st_ == OK
    assert lst == [pair(0, 1), pair(1, 0), pair(1, 1),
                   pair(2, 0), pair(2, 1), pair(3, 0)]


def test_enumeration_is_ascending_and_complete():
    for t in [Sum((OMEGA, Fin(1))), Prod(OMEGA, OMEGA),
              Sum((Fin(2), Rev(OMEGA), ETA)), Prod(ETA, Fin(3))]:
        o = realize(t)
        got = collect_upto(o, 120)
        assert got == sorted(got)
        assert got == [c for c in range(121) if o.contains(c)]


def test_merge_tagged_interleaves():
    streams_ = [(0, iter([0, 3, 9])), (1, iter([1, 2])), (5, iter([5, 40]))]
    assert list(merge_tagged(iter(streams_))) == [0, 1, 2, 3, 5, 9, 40]


# ---------------------------------------------------------------------------
# the integer power order

def zint():
    return zeta_pow(fin_order(1))


def test_zeta_frozen_integer_codes():
    o = zint()
    minus_one = pair(seq_encode((0,)), seq_encode((zz_encode(-1),)))
    plus_one = pair(seq_encode((0,)), seq_encode((zz_encode(1),)))
    assert minus_one == 19
    assert plus_one == 118
    assert o.contains(0) and o.contains(19) and o.contains(118)
    assert o.lt(19, 0) and o.lt(0, 118)
    assert o.succ_fn(19) == 0
    assert o.succ_fn(0) == 118


def test_zeta_contains_rejects_malformed():
    o = zint()
    # support not in K
    bad_point = pair(seq_encode((7,)), seq_encode((2,)))
    assert not o.contains(bad_point)
    # zero value
    bad_val = pair(seq_encode((0,)), seq_encode((0,)))
    assert not o.contains(bad_val)
    # length mismatch
    bad_len = pair(seq_encode((0,)), seq_encode((2, 2)))
    assert not o.contains(bad_len)


def test_zeta_enumeration_matches_contains_scan():
    for K in [fin_order(1), fin_order(2), omega_order()]:
        o = zeta_pow(K)
        got = collect_upto(o, 20000)
        assert got == [c for c in range(20001) if o.contains(c)]
        assert len(got) >= 5


def test_zeta_support_must_decrease():
    o = zeta_pow(omega_order())
    inc = pair(seq_encode((1, 3)), seq_encode((2, 2)))
    dec = pair(seq_encode((3, 1)), seq_encode((2, 2)))
    assert not o.contains(inc)
    assert o.contains(dec)


def test_zeta_comparison_at_largest_difference():
    o = zeta_pow(omega_order())
    # f = +1 at point 3; g = +1 at point 3, -1 at point 0
    f = pair(seq_encode((3,)), seq_encode((zz_encode(1),)))
    g = pair(seq_encode((3, 0)), seq_encode((zz_encode(1), zz_encode(-1))))
    h = pair(seq_encode((3, 0)), seq_encode((zz_encode(1), zz_encode(1))))
    assert o.lt(g, f) and o.lt(f, h)
    # a positive value at a higher point dominates
    big = pair(seq_encode((5,)), seq_encode((zz_encode(1),)))
    assert o.lt(f, big) and o.lt(h, big)


def test_zeta_streams_dominate_prefix():
    for K in [fin_order(1), omega_order(), fin_order(3)]:
        o = zeta_pow(K)
        members = o.first(60)
        cof = list(itertools.islice(o.cofinal(), 80))
        coi = list(itertools.islice(o.coinitial(), 80))
        for i in range(len(cof) - 1):
            assert o.lt(cof[i], cof[i + 1])
            assert o.lt(coi[i + 1], coi[i])
        for m in members:
            assert any(o.leq(m, c) for c in cof)
            assert any(o.leq(c, m) for c in coi)


def test_zeta_over_singleton_interval():
    o = zint()
    st_, lst = o.try_interval(19, 118, 100)
    assert st_ == OK
    assert lst == [19, 0, 118]
    assert o.fin_int


# ---------------------------------------------------------------------------
# ordinal realization and position arithmetic

def test_realize_cnf_small():
    o = realize_cnf(from_nat(4))
    assert o.first(10) == [0, 1, 2, 3]
    w = realize_cnf(CNF_OMEGA)
    assert w.min_code == 0 and w.max_code is None
    w1 = realize_cnf(cnf_add(CNF_OMEGA, CNF_ONE))
    assert w1.max_code == pair(1, 0)
    assert w1.min_code == pair(0, 0)


def sample_ordinals():
    w = CNF_OMEGA
    return [
        from_nat(1), from_nat(5), w, cnf_add(w, from_nat(3)),
        cnf_add(cnf_mul(w, from_nat(2)), CNF_ONE),
        cnf_mul(w, w),
        omega_power(w),
        cnf_add(cnf_mul(omega_power(from_nat(2)), from_nat(2)), w),
        omega_power(cnf_add(w, CNF_ONE)),
    ]


@pytest.mark.parametrize("c", sample_ordinals(), ids=lambda c: repr(c))
def test_position_roundtrip(c):
    o = realize_cnf(c)
    codes = o.first(25)
    seen = []
    for code in codes:
        p = ordinal_position(c, code)
        assert cnf_cmp(p, c) < 0
        assert code_at_position(c, p) == code
        seen.append(p)
    by_order = o.sort(codes)
    ps = [ordinal_position(c, code) for code in by_order]
    for a, b in zip(ps, ps[1:]):
        assert cnf_cmp(a, b) < 0


def test_position_of_minimum_is_zero():
    for c in sample_ordinals():
        o = realize_cnf(c)
        assert ordinal_position(c, o.min_code).is_zero()


def test_code_at_named_positions():
    w = CNF_OMEGA
    ww = cnf_mul(w, w)
    o = realize_cnf(ww)
    c_w = code_at_position(ww, w)
    assert ordinal_position(ww, c_w) == w
    c_0 = code_at_position(ww, CNF_ZERO)
    assert o.lt(c_0, c_w)
    c_w5 = code_at_position(ww, cnf_add(w, from_nat(5)))
    assert o.lt(c_w, c_w5)


def test_cnf_sub_left():
    w = CNF_OMEGA
    assert cnf_sub_left(w, cnf_add(w, CNF_ONE)) == CNF_ONE
    assert cnf_sub_left(cnf_add(w, CNF_ONE), cnf_mul(w, from_nat(2))) == w
    assert cnf_sub_left(from_nat(2), w) == w
    assert cnf_sub_left(w, w).is_zero()
    with pytest.raises(ValueError):
        cnf_sub_left(cnf_mul(w, w), w)
    for a in sample_ordinals():
        for b in sample_ordinals():
            if cnf_cmp(a, b) <= 0:
                d = cnf_sub_left(a, b)
                assert cnf_cmp(cnf_add(a, d), b) == 0


# ---------------------------------------------------------------------------
# streams and chains

def test_streams_of_terms():
    cof, coi = streams(Sum((OMEGA, Fin(1))))
    assert cof is None and coi is None
    cof, coi = streams(Rev(OMEGA))
    assert cof is None and coi is not None
    assert coi.take(3) == [0, 1, 2]
    cof, coi = streams(ZetaPow(Fin(1)))
    o = zint()
    vals = cof.take(30)
    members = o.first(50)
    for m in members:
        assert any(o.leq(m, c) for c in vals)


def test_greedy_monotone_on_eta():
    o = eta_order()
    ups = list(itertools.islice(greedy_monotone(o, ascending=True), 10))
    for a, b in zip(ups, ups[1:]):
        assert o.lt(a, b)
    downs = list(itertools.islice(greedy_monotone(o, ascending=False), 10))
    for a, b in zip(downs, downs[1:]):
        assert o.lt(b, a)
    # cofinality over the enumerated prefix
    for m in o.first(30):
        assert any(o.leq(m, c) for c in ups)


def test_descending_and_ascending_chains():
    for t in [ETA, Rev(OMEGA), Sum((OMEGA, Rev(OMEGA))),
              Prod(Rev(OMEGA), OMEGA), ZetaPow(OMEGA), ZetaPow(ETA)]:
        o = realize(t)
        chain = descending_chain(t, 6)
        assert len(chain) == 6
        for a, b in zip(chain, chain[1:]):
            assert o.lt(b, a)
    for t in [OMEGA, ETA, Rev(Rev(OMEGA)), Sum((Rev(OMEGA), OMEGA)),
              ZetaPow(Fin(2))]:
        o = realize(t)
        chain = ascending_chain(t, 6)
        for a, b in zip(chain, chain[1:]):
            assert o.lt(a, b)


# ---------------------------------------------------------------------------
# density witnesses

def test_dense_witness_eta_frozen():
    assert dense_witness(ETA, 3) == [3, 1, 4, 0, 5, 2, 6]


def test_dense_witness_none_for_scattered():
    assert dense_witness(OMEGA, 3) is None
    assert dense_witness(Sum((OMEGA, Rev(OMEGA))), 3) is None
    assert dense_witness(ZetaPow(OMEGA), 3) is None


@pytest.mark.parametrize("t", [
    ETA, Rev(ETA), Sum((Fin(1), ETA)), Prod(ETA, OMEGA), Prod(OMEGA, ETA),
    ZetaPow(ETA), ZetaPow(Rev(OMEGA)), ZetaPow(ZetaPow(OMEGA)),
], ids=str)
def test_dense_witness_is_increasing(t):
    o = realize(t)
    w = dense_witness(t, 4)
    assert w is not None and len(w) == 15
    assert len(set(w)) == 15
    for a, b in zip(w, w[1:]):
        assert o.lt(a, b)
    for c in w:
        assert o.contains(c)


# ---------------------------------------------------------------------------
# properties over random terms

def _terms():
    base = st.sampled_from([OMEGA, ETA, Fin(1), Fin(2), Fin(3)])
    return st.recursive(
        base,
        lambda kids: st.one_of(
            st.builds(Rev, kids),
            st.builds(lambda a, b: Sum((a, b)), kids, kids),
            st.builds(Prod, kids, kids),
            st.builds(ZetaPow, kids),
        ),
        max_leaves=4)


@settings(max_examples=60, deadline=None)
@given(_terms())
def test_realize_order_axioms(t):
    o = realize(t)
    xs = o.first(9)
    assert len(set(xs)) == len(xs)
    for a in xs:
        assert o.contains(a)
        assert o.leq(a, a)
    for a in xs:
        for b in xs:
            assert o.leq(a, b) or o.leq(b, a)
            if a != b:
                assert not (o.leq(a, b) and o.leq(b, a))
    for a in xs:
        for b in xs:
            for c in xs:
                if o.leq(a, b) and o.leq(b, c):
                    assert o.leq(a, c)


@settings(max_examples=60, deadline=None)
@given(_terms())
def test_realize_extrema_match_classification(t):
    from linorder.terms import classify
    o = realize(t)
    cl = classify(t)
    assert (o.min_code is not None) == cl.has_min
    assert (o.max_code is not None) == cl.has_max
    if o.min_code is not None:
        for c in o.first(8):
            assert o.leq(o.min_code, c)
    if o.max_code is not None:
        for c in o.first(8):
            assert o.leq(c, o.max_code)


@settings(max_examples=40, deadline=None)
@given(_terms())
def test_realize_enumeration_ascending(t):
    o = realize(t)
    got = collect_upto(o, 60)
    assert got == [c for c in range(61) if o.contains(c)]


@settings(max_examples=30, deadline=None)
@given(_terms(), st.integers(min_value=2, max_value=5))
def test_truncate_sizes(t, n):
    f = truncate(t, n)
    o = realize(t)
    want = n if o.size_hint is None else min(n, o.size_hint)
    assert len(f.labels) == want
    for a, b in zip(f.labels, f.labels[1:]):
        assert o.lt(a, b)
