"""Ground-truth sanity for the finite brute-force oracle."""

import pytest

from linorder.coded import eta_order, pair, unpair
from linorder.oracle import (
    FinOrder, MAP_CAP, chain, emb_count, enumerate_embs, enumerate_epis,
    epi_count, exists_emb, exists_epi, fin_product, fuzz_epis,
    fuzz_quotients, induced_suborder, is_epi_map, quotient_epi_fin)


def test_chain_basics():
    c = chain(4)
    assert c.size == 4
    assert c.leq(1, 3) and not c.leq(3, 1)
    assert c.position(2) == 2


def test_labels_must_be_distinct_and_nonempty():
    with pytest.raises(ValueError):
        FinOrder((1, 1))
    with pytest.raises(ValueError):
        FinOrder(())


def test_to_coded_matches():
    o = FinOrder((5, 2, 9)).to_coded()
    assert o.first(10) == [2, 5, 9]
    assert o.leq(5, 2) and o.leq(2, 9) and not o.leq(9, 5)
    assert o.min_code == 5 and o.max_code == 9
    assert o.size_hint == 3


def test_induced_suborder_from_eta():
    assert induced_suborder(eta_order(), [0, 1, 2]).labels == (1, 0, 2)


def test_fin_product_coding():
    p = fin_product(chain(2), chain(2))
    assert p.labels == (pair(0, 0), pair(0, 1), pair(1, 0), pair(1, 1))
    assert p.labels == (0, 2, 1, 4)


def test_counts_match_enumeration():
    for ls in range(1, 5):
        for ks in range(1, 6):
            L, K = chain(ls), chain(ks)
            embs = enumerate_embs(L, K)
            epis = enumerate_epis(L, K)
            assert len(embs) == emb_count(L, K)
            assert len(epis) == epi_count(L, K)
            assert len({tuple(sorted(m.items())) for m in epis}) == len(epis)
            for m in epis:
                assert is_epi_map(L, K, m)


def test_counts_frozen():
    assert emb_count(chain(2), chain(4)) == 6
    assert epi_count(chain(2), chain(4)) == 3
    assert epi_count(chain(4), chain(2)) == 0
    assert epi_count(chain(3), chain(3)) == 1


def test_exists():
    assert exists_epi(chain(3), chain(3))
    assert not exists_epi(chain(4), chain(3))
    assert exists_emb(chain(3), chain(8))
    assert not exists_emb(chain(9), chain(8))


def test_cap_guards_enumeration_only():
    big = chain(MAP_CAP + 1)
    assert epi_count(chain(2), big) == MAP_CAP
    with pytest.raises(ValueError):
        enumerate_epis(chain(2), big)


def test_is_epi_map_rejects():
    L, K = chain(2), chain(3)
    assert not is_epi_map(L, K, {0: 0, 1: 1, 2: 0})      # not monotone
    assert not is_epi_map(L, K, {0: 0, 1: 0, 2: 0})      # not onto
    assert not is_epi_map(L, K, {0: 0, 1: 1})            # not total


# -- the induced index map of a product epi

def test_quotient_singletons_and_short_run():
    L, K, J = chain(2), chain(3), chain(2)
    # blocks of sizes 1,2,2,1 over the six product points
    phi = {0: 0, 2: 2, 1: 2, 4: 1, 3: 1, 7: 4}
    assert quotient_epi_fin(L, K, J, phi) == {0: 0, 1: 1, 2: 1}


def test_quotient_long_run():
    L, K, J = chain(2), chain(4), chain(3)
    phi = {0: 0, 2: 2, 1: 2, 4: 1, 3: 4, 7: 3, 6: 7, 11: 7}
    assert quotient_epi_fin(L, K, J, phi) == {0: 0, 1: 1, 2: 2, 3: 2}


def test_quotient_identity_case():
    L, K = chain(3), chain(2)
    phi = {pair(k, l): pair(k, l) for k in range(2) for l in range(3)}
    assert quotient_epi_fin(L, K, K, phi) == {0: 0, 1: 1}


def test_quotient_rejects_non_epi():
    L, K, J = chain(2), chain(2), chain(2)
    phi = {0: 0, 2: 0, 1: 0, 4: 0}
    with pytest.raises(ValueError):
        quotient_epi_fin(L, K, J, phi)


def test_quotient_fuzz_all_valid():
    for L, K, J, phi in fuzz_quotients(11, 300):
        psi = quotient_epi_fin(L, K, J, phi)
        assert is_epi_map(J, K, psi)
        for k in K.labels:
            meets = {unpair(phi[pair(k, l)])[0] for l in L.labels}
            assert psi[k] in meets


def test_fuzz_epis_valid_and_deterministic():
    a = fuzz_epis(7, 150)
    b = fuzz_epis(7, 150)
    assert len(a) == 150
    for (L, K, m), (L2, K2, m2) in zip(a, b):
        assert L == L2 and K == K2 and m == m2
        assert is_epi_map(L, K, m)
