"""Three-way epi search and interval stability on small shapes."""

import pytest

from linorder.coded import (empty_order, eta_order, fin_order, omega_order,
                            pair, realize, zeta_pow)
from linorder.epi import EpiWitness, check_epi_on_prefix
from linorder.oracle import chain, exists_epi
from linorder.search import Exhausted, NotFound, epi_search, stable_check
from linorder.terms import Fin, OMEGA, Rev, Sum


def test_agrees_with_oracle_on_small_chains():
    for m in range(1, 7):
        for n in range(1, 7):
            res = epi_search(fin_order(m), fin_order(n))
            if exists_epi(chain(m), chain(n)):
                assert isinstance(res, EpiWitness), (m, n)
                assert check_epi_on_prefix(res, n, m, n).verdict == "pass"
            else:
                assert isinstance(res, NotFound), (m, n)


def test_omega_plus_one_from_omega_not_found():
    res = epi_search(realize(Sum((OMEGA, Fin(1)))), realize(OMEGA))
    assert isinstance(res, NotFound)


def test_tiny_budget_is_exhausted():
    res = epi_search(omega_order(), omega_order(), budget=10)
    assert isinstance(res, Exhausted)


def test_omega_onto_omega_found():
    res = epi_search(omega_order(), omega_order())
    assert isinstance(res, EpiWitness)
    assert [res(n) for n in range(5)] == list(range(5))


def test_finite_target_under_infinite_source():
    res = epi_search(fin_order(3), zeta_pow(fin_order(1)))
    assert isinstance(res, EpiWitness)
    assert check_epi_on_prefix(res, 30, 3, 200).verdict == "pass"


def test_omega_from_int_line_found():
    res = epi_search(omega_order(), zeta_pow(fin_order(1)))
    assert isinstance(res, EpiWitness)
    assert check_epi_on_prefix(res, 40, 10, 4000).verdict == "pass"


def test_omega_from_double_omega_found():
    res = epi_search(omega_order(), realize(Sum((OMEGA, OMEGA))))
    assert isinstance(res, EpiWitness)
    assert res(pair(0, 99)) == 0


def test_eta_onto_omega_found():
    res = epi_search(omega_order(), eta_order())
    assert isinstance(res, EpiWitness)
    assert check_epi_on_prefix(res, 40, 8, 2000).verdict == "pass"


def test_extremum_certificates():
    z = zeta_pow(fin_order(1))
    assert isinstance(epi_search(z, omega_order()), NotFound)
    assert isinstance(epi_search(realize(Rev(OMEGA)), omega_order()), NotFound)
    assert isinstance(epi_search(omega_order(), realize(Rev(OMEGA))), NotFound)


def test_unanchored_shapes_exhausted():
    z = zeta_pow(fin_order(1))
    assert isinstance(epi_search(z, z), Exhausted)


def test_empty_cases():
    e = empty_order()
    assert isinstance(epi_search(e, e), EpiWitness)
    assert isinstance(epi_search(e, omega_order()), NotFound)
    assert isinstance(epi_search(fin_order(1), e), NotFound)


# -- stability

def test_stable_omega_passes():
    assert stable_check(realize(OMEGA), budget=20).verdict == "pass"


def test_stable_one_plus_rev_omega_fails_with_triple():
    K = realize(Sum((Fin(1), Rev(OMEGA))))
    rep = stable_check(K)
    assert rep.verdict == "fail"
    a0, a1, a = rep.triple
    assert K.contains(a0) and K.contains(a1) and K.contains(a)
    assert K.leq(a0, a1)


def test_stable_singleton_passes():
    assert stable_check(fin_order(1)).verdict == "pass"


def test_stable_no_minimum_fails():
    rep = stable_check(zeta_pow(fin_order(1)))
    assert rep.verdict == "fail" and rep.triple is None


def test_stable_double_omega_inconclusive():
    rep = stable_check(realize(Sum((OMEGA, OMEGA))))
    assert rep.verdict == "inconclusive"
