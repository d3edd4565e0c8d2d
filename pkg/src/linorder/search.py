"""Bounded three-way search for epimorphisms, and interval stability.

The searcher answers with a prefix-validated witness, with a refusal
backed by a structural certificate that rules every map out, or with
Exhausted when the budget ends first.  It is sound but deliberately
incomplete: shapes outside the staged ascending covering give Exhausted
rather than a guess, and no witness is returned that fails its own
prefix check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .coded import INFINITE, OK, OVERFLOW, UNKNOWN, CodedOrder, realize
from .epi import (EpiWitness, LazyCuts, _strict_up, check_epi_on_prefix,
                  staircase_witness)
from .oracle import MAP_CAP, chain, exists_epi


@dataclass(frozen=True)
class NotFound:
    """No epimorphism exists; the reason names the certificate."""
    reason: str


@dataclass(frozen=True)
class Exhausted:
    """The search ended without a verdict either way."""
    reason: str


SearchResult = Union[EpiWitness, NotFound, Exhausted]


def _chains_epi(need: int, have: int) -> bool:
    """A chain of `have` points onto a chain of `need` points."""
    if max(need, have) <= MAP_CAP:
        return exists_epi(chain(need), chain(have))
    return have >= need


class _Listing:
    """The true ascending enumeration of an unbounded order with a min.

    Grows through complete initial segments below points of the cofinal
    stream; a segment that cannot be materialized freezes the listing
    with the blocking status.
    """

    def __init__(self, o: CodedOrder, cap: int):
        self.o = o
        self.cap = cap
        self.items: List[int] = []
        self.status: Optional[str] = None
        self._cof = o.cofinal()

    def _grow(self) -> bool:
        if self.status is not None or self._cof is None:
            self.status = self.status or UNKNOWN
            return False
        h = next(self._cof, None)
        if h is None:
            self.status = UNKNOWN
            return False
        st, seg = self.o.try_initial(h, self.cap)
        if st != OK:
            self.status = st
            return False
        self.items = seg
        return True

    def ensure_len(self, n: int) -> bool:
        # each cofinal point strictly extends the initial segment
        while len(self.items) < n:
            if not self._grow():
                return False
        return True

    def ensure_past(self, x: int) -> bool:
        while not self.items or not self.o.lt(x, self.items[-1]):
            if not self._grow():
                return False
        return True


def _validated(w: EpiWitness, n_src: int, n_tgt: int,
               eval_budget: int) -> SearchResult:
    rep = check_epi_on_prefix(w, n_src, n_tgt, eval_budget)
    if rep.verdict == "pass":
        return w
    return Exhausted("candidate witness failed prefix validation")


def _infinite_closed_interval(L: CodedOrder,
                              budget: int) -> Optional[Tuple[int, int]]:
    """Two members with infinitely many points between them, if visible.

    Only consecutive points of a sorted sample are probed; an infinite
    closed interval with sampled endpoints forces one such pair to be
    infinite too.
    """
    pts = L.sort(L.first(max(4, min(24, budget // 40))))
    cap = max(16, min(256, budget))
    for a, b in zip(pts, pts[1:]):
        st, _ = L.try_interval(a, b, cap)
        if st == INFINITE:
            return a, b
    return None


def epi_search(L, K, budget: int = 10000) -> SearchResult:
    """Search for an epimorphism from K onto L, three ways out.

    Finite pairs delegate to the oracle and come back as staircases.  A
    finite target under an infinite source is always coverable by
    thresholds.  Infinite targets are staged along the ascending listing
    of L when it is materializable, with the source collapsed through
    its cofinal ladder; certificates (extremum mismatches, an infinite
    closed target interval over a source with finite intervals) refuse
    soundly, and everything else is Exhausted.
    """
    if not isinstance(L, CodedOrder):
        L = realize(L)
    if not isinstance(K, CodedOrder):
        K = realize(K)
    sL, sK = L.size_hint, K.size_hint

    if sL == 0 or sK == 0:
        if sL == 0 and sK == 0:
            return staircase_witness([], [], K, L)
        if sK == 0:
            return NotFound("the source is empty, the target is not")
        return NotFound("the target is empty, the source is not")

    if sL is not None and sK is not None:
        if not _chains_epi(sL, sK):
            return NotFound("the source has fewer points than the target")
        w = staircase_witness(K.sort(K.first(sK)), L.sort(L.first(sL)), K, L)
        return _validated(w, sK, sL, sK)

    if sK is not None:
        return NotFound("a finite source cannot cover an infinite target")

    if sL is not None:
        # blocks between sampled cut points of the infinite source
        sample = K.sort(K.first(max(2 * sL, 8)))
        cuts = sample[:sL - 1]
        tgt = L.sort(L.first(sL))

        def f_thresh(x):
            j = 0
            while j < len(cuts) and K.lt(cuts[j], x):
                j += 1
            return tgt[j]

        w = EpiWitness(K, L, f_thresh, "thresholds")
        return _validated(w, min(40, max(8, budget)), sL, budget)

    # both infinite: extremum certificates first
    if L.min_code is None and K.min_code is not None:
        return NotFound("the source minimum would need a target minimum")
    if L.max_code is None and K.max_code is not None:
        return NotFound("the source maximum would need a target maximum")
    if K.fin_int and _infinite_closed_interval(L, budget) is not None:
        return NotFound("an infinite closed target interval cannot be "
                        "covered by the finite intervals of the source")
    if budget < 50:
        return Exhausted("budget too small to stage a covering")
    if L.min_code is None:
        return Exhausted("target without a detectable minimum")
    if L.max_code is not None or K.max_code is not None:
        return Exhausted("bounded-above infinite shapes are not staged")

    horizon = max(8, min(60, budget // 100))
    ll = _Listing(L, cap=budget)
    if not ll.ensure_len(horizon):
        if ll.status == INFINITE and K.fin_int:
            return NotFound("an infinite closed target interval cannot be "
                            "covered by the finite intervals of the source")
        return Exhausted(f"target listing stalled ({ll.status})")
    cuts = LazyCuts(_strict_up(K, K.cofinal()))

    def f_staged(x):
        n = 0
        while not K.leq(x, cuts[n]):
            n += 1
        if not ll.ensure_len(n + 1):
            raise RuntimeError("target listing stalled past the "
                               "validated horizon")
        return ll.items[n]

    def fiber_staged(l):
        # the n-th cut maps to the n-th listed target exactly
        ll.ensure_past(l)
        try:
            n = ll.items.index(l)
        except ValueError:
            return iter(())
        return iter([cuts[n]])

    w = EpiWitness(K, L, f_staged, f"staged({L.name}<-{K.name})",
                   fiber_fn=fiber_staged)
    return _validated(w, horizon, min(30, horizon), budget)


# ---------------------------------------------------------------------------
# interval stability

@dataclass
class StableReport:
    verdict: str  # "pass" | "fail" | "inconclusive"
    triple: Optional[Tuple[int, int, int]] = None
    reason: str = ""


def stable_check(K, budget: int = 2000) -> StableReport:
    """Do sampled closed intervals recur above every sampled point?

    Samples triples a0 <= a1 and a from the first budget codes and asks
    for b0, b1 >= a with [a0,a1] realizable from [b0,b1].  A finite
    supply above a settles each triple exactly (chains reduce to the
    oracle); an infinite supply settles finite demands; the remaining
    combinations stay undecided and at worst downgrade the verdict to
    inconclusive.
    """
    if not isinstance(K, CodedOrder):
        K = realize(K)
    if K.size_hint == 0 or K.min_code is None:
        return StableReport("fail", None, "no minimum")

    pool = K.sort(K.first(min(budget, 24)))
    cap = max(64, budget)
    avail_cache: dict = {}

    def avail_above(a):
        if a not in avail_cache:
            st, fin = K.try_final(a, cap)
            if st == OK:
                avail_cache[a] = len(fin)
            elif st == INFINITE:
                avail_cache[a] = None
            else:
                avail_cache[a] = st
        return avail_cache[a]

    undecided: Optional[str] = None
    for i, a0 in enumerate(pool):
        for a1 in pool[i:]:
            st, seg = K.try_interval(a0, a1, cap)
            if st == OK:
                need: Optional[int] = len(seg)
            elif st in (INFINITE, OVERFLOW):
                # overflow still demands more than any capped supply
                need = None
            else:
                undecided = f"interval [{a0},{a1}] undecidable ({st})"
                continue
            for a in pool:
                have = avail_above(a)
                if isinstance(have, str):
                    undecided = f"final segment at {a} undecidable ({have})"
                elif have is None:
                    if need is None and st == INFINITE:
                        undecided = "infinite demand against infinite supply"
                elif need is None or not _chains_epi(need, have):
                    return StableReport(
                        "fail", (a0, a1, a),
                        "the interval cannot recur above this point")
    if undecided:
        return StableReport("inconclusive", None, undecided)
    return StableReport("pass")
