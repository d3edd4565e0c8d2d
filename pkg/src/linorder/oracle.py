"""Exhaustive ground truth on small finite orders.

A finite order is a tuple of distinct integer labels listed in order.  All
map counting and enumeration here is brute force and capped, meant as an
independent yardstick for the constructive machinery, not for scale.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Optional, Tuple

from .coded import CodedOrder, pair, unpair

# overridable so heavier machines can raise the exhaustion ceiling
MAP_CAP = int(os.environ.get("LINORDER_ORACLE_CAP", "9"))


@dataclass(frozen=True)
class FinOrder:
    """Labels in ascending order of the order they present."""
    labels: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        if not self.labels:
            raise ValueError("empty order")

    @property
    def size(self) -> int:
        return len(self.labels)

    def position(self, label: int) -> int:
        return self.labels.index(label)

    def leq(self, a: int, b: int) -> bool:
        return self.position(a) <= self.position(b)

    def to_coded(self) -> CodedOrder:
        labels = self.labels
        member = set(labels)
        pos = {l: i for i, l in enumerate(labels)}
        return CodedOrder(
            f"fin{labels}",
            lambda c: c in member,
            lambda a, b: pos[a] <= pos[b],
            lambda: iter(sorted(labels)),
            size_hint=len(labels),
            min_code=labels[0], max_code=labels[-1],
            isf=True, fsf=True, fin_int=True)


def chain(n: int) -> FinOrder:
    return FinOrder(tuple(range(n)))


def induced_suborder(o: CodedOrder, codes) -> FinOrder:
    return FinOrder(tuple(o.sort(set(codes))))


def fin_product(L: FinOrder, K: FinOrder) -> FinOrder:
    """One copy of L per point of K, labels pair(k, l) as in realizations."""
    out = []
    for k in K.labels:
        out.extend(pair(k, l) for l in L.labels)
    return FinOrder(tuple(out))


def _check_cap(*orders: FinOrder):
    for o in orders:
        if o.size > MAP_CAP:
            raise ValueError(f"oracle capped at {MAP_CAP} elements")


def emb_count(L: FinOrder, K: FinOrder) -> int:
    """Number of order embeddings of L into K."""
    return comb(K.size, L.size) if L.size <= K.size else 0


def epi_count(L: FinOrder, K: FinOrder) -> int:
    """Number of order-preserving surjections of K onto L."""
    return comb(K.size - 1, L.size - 1) if L.size <= K.size else 0


def exists_emb(L: FinOrder, K: FinOrder) -> bool:
    return L.size <= K.size


def exists_epi(L: FinOrder, K: FinOrder) -> bool:
    return L.size <= K.size


def enumerate_embs(L: FinOrder, K: FinOrder) -> List[Dict[int, int]]:
    """All embeddings of L into K as label maps."""
    _check_cap(L, K)
    out = []
    for combo in itertools.combinations(K.labels, L.size):
        out.append(dict(zip(L.labels, combo)))
    return out


def enumerate_epis(L: FinOrder, K: FinOrder) -> List[Dict[int, int]]:
    """All order-preserving surjections of K onto L as label maps.

    A surjection of chains is a split of K into consecutive nonempty
    blocks, one per element of L.
    """
    _check_cap(L, K)
    if L.size > K.size:
        return []
    out = []
    for cuts in itertools.combinations(range(1, K.size), L.size - 1):
        bounds = (0,) + cuts + (K.size,)
        m = {}
        for j in range(L.size):
            for i in range(bounds[j], bounds[j + 1]):
                m[K.labels[i]] = L.labels[j]
        out.append(m)
    return out


def is_epi_map(L: FinOrder, K: FinOrder, m: Dict[int, int]) -> bool:
    if set(m.keys()) != set(K.labels):
        return False
    if set(m.values()) != set(L.labels):
        return False
    for a, b in zip(K.labels, K.labels[1:]):
        if not L.leq(m[a], m[b]):
            return False
    return True


# ---------------------------------------------------------------------------
# the finite quotient of a product epi

def quotient_epi_fin(L: FinOrder, K: FinOrder, J: FinOrder,
                     phi: Dict[int, int]) -> Dict[int, int]:
    """Index map K -> J induced by an epi of products L*K onto L*J.

    For each k the copy L x {k} meets one or two consecutive copies of the
    target.  Unambiguous points take their unique or fully covered copy;
    maximal runs of ambiguous points are shifted together, with the
    direction fixed at the ends of K or by the already decided neighbour.
    """
    src = fin_product(L, K)
    tgt = fin_product(L, J)
    if not is_epi_map(tgt, src, phi):
        raise ValueError("phi is not an order epi of the products")

    image: Dict[int, set] = {k: set() for k in K.labels}
    covered: Dict[int, set] = {k: set() for k in K.labels}
    for k in K.labels:
        vals = [phi[pair(k, l)] for l in L.labels]
        image[k] = {unpair(v)[0] for v in vals}
        for j in J.labels:
            if all(pair(j, l2) in vals for l2 in L.labels):
                covered[k].add(j)

    psi: Dict[int, int] = {}
    ambiguous: List[int] = []
    for k in K.labels:
        R = sorted(image[k], key=J.position)
        if len(R) == 1:
            psi[k] = R[0]
        elif covered[k]:
            if len(covered[k]) != 1:
                raise AssertionError("more than one fully covered copy")
            psi[k] = next(iter(covered[k]))
        else:
            if len(R) != 2:
                raise AssertionError("ambiguous point meeting 3+ copies "
                                     "without a covered one")
            ambiguous.append(k)

    # maximal runs of consecutive ambiguous points, in K order
    runs: List[List[int]] = []
    amb = set(ambiguous)
    for k in K.labels:
        if k in amb:
            if runs and K.position(runs[-1][-1]) == K.position(k) - 1:
                runs[-1].append(k)
            else:
                runs.append([k])

    for run in runs:
        js = sorted({j for k in run for j in image[k]}, key=J.position)
        for a, b in zip(js, js[1:]):
            if J.position(b) != J.position(a) + 1:
                raise AssertionError("ambiguous run spans non-consecutive copies")
        if len(js) != len(run) + 1:
            raise AssertionError("ambiguous run size mismatch")
        for r, k in enumerate(run):
            if set(image[k]) != {js[r], js[r + 1]}:
                raise AssertionError("ambiguous run not aligned")
        if K.position(run[0]) == 0:
            # nothing below the run can produce the lowest copy
            up = False
        elif K.position(run[-1]) == K.size - 1:
            up = True
        else:
            prev = K.labels[K.position(run[0]) - 1]
            up = psi[prev] == js[0]
        for r, k in enumerate(run):
            psi[k] = js[r + 1] if up else js[r]

    if not is_epi_map(J, K, psi):
        raise AssertionError("induced index map failed to be an epi")
    return psi


# ---------------------------------------------------------------------------
# seeded instance generators

def fuzz_epis(seed: int, count: int,
              max_src: int = 8) -> List[Tuple[FinOrder, FinOrder, Dict[int, int]]]:
    """Random (L, K, map) triples with map an epi of K onto L."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        ks = rng.randint(1, max_src)
        ls = rng.randint(1, ks)
        K = FinOrder(tuple(sorted(rng.sample(range(50), ks))))
        L = FinOrder(tuple(sorted(rng.sample(range(50), ls))))
        cuts = sorted(rng.sample(range(1, ks), ls - 1)) if ls > 1 else []
        bounds = [0] + cuts + [ks]
        m = {}
        for j in range(ls):
            for i in range(bounds[j], bounds[j + 1]):
                m[K.labels[i]] = L.labels[j]
        out.append((L, K, m))
    return out


def fuzz_quotients(seed: int, count: int):
    """Random product-epi instances (L, K, J, phi) for the quotient map."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        ls = rng.randint(1, 3)
        ks = rng.randint(1, 4)
        js = rng.randint(1, ks)
        L, K, J = chain(ls), chain(ks), chain(js)
        src = fin_product(L, K)
        tgt = fin_product(L, J)
        n, m = src.size, tgt.size
        cuts = sorted(rng.sample(range(1, n), m - 1)) if m > 1 else []
        bounds = [0] + cuts + [n]
        phi = {}
        for j in range(m):
            for i in range(bounds[j], bounds[j + 1]):
                phi[src.labels[i]] = tgt.labels[j]
        out.append((L, K, J, phi))
    return out
