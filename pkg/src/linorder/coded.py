"""Decidable orders on natural-number codes.

Every term denotes an order whose domain is a decidable set of codes with a
decidable comparison and a canonical enumeration in ascending code order.
All coding conventions are fixed and bit-exact: Cantor pairing
pi(a,b) = (a+b)(a+b+1)/2 + b, length-prefixed sequence codes, the dyadic
string order for the rationals, and the zigzag presentation of the integers
(2k decodes to +k, 2k+1 to -(k+1)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cmp_to_key
from math import isqrt
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .cnf import (
    CNF, CNF_ZERO, CNF_ONE, cnf_add, cnf_cmp, cnf_sub_left, from_nat, fund_seq,
    omega_power,
)
from .terms import (
    Eta, Fin, Omega, OrderTerm, Prod, Rev, Sum, ZetaPow, classify,
)


# ---------------------------------------------------------------------------
# codecs

def pair(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError("pairing is defined on naturals")
    return (a + b) * (a + b + 1) // 2 + b


def unpair(z: int) -> Tuple[int, int]:
    if z < 0:
        raise ValueError("negative code")
    w = (isqrt(8 * z + 1) - 1) // 2
    t = w * (w + 1) // 2
    b = z - t
    return w - b, b


def seq_encode(xs) -> int:
    t = tuple(xs)
    if not t:
        return 0
    chain = 0
    for x in reversed(t):
        chain = pair(x, chain)
    return pair(len(t), chain)


def seq_decode(code: int) -> Tuple[int, ...]:
    if code == 0:
        return ()
    k, chain = unpair(code)
    out = []
    for _ in range(k):
        a, chain = unpair(chain)
        out.append(a)
    if chain != 0:
        raise ValueError("trailing data in sequence code")
    return tuple(out)


def zz_decode(code: int) -> int:
    """Zigzag code to integer: 0->0, 2k->+k, 2k+1->-(k+1)."""
    if code % 2 == 0:
        return code // 2
    return -(code // 2 + 1)


def zz_encode(z: int) -> int:
    return 2 * z if z >= 0 else -2 * z - 1


# ---------------------------------------------------------------------------
# the order bundle

OK = "ok"
INFINITE = "infinite"
OVERFLOW = "overflow"
UNKNOWN = "unknown"


class CodedOrder:
    """A decidable linear order on a decidable set of natural-number codes.

    `contains` and `leq` are total on codes / member pairs.  `stream()`
    yields the members in ascending natural-number order and is memoized.
    `size_hint` is the exact size for finite domains and None for countably
    infinite ones.  The structural flags isf / fsf / fin_int assert that all
    initial segments / final segments / closed intervals are finite; they
    are sound (never wrongly True) but not required to be complete.
    """

    def __init__(self, name, contains, leq, enum_factory, *, size_hint=None,
                 min_code=None, max_code=None, isf=False, fsf=False,
                 fin_int=False, cofinal_factory=None, coinitial_factory=None,
                 interval_fn=None, final_fn=None, initial_fn=None,
                 succ_fn=None, term=None):
        self.name = name
        self.contains = contains
        self.leq = leq
        self._enum_factory = enum_factory
        self.size_hint = size_hint
        self.min_code = min_code
        self.max_code = max_code
        self.isf = isf
        self.fsf = fsf
        self.fin_int = fin_int
        self._cofinal_factory = cofinal_factory
        self._coinitial_factory = coinitial_factory
        self._interval_fn = interval_fn
        self._final_fn = final_fn
        self._initial_fn = initial_fn
        self.succ_fn = succ_fn
        self.term = term
        self._cache: List[int] = []
        self._src: Optional[Iterator[int]] = None
        self._exhausted = False

    # -- enumeration

    def stream(self) -> Iterator[int]:
        i = 0
        while True:
            while i >= len(self._cache) and not self._exhausted:
                if self._src is None:
                    self._src = iter(self._enum_factory())
                try:
                    self._cache.append(next(self._src))
                except StopIteration:
                    self._exhausted = True
            if i < len(self._cache):
                yield self._cache[i]
                i += 1
            else:
                return

    def first(self, n: int) -> List[int]:
        return list(itertools.islice(self.stream(), n))

    # -- comparisons

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def eq(self, a: int, b: int) -> bool:
        return a == b

    def cmp(self, a: int, b: int) -> int:
        if a == b:
            return 0
        return -1 if self.leq(a, b) else 1

    def sort(self, codes) -> List[int]:
        return sorted(codes, key=cmp_to_key(self.cmp))

    def maximum_of(self, codes):
        it = iter(codes)
        best = next(it)
        for c in it:
            if self.lt(best, c):
                best = c
        return best

    # -- streams

    def cofinal(self) -> Optional[Iterator[int]]:
        """Strictly increasing cofinal stream; None when a maximum exists."""
        if self.max_code is not None:
            return None
        if self._cofinal_factory is not None:
            return iter(self._cofinal_factory())
        return greedy_monotone(self, ascending=True)

    def coinitial(self) -> Optional[Iterator[int]]:
        if self.min_code is not None:
            return None
        if self._coinitial_factory is not None:
            return iter(self._coinitial_factory())
        return greedy_monotone(self, ascending=False)

    # -- bounded complete materialization

    def try_interval(self, lo: int, hi: int, cap: int):
        """Members of [lo,hi] in ascending order, when decidably complete.

        Returns (status, list-or-None) with status ok / infinite /
        overflow / unknown.
        """
        if self.lt(hi, lo):
            return OK, []
        if lo == hi:
            return OK, [lo]
        if self.size_hint is not None:
            got = [c for c in self.first(self.size_hint)
                   if self.leq(lo, c) and self.leq(c, hi)]
            if len(got) > cap:
                return OVERFLOW, None
            return OK, self.sort(got)
        if self._interval_fn is not None:
            return self._interval_fn(lo, hi, cap)
        return UNKNOWN, None

    def try_final(self, lo: int, cap: int):
        if self.size_hint is not None:
            got = [c for c in self.first(self.size_hint) if self.leq(lo, c)]
            if len(got) > cap:
                return OVERFLOW, None
            return OK, self.sort(got)
        if self._final_fn is not None:
            return self._final_fn(lo, cap)
        return UNKNOWN, None

    def try_initial(self, hi: int, cap: int):
        if self.size_hint is not None:
            got = [c for c in self.first(self.size_hint) if self.leq(c, hi)]
            if len(got) > cap:
                return OVERFLOW, None
            return OK, self.sort(got)
        if self._initial_fn is not None:
            return self._initial_fn(hi, cap)
        return UNKNOWN, None

    def __repr__(self):
        return f"CodedOrder({self.name})"


def greedy_monotone(order: CodedOrder, ascending: bool) -> Iterator[int]:
    """Monotone subsequence of the enumeration; cofinal (resp. coinitial).

    Whatever the enumeration order, keeping each element comparable in the
    right direction with the current front passes every member eventually:
    when x is enumerated, either the front already beats x or x extends it.
    """
    def gen():
        cur = None
        for c in order.stream():
            if cur is None or (order.leq(cur, c) if ascending
                               else order.leq(c, cur)):
                if cur is None or c != cur:
                    cur = c
                    yield c
    return gen()


@dataclass(frozen=True)
class CodeStream:
    direction: str  # "increasing" | "decreasing"
    factory: Callable[[], Iterator[int]]

    def take(self, n: int) -> List[int]:
        return list(itertools.islice(iter(self.factory()), n))


# ---------------------------------------------------------------------------
# merge machinery for enumerations in ascending code order

def merge_tagged(streams) -> Iterator[int]:
    """Merge countably many ascending code streams into one ascending stream.

    Each stream arrives as (lower_bound, iterable) and yields only codes at
    or above its bound; the bounds must be nondecreasing across streams.
    That makes lazy activation sound: a stream stays dormant exactly while
    every code it could produce exceeds the current front of the merge.
    """
    import heapq
    heap: List[Tuple[int, int, Iterator[int]]] = []
    serial = itertools.count()
    pending = iter(streams)
    nxt = next(pending, None)
    while heap or nxt is not None:
        while nxt is not None and (not heap or nxt[0] <= heap[0][0]):
            s = iter(nxt[1])
            head = next(s, None)
            if head is not None:
                heapq.heappush(heap, (head, next(serial), s))
            nxt = next(pending, None)
        if not heap:
            continue
        code, _, s = heapq.heappop(heap)
        yield code
        follow = next(s, None)
        if follow is not None:
            heapq.heappush(heap, (follow, next(serial), s))


def _tagged(tag: int, part: CodedOrder):
    """Stream of pair(tag, x) over a part, with its code lower bound."""
    return pair(tag, 0), (pair(tag, x) for x in part.stream())


def _chain_nodes(heads_factory, may_prepend):
    """All prepend-built chains as (tuple, nested-pair code), code-ascending.

    heads_factory() yields candidate heads in ascending code order and a
    head is prepended to a shorter chain when may_prepend allows it.
    Rejected combinations still drive the search but are not yielded and
    never extended: a valid chain has valid suffixes, so nothing is lost.
    """
    import heapq
    serial = itertools.count()
    heap: List[Tuple[int, int, int, tuple]] = []

    def push_head(rec):
        # rec = (tuple, chain code, head iterator)
        a = next(rec[2], None)
        if a is not None:
            heapq.heappush(heap, (pair(a, rec[1]), next(serial), a, rec))

    root = ((), 0, heads_factory())
    yield (), 0
    push_head(root)
    while heap:
        code, _, a, parent = heapq.heappop(heap)
        push_head(parent)
        if may_prepend(a, parent[0]):
            tup = (a,) + parent[0]
            yield tup, code
            push_head((tup, code, heads_factory()))


class _ByLength:
    """Route an ascending chain stream into per-length seq-code streams."""

    def __init__(self, nodes):
        self._nodes = nodes
        self._got: Dict[int, List[int]] = {}
        self._done = False

    def _pull(self) -> None:
        try:
            tup, code = next(self._nodes)
        except StopIteration:
            self._done = True
            return
        if tup:
            self._got.setdefault(len(tup), []).append(pair(len(tup), code))

    def head(self, h: int) -> Optional[int]:
        while not self._got.get(h):
            if self._done:
                return None
            self._pull()
        return self._got[h][0]

    def stream(self, h: int) -> Iterator[int]:
        i = 0
        while True:
            lst = self._got.get(h)
            if lst is not None and i < len(lst):
                yield lst[i]
                i += 1
            elif self._done:
                return
            else:
                self._pull()


# ---------------------------------------------------------------------------
# realization combinators

def fin_order(n: int) -> CodedOrder:
    if n < 1:
        raise ValueError("empty chain")
    return CodedOrder(
        f"fin{n}",
        lambda c: 0 <= c < n,
        lambda a, b: a <= b,
        lambda: iter(range(n)),
        size_hint=n, min_code=0, max_code=n - 1,
        isf=True, fsf=True, fin_int=True,
        succ_fn=lambda c: c + 1 if c + 1 < n else None)


def empty_order() -> CodedOrder:
    return CodedOrder("empty", lambda c: False, lambda a, b: False,
                      lambda: iter(()), size_hint=0,
                      isf=True, fsf=True, fin_int=True)


def omega_order() -> CodedOrder:
    def interval(lo, hi, cap):
        if hi - lo + 1 > cap:
            return OVERFLOW, None
        return OK, list(range(lo, hi + 1))
    return CodedOrder(
        "omega",
        lambda c: c >= 0,
        lambda a, b: a <= b,
        lambda: itertools.count(0),
        min_code=0, isf=True, fin_int=True,
        cofinal_factory=lambda: itertools.count(0),
        interval_fn=interval,
        final_fn=lambda lo, cap: (INFINITE, None),
        initial_fn=lambda hi, cap: interval(0, hi, cap),
        succ_fn=lambda c: c + 1)


def _eta_string(n: int) -> str:
    return bin(n + 1)[3:]


def _eta_leq(a: int, b: int) -> bool:
    if a == b:
        return True
    s, t = _eta_string(a), _eta_string(b)
    for x, y in zip(s, t):
        if x != y:
            return x < y
    if len(s) < len(t):
        return t[len(s)] == "1"
    return s[len(t)] == "0"


def eta_order() -> CodedOrder:
    def interval(lo, hi, cap):
        # only called with lo strictly below hi; the dyadic order is dense
        return INFINITE, None
    return CodedOrder(
        "eta",
        lambda c: c >= 0,
        _eta_leq,
        lambda: itertools.count(0),
        cofinal_factory=lambda: (2 ** (k + 1) - 2 for k in itertools.count(1)),
        coinitial_factory=lambda: (2 ** k - 1 for k in itertools.count(1)),
        interval_fn=interval,
        final_fn=lambda lo, cap: (INFINITE, None),
        initial_fn=lambda hi, cap: (INFINITE, None))


def rev_order(inner: CodedOrder) -> CodedOrder:
    def interval(lo, hi, cap):
        st, lst = inner.try_interval(hi, lo, cap)
        return st, (list(reversed(lst)) if lst is not None else None)

    def final(lo, cap):
        st, lst = inner.try_initial(lo, cap)
        return st, (list(reversed(lst)) if lst is not None else None)

    def initial(hi, cap):
        st, lst = inner.try_final(hi, cap)
        return st, (list(reversed(lst)) if lst is not None else None)

    return CodedOrder(
        f"rev({inner.name})",
        inner.contains,
        lambda a, b: inner.leq(b, a),
        inner.stream,
        size_hint=inner.size_hint,
        min_code=inner.max_code, max_code=inner.min_code,
        isf=inner.fsf, fsf=inner.isf, fin_int=inner.fin_int,
        cofinal_factory=inner._coinitial_factory,
        coinitial_factory=inner._cofinal_factory,
        interval_fn=interval, final_fn=final, initial_fn=initial)


def sum_orders(parts: List[CodedOrder], name=None) -> CodedOrder:
    """Concatenation; member codes pair(part_index, inner_code)."""
    j = len(parts)

    def contains(c):
        i, x = unpair(c)
        return i < j and parts[i].contains(x)

    def leq(a, b):
        ia, xa = unpair(a)
        ib, xb = unpair(b)
        if ia != ib:
            return ia < ib
        return parts[ia].leq(xa, xb)

    def enum():
        return merge_tagged(_tagged(i, p) for i, p in enumerate(parts))

    sizes = [p.size_hint for p in parts]
    size = sum(sizes) if all(s is not None for s in sizes) else None
    min_code = pair(0, parts[0].min_code) if parts[0].min_code is not None else None
    max_code = pair(j - 1, parts[-1].max_code) if parts[-1].max_code is not None else None

    def finite(p):
        return p.size_hint is not None

    isf = all(finite(p) for p in parts[:-1]) and parts[-1].isf
    fsf = all(finite(p) for p in parts[1:]) and parts[0].fsf
    fin_int = (all(p.fin_int for p in parts)
               and all(p.fsf for p in parts[:-1])
               and all(p.isf for p in parts[1:]))

    def cof():
        s = parts[-1].cofinal()
        return (pair(j - 1, x) for x in s)

    def coi():
        s = parts[0].coinitial()
        return (pair(0, x) for x in s)

    def materialize_full(p, i, cap, acc):
        if p.size_hint is None:
            return INFINITE
        if p.size_hint > cap - len(acc):
            return OVERFLOW
        acc.extend(pair(i, x) for x in p.sort(p.first(p.size_hint)))
        return OK

    def interval(lo, hi, cap):
        il, xl = unpair(lo)
        ih, xh = unpair(hi)
        if il == ih:
            st, lst = parts[il].try_interval(xl, xh, cap)
            return st, ([pair(il, x) for x in lst] if lst is not None else None)
        out: List[int] = []
        st, lst = parts[il].try_final(xl, cap)
        if st != OK:
            return st, None
        out.extend(pair(il, x) for x in lst)
        for i in range(il + 1, ih):
            st = materialize_full(parts[i], i, cap, out)
            if st != OK:
                return st, None
        st, lst = parts[ih].try_initial(xh, cap - len(out))
        if st != OK:
            return st, None
        out.extend(pair(ih, x) for x in lst)
        if len(out) > cap:
            return OVERFLOW, None
        return OK, out

    def final(lo, cap):
        il, xl = unpair(lo)
        out: List[int] = []
        st, lst = parts[il].try_final(xl, cap)
        if st != OK:
            return st, None
        out.extend(pair(il, x) for x in lst)
        for i in range(il + 1, j):
            st = materialize_full(parts[i], i, cap, out)
            if st != OK:
                return st, None
        if len(out) > cap:
            return OVERFLOW, None
        return OK, out

    def initial(hi, cap):
        ih, xh = unpair(hi)
        out: List[int] = []
        for i in range(ih):
            st = materialize_full(parts[i], i, cap, out)
            if st != OK:
                return st, None
        st, lst = parts[ih].try_initial(xh, cap - len(out))
        if st != OK:
            return st, None
        out.extend(pair(ih, x) for x in lst)
        if len(out) > cap:
            return OVERFLOW, None
        return OK, out

    return CodedOrder(
        name or "(" + " + ".join(p.name for p in parts) + ")",
        contains, leq, enum, size_hint=size,
        min_code=min_code, max_code=max_code,
        isf=isf, fsf=fsf, fin_int=fin_int,
        cofinal_factory=cof if max_code is None else None,
        coinitial_factory=coi if min_code is None else None,
        interval_fn=interval, final_fn=final, initial_fn=initial)


def nat_sum(part_at: Callable[[int], CodedOrder], name: str) -> CodedOrder:
    """Sum of omega-many parts; codes pair(i, x)."""
    cache: dict = {}

    def part(i):
        if i not in cache:
            cache[i] = part_at(i)
        return cache[i]

    def contains(c):
        i, x = unpair(c)
        return part(i).contains(x)

    def leq(a, b):
        ia, xa = unpair(a)
        ib, xb = unpair(b)
        if ia != ib:
            return ia < ib
        return part(ia).leq(xa, xb)

    def enum():
        return merge_tagged(_tagged(i, part(i)) for i in itertools.count(0))

    def cof():
        for i in itertools.count(0):
            yield pair(i, part(i).first(1)[0])

    p0 = part(0)
    min_code = pair(0, p0.min_code) if p0.min_code is not None else None

    def coi():
        s = p0.coinitial()
        return (pair(0, x) for x in s)

    return CodedOrder(
        name, contains, leq, enum,
        min_code=min_code,
        cofinal_factory=cof,
        coinitial_factory=coi if min_code is None else None)


def sum_over(index: CodedOrder, part_fn: Callable[[int], CodedOrder],
             name=None) -> CodedOrder:
    """Sum of parts along an arbitrary coded index order.

    Codes are pair(index code, part code); comparison defers to the index.
    Parts are built lazily and memoized per index code.
    """
    parts: dict = {}

    def part(c):
        if c not in parts:
            parts[c] = part_fn(c)
        return parts[c]

    def contains(x):
        c, v = unpair(x)
        return index.contains(c) and part(c).contains(v)

    def leq(x, y):
        c, v = unpair(x)
        d, w = unpair(y)
        if c == d:
            return part(c).leq(v, w)
        return index.lt(c, d)

    def enum():
        return merge_tagged(_tagged(c, part(c)) for c in index.stream())

    min_code = None
    if index.min_code is not None:
        p = part(index.min_code)
        if p.min_code is not None:
            min_code = pair(index.min_code, p.min_code)
    max_code = None
    if index.max_code is not None:
        p = part(index.max_code)
        if p.max_code is not None:
            max_code = pair(index.max_code, p.max_code)

    return CodedOrder(
        name or f"sum_over({index.name})", contains, leq, enum,
        min_code=min_code, max_code=max_code)


def prod_orders(L: CodedOrder, K: CodedOrder, name=None) -> CodedOrder:
    """Sum of one copy of L per point of K; codes pair(k, l), K-major."""

    def contains(c):
        k, l = unpair(c)
        return K.contains(k) and L.contains(l)

    def leq(a, b):
        ka, la = unpair(a)
        kb, lb = unpair(b)
        if ka != kb:
            return K.lt(ka, kb)
        return L.leq(la, lb)

    def enum():
        return merge_tagged(_tagged(k, L) for k in K.stream())

    size = None
    if L.size_hint is not None and K.size_hint is not None:
        size = L.size_hint * K.size_hint
    min_code = (pair(K.min_code, L.min_code)
                if K.min_code is not None and L.min_code is not None else None)
    max_code = (pair(K.max_code, L.max_code)
                if K.max_code is not None and L.max_code is not None else None)
    k_single = K.size_hint == 1
    l_fin = L.size_hint is not None
    isf = L.isf if k_single else (l_fin and K.isf)
    fsf = L.fsf if k_single else (l_fin and K.fsf)
    fin_int = L.fin_int if k_single else (l_fin and K.fin_int)

    def cof():
        if K.max_code is not None:
            return (pair(K.max_code, l) for l in L.cofinal())
        l0 = L.first(1)[0]
        return (pair(k, l0) for k in K.cofinal())

    def coi():
        if K.min_code is not None:
            return (pair(K.min_code, l) for l in L.coinitial())
        l0 = L.first(1)[0]
        return (pair(k, l0) for k in K.coinitial())

    def full_copy(k, cap, acc):
        if L.size_hint is None:
            return INFINITE
        if L.size_hint > cap - len(acc):
            return OVERFLOW
        acc.extend(pair(k, l) for l in L.sort(L.first(L.size_hint)))
        return OK

    def interval(lo, hi, cap):
        kl, ll = unpair(lo)
        kh, lh = unpair(hi)
        if kl == kh:
            st, lst = L.try_interval(ll, lh, cap)
            return st, ([pair(kl, x) for x in lst] if lst is not None else None)
        out: List[int] = []
        st, lst = L.try_final(ll, cap)
        if st != OK:
            return st, None
        out.extend(pair(kl, x) for x in lst)
        st, mids = K.try_interval(kl, kh, cap)
        if st != OK:
            return st, None
        for k in mids[1:-1]:
            st = full_copy(k, cap, out)
            if st != OK:
                return st, None
        st, lst = L.try_initial(lh, cap)
        if st != OK:
            return st, None
        out.extend(pair(kh, x) for x in lst)
        if len(out) > cap:
            return OVERFLOW, None
        return OK, out

    def final(lo, cap):
        kl, ll = unpair(lo)
        out: List[int] = []
        st, lst = L.try_final(ll, cap)
        if st != OK:
            return st, None
        out.extend(pair(kl, x) for x in lst)
        st, ks = K.try_final(kl, cap)
        if st != OK:
            return st, None
        for k in ks[1:]:
            st = full_copy(k, cap, out)
            if st != OK:
                return st, None
        if len(out) > cap:
            return OVERFLOW, None
        return OK, out

    def initial(hi, cap):
        kh, lh = unpair(hi)
        out: List[int] = []
        st, ks = K.try_initial(kh, cap)
        if st != OK:
            return st, None
        for k in ks[:-1]:
            st = full_copy(k, cap, out)
            if st != OK:
                return st, None
        st, lst = L.try_initial(lh, cap)
        if st != OK:
            return st, None
        out.extend(pair(kh, x) for x in lst)
        if len(out) > cap:
            return OVERFLOW, None
        return OK, out

    def succ(c):
        if L.succ_fn is None:
            return None
        k, l = unpair(c)
        s = L.succ_fn(l)
        return pair(k, s) if s is not None else None

    return CodedOrder(
        name or f"({L.name})*({K.name})",
        contains, leq, enum, size_hint=size,
        min_code=min_code, max_code=max_code,
        isf=isf, fsf=fsf, fin_int=fin_int,
        cofinal_factory=cof if max_code is None else None,
        coinitial_factory=coi if min_code is None else None,
        interval_fn=interval, final_fn=final, initial_fn=initial,
        succ_fn=succ)


# ---------------------------------------------------------------------------
# the zeta power codec

def _zeta_decode(n: int):
    s_code, v_code = unpair(n)
    supp = seq_decode(s_code)
    vals = seq_decode(v_code)
    return supp, vals


def zeta_code(entries) -> int:
    """Code of a finite-support member from (point, value) pairs.

    The support must already be listed in decreasing order of the exponent
    order and all values must be nonzero.
    """
    supp = tuple(p for p, _ in entries)
    vals = tuple(zz_encode(v) for _, v in entries)
    return pair(seq_encode(supp), seq_encode(vals))


def zeta_entries(c: int):
    """Decode a member code back to (point, value) pairs."""
    supp, vals = _zeta_decode(c)
    return [(p, zz_decode(v)) for p, v in zip(supp, vals)]


def zeta_line_code(z: int) -> int:
    """The integer z as a member of the power over a one-point order."""
    return 0 if z == 0 else zeta_code([(0, z)])


def zeta_pow(K: CodedOrder, name=None) -> CodedOrder:
    """The order of finite-support functions K -> Z on pair-of-sequence codes.

    A member code pairs two equal-length sequences: the support listed
    strictly K-decreasing and the nonzero values in zigzag coding.  Codes
    compare at the first listed (that is, K-largest) difference.
    """

    def contains(n):
        try:
            supp, vals = _zeta_decode(n)
        except ValueError:
            return False
        if len(supp) != len(vals):
            return False
        if any(v == 0 for v in vals):
            return False
        if not all(K.contains(p) for p in supp):
            return False
        return all(K.lt(supp[i + 1], supp[i]) for i in range(len(supp) - 1))

    def leq(n, m):
        if n == m:
            return True
        sn, vn = _zeta_decode(n)
        sm, vm = _zeta_decode(m)
        for i in range(min(len(sn), len(sm))):
            if sn[i] == sm[i]:
                if vn[i] != vm[i]:
                    return zz_decode(vn[i]) < zz_decode(vm[i])
                continue
            if K.lt(sn[i], sm[i]):
                return zz_decode(vm[i]) > 0
            return zz_decode(vn[i]) < 0
        if len(sn) < len(sm):
            return zz_decode(vm[len(sn)]) > 0
        return zz_decode(vn[len(sm)]) < 0

    def enum():
        # support chains descend in K from the left, value chains are free
        supp = _ByLength(_chain_nodes(
            K.stream, lambda a, tup: not tup or K.lt(tup[0], a)))
        vals = _ByLength(_chain_nodes(
            lambda: itertools.count(1), lambda a, tup: True))

        def row(sc, h):
            return (pair(sc, vc) for vc in vals.stream(h))

        def grid(h):
            return merge_tagged(
                (pair(sc, 0), row(sc, h)) for sc in supp.stream(h))

        def lengths():
            for h in itertools.count(1):
                sc0 = supp.head(h)
                if sc0 is None:
                    return
                yield pair(sc0, vals.head(h)), grid(h)

        yield 0
        yield from merge_tagged(lengths())

    if K.size_hint == 0:
        return fin_order(1)

    def point_stream():
        # both directions ride K-cofinal points: comparison happens at the
        # largest support point, so large values there dominate either way
        if K.max_code is not None:
            return itertools.repeat(K.max_code)
        return K.cofinal()

    def cof():
        for i, q in enumerate(point_stream()):
            yield pair(seq_encode((q,)), seq_encode((zz_encode(i + 1),)))

    def coi():
        for i, q in enumerate(point_stream()):
            yield pair(seq_encode((q,)), seq_encode((zz_encode(-(i + 1)),)))

    single = K.size_hint == 1

    def zeta_int_code(z: int) -> int:
        if z == 0:
            return 0
        p0 = K.first(1)[0]
        return pair(seq_encode((p0,)), seq_encode((zz_encode(z),)))

    def zeta_int_value(c: int) -> int:
        supp, vals = _zeta_decode(c)
        return zz_decode(vals[0]) if vals else 0

    def interval(lo, hi, cap):
        if not single:
            return UNKNOWN, None
        a, b = zeta_int_value(lo), zeta_int_value(hi)
        if b - a + 1 > cap:
            return OVERFLOW, None
        return OK, [zeta_int_code(z) for z in range(a, b + 1)]

    def succ(c):
        # adding one at the K-minimum is an immediate successor
        if K.min_code is None:
            return None
        p0 = K.min_code
        supp, vals = _zeta_decode(c)
        supp, vals = list(supp), [zz_decode(v) for v in vals]
        if supp and supp[-1] == p0:
            vals[-1] += 1
            if vals[-1] == 0:
                supp.pop()
                vals.pop()
        else:
            supp.append(p0)
            vals.append(1)
        return pair(seq_encode(tuple(supp)),
                    seq_encode(tuple(zz_encode(v) for v in vals)))

    return CodedOrder(
        name or f"zeta^({K.name})",
        contains, leq, enum,
        fin_int=single,
        cofinal_factory=cof, coinitial_factory=coi,
        interval_fn=interval,
        succ_fn=succ)


# ---------------------------------------------------------------------------
# realize

def realize(t: OrderTerm) -> CodedOrder:
    if isinstance(t, Fin):
        o = fin_order(t.n)
    elif isinstance(t, Omega):
        o = omega_order()
    elif isinstance(t, Eta):
        o = eta_order()
    elif isinstance(t, Rev):
        o = rev_order(realize(t.inner))
    elif isinstance(t, Sum):
        o = sum_orders([realize(p) for p in t.parts])
    elif isinstance(t, Prod):
        o = prod_orders(realize(t.left), realize(t.right))
    elif isinstance(t, ZetaPow):
        o = zeta_pow(realize(t.exp))
    else:
        raise TypeError(f"not an order term: {t!r}")
    o.term = t
    return o


def streams(t: OrderTerm):
    """Cofinal/coinitial code streams of realize(t); None beside an extremum."""
    o = realize(t)
    cof = o.cofinal()
    coi = o.coinitial()
    return (CodeStream("increasing", lambda: o.cofinal()) if cof is not None else None,
            CodeStream("decreasing", lambda: o.coinitial()) if coi is not None else None)


# ---------------------------------------------------------------------------
# canonical realization of ordinals (for the zeta machinery)

def _pow_order(e: CNF) -> CodedOrder:
    if e.is_zero():
        return fin_order(1)
    if e == CNF_ONE:
        return omega_order()
    if e.is_successor():
        return prod_orders(_pow_order(e.pred()), omega_order(),
                           name=f"w^({e!r})")
    return nat_sum(lambda n: _pow_order(fund_seq(e, n + 1)), name=f"w^({e!r})")


def _units(c: CNF) -> List[CNF]:
    out = []
    for expo, coeff in c.terms:
        out.extend([expo] * coeff)
    return out


def realize_cnf(c: CNF) -> CodedOrder:
    """The ordinal c as a coded order (codes are specific to this coding)."""
    if c.is_zero():
        return empty_order()
    if c.is_finite():
        return fin_order(c.finite_value())
    units = _units(c)
    if len(units) == 1:
        return _pow_order(units[0])
    return sum_orders([_pow_order(e) for e in units], name=f"ord({c!r})")


def ordinal_position(c: CNF, code: int) -> CNF:
    """Position of a member of realize_cnf(c), as an ordinal below c."""
    if c.is_zero():
        raise ValueError("empty order")
    if c.is_finite():
        return from_nat(code)
    units = _units(c)
    if len(units) == 1:
        return _pow_position(units[0], code)
    i, x = unpair(code)
    prefix = CNF_ZERO
    for e in units[:i]:
        prefix = cnf_add(prefix, omega_power(e))
    return cnf_add(prefix, _pow_position(units[i], x))


def _pow_position(e: CNF, code: int) -> CNF:
    if e.is_zero():
        return CNF_ZERO
    if e == CNF_ONE:
        return from_nat(code)
    if e.is_successor():
        k, x = unpair(code)
        head = CNF(((e.pred(), k),)) if k else CNF_ZERO
        return cnf_add(head, _pow_position(e.pred(), x))
    n, x = unpair(code)
    prefix = omega_power(fund_seq(e, n)) if n >= 1 else CNF_ZERO
    return cnf_add(prefix, _pow_position(fund_seq(e, n + 1), x))


def code_at_position(c: CNF, pos: CNF) -> int:
    """Inverse of ordinal_position."""
    if cnf_cmp(pos, c) >= 0:
        raise ValueError("position out of range")
    if c.is_finite():
        return pos.finite_value()
    units = _units(c)
    if len(units) == 1:
        return _pow_code(units[0], pos)
    prefix = CNF_ZERO
    for i, e in enumerate(units):
        nxt = cnf_add(prefix, omega_power(e))
        if cnf_cmp(pos, nxt) < 0:
            return pair(i, _pow_code(e, cnf_sub_left(prefix, pos)))
        prefix = nxt
    raise AssertionError("unreachable")


def _pow_code(e: CNF, pos: CNF) -> int:
    if e.is_zero():
        return 0
    if e == CNF_ONE:
        return pos.finite_value()
    if e.is_successor():
        k, rem = _split_power(pos, e.pred())
        return pair(k, _pow_code(e.pred(), rem))
    for n in itertools.count(0):
        hi = omega_power(fund_seq(e, n + 1))
        if cnf_cmp(pos, hi) < 0:
            lo = omega_power(fund_seq(e, n)) if n >= 1 else CNF_ZERO
            rem = cnf_sub_left(lo, pos) if n >= 1 else pos
            return pair(n, _pow_code(fund_seq(e, n + 1), rem))
    raise AssertionError("unreachable")


def _split_power(pos: CNF, e: CNF) -> Tuple[int, CNF]:
    """pos = w^e * k + rem with rem < w^e, assuming pos < w^(e+1)."""
    k = 0
    rest = []
    for expo, coeff in pos.terms:
        cc = cnf_cmp(expo, e)
        if cc > 0:
            raise ValueError("position too large")
        if cc == 0:
            k = coeff
        else:
            rest.append((expo, coeff))
    return k, CNF(tuple(rest))


# ---------------------------------------------------------------------------
# truncation and density witnesses

def truncate(t: OrderTerm, n: int):
    """Finite induced suborder on the first n enumerated codes."""
    from .oracle import FinOrder
    if n < 1:
        raise ValueError("need at least one element")
    o = realize(t)
    labels = o.first(n)
    return FinOrder(tuple(o.sort(labels)))


def _all_strings(depth: int) -> List[str]:
    out = []
    for k in range(depth):
        for i in range(2 ** k):
            out.append(format(i, "b").zfill(k) if k else "")
    return out


def _dyadic_key(s: str):
    # map to the rational midpoint of the dyadic interval
    lo, hi = 0.0, 1.0
    for ch in s:
        mid = (lo + hi) / 2
        if ch == "0":
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def dense_witness(t: OrderTerm, depth: int) -> Optional[List[int]]:
    """Codes embedding the depth-d dyadic tree order, or None if scattered.

    The returned list is sorted by the dyadic order, so it is strictly
    increasing in realize(t).
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    if classify(t).scattered:
        return None
    table = _dense_table(t, depth)
    return [table[s] for s in sorted(_all_strings(depth), key=_dyadic_key)]


def _dense_table(t: OrderTerm, depth: int) -> dict:
    strings = _all_strings(depth)
    if isinstance(t, Eta):
        return {s: int("1" + s, 2) - 1 for s in strings}
    if isinstance(t, Rev):
        inner = _dense_table(t.inner, depth)
        flip = str.maketrans("01", "10")
        return {s: inner[s.translate(flip)] for s in strings}
    if isinstance(t, Sum):
        for i, p in enumerate(t.parts):
            if not classify(p).scattered:
                inner = _dense_table(p, depth)
                return {s: pair(i, inner[s]) for s in strings}
    if isinstance(t, Prod):
        if not classify(t.left).scattered:
            k0 = realize(t.right).first(1)[0]
            inner = _dense_table(t.left, depth)
            return {s: pair(k0, inner[s]) for s in strings}
        inner = _dense_table(t.right, depth)
        l0 = realize(t.left).first(1)[0]
        return {s: pair(inner[s], l0) for s in strings}
    if isinstance(t, ZetaPow):
        pts = descending_chain(t.exp, depth)
        out = {}
        for s in strings:
            supp = tuple(pts[: len(s)])
            vals = tuple(zz_encode(1 if ch == "1" else -1) for ch in s)
            out[s] = pair(seq_encode(supp), seq_encode(vals))
        return out
    raise AssertionError(f"no dense region found in {t!r}")


def descending_chain(t: OrderTerm, n: int) -> List[int]:
    """n codes strictly decreasing in realize(t); needs t not well-ordered."""
    if isinstance(t, Eta):
        return [2 ** (k + 1) - 1 for k in range(n)]  # "0", "00", "000", ...
    if isinstance(t, Rev):
        return ascending_chain(t.inner, n)
    if isinstance(t, Sum):
        for i, p in enumerate(t.parts):
            if not classify(p).well_order:
                return [pair(i, x) for x in descending_chain(p, n)]
    if isinstance(t, Prod):
        if not classify(t.right).well_order:
            l0 = realize(t.left).first(1)[0]
            return [pair(k, l0) for k in descending_chain(t.right, n)]
        k0 = realize(t.right).first(1)[0]
        return [pair(k0, x) for x in descending_chain(t.left, n)]
    if isinstance(t, ZetaPow):
        p0 = realize(t.exp).first(1)[0]
        return [0] + [pair(seq_encode((p0,)), seq_encode((zz_encode(-i),)))
                      for i in range(1, n)]
    raise ValueError(f"{t!r} is well-ordered")


def ascending_chain(t: OrderTerm, n: int) -> List[int]:
    """n codes strictly increasing in realize(t); needs t not reverse-well-ordered."""
    if isinstance(t, (Omega, Eta)):
        o = realize(t)
        out = list(itertools.islice(o.cofinal(), n))
        return out
    if isinstance(t, Rev):
        return descending_chain(t.inner, n)
    if isinstance(t, Sum):
        for i, p in reversed(list(enumerate(t.parts))):
            if not classify(p).rev_well_order:
                return [pair(i, x) for x in ascending_chain(p, n)]
    if isinstance(t, Prod):
        if not classify(t.right).rev_well_order:
            l0 = realize(t.left).first(1)[0]
            return [pair(k, l0) for k in ascending_chain(t.right, n)]
        k0 = realize(t.right).first(1)[0]
        return [pair(k0, x) for x in ascending_chain(t.left, n)]
    if isinstance(t, ZetaPow):
        p0 = realize(t.exp).first(1)[0]
        return [0] + [pair(seq_encode((p0,)), seq_encode((zz_encode(i),)))
                      for i in range(1, n)]
    raise ValueError(f"{t!r} is reverse-well-ordered")
