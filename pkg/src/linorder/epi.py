"""Order epimorphisms between coded orders, built and checked piecewise.

A witness packages a total map on source codes together with enough
structure to spot-check it: monotone on enumerated prefixes and onto
enumerated target prefixes.  Construction failures that are provable from
the piece layout (a gap with no landing point on either side) come back as
None rather than an exception; callers treat None as a refusal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

from .coded import (OK, CodedOrder, omega_order, pair, prod_orders, realize,
                    unpair)


# ---------------------------------------------------------------------------
# witnesses

class EpiWitness:
    def __init__(self, source: CodedOrder, target: CodedOrder,
                 map_fn: Callable[[int], int], provenance: str,
                 fiber_fn: Optional[Callable[[int], Iterator[int]]] = None):
        self.source = source
        self.target = target
        self.map_fn = map_fn
        self.provenance = provenance
        self.fiber_fn = fiber_fn

    def __call__(self, x: int) -> int:
        return self.map_fn(x)

    def fiber_sample(self, l: int, budget: int) -> List[int]:
        """Some preimages of l, scanning at most budget source codes."""
        if self.fiber_fn is not None:
            return list(itertools.islice(self.fiber_fn(l), budget))
        out = []
        for x in itertools.islice(self.source.stream(), budget):
            if self.map_fn(x) == l:
                out.append(x)
        return out

    def __repr__(self):
        return f"EpiWitness({self.provenance})"


def compose_witness(outer: EpiWitness, inner: EpiWitness) -> EpiWitness:
    """outer after inner; inner's target must be outer's source."""
    return EpiWitness(
        inner.source, outer.target,
        lambda x: outer.map_fn(inner.map_fn(x)),
        f"{outer.provenance} . {inner.provenance}")


def iso_witness(a: CodedOrder, b: CodedOrder, fwd: Callable[[int], int],
                inv: Callable[[int], int], provenance: str) -> EpiWitness:
    return EpiWitness(a, b, fwd, provenance, fiber_fn=lambda l: iter([inv(l)]))


def identity_witness(o: CodedOrder) -> EpiWitness:
    return iso_witness(o, o, lambda x: x, lambda x: x, "id")


def staircase_witness(src_codes: List[int], tgt_codes: List[int],
                      source: CodedOrder, target: CodedOrder) -> EpiWitness:
    """Finite chain onto finite chain: blocks in order, tail absorbed."""
    if len(tgt_codes) > len(src_codes):
        raise ValueError("target longer than source")
    idx = {x: j for j, x in enumerate(src_codes)}
    m = len(tgt_codes)

    def f(x):
        return tgt_codes[min(idx[x], m - 1)]

    return EpiWitness(source, target, f, "staircase")


# ---------------------------------------------------------------------------
# suborders

def sub_order(parent: CodedOrder, test: Callable[[int], bool], name: str,
              *, min_code=None, max_code=None,
              cofinal_factory=None, coinitial_factory=None,
              size_hint=None) -> CodedOrder:
    """Induced suborder; enumeration filters the parent lazily."""
    def enum():
        members = (c for c in parent.stream() if test(c))
        # a known size lets the filter stop instead of scanning an
        # infinite parent for members that are not there
        if size_hint is not None:
            members = itertools.islice(members, size_hint)
        return members

    return CodedOrder(
        name,
        lambda c: parent.contains(c) and test(c),
        parent.leq,
        enum,
        size_hint=size_hint,
        min_code=min_code, max_code=max_code,
        isf=parent.isf, fsf=parent.fsf, fin_int=parent.fin_int,
        cofinal_factory=cofinal_factory,
        coinitial_factory=coinitial_factory)


def sub_final(parent: CodedOrder, lo: int) -> CodedOrder:
    def cof():
        return (c for c in parent.cofinal() if parent.leq(lo, c))
    return sub_order(
        parent, lambda c: parent.leq(lo, c), f"{parent.name}[{lo},->)",
        min_code=lo, max_code=parent.max_code,
        cofinal_factory=cof if parent.max_code is None else None)


def sub_initial(parent: CodedOrder, hi: int) -> CodedOrder:
    def coi():
        return (c for c in parent.coinitial() if parent.leq(c, hi))
    return sub_order(
        parent, lambda c: parent.leq(c, hi), f"{parent.name}(<-,{hi}]",
        min_code=parent.min_code, max_code=hi,
        coinitial_factory=coi if parent.min_code is None else None)


def sub_interval(parent: CodedOrder, lo: int, hi: int) -> CodedOrder:
    return sub_order(
        parent, lambda c: parent.leq(lo, c) and parent.leq(c, hi),
        f"{parent.name}[{lo},{hi}]", min_code=lo, max_code=hi)


def chain_order(codes: List[int], name: str = "chain") -> CodedOrder:
    """Explicit finite chain; the list gives the order."""
    pos = {c: i for i, c in enumerate(codes)}
    return CodedOrder(
        name,
        lambda c: c in pos,
        lambda a, b: pos[a] <= pos[b],
        lambda: iter(sorted(pos)),
        size_hint=len(codes),
        min_code=codes[0], max_code=codes[-1],
        isf=True, fsf=True, fin_int=True)


def clamp_val(L: CodedOrder, y: int, lo: Optional[int], hi: Optional[int]) -> int:
    if lo is not None and L.lt(y, lo):
        return lo
    if hi is not None and L.lt(hi, y):
        return hi
    return y


def _window_order(L: CodedOrder, lo: Optional[int], hi: Optional[int],
                  cap: int) -> CodedOrder:
    # finite windows become explicit chains so enumeration terminates
    if lo is not None and hi is not None:
        status, got = L.try_interval(lo, hi, cap)
        if status == OK:
            return chain_order(got, f"{L.name}[{lo},{hi}]")
        return sub_interval(L, lo, hi)
    if lo is not None:
        status, got = L.try_final(lo, cap)
        if status == OK:
            return chain_order(got, f"{L.name}[{lo},->)")
        return sub_final(L, lo)
    status, got = L.try_initial(hi, cap)
    if status == OK:
        return chain_order(got, f"{L.name}(<-,{hi}]")
    return sub_initial(L, hi)


def clamp_ops(w: EpiWitness, lo: Optional[int] = None,
              hi: Optional[int] = None, cap: int = 4096) -> EpiWitness:
    """Truncate a witness below at lo, above at hi, or both.

    The result maps onto the corresponding window of the original target.
    Clamping at an extremum leaves the map pointwise unchanged, so the
    one-sided forms cover truncation from either end.
    """
    L = w.target
    if lo is None and hi is None:
        raise ValueError("no clamp bound given")
    for b in (lo, hi):
        if b is not None and not L.contains(b):
            raise ValueError(f"clamp bound {b} is not a target member")
    if lo is not None and hi is not None and L.lt(hi, lo):
        raise ValueError("clamp bounds out of order")
    tgt = _window_order(L, lo, hi, cap)

    def f(x):
        return clamp_val(L, w.map_fn(x), lo, hi)

    return EpiWitness(w.source, tgt, f, f"clamp[{lo},{hi}]({w.provenance})")


# ---------------------------------------------------------------------------
# definition by pieces (finite explicit form)

@dataclass(frozen=True)
class ConvexPart:
    """A convex region given by inclusive bounds, either side open-ended."""
    lo: Optional[int] = None
    hi: Optional[int] = None

    def holds(self, o: CodedOrder, c: int) -> bool:
        if self.lo is not None and not o.leq(self.lo, c):
            return False
        if self.hi is not None and not o.leq(c, self.hi):
            return False
        return True


@dataclass(frozen=True)
class Piece:
    src: ConvexPart
    tgt: ConvexPart
    sigma: Callable[[int], int]


def def_pieces(K: CodedOrder, L: CodedOrder, pieces: List[Piece],
               name: str = "pieces") -> Optional[EpiWitness]:
    """Glue piece maps over an ascending covering of the source.

    Elements falling strictly between two pieces go to the top of the lower
    target if it is bounded, else to the bottom of the upper one; if both
    sides are open the definition is impossible and None is returned.
    Where consecutive pieces share their boundary element the two maps must
    agree on it and send it to the shared target bound.
    """
    fillers: List[int] = []
    for a, b in zip(pieces, pieces[1:]):
        connected = (a.src.hi is not None and b.src.lo is not None
                     and a.src.hi == b.src.lo)
        if connected:
            shared = a.src.hi
            va, vb = a.sigma(shared), b.sigma(shared)
            if va != vb or a.tgt.hi is None or b.tgt.lo is None \
                    or a.tgt.hi != b.tgt.lo or va != a.tgt.hi:
                return None
            fillers.append(va)
            continue
        if a.tgt.hi is not None:
            fillers.append(a.tgt.hi)
        elif b.tgt.lo is not None:
            fillers.append(b.tgt.lo)
        else:
            return None

    def f(x):
        for i, p in enumerate(pieces):
            if p.src.holds(K, x):
                return p.sigma(x)
            if p.src.hi is not None and K.lt(p.src.hi, x) \
                    and i + 1 < len(pieces):
                nxt = pieces[i + 1]
                if nxt.src.lo is not None and K.lt(x, nxt.src.lo):
                    return fillers[i]
        raise ValueError(f"code {x} not covered by the pieces")

    return EpiWitness(K, L, f, name)


def family_mash(K: CodedOrder, family, L: CodedOrder, sigmas=None,
                name: str = "family_mash") -> Optional[EpiWitness]:
    """Glue a family of maps onto L into one epi from K.

    Two call shapes.  With `family` a list of inclusive (lo, hi) member
    pairs naming disjoint ascending convex parts of K and `sigmas` the
    matching maps onto L, the finite two-end covering applies: the lowest
    part is truncated above a base point of L, the highest below it, parts
    in between are constant there, and def_pieces glues the result.  With
    `family` a CodedOrder, K is read as the product of L-copies indexed by
    it and the covering follows the index ladder instead (mash_copies).
    """
    if isinstance(family, CodedOrder):
        if sigmas is not None:
            raise ValueError("copy families take no explicit sigmas")
        return mash_copies(L, family, K, name=name)
    parts = list(family)
    if not parts:
        raise ValueError("empty index family")
    if sigmas is None or len(sigmas) != len(parts):
        raise ValueError("one sigma per family member required")
    if len(parts) == 1:
        lo, hi = parts[0]
        return def_pieces(
            K, L, [Piece(ConvexPart(lo, hi), ConvexPart(), sigmas[0])], name)

    l0 = L.first(1)[0]
    h = len(parts)
    pieces = []
    for i, (lo, hi) in enumerate(parts):
        sig = sigmas[i]
        if i == 0:
            pieces.append(Piece(
                ConvexPart(lo, hi), ConvexPart(None, l0),
                lambda x, s=sig: clamp_val(L, s(x), None, l0)))
        elif i == h - 1:
            pieces.append(Piece(
                ConvexPart(lo, hi), ConvexPart(l0, None),
                lambda x, s=sig: clamp_val(L, s(x), l0, None)))
        else:
            pieces.append(Piece(
                ConvexPart(lo, hi), ConvexPart(l0, l0), lambda x: l0))
    return def_pieces(K, L, pieces, name)


# ---------------------------------------------------------------------------
# lazily extended cut sequences and point ladders

class LazyCuts:
    """Lazily materialized prefix of a stream, with list indexing."""

    def __init__(self, stream: Iterator[int]):
        self._s = stream
        self._got: List[int] = []

    def __getitem__(self, i: int) -> int:
        while len(self._got) <= i:
            self._got.append(next(self._s))
        return self._got[i]


def _strict_up(o: CodedOrder, stream: Iterator[int]) -> Iterator[int]:
    last = None
    for c in stream:
        if last is None or o.lt(last, c):
            last = c
            yield c


def _strict_down(o: CodedOrder, stream: Iterator[int]) -> Iterator[int]:
    last = None
    for c in stream:
        if last is None or o.lt(c, last):
            last = c
            yield c


class PointLadder:
    """A strictly increasing two-way sequence of points of K.

    The index range depends on K's ends: starting at 0 on the minimum when
    there is one ("nat"), ending at 0 on the maximum ("int_top"), all of Z
    when neither end exists ("int"), and just the two endpoints when both
    exist ("bounded": every interior element is located between them).
    locate() brackets any member, extending the ladder as needed; the
    extension terminates because the defining streams are cofinal and
    coinitial in K.
    """

    def __init__(self, K: CodedOrder):
        self.K = K
        self.base = 0  # logical index of pts[0]
        self._up: Optional[Iterator[int]] = None
        self._down: Optional[Iterator[int]] = None
        if K.min_code is not None and K.max_code is not None:
            self.kind = "bounded"
            self.pts = [K.min_code] if K.min_code == K.max_code \
                else [K.min_code, K.max_code]
        elif K.min_code is not None:
            self.kind = "nat"
            self.pts = [K.min_code]
            self._up = _strict_up(K, K.cofinal())
        elif K.max_code is not None:
            self.kind = "int_top"
            self.pts = [K.max_code]
            self._down = _strict_down(K, K.coinitial())
        else:
            self.kind = "int"
            self._up = _strict_up(K, K.cofinal())
            self.pts = [next(self._up)]
            self._down = _strict_down(K, K.coinitial())

    def _extend_up(self):
        while True:
            c = next(self._up)
            if self.K.lt(self.pts[-1], c):
                self.pts.append(c)
                return

    def _extend_down(self):
        while True:
            c = next(self._down)
            if self.K.lt(c, self.pts[0]):
                self.pts.insert(0, c)
                self.base -= 1
                return

    def top_index(self) -> Optional[int]:
        """Index of the last ladder point when the ladder is bounded above."""
        if self.kind == "bounded":
            return self.base + len(self.pts) - 1
        if self.kind == "int_top":
            return 0
        return None

    def point(self, i: int) -> int:
        while i - self.base >= len(self.pts):
            self._extend_up()
        while i < self.base:
            self._extend_down()
        return self.pts[i - self.base]

    def locate(self, k: int) -> Tuple[str, int]:
        """("at", i) on a ladder point, ("between", i) inside (p_i, p_i+1)."""
        K = self.K
        if self._up is not None:
            while K.lt(self.pts[-1], k):
                self._extend_up()
        if self._down is not None:
            while K.lt(k, self.pts[0]):
                self._extend_down()
        lo, hi = 0, len(self.pts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if K.leq(self.pts[mid], k):
                lo = mid
            else:
                hi = mid - 1
        if self.pts[lo] == k:
            return "at", lo + self.base
        return "between", lo + self.base


# ---------------------------------------------------------------------------
# mashing product copies onto the copied order

def mash_copies(L: CodedOrder, K: CodedOrder, source: CodedOrder,
                name: str = "mash") -> EpiWitness:
    """Collapse a product of L-copies along K onto L itself.

    A ladder on K picks out the working copies; they are clamped between
    consecutive cut points of L, and everything between two ladder points
    is sent to the shared cut.  The cuts ride L's cofinal or coinitial
    streams on whichever side L is unbounded; a bounded side is absorbed
    by the matching end copy.
    """
    ladder = PointLadder(K)
    kind = ladder.kind
    l0 = L.first(1)[0]

    def part(x: int) -> Tuple[str, int, int]:
        k, lo = unpair(x)
        where, i = ladder.locate(k)
        return where, i, lo

    # every branch gets a fiber enumerator: the ladder copy whose clamp
    # window holds the target passes it through unchanged, so one
    # representative preimage is always constructible without scanning

    if kind == "bounded":
        last = ladder.top_index()

        def f_b(x):
            where, i, lo = part(x)
            if last == 0:
                return lo
            if where == "at" and i == 0:
                return clamp_val(L, lo, None, l0)
            if where == "at" and i == last:
                return clamp_val(L, lo, l0, None)
            return l0

        def fib_b(l):
            if last == 0 or L.leq(l, l0):
                return iter([pair(ladder.point(0), l)])
            return iter([pair(ladder.point(last), l)])

        return EpiWitness(source, L, f_b, f"{name}:bounded", fiber_fn=fib_b)

    def fib_base(l):
        return iter([pair(ladder.point(0), l)])

    if kind == "nat":
        if L.max_code is not None:
            def f_nat_abs(x):
                where, i, lo = part(x)
                if where == "at" and i == 0:
                    return lo
                return L.max_code
            return EpiWitness(source, L, f_nat_abs, f"{name}:absorb_top",
                              fiber_fn=fib_base)

        ups = LazyCuts(_strict_up(L, L.cofinal()))

        def f_nat(x):
            where, i, lo = part(x)
            if where == "between":
                return ups[i]
            if i == 0:
                return clamp_val(L, lo, None, ups[0])
            return clamp_val(L, lo, ups[i - 1], ups[i])

        def fib_nat(l):
            i = 0
            while not L.leq(l, ups[i]):
                i += 1
            return iter([pair(ladder.point(i), l)])

        return EpiWitness(source, L, f_nat, f"{name}:nat", fiber_fn=fib_nat)

    if kind == "int_top":
        if L.min_code is not None:
            def f_top_abs(x):
                where, i, lo = part(x)
                if where == "at" and i == 0:
                    return lo
                return L.min_code
            return EpiWitness(source, L, f_top_abs, f"{name}:absorb_bot",
                              fiber_fn=fib_base)

        downs = LazyCuts(_strict_down(L, L.coinitial()))

        def f_top(x):
            where, i, lo = part(x)
            if where == "between":
                return downs[-i - 1]
            if i == 0:
                return clamp_val(L, lo, downs[0], None)
            return clamp_val(L, lo, downs[-i], downs[-i - 1])

        def fib_top(l):
            if L.leq(downs[0], l):
                return iter([pair(ladder.point(0), l)])
            j = 1
            while not L.leq(downs[j], l):
                j += 1
            return iter([pair(ladder.point(-j), l)])

        return EpiWitness(source, L, f_top, f"{name}:int_top",
                          fiber_fn=fib_top)

    # two-way ladder over K
    if L.min_code is not None and L.max_code is not None:
        def f_int_b(x):
            where, i, lo = part(x)
            if where == "at" and i == 0:
                return lo
            return L.min_code if i < 0 else L.max_code
        return EpiWitness(source, L, f_int_b, f"{name}:int_bounded",
                          fiber_fn=fib_base)

    if L.min_code is not None:
        ups = LazyCuts(_strict_up(L, L.cofinal()))

        def f_int_min(x):
            where, i, lo = part(x)
            if i < 0:
                return L.min_code
            if where == "between":
                return ups[i]
            if i == 0:
                return clamp_val(L, lo, None, ups[0])
            return clamp_val(L, lo, ups[i - 1], ups[i])

        def fib_int_min(l):
            i = 0
            while not L.leq(l, ups[i]):
                i += 1
            return iter([pair(ladder.point(i), l)])

        return EpiWitness(source, L, f_int_min, f"{name}:int_min",
                          fiber_fn=fib_int_min)

    if L.max_code is not None:
        downs = LazyCuts(_strict_down(L, L.coinitial()))

        def f_int_max(x):
            where, i, lo = part(x)
            if i > 0:
                return L.max_code
            if where == "between":
                return L.max_code if i == 0 else downs[-i - 1]
            if i == 0:
                return clamp_val(L, lo, downs[0], None)
            return clamp_val(L, lo, downs[-i], downs[-i - 1])

        def fib_int_max(l):
            if L.leq(downs[0], l):
                return iter([pair(ladder.point(0), l)])
            j = 1
            while not L.leq(downs[j], l):
                j += 1
            return iter([pair(ladder.point(-j), l)])

        return EpiWitness(source, L, f_int_max, f"{name}:int_max",
                          fiber_fn=fib_int_max)

    # L open on both sides: seam a descending run strictly below the
    # ascending one so the cut sequence is increasing across all of Z
    ups = LazyCuts(_strict_up(L, L.cofinal()))
    u0 = ups[0]
    downs = LazyCuts(c for c in _strict_down(L, L.coinitial()) if L.lt(c, u0))

    def cut(j: int) -> int:
        return ups[j] if j >= 0 else downs[-j - 1]

    def f_int(x):
        where, i, lo = part(x)
        if where == "between":
            return cut(i)
        return clamp_val(L, lo, cut(i - 1), cut(i))

    def fib_int(l):
        i = 0
        if L.leq(l, cut(0)):
            while L.leq(l, cut(i - 1)):
                i -= 1
        else:
            while not L.leq(l, cut(i)):
                i += 1
        return iter([pair(ladder.point(i), l)])

    return EpiWitness(source, L, f_int, f"{name}:int_open", fiber_fn=fib_int)


def lk_onto_l(L, K, source: Optional[CodedOrder] = None) -> EpiWitness:
    """The product of L-copies along K onto L.

    Arguments may be terms or already realized orders.
    """
    if not isinstance(L, CodedOrder):
        L = realize(L)
    if not isinstance(K, CodedOrder):
        K = realize(K)
    src = source if source is not None else prod_orders(L, K)
    return mash_copies(L, K, src, name=f"mash({L.name};{K.name})")


def prod_epi(L, phi: EpiWitness, fiber_budget: int = 4000) -> EpiWitness:
    """L x M onto L x K along an epi phi : M onto K with small fibers.

    Each phi-fiber indexes a block of L-copies; the block lands on its
    single target copy by the two-end covering, so the glued map is an epi
    exactly because phi is.  Fiber ends come from a bounded sample of
    phi's fiber enumerators; a fiber the sample does not exhaust can leave
    monotonicity violations for the prefix check to find.
    """
    if not isinstance(L, CodedOrder):
        L = realize(L)
    M, K = phi.source, phi.target
    src = prod_orders(L, M)
    tgt = prod_orders(L, K)
    l0 = L.first(1)[0]
    ends: dict = {}

    def fiber_ends(k: int) -> Tuple[int, int]:
        if k not in ends:
            got = phi.fiber_sample(k, fiber_budget)
            if not got:
                raise ValueError(f"no fiber members found over {k}")
            s = M.sort(got)
            ends[k] = (s[0], s[-1])
        return ends[k]

    def f(x):
        m, l = unpair(x)
        k = phi.map_fn(m)
        lo, hi = fiber_ends(k)
        if lo == hi:
            return pair(k, l)
        if m == lo:
            return pair(k, clamp_val(L, l, None, l0))
        if m == hi:
            return pair(k, clamp_val(L, l, l0, None))
        return pair(k, l0)

    def fib(t):
        # the fiber end whose clamp window holds l passes it through
        k, l = unpair(t)
        lo, hi = fiber_ends(k)
        m = lo if lo == hi or L.leq(l, l0) else hi
        return iter([pair(m, l)])

    return EpiWitness(src, tgt, f, f"prod_epi({L.name};{phi.provenance})",
                      fiber_fn=fib)


# ---------------------------------------------------------------------------
# collapses onto omega and product quotients

def cof_collapse(K: CodedOrder) -> EpiWitness:
    """K onto omega along a strictly increasing cofinal ladder."""
    if K.max_code is not None:
        raise ValueError("the order has a maximum")
    cuts = LazyCuts(_strict_up(K, K.cofinal()))

    def f(y):
        n = 0
        while not K.leq(y, cuts[n]):
            n += 1
        return n

    def fib(n):
        # the n-th cut is a known member of its own fiber, so the first
        # pull never scans
        def gen():
            yield cuts[n]
            for y in K.stream():
                if y != cuts[n] and f(y) == n:
                    yield y
        return gen()

    return EpiWitness(K, omega_order(), f, "cof_collapse", fiber_fn=fib)


def prod_quotient(L: CodedOrder, M: CodedOrder,
                  source: Optional[CodedOrder] = None) -> EpiWitness:
    """L x M onto L x omega, collapsing M along a cofinal ladder.

    Fiber n >= 1 of the ladder runs from the successor of one ladder point
    up to the next: the bottom copy is clamped down, the top copy clamped
    up, middle copies land on a fixed cut of L, so every fiber covers its
    whole target copy.  Fiber 0 is handled by its own bottom when M has
    one, otherwise by descending copies against L's coinitial cuts.
    """
    if M.max_code is not None:
        raise ValueError("the index order has a maximum")
    src = source if source is not None else prod_orders(L, M)
    tgt = prod_orders(L, omega_order())
    cuts = LazyCuts(_strict_up(M, M.cofinal()))
    l0 = L.first(1)[0]

    def fiber_of(m):
        n = 0
        while not M.leq(m, cuts[n]):
            n += 1
        return n

    def upper_fiber(m, lo, n):
        if M.succ_fn is None:
            raise ValueError("the index order needs successors")
        prev = cuts[n - 1]
        top = cuts[n]
        bot = M.succ_fn(prev)
        if bot == top:
            return lo
        if m == top:
            return clamp_val(L, lo, l0, None)
        if m == bot:
            return clamp_val(L, lo, None, l0)
        return l0

    if M.min_code is not None:
        def fiber0(m, lo):
            top = cuts[0]
            if top == M.min_code:
                return lo
            if m == top:
                return clamp_val(L, lo, l0, None)
            if m == M.min_code:
                return clamp_val(L, lo, None, l0)
            return l0

        def m0(tau):
            top = cuts[0]
            if top == M.min_code:
                return top
            return M.min_code if L.leq(tau, l0) else top
    elif L.min_code is not None:
        downs_m = LazyCuts(
            c for c in _strict_down(M, M.coinitial()) if M.lt(c, cuts[0]))

        def fiber0(m, lo):
            if m == cuts[0]:
                return clamp_val(L, lo, l0, None)
            if m == downs_m[0]:
                return clamp_val(L, lo, None, l0)
            if M.lt(downs_m[0], m):
                return l0
            return L.min_code

        def m0(tau):
            return downs_m[0] if L.leq(tau, l0) else cuts[0]
    else:
        downs_m = LazyCuts(
            c for c in _strict_down(M, M.coinitial()) if M.lt(c, cuts[0]))
        downs_l = LazyCuts(_strict_down(L, L.coinitial()))

        def fiber0(m, lo):
            if m == cuts[0]:
                return clamp_val(L, lo, downs_l[0], None)
            j = 0
            while not M.leq(downs_m[j], m):
                j += 1
            if m == downs_m[j]:
                return clamp_val(L, lo, downs_l[j + 1], downs_l[j])
            return downs_l[j]

        def m0(tau):
            if L.leq(downs_l[0], tau):
                return cuts[0]
            j = 0
            while not L.leq(downs_l[j + 1], tau):
                j += 1
            return downs_m[j]

    def f(x):
        m, lo = unpair(x)
        n = fiber_of(m)
        tau = fiber0(m, lo) if n == 0 else upper_fiber(m, lo, n)
        return pair(n, tau)

    def fib(t):
        # the copy whose clamp window holds tau passes it through
        n, tau = unpair(t)
        if n == 0:
            return iter([pair(m0(tau), tau)])
        if M.succ_fn is None:
            return iter(())
        bot, top = M.succ_fn(cuts[n - 1]), cuts[n]
        m = bot if bot == top or L.leq(tau, l0) else top
        return iter([pair(m, tau)])

    return EpiWitness(src, tgt, f, f"prod_quotient({L.name};{M.name})",
                      fiber_fn=fib)


# ---------------------------------------------------------------------------
# two-part sums with an absorbed end

def onesided_sum_epi(source: CodedOrder, target: CodedOrder,
                     keep: int) -> EpiWitness:
    """A two-part sum onto the kept part, the other part absorbed.

    Source codes are pair(part, x) with part 0 below part 1.  Keeping
    part 0 needs it to own a maximum, keeping part 1 a minimum, so the
    absorbed side has somewhere to land.
    """
    if keep == 0:
        if target.max_code is None:
            raise ValueError("kept lower part has no maximum")
        sink = target.max_code
    else:
        if target.min_code is None:
            raise ValueError("kept upper part has no minimum")
        sink = target.min_code

    def f(x):
        p, v = unpair(x)
        return v if p == keep else sink

    def fib(l):
        def gen():
            yield pair(keep, l)
            if l == sink:
                for x in source.stream():
                    if unpair(x)[0] != keep:
                        yield x
        return gen()

    return EpiWitness(source, target, f, f"keep_part({keep})", fiber_fn=fib)


# ---------------------------------------------------------------------------
# prefix checking

@dataclass
class CheckReport:
    pairs_checked: int
    monotone_violations: List[Tuple[int, int]]
    targets_covered: int
    targets_missed: List[int]
    verdict: str  # "pass" | "fail" | "inconclusive"


def check_epi_on_prefix(w: EpiWitness, n_source: int = 100,
                        n_target: int = 50,
                        eval_budget: int = 5000) -> CheckReport:
    """Test monotonicity and coverage of a witness on enumerated prefixes.

    Failing to cover a target code is only conclusive when the source scan
    ran out of codes; hitting the evaluation budget first downgrades the
    verdict to inconclusive.
    """
    xs = w.source.sort(w.source.first(n_source))
    vals = [w(x) for x in xs]
    violations = []
    for j in range(len(xs) - 1):
        if not w.target.leq(vals[j], vals[j + 1]):
            violations.append((xs[j], xs[j + 1]))
    pairs = max(len(xs) - 1, 0)

    wanted = w.target.first(n_target)
    unfound = set(wanted)
    scanned = 0
    exhausted = True
    if w.fiber_fn is not None:
        # a declared preimage counts for coverage once it checks out; one
        # probe per target, since later members of a lazy fiber can cost
        # an unbounded scan.  A fiber that breaks settles nothing.
        for t in list(unfound):
            if scanned >= eval_budget:
                break
            scanned += 1
            try:
                x = next(w.fiber_fn(t), None)
            except Exception:
                continue
            if x is not None and w.source.contains(x) and w(x) == t:
                unfound.discard(t)
    for x in w.source.stream():
        if not unfound:
            break
        if scanned >= eval_budget:
            exhausted = False
            break
        scanned += 1
        unfound.discard(w(x))

    missed = w.target.sort(list(unfound))
    covered = len(wanted) - len(missed)
    if violations:
        verdict = "fail"
    elif missed and exhausted:
        verdict = "fail"
    elif missed:
        verdict = "inconclusive"
    else:
        verdict = "pass"
    return CheckReport(pairs, violations, covered, missed, verdict)
