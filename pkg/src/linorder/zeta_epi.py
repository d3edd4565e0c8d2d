"""Epimorphisms between blocks of the integer-line power hierarchy.

A block at exponent gamma is the finite-support power of the integer
line over a realization of gamma, repeated omega times.  Blocks add up
into finite sums and into segments indexed by an ordinal interval, and
a segment maps onto any finite ascending block sum whose exponents do
not pass the segment's left end.  Everything here is concrete: maps act
on member codes and come packaged as witnesses.
"""

from typing import Dict, Iterable, List, Optional, Tuple

from .cnf import (CNF, CNF_ZERO, cnf_add, cnf_cmp, cnf_sub_left, format_cnf,
                  omega_power)
from .coded import (CodedOrder, code_at_position, omega_order,
                    ordinal_position, pair, prod_orders, realize_cnf,
                    rev_order, sum_orders, sum_over, unpair, zeta_code,
                    zeta_entries, zeta_pow)
from .epi import (EpiWitness, LazyCuts, PointLadder, _strict_up, clamp_val,
                  cof_collapse, onesided_sum_epi, prod_quotient)

_zp_cache: Dict[CNF, CodedOrder] = {}
_blk_cache: Dict[CNF, CodedOrder] = {}


def zpow(gamma: CNF) -> CodedOrder:
    """The integer-line power at exponent gamma, cached per exponent."""
    if gamma not in _zp_cache:
        _zp_cache[gamma] = zeta_pow(realize_cnf(gamma),
                                    name=f"z^({format_cnf(gamma)})")
    return _zp_cache[gamma]


def block_order(gamma: CNF) -> CodedOrder:
    """One block: the power at gamma repeated omega times.

    Exponent zero gives plain omega.  Its members are bare naturals
    rather than pairs, so the maps below special-case it.
    """
    if gamma not in _blk_cache:
        if cnf_cmp(gamma, CNF_ZERO) == 0:
            _blk_cache[gamma] = omega_order()
        else:
            _blk_cache[gamma] = prod_orders(
                zpow(gamma), omega_order(),
                name=f"z^({format_cnf(gamma)})*w")
    return _blk_cache[gamma]


def block_sum(gammas: Iterable[CNF]) -> CodedOrder:
    """Finite sum of blocks, one per exponent, in the order given."""
    parts = [block_order(g) for g in gammas]
    return sum_orders(parts, name="+".join(p.name for p in parts))


def segment_order(beta0: CNF, beta1: CNF) -> CodedOrder:
    """Sum of one block per exponent in [beta0, beta1)."""
    d = cnf_sub_left(beta0, beta1)
    if cnf_cmp(d, CNF_ZERO) == 0:
        raise ValueError("the segment is empty")

    def part(c):
        return block_order(cnf_add(beta0, ordinal_position(d, c)))

    return sum_over(realize_cnf(d), part,
                    name=f"seg[{format_cnf(beta0)},{format_cnf(beta1)})")


def zeta_split(glo: CNF, g: CNF, code: int) -> Tuple[int, int]:
    """Split a power member at glo into high and low parts.

    Support points at position glo and above land in the high part,
    re-coded in the power at g - glo; the rest land in the low part,
    coded in the power at glo.  Comparing high parts first and low parts
    second reproduces the original order, so the split presents the
    power at g as the power at glo repeated along the power at g - glo.
    """
    d = cnf_sub_left(glo, g)
    his: List[Tuple[int, int]] = []
    los: List[Tuple[int, int]] = []
    for p, v in zeta_entries(code):
        pos = ordinal_position(g, p)
        if cnf_cmp(pos, glo) >= 0:
            his.append((code_at_position(d, cnf_sub_left(glo, pos)), v))
        else:
            los.append((code_at_position(glo, pos), v))
    return zeta_code(his), zeta_code(los)


def zeta_join(glo: CNF, g: CNF, hi: int, lo: int) -> int:
    """Inverse of zeta_split."""
    d = cnf_sub_left(glo, g)
    entries = [(code_at_position(g, cnf_add(glo, ordinal_position(d, p))), v)
               for p, v in zeta_entries(hi)]
    entries += [(code_at_position(g, ordinal_position(glo, p)), v)
                for p, v in zeta_entries(lo)]
    return zeta_code(entries)


def copy_onto_block(gamma: CNF, tgt: CNF) -> EpiWitness:
    """One copy of the power at gamma onto the block at a smaller exponent.

    Splitting at tgt presents the source as the power at tgt repeated
    along the power at the difference; collapsing the repetition index
    cofinally yields the block.  Exponent zero collapses straight onto
    omega.
    """
    if cnf_cmp(tgt, gamma) >= 0:
        raise ValueError("the target exponent must be strictly smaller")
    src = zpow(gamma)
    if cnf_cmp(tgt, CNF_ZERO) == 0:
        return cof_collapse(src)
    d = cnf_sub_left(tgt, gamma)
    q = prod_quotient(zpow(tgt), zpow(d))

    def f(x):
        hi, lo = zeta_split(tgt, gamma, x)
        return q(pair(hi, lo))

    def fib(t):
        z = next(q.fiber_fn(t), None)
        if z is None:
            return iter(())
        hi, lo = unpair(z)
        return iter([zeta_join(tgt, gamma, hi, lo)])

    return EpiWitness(src, block_order(tgt), f,
                      f"copy[{format_cnf(gamma)}->{format_cnf(tgt)}]",
                      fiber_fn=fib)


def _check_exponents(gammas: Tuple[CNF, ...], top: CNF,
                     strict: bool = False) -> None:
    if not gammas:
        raise ValueError("need at least one block")
    for a, b in zip(gammas, gammas[1:]):
        if cnf_cmp(a, b) >= 0:
            raise ValueError("block exponents must be strictly ascending")
    c = cnf_cmp(gammas[-1], top)
    if c > 0 or (strict and c == 0):
        raise ValueError("block exponents must stay below the source")


def block_epi(gammas: Iterable[CNF], gamma: CNF,
              target: Optional[CodedOrder] = None) -> EpiWitness:
    """The block at gamma onto a finite ascending sum of blocks.

    The first copies of the source power each collapse onto one of the
    lower blocks; the remaining copies all feed the last block, whose
    exponent may equal the source's.
    """
    gs = tuple(gammas)
    _check_exponents(gs, gamma)
    src = block_order(gamma)
    T = target if target is not None else block_sum(gs)
    h = len(gs)
    names = ",".join(format_cnf(g) for g in gs)

    if cnf_cmp(gamma, CNF_ZERO) == 0:
        # plain omega source; validation forces a single omega block
        def fib0(t):
            j, y = unpair(t)
            return iter([y] if j == 0 else [])

        return EpiWitness(src, T, lambda n: pair(0, n),
                          f"block[{format_cnf(gamma)}->{names}]",
                          fiber_fn=fib0)

    copies = [copy_onto_block(gamma, gs[j]) for j in range(h - 1)]
    last = gs[-1]
    shift = h - 1
    if cnf_cmp(last, CNF_ZERO) == 0:
        # each leftover copy becomes one point of the omega block
        def tail(k, x):
            return k - shift

        x0 = zpow(gamma).first(1)[0]

        def tail_fib(y):
            return iter([pair(y + shift, x0)])
    else:
        dt = cnf_sub_left(last, gamma)
        if cnf_cmp(dt, CNF_ZERO) == 0:
            q = prod_quotient(zpow(last), omega_order())

            def tail(k, x):
                return q(pair(k - shift, x))

            def tail_fib(y):
                z = next(q.fiber_fn(y), None)
                if z is None:
                    return iter(())
                kk, x = unpair(z)
                return iter([pair(kk + shift, x)])
        else:
            q = prod_quotient(zpow(last), block_order(dt))

            def tail(k, x):
                hi, lo = zeta_split(last, gamma, x)
                return q(pair(pair(k - shift, hi), lo))

            def tail_fib(y):
                z = next(q.fiber_fn(y), None)
                if z is None:
                    return iter(())
                m, lo = unpair(z)
                kk, hi = unpair(m)
                return iter([pair(kk + shift,
                                  zeta_join(last, gamma, hi, lo))])

    def f(c):
        k, x = unpair(c)
        if k < h - 1:
            return pair(k, copies[k](x))
        return pair(h - 1, tail(k, x))

    def fib(t):
        j, y = unpair(t)
        if j >= h - 1:
            return tail_fib(y)
        v = next(copies[j].fiber_fn(y), None)
        return iter([pair(j, v)] if v is not None else [])

    return EpiWitness(src, T, f, f"block[{format_cnf(gamma)}->{names}]",
                      fiber_fn=fib)


def zeta_segment_epi(gammas: Iterable[CNF], beta0: CNF,
                     beta1: CNF) -> EpiWitness:
    """A whole segment of blocks onto a finite ascending sum of blocks.

    The segment covers exponents in [beta0, beta1); the sum's exponents
    must stay strictly below beta0.  Each block of the segment maps onto
    the sum through its own block map, windowed so the images tile the
    target: a successor-length segment uses a two-ended arrangement
    around a fixed pivot, a limit-length one walks a cofinal ladder of
    cuts.
    """
    gs = tuple(gammas)
    _check_exponents(gs, beta0, strict=True)
    d = cnf_sub_left(beta0, beta1)
    if cnf_cmp(d, CNF_ZERO) == 0:
        raise ValueError("the segment is empty")
    seg = segment_order(beta0, beta1)
    T = block_sum(gs)
    D = realize_cnf(d)
    at_cache: Dict[int, EpiWitness] = {}

    def at(c):
        if c not in at_cache:
            g = cnf_add(beta0, ordinal_position(d, c))
            at_cache[c] = block_epi(gs, g, target=T)
        return at_cache[c]

    def copy_fiber(c, t):
        v = next(at(c).fiber_fn(t), None)
        return iter([pair(c, v)] if v is not None else [])

    if D.max_code is not None:
        cmin, cmax = D.min_code, D.max_code
        l0 = T.first(1)[0]

        def f(xc):
            c, v = unpair(xc)
            if cmin == cmax:
                return at(c)(v)
            if c == cmin:
                return clamp_val(T, at(c)(v), None, l0)
            if c == cmax:
                return clamp_val(T, at(c)(v), l0, None)
            return l0

        def fib(t):
            if cmin == cmax or T.leq(t, l0):
                return copy_fiber(cmin, t)
            return copy_fiber(cmax, t)
    else:
        ladder = PointLadder(D)
        cuts = LazyCuts(_strict_up(T, T.cofinal()))

        def f(xc):
            c, v = unpair(xc)
            where, i = ladder.locate(c)
            if where == "between":
                return cuts[i]
            if i == 0:
                return clamp_val(T, at(c)(v), None, cuts[0])
            return clamp_val(T, at(c)(v), cuts[i - 1], cuts[i])

        def fib(t):
            i = 0
            while not T.leq(t, cuts[i]):
                i += 1
            return copy_fiber(ladder.point(i), t)

    names = ",".join(format_cnf(g) for g in gs)
    return EpiWitness(
        seg, T, f,
        f"segment[{format_cnf(beta0)},{format_cnf(beta1)})->{names}]",
        fiber_fn=fib)


def revord_plus_ord_epi(gamma: CNF, n: int, delta: CNF, m: int,
                        side: str) -> EpiWitness:
    """A reversed ordinal followed by an ordinal, onto either summand.

    The source is (w^gamma n)* + w^delta m.  Keeping the right summand
    sends the reversed part to the kept minimum; keeping the left one
    sends the ordinal part to the kept maximum.
    """
    if n < 1 or m < 1:
        raise ValueError("coefficients must be positive")
    left = rev_order(realize_cnf(omega_power(gamma, n)))
    right = realize_cnf(omega_power(delta, m))
    src = sum_orders([left, right], name=f"{left.name}+{right.name}")
    if side == "right":
        w = onesided_sum_epi(src, right, keep=1)
    elif side == "left":
        w = onesided_sum_epi(src, left, keep=0)
    else:
        raise ValueError(f"side must be left or right, not {side!r}")
    return EpiWitness(src, w.target, w.map_fn,
                      f"revord_plus_ord[{side}]", fiber_fn=w.fiber_fn)
