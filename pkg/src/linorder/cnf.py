"""Hereditary Cantor normal forms below epsilon_0.

An ordinal is stored as a tuple of (exponent, coefficient) pairs with the
exponents themselves in normal form, strictly decreasing, and every
coefficient at least 1.  The empty tuple is 0.  Sums and products follow
ordinal arithmetic, so addition absorbs on the left and multiplication
distributes over the right argument only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Tuple


@dataclass(frozen=True)
class CNF:
    terms: Tuple[Tuple["CNF", int], ...] = ()

    def __post_init__(self):
        prev = None
        for expo, coeff in self.terms:
            if not isinstance(expo, CNF) or coeff < 1:
                raise ValueError("malformed normal form term")
            if prev is not None and cnf_cmp(expo, prev) >= 0:
                raise ValueError("exponents must strictly decrease")
            prev = expo

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def finite_value(self) -> int:
        if self.is_zero():
            return 0
        if not self.is_finite():
            raise ValueError("not a finite ordinal")
        return self.terms[0][1]

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def pred(self) -> "CNF":
        """Predecessor of a successor ordinal."""
        if not self.is_successor():
            raise ValueError("not a successor")
        expo, coeff = self.terms[-1]
        if coeff > 1:
            return CNF(self.terms[:-1] + ((expo, coeff - 1),))
        return CNF(self.terms[:-1])

    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def __lt__(self, other: "CNF") -> bool:
        return cnf_cmp(self, other) < 0

    def __le__(self, other: "CNF") -> bool:
        return cnf_cmp(self, other) <= 0

    def __gt__(self, other: "CNF") -> bool:
        return cnf_cmp(self, other) > 0

    def __ge__(self, other: "CNF") -> bool:
        return cnf_cmp(self, other) >= 0

    def __add__(self, other: "CNF") -> "CNF":
        return cnf_add(self, other)

    def __mul__(self, other: "CNF") -> "CNF":
        return cnf_mul(self, other)

    def __repr__(self) -> str:
        return f"CNF<{format_cnf(self)}>"


CNF_ZERO = CNF()
CNF_ONE = CNF(((CNF_ZERO, 1),))
CNF_OMEGA = CNF(((CNF_ONE, 1),))


def from_nat(n: int) -> CNF:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    if n == 0:
        return CNF_ZERO
    return CNF(((CNF_ZERO, n),))


def omega_power(expo: CNF, coeff: int = 1) -> CNF:
    return CNF(((expo, coeff),))


def cnf_cmp(a: CNF, b: CNF) -> int:
    """Three-way comparison; a proper prefix is the smaller ordinal."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = cnf_cmp(ea, eb)
        if c != 0:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) != len(b.terms):
        return -1 if len(a.terms) < len(b.terms) else 1
    return 0


def cnf_add(a: CNF, b: CNF) -> CNF:
    if b.is_zero():
        return a
    eb, cb = b.terms[0]
    kept = []
    merged = False
    for expo, coeff in a.terms:
        c = cnf_cmp(expo, eb)
        if c > 0:
            kept.append((expo, coeff))
        elif c == 0:
            kept.append((expo, coeff + cb))
            merged = True
            break
        else:
            break
    if merged:
        return CNF(tuple(kept) + b.terms[1:])
    return CNF(tuple(kept) + b.terms)


def cnf_mul(a: CNF, b: CNF) -> CNF:
    if a.is_zero() or b.is_zero():
        return CNF_ZERO
    e0 = a.terms[0][0]
    out = CNF_ZERO
    for expo, coeff in b.terms:
        if expo.is_zero():
            # a * n multiplies the leading coefficient and keeps the tail
            head_e, head_c = a.terms[0]
            out = cnf_add(out, CNF(((head_e, head_c * coeff),) + a.terms[1:]))
        else:
            out = cnf_add(out, omega_power(cnf_add(e0, expo), coeff))
    return out


def cnf_sub_left(a: CNF, b: CNF) -> CNF:
    """The unique d with a + d = b, for a <= b.

    Walks the common prefix of the two normal forms; the first divergence
    either reduces a coefficient or is absorbed entirely by b's tail.
    """
    if cnf_cmp(a, b) > 0:
        raise ValueError("left subtraction needs a <= b")
    for i, (ea, ca) in enumerate(a.terms):
        eb, cb = b.terms[i]
        if cnf_cmp(ea, eb) == 0:
            if ca == cb:
                continue
            return CNF(((eb, cb - ca),) + b.terms[i + 1:])
        return CNF(b.terms[i:])
    return CNF(b.terms[len(a.terms):])


def fund_seq(c: CNF, n: int) -> CNF:
    """n-th member of the standard fundamental sequence of a limit ordinal.

    For a tail omega^(e+1)*m the sequence walks omega^(e+1)*(m-1) + omega^e*n,
    and for a limit exponent it recurses into that exponent.
    """
    if not c.is_limit():
        raise ValueError("fundamental sequences exist for limits only")
    expo, coeff = c.terms[-1]
    prefix = c.terms[:-1]
    if coeff > 1:
        prefix = prefix + ((expo, coeff - 1),)
    if expo.is_successor():
        if n == 0:
            return CNF(prefix)
        return cnf_add(CNF(prefix), omega_power(expo.pred(), n))
    return cnf_add(CNF(prefix), omega_power(fund_seq(expo, n)))


def cofinal_below(limit: CNF, start: CNF) -> Iterator[CNF]:
    """Strictly increasing cofinal sequence in a limit ordinal, from start up."""
    cur = start
    n = 0
    while True:
        yield cur
        n += 1
        step = fund_seq(limit, n)
        cur = step if step > cur else cnf_add(cur, CNF_ONE)


def format_cnf(c: CNF) -> str:
    if c.is_zero():
        return "0"
    parts = []
    for expo, coeff in c.terms:
        if expo.is_zero():
            parts.append(str(coeff))
        elif expo == CNF_ONE:
            parts.append("w" if coeff == 1 else f"w*{coeff}")
        else:
            base = f"w^({format_cnf(expo)})"
            parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return " + ".join(parts)
